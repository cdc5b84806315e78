#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include "discofield/commands.hpp"

using namespace discofield;

TEST_CASE("minimal config materializes the on-shell energy") {
  const RunConfig cfg = parse_config(
      R"({"B": [4, 1, 1, 1], "M": 1.0, "dm": 1.0, "Pvec": [0, 0, 0]})", "test");
  CHECK(cfg.means().p_dn[0] == doctest::Approx(1.0));
  CHECK(cfg.b(0, 0) == 4.0);
  CHECK(cfg.b(0, 1) == 0.0);
  CHECK_NOTHROW(cfg.model());

  const RunConfig with_p = parse_config(
      R"({"M": 1.0, "dm": 1.0, "Pvec": [0.6, 0, 0]})", "test");
  CHECK(with_p.means().p_dn[0] == doctest::Approx(1.1661903789690602));
}

TEST_CASE("config validation names the violated invariant") {
  CHECK_THROWS_WITH_AS(parse_config(R"({"B": [-1, 1, 1, 1]})", "test"),
                       doctest::Contains("strictly positive"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"foo": 1})", "test"),
                       doctest::Contains("unknown key \"foo\""), ValidationError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"oneD": {"bogus": 2}})", "test"),
                       doctest::Contains("bogus"), ValidationError);
  CHECK_THROWS_AS(parse_config(R"({"dm": 0.0})", "test"), ValidationError);
  CHECK_THROWS_AS(parse_config(R"({"exponent_variant": "other"})", "test"),
                  ValidationError);
  CHECK_THROWS_AS(parse_config("{", "test"), ParseError);
  CHECK_THROWS_AS(
      parse_config(R"({"B": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,2,0,1]]})", "test"),
      ValidationError);
  // Off-shell explicit P0 violates the model invariant.
  CHECK_THROWS_AS(parse_config(R"({"M": 1.0, "P0": 2.0, "Pvec": [0,0,0]})", "test"),
                  ValidationError);
}

TEST_CASE("canonical config echo is a serialization fixpoint") {
  const RunConfig cfg = parse_config(
      R"({"B": [4, 1, 1, 1], "M": 1.0, "dm": 0.5, "seed": 777})", "test");
  const std::string echo = canonical_config_json(cfg);
  const RunConfig reparsed = parse_config(echo, "echo");
  CHECK(canonical_config_json(reparsed) == echo);
  CHECK(reparsed.seed == 777);
  CHECK(reparsed.dm == 0.5);
}

TEST_CASE("float formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-13, 123456.789, 2.2250738585072014e-308}) {
    CHECK(std::stod(format_float(v)) == v);
    CHECK(std::stod(format_float(-v)) == -v);
  }
}

TEST_CASE("report serialization is deterministic and registry-closed") {
  RunConfig cfg;
  const RunReport a = dispatch("verify-algebra", cfg);
  const RunReport b = dispatch("verify-algebra", cfg);
  CHECK(report_json(a) == report_json(b));
  CHECK(report_csv(a) == report_csv(b));
  CHECK(a.all_pass());
  CHECK(report_csv(a).starts_with("check_id,eq_ref,value,tolerance,pass\n"));

  for (const auto& row : a.checks) {
    CHECK(eq_ref_known(row.eq_ref));
    CHECK(row.id.find(',') == std::string::npos);
  }
}

TEST_CASE("every command emits only registry equation tags") {
  RunConfig cfg;
  cfg.cutoffs.tensor = {3, 3, 3, 3};
  for (const auto& name : command_names()) {
    if (name == "all" || name == "fermion-svd" || name == "factorization" ||
        name == "scalar-residual")
      continue;  // heavier commands are covered by the acceptance suite
    const RunReport report = dispatch(name, cfg);
    INFO(name);
    CHECK(report.all_pass());
    for (const auto& row : report.checks) {
      INFO(row.id);
      CHECK(eq_ref_known(row.eq_ref));
    }
  }
}

TEST_CASE("exit codes: pass, check failure, computation error") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "discofield_test_reports";
  fs::remove_all(dir);

  RunConfig cfg;
  CHECK(run_command("baselines", cfg, (dir / "ok").string()) == 0);
  CHECK(fs::exists(dir / "ok" / "baselines.report.json"));
  CHECK(fs::exists(dir / "ok" / "baselines.checks.csv"));

  RunConfig strict = cfg;
  strict.tolerance_scale = 1e-300;  // no bounded check can pass
  CHECK(run_command("baselines", strict, (dir / "fail").string()) == 1);

  RunConfig correlated = cfg;
  correlated.b(0, 1) = correlated.b(1, 0) = 0.2;  // resonance needs diagonal B
  CHECK(run_command("resonance", correlated, (dir / "err").string()) == 2);

  std::ifstream in(dir / "err" / "resonance.report.json");
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  CHECK(text.find("computation_error") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("informational and floored rows") {
  CHECK(informational("x", "n/a", 5.0).pass);
  CHECK(informational("x", "n/a", 5.0).tolerance == -1.0);
  CHECK(floored("x", "n/a", 5.0, 1.0).pass);
  CHECK_FALSE(floored("x", "n/a", 0.5, 1.0).pass);
  CHECK(bounded("x", "n/a", 0.5, 1.0).pass);
  CHECK_FALSE(bounded("x", "n/a", 2.0, 1.0).pass);
}

TEST_CASE("resonance rows carry the enumerated tuples") {
  RunConfig cfg;
  const RunReport report = dispatch("resonance", cfg);
  bool found = false;
  for (const auto& row : report.checks)
    if (row.id == "tuple_0_0_0_0_0") found = true;
  CHECK(found);
}
