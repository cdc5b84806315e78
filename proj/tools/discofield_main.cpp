#include <CLI11.hpp>
#include <cstdint>
#include <iostream>

#include "discofield/commands.hpp"
#include "discofield/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "discofield: spectral and residual verification of the "
      "dispersion-codispersion scalar/fermion field operators"};
  app.set_version_flag("--version", discofield::kVersion);

  std::string command;
  app.add_option("command", command, "one of: " + [] {
        std::string list;
        for (const auto& name : discofield::command_names()) {
          if (!list.empty()) list += ", ";
          list += name;
        }
        return list;
      }())
      ->required()
      ->check(CLI::IsMember(discofield::command_names()));

  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (defaults apply)");
  std::int64_t seed = -1;
  app.add_option("--seed", seed, "override config seed");
  std::string out_dir;
  app.add_option("--out", out_dir, "report directory (else DISCOFIELD_OUT, else ./reports)");
  long cutoff_cap = -1;
  app.add_option("--cutoff-cap", cutoff_cap, "product-basis dimension cap");
  double tolerance_scale = -1.0;
  app.add_option("--tolerance-scale", tolerance_scale,
                 "multiply every bounded tolerance (floors unaffected)");
  std::string exponent_variant;
  app.add_option("--exponent-variant", exponent_variant,
                 "standard | paper-literal (adds report-only envelope rows)")
      ->check(CLI::IsMember({"standard", "paper-literal"}));

  CLI11_PARSE(app, argc, argv);

  try {
    discofield::RunConfig cfg;
    if (!config_path.empty()) cfg = discofield::load_config(config_path);
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    if (cutoff_cap > 0) cfg.cutoff_cap = cutoff_cap;
    if (tolerance_scale > 0.0) cfg.tolerance_scale = tolerance_scale;
    if (!exponent_variant.empty()) cfg.exponent_variant = exponent_variant;
    return discofield::run_command(command, cfg, out_dir);
  } catch (const discofield::Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
}
