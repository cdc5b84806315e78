#include "discofield/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace discofield {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& known,
                    const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!known.contains(key))
      throw ValidationError("unknown key \"" + key + "\" at " + where);
  }
}

double finite_number(const json& j, const std::string& where) {
  if (!j.is_number())
    throw ValidationError(where + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ValidationError(where + " must be finite");
  return v;
}

int integer_at(const json& j, const std::string& where) {
  if (!j.is_number_integer())
    throw ValidationError(where + " must be an integer");
  return j.get<int>();
}

template <std::size_t N>
std::array<double, N> number_array(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != N)
    throw ValidationError(where + " must be an array of " + std::to_string(N) +
                          " numbers");
  std::array<double, N> out;
  for (std::size_t i = 0; i < N; ++i)
    out[i] = finite_number(j[i], where + "[" + std::to_string(i) + "]");
  return out;
}

template <std::size_t N>
std::array<int, N> int_array(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != N)
    throw ValidationError(where + " must be an array of " + std::to_string(N) +
                          " integers");
  std::array<int, N> out;
  for (std::size_t i = 0; i < N; ++i)
    out[i] = integer_at(j[i], where + "[" + std::to_string(i) + "]");
  return out;
}

Eigen::Matrix4d parse_b(const json& j) {
  Eigen::Matrix4d b = Eigen::Matrix4d::Zero();
  if (j.is_array() && j.size() == 4 && j[0].is_number()) {
    const auto diag = number_array<4>(j, "B");
    for (int mu = 0; mu < 4; ++mu) b(mu, mu) = diag[mu];
    return b;
  }
  if (j.is_array() && j.size() == 4) {
    for (int mu = 0; mu < 4; ++mu) {
      const auto row = number_array<4>(j[mu], "B[" + std::to_string(mu) + "]");
      for (int nu = 0; nu < 4; ++nu) b(mu, nu) = row[nu];
    }
    return b;
  }
  throw ValidationError("B must be a 4-array of diagonal entries or a 4x4 array");
}

}  // namespace

FourMeans RunConfig::means() const {
  if (p0) {
    FourMeans m;
    m.x_up = x_up;
    m.p_dn = {*p0, p_spatial[0], p_spatial[1], p_spatial[2]};
    return m;
  }
  return on_shell_means(mass_m, p_spatial, x_up);
}

ModelConfig RunConfig::model() const {
  return ModelConfig(DispersionTensor::full(b), means(),
                     MassSectorParams{mass_m, mass_t, dm});
}

QuadratureSpec RunConfig::quadrature_spec() const {
  return {quadrature.order, quadrature.fallback_halfwidth,
          quadrature.fallback_points};
}

std::filesystem::path RunConfig::resolved_output_dir() const {
  if (!output_dir.empty()) return output_dir;
  if (const char* env = std::getenv("DISCOFIELD_OUT"); env && *env) return env;
  return "reports";
}

RunConfig parse_config(const std::string& text, const std::string& source_name) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& err) {
    throw ParseError(source_name + ": " + err.what());
  }
  if (!root.is_object())
    throw ValidationError(source_name + ": top level must be a JSON object");

  reject_unknown(root,
                 {"B", "X", "Pvec", "P0", "M", "T", "dm", "oneD", "cutoffs",
                  "grid", "quadrature", "cap", "seed", "output_dir",
                  "tolerance_scale", "resonance_max_n", "exponent_variant"},
                 "top level");

  RunConfig cfg;
  if (root.contains("B")) cfg.b = parse_b(root["B"]);
  if (root.contains("X")) cfg.x_up = number_array<4>(root["X"], "X");
  if (root.contains("Pvec")) cfg.p_spatial = number_array<3>(root["Pvec"], "Pvec");
  if (root.contains("P0")) cfg.p0 = finite_number(root["P0"], "P0");
  if (root.contains("M")) cfg.mass_m = finite_number(root["M"], "M");
  if (root.contains("T")) cfg.mass_t = finite_number(root["T"], "T");
  if (root.contains("dm")) cfg.dm = finite_number(root["dm"], "dm");

  if (root.contains("oneD")) {
    const json& j = root["oneD"];
    reject_unknown(j, {"X", "P", "dp", "basis_n"}, "oneD");
    if (j.contains("X")) cfg.one_d.mean_x = finite_number(j["X"], "oneD.X");
    if (j.contains("P")) cfg.one_d.mean_p = finite_number(j["P"], "oneD.P");
    if (j.contains("dp")) cfg.one_d.sigma_p = finite_number(j["dp"], "oneD.dp");
    if (j.contains("basis_n"))
      cfg.one_d.basis_n = integer_at(j["basis_n"], "oneD.basis_n");
  }
  if (root.contains("cutoffs")) {
    const json& j = root["cutoffs"];
    reject_unknown(j, {"tensor", "tau", "fermion"}, "cutoffs");
    if (j.contains("tensor"))
      cfg.cutoffs.tensor = int_array<4>(j["tensor"], "cutoffs.tensor");
    if (j.contains("tau")) cfg.cutoffs.tau = integer_at(j["tau"], "cutoffs.tau");
    if (j.contains("fermion"))
      cfg.cutoffs.fermion = int_array<5>(j["fermion"], "cutoffs.fermion");
  }
  if (root.contains("grid")) {
    const json& j = root["grid"];
    reject_unknown(j, {"points", "halfwidth"}, "grid");
    if (j.contains("points")) cfg.grid.points = integer_at(j["points"], "grid.points");
    if (j.contains("halfwidth"))
      cfg.grid.halfwidth = finite_number(j["halfwidth"], "grid.halfwidth");
  }
  if (root.contains("quadrature")) {
    const json& j = root["quadrature"];
    reject_unknown(j, {"order", "fallback_points", "fallback_halfwidth"},
                   "quadrature");
    if (j.contains("order"))
      cfg.quadrature.order = integer_at(j["order"], "quadrature.order");
    if (j.contains("fallback_points"))
      cfg.quadrature.fallback_points =
          integer_at(j["fallback_points"], "quadrature.fallback_points");
    if (j.contains("fallback_halfwidth"))
      cfg.quadrature.fallback_halfwidth =
          finite_number(j["fallback_halfwidth"], "quadrature.fallback_halfwidth");
  }
  if (root.contains("cap")) cfg.cutoff_cap = integer_at(root["cap"], "cap");
  if (root.contains("seed")) {
    if (!root["seed"].is_number_integer() || root["seed"].get<long long>() < 0)
      throw ValidationError("seed must be a non-negative integer");
    cfg.seed = root["seed"].get<std::uint64_t>();
  }
  if (root.contains("output_dir")) {
    if (!root["output_dir"].is_string())
      throw ValidationError("output_dir must be a string");
    cfg.output_dir = root["output_dir"].get<std::string>();
  }
  if (root.contains("tolerance_scale"))
    cfg.tolerance_scale = finite_number(root["tolerance_scale"], "tolerance_scale");
  if (root.contains("resonance_max_n"))
    cfg.resonance_max_n = integer_at(root["resonance_max_n"], "resonance_max_n");
  if (root.contains("exponent_variant")) {
    if (!root["exponent_variant"].is_string())
      throw ValidationError("exponent_variant must be a string");
    cfg.exponent_variant = root["exponent_variant"].get<std::string>();
  }

  // Cross-field validation; the model invariants surface their own names.
  if (cfg.mass_m < 0.0) throw ValidationError("M must be non-negative");
  if (!(cfg.dm > 0.0)) throw ValidationError("dm must be strictly positive");
  if (!(cfg.one_d.sigma_p > 0.0))
    throw ValidationError("oneD.dp must be strictly positive");
  if (cfg.one_d.basis_n < 2) throw ValidationError("oneD.basis_n must be >= 2");
  if (!(cfg.tolerance_scale > 0.0))
    throw ValidationError("tolerance_scale must be positive");
  if (cfg.resonance_max_n < 0)
    throw ValidationError("resonance_max_n must be non-negative");
  if (cfg.cutoff_cap < 2) throw ValidationError("cap must be >= 2");
  if (cfg.exponent_variant != "standard" && cfg.exponent_variant != "paper-literal")
    throw ValidationError(
        "exponent_variant must be \"standard\" or \"paper-literal\"");
  (void)cfg.model();  // materializes tensor/shell invariants now
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.string());
}

}  // namespace discofield
