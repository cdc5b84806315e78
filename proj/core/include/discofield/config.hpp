#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "discofield/field_solver.hpp"

namespace discofield {

/// Fully validated run configuration with every default materialized.
/// Unknown keys anywhere in the input are rejected by name.
struct RunConfig {
  // model section
  Eigen::Matrix4d b = (Eigen::Vector4d() << 4.0, 1.0, 1.0, 1.0).finished().asDiagonal();
  std::array<double, 4> x_up{0.0, 0.0, 0.0, 0.0};
  std::array<double, 3> p_spatial{0.0, 0.0, 0.0};
  std::optional<double> p0;  // completed on shell when absent
  double mass_m = 1.0;
  double mass_t = 0.0;
  double dm = 1.0;

  // 1D sector used by verify-hermite / spectrum-1d
  struct OneD {
    double mean_x = 0.0;
    double mean_p = 0.0;
    double sigma_p = 0.5;
    int basis_n = 16;
  } one_d;

  struct Cutoffs {
    std::array<int, 4> tensor{3, 3, 3, 3};
    int tau = 6;
    std::array<int, 5> fermion{2, 2, 2, 2, 2};
  } cutoffs;

  struct Grid {
    int points = 1024;
    double halfwidth = 8.0;
  } grid;

  struct Quadrature {
    int order = 64;
    int fallback_points = 4097;
    double fallback_halfwidth = 12.0;
  } quadrature;

  long cutoff_cap = 4096;
  std::uint64_t seed = 12345;
  std::string output_dir;  // empty: DISCOFIELD_OUT env, then "reports"
  double tolerance_scale = 1.0;
  int resonance_max_n = 2;
  std::string exponent_variant = "standard";  // or "paper-literal"

  FourMeans means() const;
  ModelConfig model() const;
  QuadratureSpec quadrature_spec() const;
  std::filesystem::path resolved_output_dir() const;
};

/// Parse + validate a JSON config file. ParseError carries the byte
/// position; ValidationError names the violated invariant or unknown key.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& text, const std::string& source_name);

}  // namespace discofield
