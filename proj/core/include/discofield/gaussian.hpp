#pragma once

#include <complex>

#include "discofield/errors.hpp"

namespace discofield {

using Complex = std::complex<double>;

/// Sign convention of a canonical (momentum, coordinate) pair.
///
/// kSchrodinger: p = -i d/dx, [p, x] = -i, states carry the phase e^{+iPx}.
/// kCovariant:   p = +i d/du, [p, u] = +i, states carry the phase e^{-iPu};
///               used by the four spacetime axes and the mass/tau pair.
enum class PairConvention { kSchrodinger, kCovariant };

/// (X, P, dp) triple defining a 1D harmonic-Gaussian family.
/// The position spread is never stored: sigma_x() = 1/(2 sigma_p) always,
/// so sigma_x * sigma_p = 1/2 holds by construction.
struct GaussianParams {
  double mean_x = 0.0;    // X
  double mean_p = 0.0;    // P
  double sigma_p = 0.5;   // dp, strictly positive

  double sigma_x() const { return 1.0 / (2.0 * sigma_p); }

  void validate() const {
    if (!(sigma_p > 0.0))
      throw ValidationError("GaussianParams: sigma_p must be strictly positive");
  }

  friend bool operator==(const GaussianParams&, const GaussianParams&) = default;
};

/// Excitation n of a harmonic-Gaussian family.
struct HermiteState {
  int n = 0;
  GaussianParams params;

  void validate() const {
    if (n < 0) throw ValidationError("HermiteState: n must be non-negative");
    params.validate();
  }
};

/// Quadrature configuration: a Gauss-Hermite order for Gaussian-weighted
/// polynomial integrands, plus a uniform-grid fallback (half-width in units
/// of sigma_x, point count) for everything else.
struct QuadratureSpec {
  int gh_order = 64;
  double fallback_halfwidth = 12.0;  // in units of sigma_x
  int fallback_points = 4097;

  void validate() const {
    if (gh_order < 1) throw ValidationError("QuadratureSpec: order must be >= 1");
    if (!(fallback_halfwidth > 0.0))
      throw ValidationError("QuadratureSpec: fallback extent must be positive");
    if (fallback_points < 2)
      throw ValidationError("QuadratureSpec: fallback point count must be >= 2");
  }
};

}  // namespace discofield
