#pragma once

#include "discofield/operators_1d.hpp"

namespace discofield {

/// (M, T, dm) defining the mass/tau conjugate pair. The tau spread is always
/// derived: sigma_tau() = 1/(2 dm), so dm * dtau = 1/2 by construction.
struct MassSectorParams {
  double mean_m = 1.0;    // M >= 0
  double mean_tau = 0.0;  // T
  double sigma_m = 1.0;   // dm > 0

  double sigma_tau() const { return 1.0 / (2.0 * sigma_m); }

  void validate() const {
    if (mean_m < 0.0)
      throw ValidationError("MassSectorParams: M must be non-negative");
    if (!(sigma_m > 0.0))
      throw ValidationError("MassSectorParams: dm must be strictly positive");
  }
};

struct MassOperators {
  OperatorMatrix m_shift;    // m - M, ground variance dm^2
  OperatorMatrix tau_shift;  // tau - T, ground variance dtau^2
  OperatorMatrix m2_mean;    // M^2 I + 1/2 (m-M)^2 + 2 dm^4 (tau-T)^2
};

/// Ladder representation of the mass pair. The pair obeys [m, tau] = +i on
/// the interior (m = +i d/dtau in the tau representation), mirroring the
/// relativistic axes rather than the 1D Schrodinger sign.
/// Interior spectrum of m2_mean: M^2 + (2k+1) dm^2.
MassOperators build_mass_ops(const MassSectorParams& params, const BasisSpec& basis);

/// Alternate assembly of m2_mean - M^2 via the ratio form
/// 1/2 [(m-M)^2 + (dm/dtau)^2 (tau-T)^2]; must coincide with the dm^4 form
/// to rounding. Kept as a separate code path on purpose.
Matrix build_m2_shift_ratio_form(const MassSectorParams& params,
                                 const BasisSpec& basis);

}  // namespace discofield
