#include "discofield/mass_sector.hpp"

#include <cmath>
#include <sstream>

namespace discofield {

namespace {

std::string mass_tag(const MassSectorParams& p) {
  std::ostringstream os;
  os << "M=" << p.mean_m << ";T=" << p.mean_tau << ";dm=" << p.sigma_m;
  return os.str();
}

}  // namespace

MassOperators build_mass_ops(const MassSectorParams& params, const BasisSpec& basis) {
  params.validate();
  basis.validate();

  // The mass axis is a covariant-convention pair with "momentum" m and
  // "coordinate" tau: tau - T plays the (x - X) role, m - M the (p - P) role.
  const GaussianParams axis{params.mean_tau, params.mean_m, params.sigma_m};
  const auto pair = build_xp_ladder(axis, basis, PairConvention::kCovariant);

  MassOperators out;
  out.tau_shift = pair.x_shift;
  out.tau_shift.label = "tau-T";
  out.m_shift = pair.p_shift;
  out.m_shift.label = "m-M";
  out.tau_shift.params = out.m_shift.params = mass_tag(params);

  const double dm = params.sigma_m;
  const Eigen::Index n = basis.size;
  out.m2_mean.mat = params.mean_m * params.mean_m * Matrix::Identity(n, n) +
                    0.5 * (out.m_shift.mat * out.m_shift.mat) +
                    2.0 * std::pow(dm, 4) * (out.tau_shift.mat * out.tau_shift.mat);
  out.m2_mean.label = "m2-mean";
  out.m2_mean.representation = pair.x_shift.representation;
  out.m2_mean.params = mass_tag(params);
  return out;
}

Matrix build_m2_shift_ratio_form(const MassSectorParams& params,
                                 const BasisSpec& basis) {
  params.validate();
  basis.validate();
  const GaussianParams axis{params.mean_tau, params.mean_m, params.sigma_m};
  const auto pair = build_xp_ladder(axis, basis, PairConvention::kCovariant);
  const double ratio = params.sigma_m / params.sigma_tau();
  return 0.5 * (pair.p_shift.mat * pair.p_shift.mat +
                ratio * ratio * (pair.x_shift.mat * pair.x_shift.mat));
}

}  // namespace discofield
