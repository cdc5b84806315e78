#pragma once

#include <array>

#include "discofield/operators_1d.hpp"

namespace discofield {

/// Fixed Minkowski metric diag(+1, -1, -1, -1); raising and lowering with it
/// are exact inverses by construction.
struct Metric {
  static constexpr std::array<double, 4> kDiag{1.0, -1.0, -1.0, -1.0};
  static double up(int mu, int nu) { return mu == nu ? kDiag[mu] : 0.0; }
  static double down(int mu, int nu) { return mu == nu ? kDiag[mu] : 0.0; }
};

/// Symmetric positive-definite 4x4 momentum dispersion-codispersion tensor.
/// Diagonal entries are the squared per-axis momentum spreads.
class DispersionTensor {
 public:
  static DispersionTensor diagonal(const std::array<double, 4>& entries);
  static DispersionTensor full(const Eigen::Matrix4d& b);

  const Eigen::Matrix4d& matrix() const { return b_; }
  double entry(int mu, int nu) const { return b_(mu, nu); }
  bool is_diagonal() const { return diagonal_; }
  /// Per-axis basis-adaptation spread sqrt(B_mumu), also used when B has
  /// off-diagonal entries.
  double sigma_p(int axis) const { return std::sqrt(b_(axis, axis)); }

 private:
  DispersionTensor(const Eigen::Matrix4d& b, bool diagonal)
      : b_(b), diagonal_(diagonal) {}
  Eigen::Matrix4d b_;
  bool diagonal_;
};

/// Contravariant coordinate means X^mu and covariant momentum means P_mu.
struct FourMeans {
  std::array<double, 4> x_up{0.0, 0.0, 0.0, 0.0};
  std::array<double, 4> p_dn{0.0, 0.0, 0.0, 0.0};
};

/// g^{mu nu} P_mu P_nu - M^2.
double validate_mass_shell(const FourMeans& means, double mass_mean);

/// Means with P_0 = +sqrt(M^2 + |P_vec|^2) completing the shell relation.
FourMeans on_shell_means(double mass_mean, const std::array<double, 3>& p_spatial,
                         const std::array<double, 4>& x_up = {0.0, 0.0, 0.0, 0.0});

/// Invariant square g^{mu nu} P_mu P_nu; throws SpacelikeMomentum when an
/// on-shell mass is demanded for a spacelike P.
double momentum_invariant_square(const FourMeans& means);
double mass_from_means(const FourMeans& means);

/// Per-axis cutoffs of the four-axis tensor Hermite basis. Axis mu is
/// adapted to (X^mu, P_mu, sqrt(B_mumu)) in the covariant pair convention.
struct ProductBasisSpec {
  std::array<int, 4> cutoff{3, 3, 3, 3};
  long dimension_cap = 4096;  // dense-representation cap

  long dimension() const;
  std::vector<int> cutoffs_vec() const {
    return {cutoff[0], cutoff[1], cutoff[2], cutoff[3]};
  }
  void validate() const;
};

/// Dispersion-codispersion tensor operator on the product basis:
///   Sigma_munu = 1/2 (p_mu-P_mu)(p_nu-P_nu)
///              + 2 B_mualpha B_nubeta (x^alpha-X^alpha)(x^beta-X^beta).
/// Hermitian, and exactly symmetric under mu <-> nu.
OperatorMatrix build_sigma_tensor(int mu, int nu, const DispersionTensor& b,
                                  const FourMeans& means,
                                  const ProductBasisSpec& basis);

/// g^{mu nu} Sigma_munu = Sigma_00 - Sigma_11 - Sigma_22 - Sigma_33.
/// For diagonal B the interior spectrum is
/// {(2n_0+1) B_00 - sum_j (2n_j+1) B_jj}.
OperatorMatrix contract_metric_sigma(const DispersionTensor& b,
                                     const FourMeans& means,
                                     const ProductBasisSpec& basis);

/// Max residuals of [p_mu, x^nu] = i delta^nu_mu, [p,p] = 0, [x,x] = 0 on the
/// interior projector of the product basis.
struct CommutationReport {
  double max_px_residual = 0.0;  // worst deviation over all 16 (mu, nu) pairs
  double max_pp_residual = 0.0;
  double max_xx_residual = 0.0;
  std::array<std::array<double, 4>, 4> px_residual{};
};
CommutationReport commutation_check(const ProductBasisSpec& basis,
                                    const DispersionTensor& b);

}  // namespace discofield
