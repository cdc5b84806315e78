#pragma once

#include <Eigen/SparseCore>
#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "discofield/clifford.hpp"
#include "discofield/mass_sector.hpp"
#include "discofield/relativistic.hpp"

namespace discofield {

using SparseMatrix = Eigen::SparseMatrix<Complex>;

/// Full model: dispersion tensor, mean four-vectors, and the mass sector.
/// Construction enforces the shell relation g^{mu nu} P_mu P_nu = M^2 to
/// 1e-10 (SpacelikeMomentum when the invariant square is negative).
struct ModelConfig {
  static constexpr double kShellTolerance = 1e-10;

  ModelConfig(const DispersionTensor& b_, const FourMeans& means_,
              const MassSectorParams& mass_);

  DispersionTensor b;
  FourMeans means;
  MassSectorParams mass;

  double dm2() const { return mass.sigma_m * mass.sigma_m; }
  /// B_00 + sum_j B_jj + dm^2; the scale dividing every pointwise residual.
  double residual_scale() const;
};

/// (n0, n1, n2, n3, k) labeling a separable candidate solution.
struct QuantumTuple {
  std::array<int, 4> n{0, 0, 0, 0};
  int k = 0;
  double resonance_residual = 0.0;
};

/// (2n0+1) B_00 - sum_j (2n_j+1) B_jj; diagonal B only.
double resonance_lhs(const ModelConfig& cfg, const std::array<int, 4>& n);

/// All tuples with n_mu <= max_n whose resonance equation
///   (2n0+1) B_00 - sum_j (2n_j+1) B_jj = (2k+1) dm^2
/// admits a non-negative integer k within `tol`. k is solved exactly from
/// the n-tuple (it is determined by it), so it is not bounded by max_n.
/// Lexicographic order in (n0, n1, n2, n3). Diagonal B only.
std::vector<QuantumTuple> resonance_enumerate(const ModelConfig& cfg, int max_n,
                                              double tol = 1e-12);

/// Per-axis cutoffs of the five-axis (x^0..x^3, tau) product basis.
struct FiveAxisBasis {
  std::array<int, 5> cutoff{2, 2, 2, 2, 2};
  long dimension_cap = 4096;  // cap on the basis dimension (spinor excluded)

  long dimension() const;
  std::vector<int> cutoffs_vec() const;
  void validate() const;
};

/// Dense matrix of g^{mu nu} Sigma_munu - (m2_mean - M^2) on the five-axis
/// basis. For diagonal B its interior block is exactly diagonal with the
/// resonance left-hand sides minus (2k+1) dm^2.
OperatorMatrix assemble_scalar_operator(const ModelConfig& cfg,
                                        const FiveAxisBasis& basis);

struct ScalarNullspaceReport {
  int interior_null_count = 0;
  double max_null_abs = 0.0;     // largest |eigenvalue| counted as null
  double min_nonnull_abs = 0.0;  // spectral gap witness
};
ScalarNullspaceReport scalar_interior_nullspace(const ModelConfig& cfg,
                                                const FiveAxisBasis& basis,
                                                double null_tol = 1e-8);

/// Separable five-variable candidate phi = prod_mu phi_{n_mu}(x^mu) phi_k(tau)
/// built from per-axis covariant-convention harmonic Gaussians.
struct ScalarSolution {
  QuantumTuple tuple;
  ModelConfig cfg;

  /// Value at (x^0, x^1, x^2, x^3, tau); rejects arity != 5.
  Complex evaluate(std::span<const double> coords) const;
};

/// Analytic evaluation of the scalar field equation's left-hand side at the
/// sample points; returns max |LHS| / (max |phi| * residual_scale).
double scalar_residual_pointwise(const ScalarSolution& sol,
                                 const std::vector<std::array<double, 5>>& points);

/// First-order fermion operator
///   D = alpha^mu (p_mu - P_mu) + 2 beta^mu B_munu (x^nu - X^nu)
///     - zeta (m - M) - 2 dm^2 vartheta (tau - T)
/// on (five-axis basis) x C^32, assembled sparse (couples tuples differing
/// by +-1 in exactly one axis).
struct FermionAssembly {
  SparseMatrix d;
  std::array<int, 5> cutoff;
  long basis_dim = 0;
  double nonhermiticity = 0.0;  // ||D - D*||_F / ||D||_F
};
FermionAssembly assemble_fermion_operator(const ModelConfig& cfg,
                                          const FiveAxisBasis& basis);

/// Number of nonzero entries violating the one-axis +-1 coupling structure.
int fermion_sparsity_violations(const FermionAssembly& assembly);

/// Smallest `count` singular values (ascending) and the matching right
/// singular vectors. Dense SVD up to opts.dense_cap total dimensions,
/// Lanczos on D*D above.
struct FermionSvdResult {
  std::vector<double> values;
  Matrix vectors;  // one column per value
};
FermionSvdResult fermion_smallest_singulars(const FermionAssembly& assembly,
                                            int count,
                                            EigensolveOptions opts = {
                                                .tol = 1e-8,
                                            });

/// 32-component candidate as a coefficient vector over basis x C^32.
struct SpinorCandidate {
  FiveAxisBasis basis;
  Vector coeffs;
};

/// Pointwise spinor value at a five-coordinate point; rejects arity != 5.
Eigen::VectorXcd evaluate_spinor(const ModelConfig& cfg,
                                 const SpinorCandidate& cand,
                                 std::span<const double> coords);

/// Exact L^2 norm of D psi for a truncated-basis candidate, computed from a
/// +1-padded assembly (the ladder couples one step out of the basis, so the
/// padded matvec captures the truncation leakage exactly). Equals
/// sqrt(sigma^2 + leakage^2) for a singular vector with value sigma; the
/// bound the pointwise residual is checked against.
double fermion_candidate_l2_bound(const ModelConfig& cfg,
                                  const SpinorCandidate& cand);

struct FermionPointwiseResult {
  double value = 0.0;
  bool degenerate = false;
};
/// Analytic evaluation of D psi at the sample points; returns
/// max ||D psi|| / (max ||psi|| * residual_scale).
FermionPointwiseResult fermion_residual_pointwise(
    const ModelConfig& cfg, const SpinorCandidate& cand,
    const std::vector<std::array<double, 5>>& points);

/// Machine-checkable content of the operator factorization: with
/// D1 = the +zeta/+vartheta bracket and D2 the field operator, the interior
/// block of 1/2 D1 D2 - (scalar op) x I32 is one constant 32x32 matrix,
/// equal to -i (beta^mu alpha^nu B_munu - vartheta zeta dm^2), repeated down
/// the basis diagonal. Operators are assembled at cutoffs+2 and the product
/// is restricted to the requested block, which is the padded interior.
struct FactorizationReport {
  double offdiagonal_block_max = 0.0;  // coupling between basis states
  double block_constancy_max = 0.0;    // deviation among diagonal blocks
  double constant_match_max = 0.0;     // first block vs the predicted constant
  double max_residual() const {
    return std::max({offdiagonal_block_max, block_constancy_max,
                     constant_match_max});
  }
};
FactorizationReport factorization_product_check(const ModelConfig& cfg,
                                                const FiveAxisBasis& basis);

/// Degenerate zero-dispersion limit (B = 0, dm = 0): every coupling
/// coefficient vanishes, so D1 D2 and the scalar operator are both zero.
/// Returns the max-abs over 1/2 D1 D2 - (scalar op) x I32 on the full block.
double factorization_degenerate_zero_residual(const FiveAxisBasis& basis);

/// |m^2 - g^{mu nu} p_mu p_nu| for a plane wave; zero iff on shell.
double kg_baseline_residual(const std::array<double, 4>& p_cov, double m);

/// `count` points drawn from the product Gaussian envelope plus the 32
/// hypercube corners at +-2 sigma per axis. Counter-based, so the set is a
/// pure function of (cfg, count, seed).
std::vector<std::array<double, 5>> sample_envelope_points(const ModelConfig& cfg,
                                                          int count,
                                                          std::uint64_t seed);

}  // namespace discofield
