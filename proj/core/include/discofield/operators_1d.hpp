#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "discofield/gaussian.hpp"
#include "discofield/operator_matrix.hpp"

namespace discofield {

/// Truncated ladder/Hermite basis {|0>, ..., |N-1>} adapted to one family.
struct BasisSpec {
  int size = 16;

  void validate() const {
    if (size < 2) throw ValidationError("BasisSpec: size must be >= 2");
  }
};

/// Uniform coordinate grid. Half-width is measured in units of sigma_x of
/// the family the operator is built for; center defaults to its mean.
struct GridSpec {
  std::optional<double> center;
  double halfwidth = 8.0;
  int points = 1024;

  void validate() const {
    if (!(halfwidth >= 6.0))
      throw ValidationError("GridSpec: half-width must cover >= 6 sigma_x");
    if (points < 64) throw ValidationError("GridSpec: point count must be >= 64");
  }
};

/// Truncated annihilation operator, a|n> = sqrt(n)|n-1>.
Matrix ladder_lowering(int n);

struct LadderPair {
  OperatorMatrix x_shift;  // x - X
  OperatorMatrix p_shift;  // p - P
};

/// Shifted coordinate/momentum pair in the ladder basis:
///   x - X = dx (a + a*),   p - P = i dp (a* - a)   [kSchrodinger]
///   x - X = dx (a + a*),   p - P = i dp (a - a*)   [kCovariant]
/// Ground variances are dx^2 and dp^2 in either convention; the convention
/// only flips the sign of [p, x].
LadderPair build_xp_ladder(const GaussianParams& params, const BasisSpec& basis,
                           PairConvention convention = PairConvention::kSchrodinger);

/// Momentum dispersion operator 1/2 [(p-P)^2 + 4 dp^4 (x-X)^2] assembled
/// from the ladder matrices. Exactly diagonal on the interior with entries
/// (2n+1) dp^2.
OperatorMatrix build_sigma_1d(const GaussianParams& params, const BasisSpec& basis);

/// Momentum quadratic mean operator P^2 I + Sigma.
OperatorMatrix build_p2_mean(const GaussianParams& params, const BasisSpec& basis);

/// Central second-order finite-difference discretization of
/// 1/2 [(-i d/dx - P)^2 + 4 dp^4 (x-X)^2] on a uniform grid. The first-order
/// part uses the phase-factor (Peierls) stencil, which keeps the matrix
/// Hermitian and exactly unitarily equivalent to its P = 0 counterpart.
/// Throws GridTooCoarse when the spacing exceeds sigma_x/4.
OperatorMatrix build_sigma_grid(const GaussianParams& params, const GridSpec& grid);

/// Same stencil for an arbitrary conjugate pair: the quadratic form
/// 1/2 [(mom_op - mean_m)^2 + 4 sigma^4 (u - center)^2] with
/// mom_op = -i d/du (kSchrodinger) or +i d/du (kCovariant).
OperatorMatrix build_quadratic_grid(double center, double mean_momentum,
                                    double sigma, const GridSpec& grid,
                                    PairConvention convention);

struct EigenPair {
  double value;
  Vector vector;
};

struct EigensolveOptions {
  Eigen::Index dense_cap = 4096;    // dense solve up to this dimension
  double tol = 1e-10;               // iterative-path residual tolerance
  int max_iterations = 10000;       // iterative-path matvec budget
  double hermiticity_tol = 1e-10;
};

/// k smallest eigenpairs of a Hermitian operator, eigenvalues ascending,
/// eigenvectors orthonormal. Dense below opts.dense_cap; Lanczos with full
/// reorthogonalization above. Throws NotHermitian / ConvergenceFailure.
std::vector<EigenPair> eigensolve(const OperatorMatrix& op, int k,
                                  const EigensolveOptions& opts = {});

/// Full ascending spectrum, eigenvalues only (dense path, no vectors).
std::vector<double> eigenvalues_all(const OperatorMatrix& op,
                                    double hermiticity_tol = 1e-10);

/// Lanczos smallest-k eigenpairs for a Hermitian matvec; used by the
/// above-cap path and by the sparse singular-value routines.
std::vector<EigenPair> lanczos_smallest(
    const std::function<Vector(const Vector&)>& matvec, Eigen::Index dim, int k,
    double tol, int max_iterations);

}  // namespace discofield
