#include "discofield/operators_1d.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "discofield/rng.hpp"

namespace discofield {

namespace {

std::string family_tag(const GaussianParams& p) {
  std::ostringstream os;
  os << "X=" << p.mean_x << ";P=" << p.mean_p << ";dp=" << p.sigma_p;
  return os.str();
}

}  // namespace

Matrix ladder_lowering(int n) {
  Matrix a = Matrix::Zero(n, n);
  for (int k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(double(k));
  return a;
}

LadderPair build_xp_ladder(const GaussianParams& params, const BasisSpec& basis,
                           PairConvention convention) {
  params.validate();
  basis.validate();
  const int n = basis.size;
  const Matrix a = ladder_lowering(n);
  const Matrix ad = a.adjoint();
  const Complex i{0.0, 1.0};
  const double dx = params.sigma_x();
  const double dp = params.sigma_p;

  LadderPair out;
  out.x_shift.mat = dx * (a + ad);
  out.p_shift.mat = (convention == PairConvention::kSchrodinger)
                        ? Matrix(i * dp * (ad - a))
                        : Matrix(i * dp * (a - ad));
  out.x_shift.label = "x-X";
  out.p_shift.label = "p-P";
  out.x_shift.representation = out.p_shift.representation =
      "ladder-" + std::to_string(n);
  out.x_shift.params = out.p_shift.params = family_tag(params);
  return out;
}

OperatorMatrix build_sigma_1d(const GaussianParams& params, const BasisSpec& basis) {
  const auto pair = build_xp_ladder(params, basis);
  const double dp = params.sigma_p;
  OperatorMatrix out;
  out.mat = 0.5 * (pair.p_shift.mat * pair.p_shift.mat +
                   4.0 * std::pow(dp, 4) * pair.x_shift.mat * pair.x_shift.mat);
  out.label = "sigma";
  out.representation = pair.x_shift.representation;
  out.params = family_tag(params);
  return out;
}

OperatorMatrix build_p2_mean(const GaussianParams& params, const BasisSpec& basis) {
  OperatorMatrix out = build_sigma_1d(params, basis);
  out.mat += params.mean_p * params.mean_p *
             Matrix::Identity(out.mat.rows(), out.mat.cols());
  out.label = "p2-mean";
  return out;
}

OperatorMatrix build_quadratic_grid(double center, double mean_momentum,
                                    double sigma, const GridSpec& grid,
                                    PairConvention convention) {
  grid.validate();
  if (!(sigma > 0.0))
    throw ValidationError("build_quadratic_grid: sigma must be positive");
  const double sigma_u = 1.0 / (2.0 * sigma);  // conjugate-coordinate spread
  const double mid = grid.center.value_or(center);
  const double half = grid.halfwidth * sigma_u;
  const int m = grid.points;
  const double h = 2.0 * half / (m - 1);
  if (h > sigma_u / 4.0)
    throw GridTooCoarse("grid spacing exceeds sigma/4 for this family");

  // Peierls stencil for (mom_op - K)^2: diagonal 2/h^2, off-diagonal
  // -e^{-si K h}/h^2 to the right (s = +1 Schrodinger, -1 covariant).
  // Exactly diag(e^{siKu_j}) * [P = 0 stencil] * diag(e^{-siKu_j}).
  const double s = (convention == PairConvention::kSchrodinger) ? 1.0 : -1.0;
  const Complex off =
      -Complex{std::cos(s * mean_momentum * h), -std::sin(s * mean_momentum * h)} /
      (h * h);

  Matrix op = Matrix::Zero(m, m);
  const double quartic = 2.0 * std::pow(sigma, 4);
  for (int j = 0; j < m; ++j) {
    const double u = mid - half + j * h;
    op(j, j) = 1.0 / (h * h) + quartic * (u - center) * (u - center);
    if (j + 1 < m) {
      op(j, j + 1) = 0.5 * off;
      op(j + 1, j) = 0.5 * std::conj(off);
    }
  }

  OperatorMatrix out;
  out.mat = std::move(op);
  out.label = "sigma";
  out.representation = "grid-" + std::to_string(m);
  std::ostringstream os;
  os << "center=" << center << ";K=" << mean_momentum << ";sigma=" << sigma;
  out.params = os.str();
  return out;
}

OperatorMatrix build_sigma_grid(const GaussianParams& params, const GridSpec& grid) {
  params.validate();
  GridSpec g = grid;
  if (!g.center) g.center = params.mean_x;
  OperatorMatrix out = build_quadratic_grid(params.mean_x, params.mean_p,
                                            params.sigma_p, g,
                                            PairConvention::kSchrodinger);
  out.params = family_tag(params);
  return out;
}

namespace {

std::vector<EigenPair> dense_smallest(const Matrix& m, int k) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success)
    throw ConvergenceFailure("eigensolve: dense solver failed");
  std::vector<EigenPair> out;
  out.reserve(k);
  for (int j = 0; j < k; ++j)
    out.push_back({solver.eigenvalues()(j), solver.eigenvectors().col(j)});
  return out;
}

}  // namespace

std::vector<double> eigenvalues_all(const OperatorMatrix& op,
                                    double hermiticity_tol) {
  if (op.hermiticity_residual() > hermiticity_tol)
    throw NotHermitian("eigenvalues_all: operator fails the Hermiticity gate (" +
                       op.label + ")");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(op.mat, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw ConvergenceFailure("eigenvalues_all: dense solver failed");
  return {solver.eigenvalues().data(),
          solver.eigenvalues().data() + solver.eigenvalues().size()};
}

std::vector<EigenPair> eigensolve(const OperatorMatrix& op, int k,
                                  const EigensolveOptions& opts) {
  if (k < 1 || k > op.dim())
    throw std::invalid_argument("eigensolve: k must be in [1, dim]");
  if (op.hermiticity_residual() > opts.hermiticity_tol)
    throw NotHermitian("eigensolve: operator fails the Hermiticity gate (" +
                       op.label + ")");
  if (op.dim() <= opts.dense_cap) return dense_smallest(op.mat, k);
  const Matrix& m = op.mat;
  return lanczos_smallest([&m](const Vector& v) { return Vector(m * v); },
                          op.dim(), k, opts.tol, opts.max_iterations);
}

std::vector<EigenPair> lanczos_smallest(
    const std::function<Vector(const Vector&)>& matvec, Eigen::Index dim, int k,
    double tol, int max_iterations) {
  if (k < 1 || k > dim)
    throw std::invalid_argument("lanczos_smallest: k out of range");

  // Deterministic start vector.
  const CounterRng rng(0x1a2b3c4d5e6fULL);
  Vector q(dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    q(i) = Complex{rng.normal(0, static_cast<std::uint64_t>(i)),
                   rng.normal(1, static_cast<std::uint64_t>(i))};
  q.normalize();

  const int max_basis = static_cast<int>(std::min<Eigen::Index>(dim, 400));
  int matvecs = 0;

  // Outer loop restarts from the current smallest Ritz vector when the basis
  // fills up without convergence.
  while (true) {
    std::vector<Vector> basis{q};
    std::vector<double> alpha, beta;

    for (int j = 0; j < max_basis; ++j) {
      Vector r = matvec(basis[j]);
      ++matvecs;
      if (j > 0) r -= beta[j - 1] * basis[j - 1];
      const double a = std::real(basis[j].dot(r));
      alpha.push_back(a);
      r -= a * basis[j];
      // Full reorthogonalization (two passes) keeps the Ritz residual
      // estimates trustworthy.
      for (const auto& v : basis) r -= v.dot(r) * v;
      for (const auto& v : basis) r -= v.dot(r) * v;
      const double b = r.norm();

      const int steps = j + 1;
      const bool invariant = b < 1e-13;
      if (steps >= k + 2 || steps == max_basis || invariant ||
          steps == static_cast<int>(dim)) {
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(steps, steps);
        for (int i = 0; i < steps; ++i) {
          t(i, i) = alpha[i];
          if (i + 1 < steps) t(i, i + 1) = t(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tsolver(t);

        bool converged = steps >= k;
        if (converged && !invariant) {
          for (int e = 0; e < k; ++e) {
            const double resid = b * std::abs(tsolver.eigenvectors()(steps - 1, e));
            if (resid > tol * std::max(1.0, std::abs(tsolver.eigenvalues()(e))))
              converged = false;
          }
        }
        if (converged) {
          std::vector<EigenPair> out;
          for (int e = 0; e < k; ++e) {
            Vector v = Vector::Zero(dim);
            for (int i = 0; i < steps; ++i)
              v += tsolver.eigenvectors()(i, e) * basis[i];
            v.normalize();
            out.push_back({tsolver.eigenvalues()(e), std::move(v)});
          }
          return out;
        }
        if (invariant)
          throw ConvergenceFailure(
              "lanczos_smallest: invariant subspace smaller than k");
        if (steps == max_basis) {
          // Warm restart from the best Ritz vector.
          Vector v = Vector::Zero(dim);
          for (int i = 0; i < steps; ++i)
            v += tsolver.eigenvectors()(i, 0) * basis[i];
          v.normalize();
          q = std::move(v);
          break;
        }
      }
      if (matvecs >= max_iterations)
        throw ConvergenceFailure("lanczos_smallest: iteration budget exhausted");
      beta.push_back(b);
      basis.push_back(r / b);
    }
  }
}

}  // namespace discofield
