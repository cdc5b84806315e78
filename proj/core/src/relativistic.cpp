#include "discofield/relativistic.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <sstream>

namespace discofield {

namespace {

void validate_tensor(const Eigen::Matrix4d& b) {
  if ((b - b.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw ValidationError("B not symmetric");
  for (int mu = 0; mu < 4; ++mu)
    if (!(b(mu, mu) > 0.0))
      throw ValidationError("B diagonal entries must be strictly positive");
  Eigen::LLT<Eigen::Matrix4d> llt(b);
  if (llt.info() != Eigen::Success)
    throw ValidationError("B not positive definite");
}

bool offdiag_zero(const Eigen::Matrix4d& b) {
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu)
      if (mu != nu && b(mu, nu) != 0.0) return false;
  return true;
}

std::string tensor_tag(const DispersionTensor& b) {
  std::ostringstream os;
  os << "B=diag(" << b.entry(0, 0) << "," << b.entry(1, 1) << ","
     << b.entry(2, 2) << "," << b.entry(3, 3) << ")";
  if (!b.is_diagonal()) os << "+offdiag";
  return os.str();
}

}  // namespace

DispersionTensor DispersionTensor::diagonal(const std::array<double, 4>& entries) {
  Eigen::Matrix4d b = Eigen::Matrix4d::Zero();
  for (int mu = 0; mu < 4; ++mu) b(mu, mu) = entries[mu];
  validate_tensor(b);
  return DispersionTensor(b, true);
}

DispersionTensor DispersionTensor::full(const Eigen::Matrix4d& b) {
  validate_tensor(b);
  const Eigen::Matrix4d sym = 0.5 * (b + b.transpose());
  return DispersionTensor(sym, offdiag_zero(sym));
}

double momentum_invariant_square(const FourMeans& means) {
  double acc = 0.0;
  for (int mu = 0; mu < 4; ++mu)
    acc += Metric::kDiag[mu] * means.p_dn[mu] * means.p_dn[mu];
  return acc;
}

double validate_mass_shell(const FourMeans& means, double mass_mean) {
  return momentum_invariant_square(means) - mass_mean * mass_mean;
}

FourMeans on_shell_means(double mass_mean, const std::array<double, 3>& p_spatial,
                         const std::array<double, 4>& x_up) {
  if (mass_mean < 0.0)
    throw ValidationError("on_shell_means: M must be non-negative");
  FourMeans out;
  out.x_up = x_up;
  double sq = mass_mean * mass_mean;
  for (int j = 0; j < 3; ++j) {
    out.p_dn[j + 1] = p_spatial[j];
    sq += p_spatial[j] * p_spatial[j];
  }
  out.p_dn[0] = std::sqrt(sq);
  return out;
}

double mass_from_means(const FourMeans& means) {
  const double sq = momentum_invariant_square(means);
  if (sq < 0.0)
    throw SpacelikeMomentum(
        "mass_from_means: g^{mu nu} P_mu P_nu < 0, no on-shell mass exists");
  return std::sqrt(sq);
}

long ProductBasisSpec::dimension() const {
  long d = 1;
  for (int c : cutoff) d *= c;
  return d;
}

void ProductBasisSpec::validate() const {
  for (int c : cutoff)
    if (c < 2) throw ValidationError("ProductBasisSpec: every cutoff must be >= 2");
  if (dimension() > dimension_cap)
    throw DimensionCapExceeded("ProductBasisSpec: product dimension exceeds cap");
}

namespace {

struct AxisOps {
  std::vector<Matrix> x_shift;  // embedded x^mu - X^mu
  std::vector<Matrix> p_shift;  // embedded p_mu - P_mu
};

AxisOps embedded_axis_ops(const DispersionTensor& b, const FourMeans& means,
                          const ProductBasisSpec& basis) {
  const auto cutoffs = basis.cutoffs_vec();
  AxisOps ops;
  for (int mu = 0; mu < 4; ++mu) {
    const GaussianParams axis{means.x_up[mu], means.p_dn[mu], b.sigma_p(mu)};
    const auto pair = build_xp_ladder(axis, BasisSpec{basis.cutoff[mu]},
                                      PairConvention::kCovariant);
    ops.x_shift.push_back(embed_axis(pair.x_shift.mat, mu, cutoffs));
    ops.p_shift.push_back(embed_axis(pair.p_shift.mat, mu, cutoffs));
  }
  return ops;
}

}  // namespace

OperatorMatrix build_sigma_tensor(int mu, int nu, const DispersionTensor& b,
                                  const FourMeans& means,
                                  const ProductBasisSpec& basis) {
  basis.validate();
  if (mu < 0 || mu > 3 || nu < 0 || nu > 3)
    throw std::out_of_range("build_sigma_tensor: index out of range");
  const auto ops = embedded_axis_ops(b, means, basis);

  // Canonical factor order makes Sigma_munu and Sigma_numu bitwise equal.
  const int lo = std::min(mu, nu);
  const int hi = std::max(mu, nu);
  Matrix out = 0.5 * (ops.p_shift[lo] * ops.p_shift[hi]);
  for (int alpha = 0; alpha < 4; ++alpha) {
    for (int beta = alpha; beta < 4; ++beta) {
      double coeff = b.entry(mu, alpha) * b.entry(nu, beta);
      if (alpha != beta) coeff += b.entry(mu, beta) * b.entry(nu, alpha);
      if (coeff == 0.0) continue;
      out += 2.0 * coeff * (ops.x_shift[alpha] * ops.x_shift[beta]);
    }
  }

  OperatorMatrix result;
  result.mat = std::move(out);
  result.label = "sigma_" + std::to_string(mu) + std::to_string(nu);
  result.representation = "ladder-product";
  result.params = tensor_tag(b);
  return result;
}

OperatorMatrix contract_metric_sigma(const DispersionTensor& b,
                                     const FourMeans& means,
                                     const ProductBasisSpec& basis) {
  OperatorMatrix out = build_sigma_tensor(0, 0, b, means, basis);
  for (int j = 1; j < 4; ++j)
    out.mat -= build_sigma_tensor(j, j, b, means, basis).mat;
  out.label = "g-contracted-sigma";
  return out;
}

CommutationReport commutation_check(const ProductBasisSpec& basis,
                                    const DispersionTensor& b) {
  basis.validate();
  const FourMeans means{};  // shifts drop out of every commutator
  const auto ops = embedded_axis_ops(b, means, basis);
  const auto interior = interior_indices(basis.cutoffs_vec());
  const Complex i{0.0, 1.0};
  const long n = basis.dimension();
  const Matrix id = Matrix::Identity(n, n);

  CommutationReport report;
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      const Matrix comm =
          ops.p_shift[mu] * ops.x_shift[nu] - ops.x_shift[nu] * ops.p_shift[mu];
      const Matrix expect = (mu == nu) ? Matrix(i * id) : Matrix(Matrix::Zero(n, n));
      const double r =
          restrict_to(comm - expect, interior).cwiseAbs().maxCoeff();
      report.px_residual[mu][nu] = r;
      report.max_px_residual = std::max(report.max_px_residual, r);
    }
  }
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = mu + 1; nu < 4; ++nu) {
      const Matrix pp =
          ops.p_shift[mu] * ops.p_shift[nu] - ops.p_shift[nu] * ops.p_shift[mu];
      const Matrix xx =
          ops.x_shift[mu] * ops.x_shift[nu] - ops.x_shift[nu] * ops.x_shift[mu];
      report.max_pp_residual = std::max(
          report.max_pp_residual, restrict_to(pp, interior).cwiseAbs().maxCoeff());
      report.max_xx_residual = std::max(
          report.max_xx_residual, restrict_to(xx, interior).cwiseAbs().maxCoeff());
    }
  }
  return report;
}

}  // namespace discofield
