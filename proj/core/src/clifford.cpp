#include "discofield/clifford.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace discofield {

namespace {

using M4 = Eigen::Matrix4cd;
using M2 = Eigen::Matrix2cd;
const Complex kI{0.0, 1.0};

M2 pauli(int k) {
  M2 s;
  switch (k) {
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -kI, kI, 0; break;
    default: s << 1, 0, 0, -1; break;
  }
  return s;
}

}  // namespace

GammaSet build_gammas() {
  GammaSet g;
  g.gamma[0] = M4::Zero();
  g.gamma[0].topLeftCorner<2, 2>() = M2::Identity();
  g.gamma[0].bottomRightCorner<2, 2>() = -M2::Identity();
  for (int j = 1; j <= 3; ++j) {
    g.gamma[j] = M4::Zero();
    g.gamma[j].topRightCorner<2, 2>() = pauli(j);
    g.gamma[j].bottomLeftCorner<2, 2>() = -pauli(j);
  }
  g.gamma5 = kI * g.gamma[0] * g.gamma[1] * g.gamma[2] * g.gamma[3];
  return g;
}

FactorMatrices build_factor_matrices(const GammaSet& g) {
  const Matrix i4 = Matrix::Identity(4, 4);
  const Matrix i2 = Matrix::Identity(2, 2);
  Matrix sigma3(2, 2), sigma1(2, 2);
  sigma3 << 1, 0, 0, -1;
  sigma1 << 0, 1, 1, 0;

  FactorMatrices f;
  for (int mu = 0; mu < 4; ++mu) {
    f.alpha[mu] = kron(kron(Matrix(g.gamma[mu]), i4), i2);
    f.beta[mu] = kron(kron(Matrix(g.gamma5), Matrix(g.gamma[mu])), i2);
  }
  f.zeta = kron(kron(i4, i4), sigma3);
  f.vartheta = kron(kron(i4, i4), sigma1);
  return f;
}

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

std::vector<RelationRow> relation_report(const FactorMatrices& f, double tolerance) {
  const Matrix id = Matrix::Identity(32, 32);
  std::vector<RelationRow> rows;
  auto add = [&](const std::string& id_, const std::string& eq, double r) {
    rows.push_back({id_, eq, r, r <= tolerance});
  };

  double r = 0.0;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu)
      r = std::max(r, max_abs(f.alpha[mu] * f.alpha[nu] +
                              f.alpha[nu] * f.alpha[mu] -
                              2.0 * Metric::up(mu, nu) * id));
  add("alpha_anticommutator", "4.4", r);

  r = 0.0;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu)
      r = std::max(r, max_abs(f.beta[mu] * f.beta[nu] + f.beta[nu] * f.beta[mu] -
                              2.0 * Metric::up(mu, nu) * id));
  add("beta_anticommutator", "4.5", r);

  r = 0.0;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu)
      r = std::max(r,
                   max_abs(f.alpha[mu] * f.beta[nu] + f.beta[nu] * f.alpha[mu]));
  add("alpha_beta_anticommutator", "4.6", r);

  add("zeta_square", "4.7", max_abs(f.zeta * f.zeta - id));
  add("vartheta_square", "4.8", max_abs(f.vartheta * f.vartheta - id));
  add("zeta_vartheta_anticommutator", "4.9",
      max_abs(f.zeta * f.vartheta + f.vartheta * f.zeta));

  auto max_comm = [&](const Matrix& s, const std::array<Matrix, 4>& family) {
    double worst = 0.0;
    for (const auto& m : family) worst = std::max(worst, max_abs(s * m - m * s));
    return worst;
  };
  add("zeta_alpha_commutator", "4.10", max_comm(f.zeta, f.alpha));
  add("vartheta_alpha_commutator", "4.11", max_comm(f.vartheta, f.alpha));
  add("zeta_beta_commutator", "4.12", max_comm(f.zeta, f.beta));
  add("vartheta_beta_commutator", "4.13", max_comm(f.vartheta, f.beta));
  return rows;
}

Matrix constraint_matrix(const FactorMatrices& f, const Eigen::Matrix4d& b,
                         double dm2) {
  Matrix out = Matrix::Zero(32, 32);
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu)
      if (b(mu, nu) != 0.0) out += b(mu, nu) * (f.beta[mu] * f.alpha[nu]);
  out -= dm2 * (f.vartheta * f.zeta);
  return out;
}

ConstraintNorms constraint_residual_raw(const FactorMatrices& f,
                                        const Eigen::Matrix4d& b, double dm2) {
  const Matrix r = constraint_matrix(f, b, dm2);
  return {r.norm(), max_abs(r)};
}

ConstraintNorms constraint_residual(const FactorMatrices& f,
                                    const DispersionTensor& b, double dm2) {
  if (dm2 < 0.0)
    throw ValidationError("constraint_residual: dm2 must be non-negative");
  return constraint_residual_raw(f, b.matrix(), dm2);
}

namespace {

// Basis of the 11-dimensional input space: e_0..e_3 the diagonal B entries,
// e_4..e_9 the six symmetric off-diagonal pairs, e_10 the dm2 slot.
Eigen::Matrix4d basis_tensor(int which) {
  Eigen::Matrix4d b = Eigen::Matrix4d::Zero();
  if (which < 4) {
    b(which, which) = 1.0;
    return b;
  }
  static constexpr int pair[6][2] = {{0, 1}, {0, 2}, {0, 3},
                                     {1, 2}, {1, 3}, {2, 3}};
  const int* p = pair[which - 4];
  b(p[0], p[1]) = b(p[1], p[0]) = 1.0;
  return b;
}

Eigen::VectorXd stack_real(const Matrix& m) {
  Eigen::VectorXd v(2 * m.size());
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      v(k++) = m(i, j).real();
      v(k++) = m(i, j).imag();
    }
  return v;
}

}  // namespace

ConstraintSolveResult constraint_solve(const FactorMatrices& f) {
  Eigen::MatrixXd map(2 * 32 * 32, 11);
  for (int c = 0; c < 10; ++c)
    map.col(c) = stack_real(constraint_matrix(f, basis_tensor(c), 0.0));
  map.col(10) = stack_real(constraint_matrix(f, Eigen::Matrix4d::Zero(), 1.0));

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(map, Eigen::ComputeThinV);

  ConstraintSolveResult out;
  out.singular_values.assign(svd.singularValues().data(),
                             svd.singularValues().data() + 11);
  out.minimizer = svd.matrixV().col(10);
  out.minimizer_b = Eigen::Matrix4d::Zero();
  for (int c = 0; c < 10; ++c) out.minimizer_b += out.minimizer(c) * basis_tensor(c);
  out.minimizer_dm2 = out.minimizer(10);
  out.residual_at_minimizer =
      constraint_residual_raw(f, out.minimizer_b, out.minimizer_dm2).frobenius;
  return out;
}

double dirac_baseline_residual(const std::array<double, 4>& p_cov, double m) {
  const GammaSet g = build_gammas();
  M4 slash = M4::Zero();
  for (int mu = 0; mu < 4; ++mu) slash += p_cov[mu] * g.gamma[mu];
  const M4 d = slash - m * M4::Identity();
  Eigen::JacobiSVD<M4> svd(d);
  return svd.singularValues().minCoeff();
}

double dirac_factorization_residual(const std::array<double, 4>& p_cov, double m) {
  const GammaSet g = build_gammas();
  M4 slash = M4::Zero();
  double psq = 0.0;
  for (int mu = 0; mu < 4; ++mu) {
    slash += p_cov[mu] * g.gamma[mu];
    psq += Metric::kDiag[mu] * p_cov[mu] * p_cov[mu];
  }
  const M4 id = M4::Identity();
  const M4 lhs = (slash + m * id) * (slash - m * id);
  return (lhs - (psq - m * m) * id).cwiseAbs().maxCoeff();
}

}  // namespace discofield
