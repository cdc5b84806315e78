#pragma once

#include <array>
#include <string>
#include <vector>

#include "discofield/operator_matrix.hpp"
#include "discofield/relativistic.hpp"

namespace discofield {

/// Dirac-representation gamma matrices and gamma5 = i g0 g1 g2 g3.
struct GammaSet {
  std::array<Eigen::Matrix4cd, 4> gamma;
  Eigen::Matrix4cd gamma5;
};
GammaSet build_gammas();

/// The 32x32 factor matrices of the first-order factorization:
///   alpha^mu = gamma^mu x I4 x I2
///   beta^mu  = gamma5  x gamma^mu x I2
///   zeta     = I4 x I4 x diag(1, -1)
///   vartheta = I4 x I4 x offdiag(1, 1)
struct FactorMatrices {
  std::array<Matrix, 4> alpha;
  std::array<Matrix, 4> beta;
  Matrix zeta;
  Matrix vartheta;
};
FactorMatrices build_factor_matrices(const GammaSet& g);

/// One row per algebraic relation the factor matrices must satisfy
/// (anticommutators of alpha/beta, squares of zeta/vartheta, and the eight
/// commutation/anticommutation constraints among them).
struct RelationRow {
  std::string id;
  std::string eq_ref;
  double max_abs_residual;
  bool pass;
};
std::vector<RelationRow> relation_report(const FactorMatrices& f,
                                         double tolerance = 1e-13);

/// Residual matrix of the coupling constraint,
///   R(B, dm2) = beta^mu alpha^nu B_munu - vartheta zeta dm2,
/// summed over both indices with B as given.
Matrix constraint_matrix(const FactorMatrices& f, const Eigen::Matrix4d& b,
                         double dm2);

struct ConstraintNorms {
  double frobenius;
  double max_abs;
};
ConstraintNorms constraint_residual(const FactorMatrices& f,
                                    const DispersionTensor& b, double dm2);
ConstraintNorms constraint_residual_raw(const FactorMatrices& f,
                                        const Eigen::Matrix4d& b, double dm2);

/// The constraint as a linear map from (10 independent B entries, dm2) to
/// 32x32 matrices: singular values of the stacked real map, plus the
/// unit-norm minimizer of the residual. Reports, does not assert.
struct ConstraintSolveResult {
  std::vector<double> singular_values;  // descending, 11 of them
  Eigen::VectorXd minimizer;            // unit 11-vector (B entries, dm2)
  Eigen::Matrix4d minimizer_b;
  double minimizer_dm2;
  double residual_at_minimizer;  // Frobenius norm of the mapped minimizer
};
ConstraintSolveResult constraint_solve(const FactorMatrices& f);

/// Smallest singular value of gamma^mu p_mu - m I4 for covariant components
/// p_mu; zero exactly when p is on shell.
double dirac_baseline_residual(const std::array<double, 4>& p_cov, double m);

/// Max-abs residual of (gamma p + m)(gamma p - m) = (p.p - m^2) I4.
double dirac_factorization_residual(const std::array<double, 4>& p_cov, double m);

}  // namespace discofield
