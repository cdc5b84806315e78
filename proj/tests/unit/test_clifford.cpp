#include <doctest.h>

#include <Eigen/QR>
#include <cmath>

#include "discofield/clifford.hpp"
#include "discofield/rng.hpp"

using namespace discofield;

namespace {
const Complex kI{0.0, 1.0};
}

TEST_CASE("gamma matrices: anticommutation and gamma5") {
  const GammaSet g = build_gammas();
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      const Eigen::Matrix4cd anti = g.gamma[mu] * g.gamma[nu] +
                                    g.gamma[nu] * g.gamma[mu] -
                                    2.0 * Metric::up(mu, nu) *
                                        Eigen::Matrix4cd::Identity();
      CHECK(anti.cwiseAbs().maxCoeff() < 1e-14);
    }
  CHECK((g.gamma5 * g.gamma5 - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff() <
        1e-14);
  for (const auto& gm : g.gamma)
    CHECK((g.gamma5 * gm + gm * g.gamma5).cwiseAbs().maxCoeff() < 1e-14);
  // Dirac representation: gamma5 is the off-diagonal identity block pair.
  Eigen::Matrix4cd expected = Eigen::Matrix4cd::Zero();
  expected.topRightCorner<2, 2>() = Eigen::Matrix2cd::Identity();
  expected.bottomLeftCorner<2, 2>() = Eigen::Matrix2cd::Identity();
  CHECK((g.gamma5 - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("factor matrices: dimensions, structure, Hermiticity pattern") {
  const FactorMatrices f = build_factor_matrices(build_gammas());
  for (int mu = 0; mu < 4; ++mu) {
    CHECK(f.alpha[mu].rows() == 32);
    CHECK(f.beta[mu].cols() == 32);
  }
  CHECK(std::abs(f.zeta.trace()) < 1e-15);
  for (int i = 0; i < 32; ++i) {
    CHECK(std::abs(std::abs(f.zeta(i, i).real()) - 1.0) < 1e-15);
    for (int j = 0; j < 32; ++j)
      if (i != j) CHECK(std::abs(f.zeta(i, j)) == 0.0);
  }
  CHECK((f.alpha[0] - f.alpha[0].adjoint()).cwiseAbs().maxCoeff() < 1e-15);
  for (int j = 1; j < 4; ++j)
    CHECK((f.alpha[j] + f.alpha[j].adjoint()).cwiseAbs().maxCoeff() < 1e-15);

  const Matrix id = Matrix::Identity(32, 32);
  CHECK((f.alpha[0] * f.alpha[0] - id).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((f.alpha[2] * f.alpha[2] + id).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((f.zeta * f.zeta - id).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((f.vartheta * f.vartheta - id).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("all ten factor-matrix relations hold") {
  const auto rows = relation_report(build_factor_matrices(build_gammas()));
  REQUIRE(rows.size() == 10);
  for (const auto& row : rows) {
    INFO(row.id);
    CHECK(row.max_abs_residual <= 1e-13);
    CHECK(row.pass);
  }
}

TEST_CASE("relations survive a random unitary change of representation") {
  const CounterRng rng(4242);
  const GammaSet g = build_gammas();
  for (std::uint64_t trial = 0; trial < 3; ++trial) {
    Eigen::Matrix4cd raw;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        raw(i, j) = Complex{rng.normal(10 + trial, 8 * i + 2 * j),
                            rng.normal(20 + trial, 8 * i + 2 * j + 1)};
    const Eigen::Matrix4cd u =
        Eigen::HouseholderQR<Eigen::Matrix4cd>(raw).householderQ();
    GammaSet rotated;
    for (int mu = 0; mu < 4; ++mu) rotated.gamma[mu] = u * g.gamma[mu] * u.adjoint();
    rotated.gamma5 = kI * rotated.gamma[0] * rotated.gamma[1] * rotated.gamma[2] *
                     rotated.gamma[3];
    for (const auto& row : relation_report(build_factor_matrices(rotated), 1e-12))
      CHECK(row.max_abs_residual <= 1e-12);
  }
}

TEST_CASE("constraint residual: frozen norms and linearity") {
  const FactorMatrices f = build_factor_matrices(build_gammas());
  CHECK(constraint_residual_raw(f, Eigen::Matrix4d::Zero(), 0.0).frobenius == 0.0);

  const auto b = DispersionTensor::diagonal({1.0, 0.25, 0.25, 0.25});
  const auto norms = constraint_residual(f, b, 0.25);
  // Trace-orthogonal terms: ||R||_F^2 = 32 (sum B_mumu^2 + dm2^2) = 40.
  CHECK(norms.frobenius == doctest::Approx(std::sqrt(40.0)).epsilon(1e-12));
  CHECK(norms.frobenius == doctest::Approx(6.324555320336759).epsilon(1e-10));

  const double c = 2.3;
  const auto scaled =
      constraint_residual_raw(f, Eigen::Matrix4d(c * b.matrix()), c * 0.25);
  CHECK(scaled.frobenius == doctest::Approx(c * norms.frobenius).epsilon(1e-12));
  CHECK(scaled.max_abs == doctest::Approx(c * norms.max_abs).epsilon(1e-12));

  CHECK_THROWS_AS(constraint_residual(f, b, -1.0), ValidationError);
}

TEST_CASE("constraint map: gram structure pins every singular value") {
  const FactorMatrices f = build_factor_matrices(build_gammas());
  const auto result = constraint_solve(f);
  REQUIRE(result.singular_values.size() == 11);

  // Independent oracle: the 11 basis images are pairwise trace-orthogonal,
  // so the singular values are exactly the column Frobenius norms:
  // sqrt(64) for the six off-diagonal pairs, sqrt(32) for the rest.
  auto image = [&](int which) {
    Eigen::Matrix4d b = Eigen::Matrix4d::Zero();
    double dm2 = 0.0;
    if (which < 4) b(which, which) = 1.0;
    else if (which < 10) {
      static constexpr int pair[6][2] = {{0, 1}, {0, 2}, {0, 3},
                                         {1, 2}, {1, 3}, {2, 3}};
      b(pair[which - 4][0], pair[which - 4][1]) = 1.0;
      b(pair[which - 4][1], pair[which - 4][0]) = 1.0;
    } else {
      dm2 = 1.0;
    }
    return constraint_matrix(f, b, dm2);
  };
  for (int a = 0; a < 11; ++a)
    for (int c = a + 1; c < 11; ++c)
      CHECK(std::abs((image(a).adjoint() * image(c)).trace()) < 1e-12);

  std::vector<double> expected;
  for (int a = 0; a < 11; ++a) expected.push_back(image(a).norm());
  std::sort(expected.rbegin(), expected.rend());
  for (int a = 0; a < 11; ++a)
    CHECK(result.singular_values[a] == doctest::Approx(expected[a]).epsilon(1e-12));

  CHECK(result.singular_values.back() > 0.1);
  CHECK(result.singular_values.back() ==
        doctest::Approx(std::sqrt(32.0)).epsilon(1e-12));
  CHECK(std::abs(result.minimizer.norm() - 1.0) < 1e-12);
  CHECK(result.residual_at_minimizer ==
        doctest::Approx(result.singular_values.back()).epsilon(1e-10));
}

TEST_CASE("dirac baseline: on-shell kernels and off-shell gaps") {
  CHECK(dirac_baseline_residual({1.0, 0.0, 0.0, 0.0}, 1.0) < 1e-14);
  CHECK(dirac_baseline_residual({std::sqrt(2.0), 0.0, 0.0, 1.0}, 1.0) < 1e-13);
  CHECK(dirac_baseline_residual({2.0, 0.0, 0.0, 0.0}, 1.0) ==
        doctest::Approx(1.0).epsilon(1e-13));

  const CounterRng rng(7);
  for (std::uint64_t i = 0; i < 10; ++i) {
    const std::array<double, 4> p{rng.uniform(1, i, -2.0, 2.0),
                                  rng.uniform(2, i, -2.0, 2.0),
                                  rng.uniform(3, i, -2.0, 2.0),
                                  rng.uniform(4, i, -2.0, 2.0)};
    const double m = rng.uniform(5, i, 0.1, 2.0);
    CHECK(dirac_factorization_residual(p, m) < 1e-12);
  }
}
