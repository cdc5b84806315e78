#include <doctest.h>

#include <cmath>

#include "discofield/hermite.hpp"
#include "discofield/operators_1d.hpp"

using namespace discofield;

namespace {
const Complex kI{0.0, 1.0};
}

TEST_CASE("ladder pair: ground variances and frozen matrix elements") {
  const GaussianParams fam{0.0, 0.0, 0.5};
  const auto pair = build_xp_ladder(fam, BasisSpec{8});
  const Matrix x2 = pair.x_shift.mat * pair.x_shift.mat;
  const Matrix p2 = pair.p_shift.mat * pair.p_shift.mat;
  CHECK(x2(0, 0).real() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p2(0, 0).real() == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(std::abs(pair.p_shift.mat(0, 0)) == 0.0);
  CHECK(pair.x_shift.hermiticity_residual() < 1e-15);
  CHECK(pair.p_shift.hermiticity_residual() < 1e-15);
}

TEST_CASE("commutator [(p-P),(x-X)] is -i on states below the edge") {
  const GaussianParams fam{1.1, -0.4, 1.7};
  const int n = 10;
  const auto pair = build_xp_ladder(fam, BasisSpec{n});
  const Matrix comm =
      pair.p_shift.mat * pair.x_shift.mat - pair.x_shift.mat * pair.p_shift.mat;
  for (int i = 0; i <= n - 2; ++i)
    for (int j = 0; j <= n - 2; ++j)
      CHECK(std::abs(comm(i, j) - (i == j ? -kI : Complex{})) < 1e-12);
  // Covariant convention flips the sign.
  const auto cov = build_xp_ladder(fam, BasisSpec{n}, PairConvention::kCovariant);
  const Matrix comm2 =
      cov.p_shift.mat * cov.x_shift.mat - cov.x_shift.mat * cov.p_shift.mat;
  CHECK(std::abs(comm2(0, 0) - kI) < 1e-14);
}

TEST_CASE("sigma ladder: interior diagonal (2n+1) dp^2, vanishing off-diagonal") {
  const auto sigma = build_sigma_1d({0.0, 0.0, 0.5}, BasisSpec{6});
  for (int i = 0; i <= 3; ++i) {
    CHECK(sigma.mat(i, i).real() ==
          doctest::Approx(0.25 * (2 * i + 1)).epsilon(1e-14));
    for (int j = 0; j <= 3; ++j)
      if (i != j) CHECK(std::abs(sigma.mat(i, j)) < 1e-14);
  }
  const auto unit = build_sigma_1d({0.0, 0.0, 1.0}, BasisSpec{4});
  CHECK(unit.mat(0, 0).real() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sigma.hermiticity_residual() < 1e-12);
}

TEST_CASE("momentum quadratic mean: P^2 shift of sigma") {
  const auto p2 = build_p2_mean({0.0, 2.0, 0.5}, BasisSpec{6});
  CHECK(p2.mat(0, 0).real() == doctest::Approx(4.25).epsilon(1e-14));

  const auto with_p = build_p2_mean({0.3, 1.0, 1.0}, BasisSpec{8});
  CHECK(with_p.mat(3, 3).real() == doctest::Approx(8.0).epsilon(1e-13));
  const auto pairs = eigensolve(with_p, 4);
  CHECK(pairs[3].value == doctest::Approx(8.0).epsilon(1e-12));

  const auto zero_p = build_p2_mean({0.3, 0.0, 1.0}, BasisSpec{8});
  const auto sigma = build_sigma_1d({0.3, 0.0, 1.0}, BasisSpec{8});
  CHECK((zero_p.mat - sigma.mat).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("grid representation: spectrum, gauge shift, ground state") {
  const GaussianParams fam{0.0, 0.0, 0.5};
  const GridSpec grid{{}, 8.0, 1024};
  const auto op = build_sigma_grid(fam, grid);
  CHECK(op.hermiticity_residual() < 1e-12);

  const auto vals = eigenvalues_all(op);
  for (int n = 0; n < 6; ++n) {
    const double exact = 0.25 * (2 * n + 1);
    CHECK(std::abs(vals[n] - exact) / exact < 1e-3);
  }

  GaussianParams shifted = fam;
  shifted.mean_p = 3.0;
  const auto shifted_vals = eigenvalues_all(build_sigma_grid(shifted, grid));
  for (int n = 0; n < 6; ++n)
    CHECK(std::abs(vals[n] - shifted_vals[n]) < 1e-10);

  const auto pairs = eigensolve(op, 1);
  Vector samples(grid.points);
  const double half = grid.halfwidth * fam.sigma_x();
  const double h = 2.0 * half / (grid.points - 1);
  for (int i = 0; i < grid.points; ++i)
    samples(i) = eval_phi({0, fam}, -half + i * h);
  const double cosine = std::abs(samples.dot(pairs[0].vector)) / samples.norm();
  CHECK(cosine >= 0.9999);
}

TEST_CASE("grid validation and coarseness gate") {
  const GaussianParams fam{0.0, 0.0, 0.5};
  CHECK_THROWS_AS(build_sigma_grid(fam, GridSpec{{}, 5.0, 1024}), ValidationError);
  CHECK_THROWS_AS(build_sigma_grid(fam, GridSpec{{}, 8.0, 32}), ValidationError);
  // 64 points over 16 dx gives spacing > dx/4.
  CHECK_THROWS_AS(build_sigma_grid(fam, GridSpec{{}, 8.0, 64}), GridTooCoarse);
  CHECK_NOTHROW(build_sigma_grid(fam, GridSpec{{}, 8.0, 128}));
}

TEST_CASE("eigensolve: frozen spectra, Hermiticity gate, orthonormality") {
  const auto sigma = build_sigma_1d({0.0, 0.0, 0.5}, BasisSpec{12});
  const auto pairs = eigensolve(sigma, 3);
  CHECK(pairs[0].value == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(pairs[1].value == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(pairs[2].value == doctest::Approx(1.25).epsilon(1e-12));
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      CHECK(std::abs(pairs[a].vector.dot(pairs[b].vector) -
                     (a == b ? 1.0 : 0.0)) < 1e-10);

  OperatorMatrix id;
  id.mat = Matrix::Identity(5, 5);
  id.label = "identity";
  const auto unit = eigensolve(id, 2);
  CHECK(unit[0].value == doctest::Approx(1.0));
  CHECK(unit[1].value == doctest::Approx(1.0));

  OperatorMatrix bad;
  bad.mat = Matrix::Zero(3, 3);
  bad.mat(0, 1) = 1.0;
  bad.label = "non-hermitian";
  CHECK_THROWS_AS(eigensolve(bad, 1), NotHermitian);
  CHECK_THROWS_AS(eigensolve(id, 9), std::invalid_argument);
}

TEST_CASE("iterative path agrees with the dense solver") {
  const GaussianParams fam{0.0, 0.7, 0.8};
  const auto op = build_sigma_grid(fam, GridSpec{{}, 8.0, 257});
  EigensolveOptions force_iterative;
  force_iterative.dense_cap = 64;
  const auto lanczos = eigensolve(op, 3, force_iterative);
  const auto dense = eigensolve(op, 3);
  for (int e = 0; e < 3; ++e) {
    CHECK(lanczos[e].value == doctest::Approx(dense[e].value).epsilon(1e-9));
    CHECK((op.mat * lanczos[e].vector - lanczos[e].value * lanczos[e].vector)
              .norm() < 1e-8);
  }
}

TEST_CASE("ladder and grid representations are mutual oracles") {
  const GaussianParams fam{0.4, -1.0, 1.3};
  const auto ladder = eigensolve(build_sigma_1d(fam, BasisSpec{24}), 5);
  const auto grid = eigenvalues_all(build_sigma_grid(fam, GridSpec{{}, 8.0, 1024}));
  for (int e = 0; e < 5; ++e)
    CHECK(std::abs(ladder[e].value - grid[e]) / ladder[e].value < 1e-3);
}

TEST_CASE("truncation locality on the interior block") {
  const GaussianParams fam{0.0, 0.0, 0.7};
  auto interior_vals = [&](int n) {
    const auto op = build_sigma_1d(fam, BasisSpec{n});
    OperatorMatrix block;
    block.mat = restrict_to(op.mat, interior_indices({n}));
    block.label = "sigma-interior";
    return eigenvalues_all(block);
  };
  const auto small = interior_vals(16);
  const auto big = interior_vals(24);
  for (int e = 0; e < 12; ++e) CHECK(std::abs(small[e] - big[e]) < 1e-12);
}

TEST_CASE("grid convergence is second order") {
  const GaussianParams fam{0.0, 0.0, 0.5};
  const double exact = 0.25 * 7;  // n = 3
  double prev_err = 0.0;
  for (int pts : {257, 513, 1025}) {
    const auto vals = eigenvalues_all(build_sigma_grid(fam, GridSpec{{}, 8.0, pts}));
    const double err = std::abs(vals[3] - exact);
    if (prev_err > 0.0) {
      const double order = std::log2(prev_err / err);
      CHECK(order > 1.7);
      CHECK(order < 2.3);
    }
    prev_err = err;
  }
}
