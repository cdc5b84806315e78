#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "discofield/relativistic.hpp"

using namespace discofield;

TEST_CASE("metric raising and lowering invert exactly") {
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      double acc = 0.0;
      for (int a = 0; a < 4; ++a) acc += Metric::up(mu, a) * Metric::down(a, nu);
      CHECK(acc == (mu == nu ? 1.0 : 0.0));
    }
}

TEST_CASE("dispersion tensor validation") {
  CHECK(DispersionTensor::diagonal({4, 1, 1, 1}).is_diagonal());
  CHECK(DispersionTensor::diagonal({4, 1, 1, 1}).sigma_p(0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(DispersionTensor::diagonal({-1, 1, 1, 1}), ValidationError);
  CHECK_THROWS_AS(DispersionTensor::diagonal({0, 1, 1, 1}), ValidationError);

  Eigen::Matrix4d skew = Eigen::Matrix4d::Identity();
  skew(0, 1) = 0.5;  // asymmetric
  CHECK_THROWS_AS(DispersionTensor::full(skew), ValidationError);

  Eigen::Matrix4d indefinite = Eigen::Matrix4d::Identity();
  indefinite(0, 1) = indefinite(1, 0) = 2.0;  // positive diagonal, not PD
  CHECK_THROWS_AS(DispersionTensor::full(indefinite), ValidationError);

  Eigen::Matrix4d correlated = Eigen::Matrix4d::Identity();
  correlated(0, 1) = correlated(1, 0) = 0.3;
  const auto tensor = DispersionTensor::full(correlated);
  CHECK_FALSE(tensor.is_diagonal());
}

TEST_CASE("mass shell: residuals and on-shell completion") {
  const FourMeans on = on_shell_means(1.0, {0.6, 0.0, 0.0});
  CHECK(on.p_dn[0] == doctest::Approx(1.1661903789690602).epsilon(1e-14));
  CHECK(validate_mass_shell(on, 1.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));

  const FourMeans rest = on_shell_means(0.0, {0.0, 0.0, 0.0});
  for (double p : rest.p_dn) CHECK(p == 0.0);

  FourMeans fast;
  fast.p_dn = {2.0, 0.0, 0.0, 0.0};
  CHECK(validate_mass_shell(fast, 1.0) == doctest::Approx(3.0));

  FourMeans spacelike;
  spacelike.p_dn = {0.5, 2.0, 0.0, 0.0};
  CHECK_THROWS_AS(mass_from_means(spacelike), SpacelikeMomentum);
}

TEST_CASE("product basis validation and dimension cap") {
  ProductBasisSpec tiny{{2, 2, 2, 1}, 4096};
  CHECK_THROWS_AS(tiny.validate(), ValidationError);
  ProductBasisSpec big{{10, 10, 10, 10}, 4096};
  CHECK_THROWS_AS(big.validate(), DimensionCapExceeded);
  ProductBasisSpec fine{{3, 3, 3, 3}, 4096};
  CHECK_NOTHROW(fine.validate());
  CHECK(fine.dimension() == 81);
}

TEST_CASE("sigma tensor: diagonal axis reduces to the 1D oscillator") {
  const auto b = DispersionTensor::diagonal({4.0, 1.0, 2.25, 1.0});
  const FourMeans means = on_shell_means(1.5, {0.3, 0.0, -0.2});
  const ProductBasisSpec basis{{3, 4, 3, 3}, 4096};

  const auto sigma11 = build_sigma_tensor(1, 1, b, means, basis);
  CHECK(sigma11.hermiticity_residual() < 1e-12);

  // Interior block is exactly diagonal with (2 n_1 + 1) B_11.
  const auto interior = interior_indices(basis.cutoffs_vec());
  for (long row : interior) {
    const auto tuple = unflatten_index(row, basis.cutoffs_vec());
    CHECK(sigma11.mat(row, row).real() ==
          doctest::Approx((2.0 * tuple[1] + 1.0) * b.entry(1, 1)).epsilon(1e-13));
    for (long col : interior)
      if (row != col) CHECK(std::abs(sigma11.mat(row, col)) < 1e-13);
  }
}

TEST_CASE("sigma tensor: cross components vanish on the ground state and are symmetric") {
  const auto b = DispersionTensor::diagonal({4.0, 1.0, 1.0, 1.0});
  const FourMeans means{};
  const ProductBasisSpec basis{{3, 3, 3, 3}, 4096};
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu + 1; nu < 4; ++nu) {
      const auto fwd = build_sigma_tensor(mu, nu, b, means, basis);
      const auto bwd = build_sigma_tensor(nu, mu, b, means, basis);
      CHECK((fwd.mat - bwd.mat).cwiseAbs().maxCoeff() == 0.0);
      CHECK(std::abs(fwd.mat(0, 0)) < 1e-14);  // odd ladder parity per axis
      CHECK(fwd.hermiticity_residual() < 1e-12);
    }
}

TEST_CASE("contracted tensor: closed-form interior spectrum") {
  const FourMeans means{};
  const ProductBasisSpec basis{{4, 4, 4, 4}, 4096};

  {
    const auto b = DispersionTensor::diagonal({4.0, 1.0, 1.0, 1.0});
    const auto contract = contract_metric_sigma(b, means, basis);
    CHECK(contract.hermiticity_residual() < 1e-12);
    const auto interior = interior_indices(basis.cutoffs_vec());
    OperatorMatrix block;
    block.mat = restrict_to(contract.mat, interior);
    block.label = "contract-interior";
    auto got = eigenvalues_all(block);

    std::vector<double> expected;
    for (long idx : interior) {
      const auto t = unflatten_index(idx, basis.cutoffs_vec());
      expected.push_back((2.0 * t[0] + 1.0) * 4.0 - (2.0 * t[1] + 1.0) -
                         (2.0 * t[2] + 1.0) - (2.0 * t[3] + 1.0));
    }
    std::sort(expected.begin(), expected.end());
    REQUIRE(got.size() == expected.size());
    for (std::size_t i = 0; i < got.size(); ++i)
      CHECK(got[i] == doctest::Approx(expected[i]).epsilon(1e-10).scale(1.0));
    // Ground tuple value (2.16 case): 4 - 3 = 1.
    CHECK(contract.mat(0, 0).real() == doctest::Approx(1.0).epsilon(1e-13));
  }
  {
    const auto uniform = DispersionTensor::diagonal({1.0, 1.0, 1.0, 1.0});
    const auto contract = contract_metric_sigma(uniform, means, basis);
    CHECK(contract.mat(0, 0).real() == doctest::Approx(-2.0).epsilon(1e-13));
  }
}

TEST_CASE("contracted tensor is invariant under mean shifts") {
  const auto b = DispersionTensor::diagonal({2.0, 0.5, 1.0, 1.5});
  const ProductBasisSpec basis{{3, 3, 3, 3}, 4096};
  const auto base = contract_metric_sigma(b, FourMeans{}, basis);
  FourMeans moved;
  moved.x_up = {1.0, -2.0, 0.5, 3.0};
  moved.p_dn = {0.7, 0.1, -0.4, 0.9};
  const auto shifted = contract_metric_sigma(b, moved, basis);
  CHECK((base.mat - shifted.mat).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("non-diagonal tensor assembles and stays Hermitian") {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m(0, 0) = 4.0;
  m(0, 1) = m(1, 0) = 0.4;
  m(2, 3) = m(3, 2) = -0.2;
  const auto b = DispersionTensor::full(m);
  const ProductBasisSpec basis{{3, 3, 3, 3}, 4096};
  const auto contract = contract_metric_sigma(b, FourMeans{}, basis);
  CHECK(contract.hermiticity_residual() < 1e-12);
  const auto s01 = build_sigma_tensor(0, 1, b, FourMeans{}, basis);
  const auto s10 = build_sigma_tensor(1, 0, b, FourMeans{}, basis);
  CHECK((s01.mat - s10.mat).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("commutation relations on the interior projector") {
  const auto b = DispersionTensor::diagonal({4.0, 1.0, 1.0, 2.0});
  const ProductBasisSpec basis{{4, 4, 3, 3}, 4096};
  const auto report = commutation_check(basis, b);
  CHECK(report.max_px_residual < 1e-12);
  CHECK(report.max_pp_residual < 1e-12);
  CHECK(report.max_xx_residual < 1e-12);
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu)
      CHECK(report.px_residual[mu][nu] < 1e-12);
}
