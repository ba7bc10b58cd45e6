#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hardylab/angular_spectrum.hpp"
#include "hardylab/errors.hpp"

using namespace hardylab;
using namespace hardylab::angular;

TEST_CASE("lambda = 0: arc spectrum k^2, each eigenvalue doubled") {
  const auto b = angular_spectrum({2, 0.0, 1024}, 8);
  REQUIRE(b.count() == 8);
  for (Eigen::Index k = 0; k < 4; ++k) {
    const double exact = static_cast<double>((k + 1) * (k + 1));
    CHECK(std::abs(b.arc_eigenvalues(k) - exact) / exact <= 5e-3);
    CHECK(b.eigenvalues(2 * k) == b.eigenvalues(2 * k + 1));
    CHECK(b.parity[2 * k] == Parity::Odd);
    CHECK(b.parity[2 * k + 1] == Parity::Even);
  }
  const Eigen::MatrixXd gram = b.problem.step() * b.functions.transpose() * b.functions;
  CHECK((gram - Eigen::MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("exact arc eigenvalue formula") {
  CHECK(arc_eigenvalue_exact(0.0, 1) == doctest::Approx(1.0));
  CHECK(arc_eigenvalue_exact(0.0, 3) == doctest::Approx(9.0));
  CHECK(arc_eigenvalue_exact(3.0 / 16.0, 1) == doctest::Approx(0.5625));
  CHECK_THROWS_AS(arc_eigenvalue_exact(0.25, 1), SupercriticalCoupling);
}

TEST_CASE("lambda = 3/16: mu_1 resolved, mu_2 converges at second order") {
  // ground state has g = 1 in the factored form, which the flux stencil reproduces exactly
  const double exact1 = arc_eigenvalue_exact(3.0 / 16.0, 1);
  for (Eigen::Index n : {512, 1024}) {
    const double mu = angular_spectrum({2, 3.0 / 16.0, n}, 1).arc_eigenvalues(0);
    CHECK(std::abs(mu - exact1) / exact1 < 1e-9);
  }
  const double exact2 = arc_eigenvalue_exact(3.0 / 16.0, 2);
  auto err = [&](Eigen::Index n) { return std::abs(angular_spectrum({2, 3.0 / 16.0, n}, 4).arc_eigenvalues(1) - exact2); };
  const double e256 = err(256), e512 = err(512), e1024 = err(1024);
  const double order = std::log2(e512 / e1024);
  MESSAGE("mu_2 errors " << e256 << " " << e512 << " " << e1024 << ", observed order " << order);
  CHECK(e1024 < e512);
  CHECK(e512 < e256);
  CHECK(order == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("monotone in lambda") {
  const double a = angular_spectrum({2, 0.1, 512}, 2).eigenvalues(0);
  const double b = angular_spectrum({2, 0.2, 512}, 2).eigenvalues(0);
  CHECK(a > b);
}

TEST_CASE("gamma exponent") {
  CHECK(gamma_exponent(0.0, 2) == 0.0);
  CHECK(gamma_exponent(0.0, 5) == 0.0);
  CHECK(gamma_exponent(1.0, 2) == 1.0);
  CHECK(gamma_exponent(2.0, 3) == doctest::Approx(1.0));
  for (double mu : {0.3, 1.7, 25.0}) {
    const double g = gamma_exponent(mu, 4);
    CHECK(g * (g + 2.0) == doctest::Approx(mu).epsilon(1e-14));
  }
}

TEST_CASE("beta for w = y is sqrt(pi) for every R; orthogonal data gives zero") {
  const auto b = angular_spectrum({2, 0.0, 1024}, 4);
  const Eigen::VectorXd a = b.angles();
  for (double R : {0.1, 0.2, 0.7}) {
    const Eigen::VectorXd w = R * a.array().sin();
    const Eigen::VectorXd beta = beta_coefficients(w, b, 1.0, R);
    CHECK(std::abs(beta(0) - std::sqrt(std::numbers::pi)) < 1e-8);
    CHECK(std::abs(beta(1)) < 1e-12);
  }
  // sin(2 alpha) is odd about each arc midpoint: no component on the first pair
  const Eigen::VectorXd c = (2.0 * a.array()).sin();
  const Eigen::VectorXd beta = beta_coefficients(c, b, 1.0, 0.5);
  // eigenvector symmetry holds to solver precision only
  CHECK(std::abs(beta(0)) < 1e-9);
  CHECK(std::abs(beta(1)) < 1e-9);
}

TEST_CASE("beta of a synthetic separated solution is R-independent") {
  const auto b = angular_spectrum({2, 3.0 / 16.0, 512}, 2);
  const double g = gamma_exponent(b.eigenvalues(0), 2);
  const Eigen::VectorXd psi = b.functions.col(0);
  const double b1 = beta_coefficients(std::pow(0.1, g) * psi, b, g, 0.1)(0);
  const double b2 = beta_coefficients(std::pow(0.2, g) * psi, b, g, 0.2)(0);
  CHECK(std::abs(b1 - b2) < 1e-8);
  CHECK(b1 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("blow-up profile") {
  const auto b = angular_spectrum({2, 0.0, 512}, 4);
  const std::vector<double> radii{1e-1, 1e-2, 1e-3};
  const auto single = blowup_profile_check({{1.0, 0, 1.0}}, b, radii);
  CHECK(single.exact);
  for (double d : single.discrepancy) CHECK(d == 0.0);

  const auto mixed = blowup_profile_check({{1.0, 0, 1.0}, {0.5, 2, 2.0}}, b, radii);
  CHECK(mixed.expected_rate == doctest::Approx(1.0));
  CHECK(mixed.fitted_rate == doctest::Approx(1.0).epsilon(0.1));

  const auto swapped = blowup_profile_check({{0.5, 0, 1.0}, {1.0, 2, 2.0}}, b, radii);
  REQUIRE(swapped.profile_terms.size() == 1);
  CHECK(swapped.profile_terms[0] == 0);
  CHECK(swapped.leading_gamma == 1.0);
}

TEST_CASE("separated residual") {
  // w = y: the discrete sine is an exact eigenvector, so only rounding remains; its size grows like
  // eps * ||A|| ~ eps * n_ang^2, hence the moderate resolution here
  const auto b0 = angular_spectrum({2, 0.0, 128}, 2);
  const auto r0 = separated_residual(0, b0, gamma_exponent(b0.eigenvalues(0), 2));
  MESSAGE("lambda=0 residual " << r0.max_abs);
  CHECK(r0.max_abs <= 1e-10);

  const auto lo = angular_spectrum({2, 3.0 / 16.0, 256}, 2);
  const auto hi = angular_spectrum({2, 3.0 / 16.0, 512}, 2);
  const double rl = separated_residual(0, lo, gamma_exponent(lo.eigenvalues(0), 2)).max_abs;
  const double rh = separated_residual(0, hi, gamma_exponent(hi.eigenvalues(0), 2)).max_abs;
  MESSAGE("lambda=3/16 residuals " << rl << " " << rh);
  CHECK(rl < 1e-8);
  CHECK(rh < 1e-8);

  const double g = gamma_exponent(hi.eigenvalues(0), 2);
  const double perturbed = separated_residual(0, hi, g + 1e-3).max_abs;
  CHECK(perturbed > 1e3 * rh);
}

TEST_CASE("preconditions") {
  CHECK_THROWS_AS(angular_spectrum({3, 0.0, 256}, 2), std::invalid_argument);
  CHECK_THROWS_AS(angular_spectrum({2, 0.3, 256}, 2), SupercriticalCoupling);
  CHECK_THROWS_AS(angular_spectrum({2, 0.0, 32}, 2), std::invalid_argument);
}
