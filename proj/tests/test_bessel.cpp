#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hardylab/bessel.hpp"

using namespace hardylab::spectral;

TEST_CASE("J_{1/2}(1) from the closed form") {
  CHECK(bessel_j(0.5, 1.0) == doctest::Approx(std::sqrt(2.0 / std::numbers::pi) * std::sin(1.0)).epsilon(1e-13));
  CHECK(bessel_j(0.5, 1.0) == doctest::Approx(0.6713967071418031).epsilon(1e-12));
}

TEST_CASE("agreement with std::cyl_bessel_j across both branches") {
  for (double nu : {0.0, 0.25, 0.5, 1.0, 1.5, 2.0})
    for (double x : {0.1, 1.0, 3.9, 4.1, 10.0, 25.0, 59.0}) {
      const double ref = std::cyl_bessel_j(nu, x);
      CHECK(std::abs(bessel_j(nu, x) - ref) < 1e-12);
    }
}

TEST_CASE("zeros of J_{1/2} are k pi") {
  const auto z = bessel_zeros(0.5, 3);
  REQUIRE(z.size() == 3);
  for (int k = 0; k < 3; ++k) CHECK(z[k] == doctest::Approx((k + 1) * std::numbers::pi).epsilon(1e-13));
}

TEST_CASE("first zero of J_0 and of J_{1/4}") {
  CHECK(bessel_zeros(0.0, 1)[0] == doctest::Approx(2.404825557695773).epsilon(1e-12));
  const auto z = bessel_zeros(0.25, 3);
  for (double x : z) CHECK(std::abs(std::cyl_bessel_j(0.25, x)) < 1e-12);
  CHECK(z[0] > 2.404825557695773);
  CHECK(z[0] < std::numbers::pi);
}

TEST_CASE("out-of-range requests are rejected") {
  CHECK_THROWS_AS(bessel_j(2.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(bessel_j(0.5, 61.0), std::invalid_argument);
  CHECK_THROWS_AS(bessel_zeros(0.5, 40), std::invalid_argument);
}
