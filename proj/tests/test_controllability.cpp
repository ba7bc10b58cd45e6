#include <doctest.h>

#include <cmath>
#include <random>

#include "hardylab/controllability.hpp"
#include "hardylab/errors.hpp"

using namespace hardylab;
using namespace hardylab::control;

namespace {

SpectralBasis basis(double lambda, Eigen::Index k, long n = 400) {
  return spectral::solve_spectrum(spectral::assemble_hardy_operator(spectral::RadialGrid(n), lambda, 3), k);
}

Eigen::VectorXcd random_c(Eigen::Index n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::VectorXcd c(n);
  for (Eigen::Index k = 0; k < n; ++k) c(k) = cplx(g(rng), g(rng));
  return c;
}

}  // namespace

TEST_CASE("eta") {
  CHECK(eta(0.0, 2.0) == cplx(2.0));
  const double T = 1.3;
  for (double d : {1e-9, 1e-6, 1e-3, 5.0, -40.0}) {
    // cancellation-free reference: T e^{i dT/2} sin(dT/2) / (dT/2)
    const double x = 0.5 * d * T;
    const cplx exact = T * std::exp(cplx(0.0, x)) * (std::sin(x) / x);
    CHECK(std::abs(eta(d, T) - exact) < 1e-12);
  }
}

TEST_CASE("single mode and full-mask Gramians") {
  const auto b1 = basis(0.0, 1);
  const auto mask = evolution::ObservationMask::interval(b1.grid, 0.3, 0.6);
  const auto g1 = gramian(b1, mask, 2.0);
  CHECK(std::abs(g1.G(0, 0) - 2.0 * g1.mass(0, 0)) < 1e-15);

  const auto b = basis(0.0, 6);
  const auto gf = gramian(b, evolution::ObservationMask::full(b.grid), 1.0);
  CHECK((gf.mass - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-12);
  for (Eigen::Index j = 0; j < 6; ++j)
    for (Eigen::Index l = 0; l < 6; ++l)
      CHECK(std::abs(gf.G(j, l) - gf.mass(j, l) * eta(b.eigenvalues(j) - b.eigenvalues(l), 1.0)) < 1e-15);
}

TEST_CASE("K = 8, lambda = 3/16: Hermitian positive definite") {
  const auto b = basis(3.0 / 16.0, 8, 800);
  const auto g = gramian(b, evolution::ObservationMask::interval(b.grid, 0.3, 0.6), 1.0);
  CHECK(g.hermitian_defect() <= 1e-14);
  MESSAGE("sigma_min(G) = " << g.sigma_min());
  CHECK(g.sigma_min() > 0.0);
}

TEST_CASE("HUM algebra") {
  const auto b = basis(0.0, 8, 400);
  const auto mask = evolution::ObservationMask::interval(b.grid, 0.3, 0.6);
  const auto g = gramian(b, mask, 1.0);
  const ModeState u0{random_c(8, 1), 0.0};
  // d = 0 when ud is the free evolution of u0
  const ModeState ud_free{evolution::propagate(u0, b, 1.0).coeffs, 0.0};
  const auto zero = hum_solve(g, b, u0, ud_free, 1e-3);
  CHECK(zero.q.norm() < 1e-12);
  CHECK(zero.defect < 1e-12);

  const ModeState ud{random_c(8, 2), 0.0};
  const auto big = hum_solve(g, b, u0, ud, 1e12);
  CHECK(big.q.norm() < 1e-10);
  CHECK(big.defect == doctest::Approx(big.target.norm()).epsilon(1e-9));

  const auto r = hum_solve(g, b, u0, ud, 1e-3);
  CHECK(r.defect / r.target.norm() <= 1e-3 / (1e-3 + g.sigma_min()) * (1.0 + 1e-12));
  CHECK_THROWS_AS(hum_solve(g, b, u0, ud, 0.0), std::invalid_argument);
}

TEST_CASE("single mode: defect is eps |d| / (eps + G_11)") {
  const auto b = basis(0.0, 1);
  const auto g = gramian(b, evolution::ObservationMask::interval(b.grid, 0.3, 0.6), 1.0);
  const ModeState u0{Eigen::VectorXcd::Constant(1, cplx(1.0, 0.5)), 0.0};
  const ModeState ud{Eigen::VectorXcd::Constant(1, cplx(-0.2, 0.0)), 0.0};
  const auto r = hum_solve(g, b, u0, ud, 0.01);
  CHECK(r.defect == doctest::Approx(0.01 * r.target.norm() / (0.01 + g.G(0, 0).real())).epsilon(1e-13));
}

TEST_CASE("forward simulation: zero control and synthesized control") {
  const auto b = basis(0.0, 8, 400);
  const auto mask = evolution::ObservationMask::interval(b.grid, 0.3, 0.6);
  const auto g = gramian(b, mask, 1.0);
  const ModeState u0{random_c(8, 3), 0.0};

  // q = 0 means h = 0
  ControlResult none = hum_solve(g, b, u0, u0, 1.0);
  none.q.setZero();
  none.defect = 0.0;
  const auto fz = verify_control(none, u0, u0, b, mask, evolution::TimeGrid(1.0, 100));
  CHECK((fz.final_state - evolution::propagate(u0, b, 1.0).coeffs).norm() < 1e-14);

  // reachable single-mode target
  ModeState ud{Eigen::VectorXcd::Zero(8), 0.0};
  ud.coeffs(0) = 1.0;
  const auto r = hum_solve(g, b, u0, ud, 1e-3);
  const auto f = verify_control(r, u0, ud, b, mask, evolution::TimeGrid(1.0, 4000));
  CHECK(f.forward_defect <= r.defect + 1e-6);
  CHECK(f.mismatch() <= 1e-6);
  CHECK_NOTHROW(require_consistent(f));

  // halving the time grid: the change stays far below the predicted defect
  const auto f2 = verify_control(r, u0, ud, b, mask, evolution::TimeGrid(1.0, 2000));
  MESSAGE("forward defect change under halving: " << std::abs(f2.forward_defect - f.forward_defect));
  CHECK(std::abs(f2.forward_defect - f.forward_defect) <= 1e-6);
}

TEST_CASE("defect curve: monotone defect, growing cost") {
  const auto b = basis(0.0, 8, 400);
  const auto g = gramian(b, evolution::ObservationMask::interval(b.grid, 0.3, 0.6), 1.0);
  const auto rows = defect_curve(g, b, {random_c(8, 5), 0.0}, {random_c(8, 6), 0.0}, {1e-1, 1e-2, 1e-3, 1e-4, 1e-5});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].defect < rows[i - 1].defect);
    CHECK(rows[i].cost >= rows[i - 1].cost);
  }
  CHECK(rows.back().cost > rows.front().cost);
  CHECK_THROWS_AS(defect_curve(g, b, {random_c(8, 5), 0.0}, {random_c(8, 6), 0.0}, {1e-3, 1e-2}), std::invalid_argument);
}
