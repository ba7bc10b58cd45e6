#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hardylab/schrodinger_evolution.hpp"

using namespace hardylab;
using namespace hardylab::evolution;
using cplx = std::complex<double>;

namespace {

SpectralBasis basis0(long n = 400, Eigen::Index k = 8, double lambda = 0.0) {
  return spectral::solve_spectrum(spectral::assemble_hardy_operator(RadialGrid(n), lambda, 3), k);
}

Eigen::VectorXcd random_c(Eigen::Index n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::VectorXcd c(n);
  for (Eigen::Index k = 0; k < n; ++k) c(k) = cplx(g(rng), g(rng));
  return c;
}

}  // namespace

TEST_CASE("propagate: identity at t = 0, unitary, phase e^{i mu t}") {
  const auto b = basis0();
  Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(8);
  e1(0) = 1.0;
  CHECK((propagate({e1, 0.0}, b, 0.0).coeffs - e1).norm() == 0.0);
  const Eigen::VectorXcd c = random_c(8, 3);
  for (double t : {0.1, 1.0, 7.3}) CHECK(std::abs(propagate({c, 0.0}, b, t).coeffs.norm() - c.norm()) < 1e-15 * 10);
  const cplx ph = propagate({e1, 0.0}, b, 1.0).coeffs(0);
  CHECK(std::abs(ph - std::polar(1.0, b.eigenvalues(0))) < 1e-15);
  // mu_1 ~ pi^2 at this resolution
  CHECK(std::abs(ph - std::polar(1.0, std::numbers::pi * std::numbers::pi)) < 1e-3);
}

TEST_CASE("propagate backwards undoes forwards") {
  const auto b = basis0();
  const ModeState s{random_c(8, 4), 0.0};
  const auto f = propagate(s, b, 3.7);
  CHECK(f.time == doctest::Approx(3.7));
  CHECK((propagate(f, b, -3.7).coeffs - s.coeffs).norm() < 1e-13);
}

TEST_CASE("Duhamel: mu = 0, rho = 1 gives -i f t; rho = 0 gives zero") {
  const TimeGrid g(1.0, 100);
  Eigen::MatrixXcd s(g.size(), 1);
  s.setConstant(cplx(2.0, 1.0));
  const auto tr = duhamel_modal(Eigen::VectorXd::Zero(1), s, g, Eigen::VectorXcd::Zero(1));
  for (Eigen::Index j = 0; j < g.size(); ++j) CHECK(std::abs(tr.coeffs(j, 0) + cplx(0, 1) * cplx(2.0, 1.0) * g.at(j)) < 1e-14);

  const auto b = basis0();
  const auto src = make_source(random_c(8, 5), g, [](double) { return 0.0; }, [](double) { return 0.0; });
  CHECK(duhamel_solve(src, b, g).coeffs.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Duhamel: fitted rule is exact for linear-in-time sources; trapezoid is second order") {
  const auto b = basis0(200, 4);
  const TimeGrid g(1.0, 200);
  const Eigen::VectorXcd f = random_c(4, 6);
  const auto src = make_source(f, g, [](double t) { return 1.0 + 0.5 * t; }, [](double) { return 0.5; });
  const auto fit = duhamel_solve(src, b, g);
  const auto trap = duhamel_solve(src, b, g, DuhamelRule::Trapezoid);
  const cplx I(0.0, 1.0);
  double err_fit = 0.0, err_trap = 0.0;
  for (Eigen::Index k = 0; k < 4; ++k) {
    const double mu = b.eigenvalues(k);
    // c(T) = -i f int_0^T e^{i mu (T-s)} (1 + s/2) ds
    const double T = 1.0;
    const cplx e = std::exp(I * mu * T);
    const cplx i0 = (e - 1.0) / (I * mu);
    const cplx i1 = -T / (I * mu) + (e - 1.0) / ((I * mu) * (I * mu));
    const cplx exact = -I * f(k) * (i0 + 0.5 * i1);
    err_fit = std::max(err_fit, std::abs(fit.coeffs(g.steps(), k) - exact));
    err_trap = std::max(err_trap, std::abs(trap.coeffs(g.steps(), k) - exact));
  }
  CHECK(err_fit < 1e-12);
  CHECK(err_trap > 1e-6);
}

TEST_CASE("Duhamel slope at t = 0 approaches -i f rho(0)") {
  const auto b = basis0(200, 3);
  const Eigen::VectorXcd f = random_c(3, 7);
  double prev = 1e300;
  for (long M : {100, 1000, 10000}) {
    const TimeGrid g(1.0, M);
    const auto src = make_source(f, g, [](double t) { return 2.0 + t; }, [](double) { return 1.0; });
    const auto tr = duhamel_solve(src, b, g);
    const Eigen::VectorXcd slope = tr.coeffs.row(1).transpose() / g.step();
    const double err = (slope + cplx(0, 1) * 2.0 * f).norm();
    CHECK(err < 2.0 * f.norm() * b.eigenvalues(2) * g.step());
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("observe: zero, full-mask Parseval, single mode") {
  const auto b = basis0(300, 5);
  const TimeGrid g(1.0, 20);
  const auto full = ObservationMask::full(b.grid);
  const auto zero = free_trajectory({Eigen::VectorXcd::Zero(5), 0.0}, b, g);
  CHECK(observe(zero, full, b).cwiseAbs().maxCoeff() == 0.0);

  const Eigen::VectorXcd c = random_c(5, 8);
  const auto tr = free_trajectory({c, 0.0}, b, g);
  const Eigen::MatrixXcd u = observe(tr, full, b);
  for (Eigen::Index j = 0; j < g.size(); ++j) CHECK(std::sqrt(b.grid.step()) * u.row(j).norm() == doctest::Approx(c.norm()).epsilon(1e-12));

  Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(5);
  e1(0) = cplx(0.3, -0.2);
  const auto mask = ObservationMask::interval(b.grid, 0.3, 0.6);
  const Eigen::MatrixXcd s = observe(free_trajectory({e1, 0.0}, b, g), mask, b);
  const Eigen::MatrixXd phi = mask.restrict(b.eigenvectors.leftCols(1));
  for (Eigen::Index j = 0; j < g.size(); ++j) {
    const cplx amp = e1(0) * std::polar(1.0, b.eigenvalues(0) * g.at(j));
    CHECK((s.row(j).transpose() - amp * phi.col(0).cast<cplx>()).norm() < 1e-12);
  }
}

TEST_CASE("observability: single mode, interval mask") {
  const auto b = basis0(400, 1);
  const auto rep = observability_matrix(b, ObservationMask::interval(b.grid, 0.7, 0.75), TimeGrid(1.0, 50));
  CHECK(rep.sigma_min() > 0.0);
  CHECK(rep.rank == 1);
}

TEST_CASE("observability: fat Cantor mask, lambda = 0, K = 6 has full rank") {
  const auto b = basis0(800, 6);
  const auto mask = fat_cantor_mask(b.grid, 0.0, 1.0);
  const auto rep = observability_matrix(b, mask, TimeGrid(1.0, 200));
  CHECK(rep.rank == 6);
}

TEST_CASE("observability: single-node mask is reported, not asserted") {
  const auto b = basis0(400, 8);
  const auto rep = observability_matrix(b, ObservationMask::nodes(b.grid, {200}), TimeGrid(1.0, 200));
  MESSAGE("single-node rank " << rep.rank << " of 8, sigma_min " << rep.sigma_min());
  CHECK(rep.rank <= 8);
}

TEST_CASE("fat Cantor construction") {
  CHECK(fat_cantor_relative_measure(60) == doctest::Approx(0.5).epsilon(1e-15));
  const auto d1 = fat_cantor_intervals(0.0, 1.0, 1);
  REQUIRE(d1.size() == 2);
  CHECK(d1[0].second == doctest::Approx(3.0 / 8.0));
  CHECK(d1[1].first == doctest::Approx(5.0 / 8.0));
  for (long n : {200, 800, 1600}) {
    const RadialGrid g(n);
    const auto m = fat_cantor_mask(g, 0.0, 1.0);
    CHECK(std::abs(m.measure() - m.analytic_measure()) <= 2.0 * g.step() * m.depth());
    CHECK(m.analytic_measure() > 0.5);
  }
}

TEST_CASE("mask validation") {
  const RadialGrid g(100);
  CHECK_THROWS_AS(ObservationMask::interval(g, 0.6, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(ObservationMask::interval(g, 0.5, 0.501), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid(0.0, 10), std::invalid_argument);
}
