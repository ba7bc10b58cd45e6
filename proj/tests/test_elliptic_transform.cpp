#include <doctest.h>

#include <cmath>
#include <random>

#include "hardylab/elliptic_transform.hpp"

using namespace hardylab;
using namespace hardylab::elliptic;
using cplx = std::complex<double>;

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

TEST_CASE("zero data gives a zero profile") {
  const auto b = basis(0.0, 4);
  const TimeGrid g(1.0, 500);
  const auto K = flatness::build_kernel(GevreyBump(1.0), 24, g, 2);
  const auto tr = evolution::free_trajectory({Eigen::VectorXcd::Zero(4), 0.0}, b, g);
  CHECK(transform(tr, K, uniform_t(101)).values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("mu = 0 mode gives an affine profile") {
  auto b = basis(0.0, 2);
  b.eigenvalues(0) = 0.0;
  const TimeGrid g(1.0, 500);
  const auto K = flatness::build_kernel(GevreyBump(1.0), 24, g, 2);
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(2);
  c(0) = 1.0;
  const auto prof = transform(evolution::free_trajectory({c, 0.0}, b, g), K, uniform_t(201));
  CHECK(elliptic_residual(prof, b).per_mode(0) < 1e-10);
}

TEST_CASE("t = -1 gives the moment times c_k(0)") {
  const auto b = basis(0.0, 5);
  const TimeGrid g(1.0, 1000);
  const auto K = flatness::build_kernel(GevreyBump(1.0), 24, g, 2);
  const Eigen::VectorXcd c = random_c(5, 1);
  const auto tr = evolution::free_trajectory({c, 0.0}, b, g);
  const auto at = transform(tr, K, Eigen::VectorXd::Constant(1, -1.0));
  const Eigen::VectorXcd m = moments(K.bump, b.eigenvalues, g);
  for (Eigen::Index k = 0; k < 5; ++k) CHECK(std::abs(at.values(0, k) - m(k) * c(k)) < 1e-13);
  CHECK((moment_trace(K.bump, tr) - at.values.row(0).transpose()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("residual of an exact cosh profile is second-order in the t step") {
  const auto b = basis(0.0, 1);
  const double mu = b.eigenvalues(0);
  double prev = 0.0;
  for (Eigen::Index n : {201, 401}) {
    EllipticProfile p{uniform_t(n), Eigen::MatrixXcd(n, 1)};
    for (Eigen::Index i = 0; i < n; ++i) p.values(i, 0) = std::cosh(std::sqrt(mu) * p.ts(i));
    const double r = elliptic_residual(p, b).max();
    if (prev > 0.0) CHECK(prev / r == doctest::Approx(4.0).epsilon(0.05));
    prev = r;
  }
}

TEST_CASE("genuine trajectory: residual small at high truncation, larger at K_trunc = 4") {
  for (double lambda : {0.0, 3.0 / 16.0}) {
    const auto b = basis(lambda, 8, 800);
    const TimeGrid g(1.0, 1000);
    const auto tr = evolution::free_trajectory({random_c(8, 2), 0.0}, b, g);
    const auto k48 = flatness::build_kernel(GevreyBump(1.0), 48, g, 2);
    const auto k4 = flatness::build_kernel(GevreyBump(1.0), 4, g, 2);
    const double r48 = elliptic_residual(transform(tr, k48, uniform_t(10001)), b).max();
    const double r4 = elliptic_residual(transform(tr, k4, uniform_t(10001)), b).max();
    CHECK(r48 <= 1e-5);
    CHECK(r4 > 100.0 * r48);
  }
}

TEST_CASE("non-uniform t grid rejected") {
  const auto b = basis(0.0, 1);
  EllipticProfile p{Eigen::Vector3d(-1.0, 0.0, 0.5), Eigen::MatrixXcd::Zero(3, 1)};
  CHECK_THROWS_AS(elliptic_residual(p, b), std::invalid_argument);
}

TEST_CASE("moments: positivity at mu = 0, conjugate symmetry, nonvanishing") {
  const GevreyBump psi(1.0);
  const TimeGrid g(1.0, 2000);
  const Eigen::VectorXcd m0 = moments(psi, Eigen::VectorXd::Zero(1), g);
  CHECK(m0(0).real() > 0.0);
  CHECK(m0(0).imag() == 0.0);
  Eigen::VectorXd mu(2);
  mu << 7.0, -7.0;
  const Eigen::VectorXcd m = moments(psi, mu, g);
  CHECK(std::abs(m(1) - std::conj(m(0))) < 1e-15);
  Eigen::VectorXd kk(5);
  for (int k = 1; k <= 5; ++k) kk(k - 1) = std::pow(k * 3.141592653589793, 2);
  const Eigen::VectorXcd mk = moments(psi, kk, g);
  for (Eigen::Index k = 0; k < 5; ++k) {
    CHECK(std::abs(mk(k)) > 0.0);
    MESSAGE("|m_" << k + 1 << "| = " << std::abs(mk(k)));
  }
}

TEST_CASE("UCP probe ranks") {
  const auto b1 = basis(0.0, 1);
  const auto one = ucp_probe(b1, {ObservationMask::interval(b1.grid, 0.3, 0.6), uniform_t(21)});
  CHECK(one.sigma_min() > 0.0);
  CHECK(one.rank == 2);

  const auto b6 = basis(3.0 / 16.0, 6);
  const auto full = ucp_probe(b6, {ObservationMask::interval(b6.grid, 0.3, 0.6), uniform_t(41)});
  CHECK(full.rank == 12);

  const auto slice = ucp_probe(b6, {ObservationMask::interval(b6.grid, 0.3, 0.6), Eigen::VectorXd::Constant(1, 0.2)});
  MESSAGE("single time slice rank " << slice.rank);
  CHECK(slice.rank <= 6);
}

TEST_CASE("certificate: zero data, full mask recovery, noise-level data") {
  const auto b = basis(0.0, 6, 400);
  const TimeGrid g(1.0, 400);
  const auto K = flatness::build_kernel(GevreyBump(1.0), 24, g, 2);
  const PipelineGrids grids{g, uniform_t(401), uniform_t(21)};
  const auto full = ObservationMask::full(b.grid);

  const auto zero = uniqueness_pipeline({Eigen::VectorXcd::Zero(6), 0.0}, full, b, K, grids);
  CHECK(zero.bound == 0.0);

  const Eigen::VectorXcd c = random_c(6, 3);
  const auto cert = uniqueness_pipeline({c, 0.0}, full, b, K, grids);
  CHECK((cert.c0_recovered - c).norm() <= 1e-8 * c.norm());
  CHECK(cert.bound >= cert.c0_norm * (1.0 - 1e-12));

  const auto mask = ObservationMask::interval(b.grid, 0.3, 0.6);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXcd noise(g.size(), mask.size());
  for (Eigen::Index i = 0; i < noise.rows(); ++i)
    for (Eigen::Index j = 0; j < noise.cols(); ++j) noise(i, j) = 1e-12 * std::polar(std::abs(u(rng)), 3.0 * u(rng));
  const auto noisy = uniqueness_pipeline({c, 0.0}, mask, b, K, grids, noise);
  CHECK(noisy.bound <= 1e-12 / noisy.sigma_min);
}

TEST_CASE("certificate refused on a degenerate observation") {
  const auto b = basis(0.0, 8, 399);
  const TimeGrid g(1.0, 50);
  const auto K = flatness::build_kernel(GevreyBump(1.0), 8, g, 2);
  // node at r = 1/2 is a zero of phi_2, phi_4, ...
  const auto mask = ObservationMask::nodes(b.grid, {199});
  CHECK(b.grid.node(199) == doctest::Approx(0.5));
  CHECK_THROWS_AS(uniqueness_pipeline({random_c(8, 4), 0.0}, mask, b, K, {g, uniform_t(11), uniform_t(5)}), CertificateRefused);
}
