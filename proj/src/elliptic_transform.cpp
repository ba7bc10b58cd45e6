#include "hardylab/elliptic_transform.hpp"

#include <cmath>

#include "hardylab/errors.hpp"

namespace hardylab::elliptic {

using cplx = std::complex<double>;

Eigen::VectorXd uniform_t(Eigen::Index samples) { return Eigen::VectorXd::LinSpaced(samples, -1.0, 1.0); }

EllipticProfile transform(const Trajectory& u, const FlatnessKernel& kernel, const Eigen::VectorXd& ts) {
  if (u.grid != kernel.tau_grid) throw std::invalid_argument("transform: trajectory and kernel use different tau grids");
  const int Kt = kernel.truncation;
  const Eigen::Index K = u.modes();
  const Eigen::VectorXd w = u.grid.trapezoid_weights();

  // S(j, k) = sum_tau w psi^{(j)}(tau) u_k(tau); the series in t then reorders the trapezoid sum exactly.
  const Eigen::MatrixXd weighted = w.asDiagonal() * kernel.derivatives.leftCols(Kt + 1);
  const Eigen::MatrixXcd S = weighted.transpose().cast<cplx>() * u.coeffs;

  EllipticProfile prof{ts, Eigen::MatrixXcd::Zero(ts.size(), K)};
  for (Eigen::Index i = 0; i < ts.size(); ++i) {
    if (ts(i) < -1.0 || ts(i) > 1.0) throw std::invalid_argument("transform: t sample outside [-1, 1]");
    const double x2 = (ts(i) + 1.0) * (ts(i) + 1.0);
    cplx ik(1.0, 0.0);
    double p = 1.0;
    for (int j = 0; j <= Kt; ++j) {
      if (j > 0) {
        p *= x2 / static_cast<double>((2 * j - 1) * (2 * j));
        ik *= cplx(0.0, 1.0);
      }
      prof.values.row(i) += (ik * p) * S.row(j);
    }
  }
  return prof;
}

EllipticResidual elliptic_residual(const EllipticProfile& profile, const SpectralBasis& basis) {
  const Eigen::Index n = profile.ts.size();
  if (n < 3) throw std::invalid_argument("elliptic_residual: need at least three t samples");
  const Eigen::Index K = profile.values.cols();
  if (K > basis.count()) throw std::invalid_argument("elliptic_residual: profile has more modes than the basis");
  const double dt = profile.ts(1) - profile.ts(0);
  for (Eigen::Index i = 1; i < n; ++i)
    if (std::abs(profile.ts(i) - profile.ts(i - 1) - dt) > 1e-9 * std::abs(dt))
      throw std::invalid_argument("elliptic_residual: t grid must be uniform");
  EllipticResidual res{Eigen::VectorXd::Zero(K)};
  for (Eigen::Index k = 0; k < K; ++k) {
    const double mu = basis.eigenvalues(k);
    double worst = 0.0;
    for (Eigen::Index i = 1; i + 1 < n; ++i) {
      const cplx second = (profile.values(i + 1, k) - 2.0 * profile.values(i, k) + profile.values(i - 1, k)) / (dt * dt);
      worst = std::max(worst, std::abs(second - mu * profile.values(i, k)));
    }
    const double scale = profile.values.col(k).cwiseAbs().maxCoeff();
    res.per_mode(k) = worst / (1.0 + mu * scale);
  }
  return res;
}

Eigen::VectorXcd moments(const GevreyBump& bump, const Eigen::VectorXd& mu, const TimeGrid& grid) {
  const Eigen::VectorXd w = grid.trapezoid_weights();
  Eigen::VectorXcd m = Eigen::VectorXcd::Zero(mu.size());
  for (Eigen::Index k = 0; k < mu.size(); ++k)
    for (Eigen::Index j = 0; j < grid.size(); ++j) m(k) += w(j) * bump(grid.at(j)) * std::polar(1.0, mu(k) * grid.at(j));
  return m;
}

Eigen::VectorXcd moment_trace(const GevreyBump& bump, const Trajectory& u) {
  if (u.grid.horizon() != bump.horizon()) throw std::invalid_argument("moment_trace: horizon mismatch");
  const Eigen::VectorXd w = u.grid.trapezoid_weights();
  Eigen::VectorXd psi(u.grid.size());
  for (Eigen::Index j = 0; j < u.grid.size(); ++j) psi(j) = w(j) * bump(u.grid.at(j));
  return u.coeffs.transpose() * psi.cast<cplx>();
}

UcpReport ucp_probe(const SpectralBasis& basis, const CylinderWindow& window, ExponentialScaling scaling) {
  const Eigen::Index K = basis.count();
  const Eigen::Index nm = window.mask.size();
  const Eigen::Index nt = window.ts.size();
  if (nm == 0 || nt == 0) throw std::invalid_argument("ucp_probe: empty window");
  if (2 * K > nm * nt) throw std::invalid_argument("ucp_probe: window has fewer samples than unknowns");
  for (Eigen::Index k = 0; k < K; ++k)
    if (!(basis.eigenvalues(k) > 0.0)) throw std::invalid_argument("ucp_probe: eigenvalues must be positive");
  const Eigen::MatrixXd phi = window.mask.restrict(basis.eigenvectors);

  UcpReport rep;
  rep.matrix.resize(nt * nm, 2 * K);
  for (Eigen::Index k = 0; k < K; ++k) {
    const double s = std::sqrt(basis.eigenvalues(k));
    for (Eigen::Index i = 0; i < nt; ++i) {
      const double t = window.ts(i);
      const double grow = scaling == ExponentialScaling::Scaled ? std::exp(s * (t - 1.0)) : std::exp(s * t);
      const double decay = scaling == ExponentialScaling::Scaled ? std::exp(-s * (t + 1.0)) : std::exp(-s * t);
      if (!std::isfinite(grow) || !std::isfinite(decay)) throw NumericalFault("ucp_probe: exponential overflow");
      for (Eigen::Index m = 0; m < nm; ++m) {
        rep.matrix(i * nm + m, k) = grow * phi(m, k);
        rep.matrix(i * nm + m, K + k) = decay * phi(m, k);
      }
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(rep.matrix);
  rep.singular_values = svd.singularValues();
  rep.rank = evolution::numerical_rank(rep.singular_values, rep.matrix.rows(), rep.matrix.cols(), &rep.rank_tolerance);
  return rep;
}

Certificate uniqueness_pipeline(const ModeState& c0, const ObservationMask& mask, const SpectralBasis& full_basis,
                                const FlatnessKernel& kernel, const PipelineGrids& grids,
                                const std::optional<Eigen::MatrixXcd>& omega_override) {
  const Eigen::Index K = c0.coeffs.size();
  if (grids.tau_grid != kernel.tau_grid) throw std::invalid_argument("uniqueness_pipeline: kernel and tau grid differ");
  const SpectralBasis basis = full_basis.truncated(K);
  const TimeGrid& grid = grids.tau_grid;
  const Trajectory traj = evolution::free_trajectory(c0, basis, grid);

  Certificate cert;
  const evolution::ObservabilityReport obs = evolution::observability_matrix(basis, mask, grid);
  const Eigen::MatrixXcd Y = omega_override ? *omega_override : evolution::observe(traj, mask, basis);
  if (Y.rows() != grid.size() || Y.cols() != mask.size())
    throw std::invalid_argument("uniqueness_pipeline: omega samples have the wrong shape");

  const Eigen::VectorXd wt = grid.trapezoid_weights();
  const Eigen::Index nm = mask.size();
  Eigen::VectorXcd y(grid.size() * nm);
  for (Eigen::Index j = 0; j < grid.size(); ++j)
    for (Eigen::Index m = 0; m < nm; ++m) y(j * nm + m) = std::sqrt(wt(j) * mask.step()) * Y(j, m);

  cert.eta = y.norm();
  cert.sigma_min = obs.sigma_min();
  cert.observability_rank = obs.rank;
  if (cert.sigma_min < 1e-12) throw CertificateRefused("uniqueness_pipeline: sigma_min below 1e-12, certificate refused");
  cert.bound = cert.eta / cert.sigma_min;
  cert.c0_recovered = obs.matrix.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(y);
  cert.c0_norm = c0.coeffs.norm();

  const flatness::KernelResidual kr = flatness::kernel_residual(kernel);
  cert.kernel_residual = kr.relative();
  cert.kernel_tail_mismatch = kr.max_tail_mismatch;

  const EllipticProfile prof = transform(traj, kernel, grids.profile_ts);
  cert.elliptic_residual = elliptic_residual(prof, basis).max();
  const Eigen::VectorXcd trace = moment_trace(kernel.bump, traj);
  const EllipticProfile at_minus_one = transform(traj, kernel, Eigen::VectorXd::Constant(1, -1.0));
  cert.trace_consistency = (trace - at_minus_one.values.row(0).transpose()).cwiseAbs().maxCoeff();
  cert.moments = moments(kernel.bump, basis.eigenvalues, grid);
  cert.min_moment = cert.moments.cwiseAbs().minCoeff();

  const CylinderWindow window{mask, grids.window_ts};
  const UcpReport ucp = ucp_probe(basis, window);
  cert.ucp_sigma_min = ucp.sigma_min();
  cert.ucp_rank = ucp.rank;

  // w on the window uses the omega samples only: w(t, x) = int K(t, tau) u(tau, x) dtau pointwise in x.
  const Eigen::Index nw = grids.window_ts.size();
  Eigen::MatrixXcd Kt(nw, grid.size());
  for (Eigen::Index j = 0; j < grid.size(); ++j)
    for (Eigen::Index i = 0; i < nw; ++i) Kt(i, j) = wt(j) * kernel.value(grids.window_ts(i), j);
  const Eigen::MatrixXcd Wwin = Kt * Y;
  Eigen::VectorXcd wvec(nw * nm);
  for (Eigen::Index i = 0; i < nw; ++i)
    for (Eigen::Index m = 0; m < nm; ++m) wvec(i * nm + m) = Wwin(i, m);
  const Eigen::VectorXcd ab = ucp.matrix.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(wvec);
  cert.c0_elliptic_route.resize(K);
  for (Eigen::Index k = 0; k < K; ++k) {
    const double s = std::sqrt(basis.eigenvalues(k));
    const cplx w_minus_one = ab(k) * std::exp(-2.0 * s) + ab(K + k);
    cert.c0_elliptic_route(k) = w_minus_one / cert.moments(k);
  }
  return cert;
}

}  // namespace hardylab::elliptic
