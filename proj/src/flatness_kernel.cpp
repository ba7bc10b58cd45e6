#include "hardylab/flatness_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hardylab/errors.hpp"

namespace hardylab::flatness {

GevreyBump::GevreyBump(double horizon, double sigma) : T_(horizon), sigma_(sigma) {
  if (!(horizon > 0.0)) throw std::invalid_argument("GevreyBump: horizon must be positive");
  if (!(sigma >= 1.0)) throw std::invalid_argument("GevreyBump: sigma must be >= 1");
  c_ = std::pow(4.0 / (T_ * T_), sigma_);
}

double GevreyBump::operator()(double tau) const {
  if (tau <= 0.0 || tau >= T_) return 0.0;
  return std::exp(c_ - std::pow(tau * (T_ - tau), -sigma_));
}

cplx GevreyBump::operator()(cplx tau) const {
  const cplx p = tau * (T_ - tau);
  return std::exp(c_ - std::pow(p, -sigma_));
}

GevreyBump gevrey_bump(double horizon, double sigma) { return GevreyBump(horizon, sigma); }

std::vector<double> cauchy_derivatives(const GevreyBump& bump, double tau, int k_max, int nodes) {
  if (k_max < 0) throw std::invalid_argument("cauchy_derivatives: negative order");
  const double T = bump.horizon();
  if (!(tau > 0.0 && tau < T)) throw std::invalid_argument("cauchy_derivatives: tau must lie in (0, T)");
  const double r = 0.5 * std::min(tau, T - tau);
  if (r < kMinContourRadius) throw std::invalid_argument("cauchy_derivatives: contour radius below 1e-3");
  const int M = std::max({nodes, 4 * std::max(k_max, 1), 128});

  std::vector<cplx> samples(static_cast<std::size_t>(M));
  for (int m = 0; m < M; ++m) {
    const double theta = 2.0 * std::numbers::pi * m / M;
    samples[static_cast<std::size_t>(m)] = bump(cplx(tau, 0.0) + std::polar(r, theta));
  }
  std::vector<double> out(static_cast<std::size_t>(k_max + 1));
  double scale = 1.0;  // k! / r^k
  for (int k = 0; k <= k_max; ++k) {
    if (k > 0) scale *= static_cast<double>(k) / r;
    cplx acc = 0.0;
    for (int m = 0; m < M; ++m)
      acc += samples[static_cast<std::size_t>(m)] * std::polar(1.0, -2.0 * std::numbers::pi * k * m / M);
    out[static_cast<std::size_t>(k)] = scale * acc.real() / M;
  }
  return out;
}

std::vector<double> derivative_column(const GevreyBump& bump, double tau, int k_max) {
  const double T = bump.horizon();
  std::vector<double> col(static_cast<std::size_t>(k_max + 1), 0.0);
  if (tau <= 0.0 || tau >= T) return col;
  if (0.5 * std::min(tau, T - tau) < kMinContourRadius) {
    // psi and its derivatives underflow here; keep the exact value for order 0
    col[0] = bump(tau);
    return col;
  }
  col = cauchy_derivatives(bump, tau, k_max);
  col[0] = bump(tau);
  return col;
}

cplx kernel_series(const std::vector<double>& d, double t, int truncation) {
  const double x2 = (t + 1.0) * (t + 1.0);
  cplx sum = 0.0;
  cplx ik(1.0, 0.0);
  double p = 1.0;  // x^{2k} / (2k)!
  for (int k = 0; k <= truncation; ++k) {
    if (k > 0) {
      p *= x2 / static_cast<double>((2 * k - 1) * (2 * k));
      ik *= cplx(0.0, 1.0);
    }
    const cplx term = ik * d[static_cast<std::size_t>(k)] * p;
    if (!std::isfinite(term.real()) || !std::isfinite(term.imag()))
      throw NumericalFault("kernel series: non-finite term (truncation misuse)");
    sum += term;
  }
  return sum;
}

namespace {
void check_truncation(int truncation) {
  if (truncation < 0 || truncation > kMaxTruncation)
    throw std::invalid_argument("flatness kernel: truncation order must lie in [0, 48]");
}
}  // namespace

cplx kernel_eval(const GevreyBump& bump, double t, double tau, int truncation) {
  check_truncation(truncation);
  if (t < -1.0 || t > 1.0) throw std::invalid_argument("kernel_eval: t must lie in [-1, 1]");
  return kernel_series(derivative_column(bump, tau, truncation), t, truncation);
}

cplx FlatnessKernel::value(double t, Eigen::Index tau_index) const {
  std::vector<double> d(derivatives.cols());
  for (Eigen::Index k = 0; k < derivatives.cols(); ++k) d[static_cast<std::size_t>(k)] = derivatives(tau_index, k);
  return kernel_series(d, t, truncation);
}

FlatnessKernel build_kernel(const GevreyBump& bump, int truncation, const TimeGrid& tau_grid, Eigen::Index t_samples) {
  check_truncation(truncation);
  if (tau_grid.horizon() != bump.horizon()) throw std::invalid_argument("build_kernel: tau grid horizon differs from bump");
  if (t_samples < 2) throw std::invalid_argument("build_kernel: need at least two t samples");
  FlatnessKernel K{bump, truncation, tau_grid, tau_grid.times(), {}, {}, {}};
  const Eigen::Index nt = tau_grid.size();
  K.derivatives.resize(nt, truncation + 2);
  for (Eigen::Index j = 0; j < nt; ++j) {
    const auto col = derivative_column(bump, K.taus(j), truncation + 1);
    for (int k = 0; k <= truncation + 1; ++k) K.derivatives(j, k) = col[static_cast<std::size_t>(k)];
  }
  K.ts = Eigen::VectorXd::LinSpaced(t_samples, -1.0, 1.0);
  K.values.resize(t_samples, nt);
  for (Eigen::Index j = 0; j < nt; ++j) {
    std::vector<double> d(static_cast<std::size_t>(truncation + 2));
    for (int k = 0; k <= truncation + 1; ++k) d[static_cast<std::size_t>(k)] = K.derivatives(j, k);
    for (Eigen::Index i = 0; i < t_samples; ++i) K.values(i, j) = kernel_series(d, K.ts(i), truncation);
  }
  return K;
}

KernelResidual kernel_residual(const FlatnessKernel& kernel) {
  const int Kt = kernel.truncation;
  const cplx I(0.0, 1.0);
  KernelResidual rep;
  for (Eigen::Index j = 0; j < kernel.taus.size(); ++j) {
    for (Eigen::Index i = 0; i < kernel.ts.size(); ++i) {
      const double x2 = (kernel.ts(i) + 1.0) * (kernel.ts(i) + 1.0);
      cplx k_tau = 0.0, k_tt = 0.0, ik(1.0, 0.0);
      double p = 1.0, p_prev = 0.0;  // x^{2k}/(2k)!, x^{2k-2}/(2k-2)!
      for (int k = 0; k <= Kt; ++k) {
        if (k > 0) {
          p_prev = p;
          p *= x2 / static_cast<double>((2 * k - 1) * (2 * k));
          ik *= I;
        }
        k_tau += ik * kernel.derivatives(j, k + 1) * p;
        if (k > 0) k_tt += ik * kernel.derivatives(j, k) * p_prev;
      }
      const cplx residual = I * k_tau - k_tt;
      const cplx tail = ik * I * kernel.derivatives(j, Kt + 1) * p;
      const double r = std::abs(residual);
      if (r > rep.max_residual) {
        rep.max_residual = r;
        rep.at_t = kernel.ts(i);
        rep.at_tau = kernel.taus(j);
      }
      rep.max_kernel = std::max(rep.max_kernel, std::abs(kernel.values(i, j)));
      rep.max_tail = std::max(rep.max_tail, std::abs(tail));
      rep.max_tail_mismatch = std::max(rep.max_tail_mismatch, std::abs(residual - tail));
    }
  }
  return rep;
}

Eigen::VectorXcd control_trace(const FlatnessKernel& kernel) {
  Eigen::VectorXcd v(kernel.taus.size());
  for (Eigen::Index j = 0; j < kernel.taus.size(); ++j) v(j) = kernel.value(1.0, j);
  return v;
}

}  // namespace hardylab::flatness
