#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "hardylab/schrodinger_evolution.hpp"

namespace hardylab::flatness {

using cplx = std::complex<double>;
using evolution::TimeGrid;

// psi(tau) = exp(c_T - (tau (T - tau))^{-sigma}) on (0, T), zero outside; c_T = (4/T^2)^sigma.
class GevreyBump {
 public:
  GevreyBump(double horizon, double sigma = 2.0);

  double horizon() const { return T_; }
  double sigma() const { return sigma_; }
  double normalization() const { return c_; }

  double operator()(double tau) const;
  // Holomorphic extension, valid off the real half-lines through 0 and T.
  cplx operator()(cplx tau) const;

 private:
  double T_;
  double sigma_;
  double c_;
};

GevreyBump gevrey_bump(double horizon, double sigma = 2.0);

// Contour radius below which a point is treated as lying in the flat end zone.
inline constexpr double kMinContourRadius = 1e-3;
inline constexpr int kMaxTruncation = 48;

// psi^{(k)}(tau), k = 0..k_max, from the Cauchy integral on |z - tau| = min(tau, T - tau)/2.
std::vector<double> cauchy_derivatives(const GevreyBump& bump, double tau, int k_max, int nodes = 0);

// Same, but returns zeros inside the flat end zones instead of rejecting; order 0 is evaluated directly.
std::vector<double> derivative_column(const GevreyBump& bump, double tau, int k_max);

// K(t, tau) = sum_{k<=K} i^k psi^{(k)}(tau) (t+1)^{2k}/(2k)!
cplx kernel_series(const std::vector<double>& derivatives, double t, int truncation);
cplx kernel_eval(const GevreyBump& bump, double t, double tau, int truncation);

struct FlatnessKernel {
  GevreyBump bump;
  int truncation;
  TimeGrid tau_grid;
  Eigen::VectorXd taus;
  Eigen::MatrixXd derivatives;  // rows tau_j, columns order 0..truncation+1
  Eigen::VectorXd ts;           // uniform on [-1, 1]
  Eigen::MatrixXcd values;      // rows t_i, columns tau_j

  cplx value(double t, Eigen::Index tau_index) const;
};

FlatnessKernel build_kernel(const GevreyBump& bump, int truncation, const TimeGrid& tau_grid, Eigen::Index t_samples);

struct KernelResidual {
  double max_residual = 0.0;       // max |i K_tau - K_tt|
  double max_kernel = 0.0;         // max |K|
  double max_tail_mismatch = 0.0;  // max |residual - tail term|
  double max_tail = 0.0;
  double at_t = 0.0, at_tau = 0.0; // location of the largest residual
  double relative() const { return max_residual / max_kernel; }
};

KernelResidual kernel_residual(const FlatnessKernel& kernel);

// v(tau) = K(1, tau) on the tau grid.
Eigen::VectorXcd control_trace(const FlatnessKernel& kernel);

}  // namespace hardylab::flatness
