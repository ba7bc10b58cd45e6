#pragma once

#include <Eigen/Dense>
#include <optional>

#include "hardylab/schrodinger_evolution.hpp"

namespace hardylab::inverse {

using evolution::SourceModel;
using evolution::TimeGrid;
using evolution::Trajectory;
using spectral::SpectralBasis;

// (K z)(t) = rho(0) z(t) + int_0^t rho'(t - s) z(s) ds on a uniform grid.
// `carrier` is the oscillation frequency assumed for z in the convolution weights (0: plain trapezoid).
class VolterraSystem {
 public:
  VolterraSystem(TimeGrid grid, Eigen::VectorXd rho, Eigen::VectorXd rho_prime);
  static VolterraSystem from_source(const SourceModel& src);

  const TimeGrid& grid() const { return grid_; }
  double rho0() const { return rho_(0); }
  const Eigen::VectorXd& rho() const { return rho_; }
  const Eigen::VectorXd& rho_prime() const { return rho_prime_; }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& z, double carrier = 0.0) const;
  // Forward substitution; rejects rho(0) = 0.
  Eigen::VectorXcd invert(const Eigen::VectorXcd& g, double carrier = 0.0) const;

 private:
  TimeGrid grid_;
  Eigen::VectorXd rho_;
  Eigen::VectorXd rho_prime_;
};

inline Eigen::VectorXcd volterra_apply(const VolterraSystem& sys, const Eigen::VectorXcd& z) { return sys.apply(z); }
inline Eigen::VectorXcd volterra_invert(const VolterraSystem& sys, const Eigen::VectorXcd& g) { return sys.invert(g); }

enum class TimeDerivative { Modal, FiniteDifference };

struct FreeEvolutionResidual {
  Eigen::VectorXd per_mode;  // ( int_0^T |z' - i mu z|^2 dt )^{1/2}
  double max() const { return per_mode.size() ? per_mode.maxCoeff() : 0.0; }
};

struct ReconstructionResult {
  Eigen::VectorXcd f_recovered;
  Eigen::VectorXcd f_true;
  double relative_error = 0.0;
  Eigen::MatrixXcd z;  // rows time, columns modes
  // residual chain
  double derivative_identity = 0.0;  // max |rho(0) z + rho' * z - du/dt|
  double duhamel_identity = 0.0;     // max |u - rho * z|
  double free_evolution = 0.0;       // max_k residual of z' = i mu z
  double initial_trace = 0.0;        // max |z(0) + i f|
};

ReconstructionResult reconstruct_f(const Trajectory& u, const SourceModel& src, const SpectralBasis& basis,
                                   TimeDerivative derivative = TimeDerivative::Modal);

FreeEvolutionResidual free_evolution_check(const Eigen::MatrixXcd& z, const SpectralBasis& basis, const TimeGrid& grid);

// w(t) = int_0^t u(s) ds per mode; requires u(0) = 0.
Trajectory antiderivative_reduce(const Trajectory& u);
// Temporal factor R(t) = int_0^t rho with R' = rho; same spatial source.
SourceModel antiderivative_source(const SourceModel& src);

// v_k(t) = -i f_k e^{i mu_k t}
Trajectory free_solution(const Eigen::VectorXcd& f, const SpectralBasis& basis, const TimeGrid& grid);

struct ConvolutionResult {
  Trajectory y;
  double lopp_residual = 0.0;  // max |i y' + mu y - f rho|
  double initial_value = 0.0;  // max |y(0)|
};

// y = rho * v; requires rho(0) = 0 and v(0) = -i f.
ConvolutionResult convolve_source(const SourceModel& src, const Trajectory& v, const SpectralBasis& basis);

struct ReductionResult {
  bool reduced = false;        // antiderivative change of variable applied
  Trajectory y;                // from the convolution construction
  Trajectory reference;        // antiderivative of the Duhamel solution (or the solution itself)
  double agreement = 0.0;      // max |y - reference|
  double lopp_residual = 0.0;
  double initial_value = 0.0;
};

// Rejects sources whose support does not start at t = 0.
ReductionResult reduction_route(const SourceModel& src, const SpectralBasis& basis);

struct SupportReport {
  std::optional<double> rho_start;
  std::optional<double> z_start;
  std::optional<double> conv_start;
  Eigen::VectorXcd convolution;
  bool checked = false;        // false when an input is identically zero
  double additivity_error = 0.0;
};

// Support starts at a relative threshold of 1e-12 of each signal's maximum.
SupportReport titchmarsh_support(const Eigen::VectorXd& rho, const Eigen::VectorXcd& z, double step,
                                 double threshold = 1e-12);

}  // namespace hardylab::inverse
