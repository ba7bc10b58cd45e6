#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>

#include "hardylab/flatness_kernel.hpp"
#include "hardylab/schrodinger_evolution.hpp"

namespace hardylab::elliptic {

using evolution::ModeState;
using evolution::ObservationMask;
using evolution::TimeGrid;
using evolution::Trajectory;
using flatness::FlatnessKernel;
using flatness::GevreyBump;
using spectral::SpectralBasis;

// Modal profiles of w(t, .) = int_0^T K(t, tau) u(tau, .) dtau: rows t_i, columns modes.
struct EllipticProfile {
  Eigen::VectorXd ts;
  Eigen::MatrixXcd values;
};

// Uniform t samples on [-1, 1].
Eigen::VectorXd uniform_t(Eigen::Index samples);

EllipticProfile transform(const Trajectory& u, const FlatnessKernel& kernel, const Eigen::VectorXd& ts);

struct EllipticResidual {
  Eigen::VectorXd per_mode;  // max_t |W'' - mu W| / (1 + mu max_t |W|)
  double max() const { return per_mode.size() ? per_mode.maxCoeff() : 0.0; }
};
EllipticResidual elliptic_residual(const EllipticProfile& profile, const SpectralBasis& basis);

// m_k = int_0^T psi(tau) e^{i mu_k tau} dtau by trapezoid on the grid.
Eigen::VectorXcd moments(const GevreyBump& bump, const Eigen::VectorXd& mu, const TimeGrid& grid);
// w(-1, .) modal coefficients = int psi(tau) u_k(tau) dtau.
Eigen::VectorXcd moment_trace(const GevreyBump& bump, const Trajectory& u);

struct CylinderWindow {
  ObservationMask mask;
  Eigen::VectorXd ts;  // samples inside [-1, 1]
};

enum class ExponentialScaling { Scaled, Unscaled };

struct UcpReport {
  Eigen::MatrixXcd matrix;  // columns: e^{sqrt(mu)(t-1)} phi_k, e^{-sqrt(mu)(t+1)} phi_k on the window
  Eigen::VectorXd singular_values;
  Eigen::Index rank = 0;
  double rank_tolerance = 0.0;
  double sigma_min() const { return singular_values(singular_values.size() - 1); }
  double condition() const { return singular_values(0) / sigma_min(); }
};

UcpReport ucp_probe(const SpectralBasis& basis, const CylinderWindow& window,
                    ExponentialScaling scaling = ExponentialScaling::Scaled);

class CertificateRefused : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Certificate {
  double eta = 0.0;        // weighted norm of the omega samples
  double sigma_min = 0.0;  // of the observability matrix
  Eigen::Index observability_rank = 0;
  double bound = 0.0;      // eta / sigma_min >= ||c0||
  Eigen::VectorXcd c0_recovered;
  double c0_norm = 0.0;
  // residual chain
  double kernel_residual = 0.0;  // relative to max |K|
  double kernel_tail_mismatch = 0.0;
  double elliptic_residual = 0.0;
  double trace_consistency = 0.0;  // |moment_trace - transform(-1)|
  Eigen::VectorXcd moments;
  double min_moment = 0.0;
  double ucp_sigma_min = 0.0;
  Eigen::Index ucp_rank = 0;
  // second route: omega data -> w on the window -> exponential fit -> w(-1) -> c0 = w(-1)/m
  Eigen::VectorXcd c0_elliptic_route;
};

struct PipelineGrids {
  TimeGrid tau_grid;
  Eigen::VectorXd profile_ts;  // t samples for the elliptic residual
  Eigen::VectorXd window_ts;   // t samples of the cylinder window
};

// omega_noise, when given, replaces the observed samples (rows time, columns masked nodes).
Certificate uniqueness_pipeline(const ModeState& c0, const ObservationMask& mask, const SpectralBasis& basis,
                                const FlatnessKernel& kernel, const PipelineGrids& grids,
                                const std::optional<Eigen::MatrixXcd>& omega_override = std::nullopt);

}  // namespace hardylab::elliptic
