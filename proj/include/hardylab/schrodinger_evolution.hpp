#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "hardylab/spectral_core.hpp"

namespace hardylab::evolution {

using spectral::RadialGrid;
using spectral::SpectralBasis;

struct ModeState {
  Eigen::VectorXcd coeffs;
  double time = 0.0;
};

class TimeGrid {
 public:
  TimeGrid(double horizon, Eigen::Index steps);

  double horizon() const { return T_; }
  Eigen::Index steps() const { return M_; }
  Eigen::Index size() const { return M_ + 1; }
  double step() const { return T_ / static_cast<double>(M_); }
  double at(Eigen::Index j) const { return T_ * static_cast<double>(j) / static_cast<double>(M_); }
  Eigen::VectorXd times() const;
  Eigen::VectorXd trapezoid_weights() const;

  bool operator==(const TimeGrid& o) const { return T_ == o.T_ && M_ == o.M_; }
  bool operator!=(const TimeGrid& o) const { return !(*this == o); }

 private:
  double T_;
  Eigen::Index M_;
};

// Modal coefficients per time sample: row j is t_j, column k is mode k.
struct Trajectory {
  TimeGrid grid;
  Eigen::MatrixXcd coeffs;

  Eigen::Index modes() const { return coeffs.cols(); }
  ModeState state(Eigen::Index j) const { return {coeffs.row(j).transpose(), grid.at(j)}; }
};

class ObservationMask {
 public:
  enum class Kind { Interval, FatCantor, Nodes };

  static ObservationMask interval(const RadialGrid& grid, double a, double b);
  static ObservationMask nodes(const RadialGrid& grid, std::vector<Eigen::Index> indices);
  static ObservationMask full(const RadialGrid& grid);

  Kind kind() const { return kind_; }
  double a() const { return a_; }
  double b() const { return b_; }
  int depth() const { return depth_; }
  const std::vector<Eigen::Index>& indices() const { return indices_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(indices_.size()); }
  Eigen::Index grid_size() const { return grid_size_; }
  double step() const { return h_; }

  // Quadrature measure sum_{masked} h.
  double measure() const { return h_ * static_cast<double>(indices_.size()); }
  // Lebesgue measure of the continuous set.
  double analytic_measure() const { return analytic_measure_; }
  std::string describe() const;

  // Rows of the basis restricted to masked nodes.
  Eigen::MatrixXd restrict(const Eigen::MatrixXd& nodal) const;

 private:
  friend ObservationMask fat_cantor_mask(const RadialGrid&, double, double);
  ObservationMask() = default;

  Kind kind_ = Kind::Interval;
  double a_ = 0.0, b_ = 0.0;
  int depth_ = 0;
  double h_ = 0.0;
  Eigen::Index grid_size_ = 0;
  double analytic_measure_ = 0.0;
  std::vector<Eigen::Index> indices_;
};

// Intervals kept after `depth` stages; stage k removes 2^k middle pieces of length 4^{-(k+1)}(b-a).
std::vector<std::pair<double, double>> fat_cantor_intervals(double a, double b, int depth);
// Measure of the limit set relative to (b - a), by the geometric series.
double fat_cantor_relative_measure(int depth);
ObservationMask fat_cantor_mask(const RadialGrid& grid, double a, double b);

struct SourceModel {
  Eigen::VectorXcd f_modes;
  TimeGrid grid;
  Eigen::VectorXd rho;        // samples on grid
  Eigen::VectorXd rho_prime;  // exact derivative samples

  double rho0() const { return rho(0); }
};

SourceModel make_source(Eigen::VectorXcd f_modes, const TimeGrid& grid, const std::function<double(double)>& rho,
                        const std::function<double(double)>& rho_prime);

ModeState propagate(const ModeState& state, const SpectralBasis& basis, double t);
Trajectory free_trajectory(const ModeState& initial, const SpectralBasis& basis, const TimeGrid& grid);

enum class DuhamelRule { Fitted, Trapezoid };

// i c' + mu c = s(t) per mode, c(0) = initial; source rows are time samples.
Trajectory duhamel_modal(const Eigen::VectorXd& mu, const Eigen::MatrixXcd& source, const TimeGrid& grid,
                         const Eigen::VectorXcd& initial, DuhamelRule rule = DuhamelRule::Fitted);
// Sourced problem with zero initial state.
Trajectory duhamel_solve(const SourceModel& src, const SpectralBasis& basis, const TimeGrid& grid,
                         DuhamelRule rule = DuhamelRule::Fitted);

// u(t_j, r_m) on masked nodes: rows time, columns masked nodes.
Eigen::MatrixXcd observe(const Trajectory& traj, const ObservationMask& mask, const SpectralBasis& basis);

struct ObservabilityReport {
  Eigen::MatrixXcd matrix;  // weighted so that ||M c||^2 approximates int_0^T int_omega |u|^2
  Eigen::VectorXd singular_values;
  Eigen::Index rank = 0;
  double rank_tolerance = 0.0;
  double sigma_min() const { return singular_values(singular_values.size() - 1); }
  double sigma_max() const { return singular_values(0); }
};

Eigen::Index numerical_rank(const Eigen::VectorXd& singular_values, Eigen::Index rows, Eigen::Index cols,
                            double* tolerance = nullptr);

ObservabilityReport observability_matrix(const SpectralBasis& basis, const ObservationMask& mask, const TimeGrid& grid);

}  // namespace hardylab::evolution
