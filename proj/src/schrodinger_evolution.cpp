#include "hardylab/schrodinger_evolution.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "hardylab/quadrature.hpp"

namespace hardylab::evolution {

using cplx = std::complex<double>;

TimeGrid::TimeGrid(double horizon, Eigen::Index steps) : T_(horizon), M_(steps) {
  if (!(horizon > 0.0)) throw std::invalid_argument("TimeGrid: horizon must be positive");
  if (steps < 1) throw std::invalid_argument("TimeGrid: need at least one step");
}

Eigen::VectorXd TimeGrid::times() const {
  Eigen::VectorXd t(size());
  for (Eigen::Index j = 0; j < size(); ++j) t(j) = at(j);
  return t;
}

Eigen::VectorXd TimeGrid::trapezoid_weights() const {
  Eigen::VectorXd w = Eigen::VectorXd::Constant(size(), step());
  w(0) *= 0.5;
  w(M_) *= 0.5;
  return w;
}

ObservationMask ObservationMask::interval(const RadialGrid& grid, double a, double b) {
  if (!(0.0 <= a && a < b && b <= 1.0)) throw std::invalid_argument("ObservationMask: need 0 <= a < b <= 1");
  ObservationMask m;
  m.kind_ = Kind::Interval;
  m.a_ = a;
  m.b_ = b;
  m.h_ = grid.step();
  m.grid_size_ = grid.size();
  m.analytic_measure_ = b - a;
  for (Eigen::Index j = 0; j < grid.size(); ++j)
    if (grid.node(j) > a && grid.node(j) < b) m.indices_.push_back(j);
  if (m.indices_.empty()) throw std::invalid_argument("ObservationMask: interval contains no grid node");
  return m;
}

ObservationMask ObservationMask::full(const RadialGrid& grid) { return interval(grid, 0.0, 1.0); }

ObservationMask ObservationMask::nodes(const RadialGrid& grid, std::vector<Eigen::Index> indices) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  if (indices.empty()) throw std::invalid_argument("ObservationMask: empty node list");
  if (indices.front() < 0 || indices.back() >= grid.size()) throw std::invalid_argument("ObservationMask: node index out of range");
  ObservationMask m;
  m.kind_ = Kind::Nodes;
  m.h_ = grid.step();
  m.grid_size_ = grid.size();
  m.a_ = grid.node(indices.front());
  m.b_ = grid.node(indices.back());
  m.analytic_measure_ = 0.0;
  m.indices_ = std::move(indices);
  return m;
}

std::string ObservationMask::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::Interval: os << "interval(" << a_ << "," << b_ << ")"; break;
    case Kind::FatCantor: os << "fat_cantor(" << a_ << "," << b_ << ";depth=" << depth_ << ")"; break;
    case Kind::Nodes: os << "nodes(" << indices_.size() << ")"; break;
  }
  return os.str();
}

Eigen::MatrixXd ObservationMask::restrict(const Eigen::MatrixXd& nodal) const {
  if (nodal.rows() != grid_size_) throw std::invalid_argument("ObservationMask: basis and mask grids differ");
  Eigen::MatrixXd out(size(), nodal.cols());
  for (Eigen::Index m = 0; m < size(); ++m) out.row(m) = nodal.row(indices_[static_cast<std::size_t>(m)]);
  return out;
}

std::vector<std::pair<double, double>> fat_cantor_intervals(double a, double b, int depth) {
  std::vector<std::pair<double, double>> kept{{a, b}};
  double piece = 0.25 * (b - a);
  for (int k = 0; k < depth; ++k) {
    std::vector<std::pair<double, double>> next;
    next.reserve(kept.size() * 2);
    for (const auto& [lo, hi] : kept) {
      const double mid = 0.5 * (lo + hi);
      next.emplace_back(lo, mid - 0.5 * piece);
      next.emplace_back(mid + 0.5 * piece, hi);
    }
    kept = std::move(next);
    piece *= 0.25;
  }
  return kept;
}

double fat_cantor_relative_measure(int depth) {
  double removed = 0.0;
  for (int k = 0; k < depth; ++k) removed += std::ldexp(1.0, k) * std::pow(0.25, k + 1);
  return 1.0 - removed;
}

ObservationMask fat_cantor_mask(const RadialGrid& grid, double a, double b) {
  if (!(0.0 <= a && a < b && b <= 1.0)) throw std::invalid_argument("fat_cantor_mask: need 0 <= a < b <= 1");
  if (b - a < 4.0 * grid.step()) throw std::invalid_argument("fat_cantor_mask: interval shorter than 4h");
  ObservationMask m;
  m.kind_ = ObservationMask::Kind::FatCantor;
  m.a_ = a;
  m.b_ = b;
  m.h_ = grid.step();
  m.grid_size_ = grid.size();
  m.depth_ = static_cast<int>(std::ceil(std::log2(static_cast<double>(grid.size()))));
  m.analytic_measure_ = (b - a) * fat_cantor_relative_measure(m.depth_);
  const auto kept = fat_cantor_intervals(a, b, m.depth_);
  std::size_t piece = 0;
  for (Eigen::Index j = 0; j < grid.size(); ++j) {
    const double r = grid.node(j);
    while (piece < kept.size() && kept[piece].second <= r) ++piece;
    if (piece == kept.size()) break;
    if (r > kept[piece].first && r < kept[piece].second) m.indices_.push_back(j);
  }
  if (m.indices_.empty()) throw std::invalid_argument("fat_cantor_mask: no grid node survives");
  return m;
}

SourceModel make_source(Eigen::VectorXcd f_modes, const TimeGrid& grid, const std::function<double(double)>& rho,
                        const std::function<double(double)>& rho_prime) {
  Eigen::VectorXd r(grid.size()), dr(grid.size());
  for (Eigen::Index j = 0; j < grid.size(); ++j) {
    r(j) = rho(grid.at(j));
    dr(j) = rho_prime(grid.at(j));
  }
  return {std::move(f_modes), grid, std::move(r), std::move(dr)};
}

ModeState propagate(const ModeState& state, const SpectralBasis& basis, double t) {
  const Eigen::Index K = state.coeffs.size();
  if (K > basis.count()) throw std::invalid_argument("propagate: state has more modes than the basis");
  ModeState out{Eigen::VectorXcd(K), state.time + t};
  for (Eigen::Index k = 0; k < K; ++k) out.coeffs(k) = std::polar(1.0, basis.eigenvalues(k) * t) * state.coeffs(k);
  return out;
}

Trajectory free_trajectory(const ModeState& initial, const SpectralBasis& basis, const TimeGrid& grid) {
  const Eigen::Index K = initial.coeffs.size();
  if (K > basis.count()) throw std::invalid_argument("free_trajectory: state has more modes than the basis");
  Trajectory tr{grid, Eigen::MatrixXcd(grid.size(), K)};
  for (Eigen::Index j = 0; j < grid.size(); ++j)
    for (Eigen::Index k = 0; k < K; ++k)
      tr.coeffs(j, k) = std::polar(1.0, basis.eigenvalues(k) * grid.at(j)) * initial.coeffs(k);
  return tr;
}

Trajectory duhamel_modal(const Eigen::VectorXd& mu, const Eigen::MatrixXcd& source, const TimeGrid& grid,
                         const Eigen::VectorXcd& initial, DuhamelRule rule) {
  const Eigen::Index K = mu.size();
  if (source.rows() != grid.size() || source.cols() != K || initial.size() != K)
    throw std::invalid_argument("duhamel_modal: source/initial shape does not match grid and modes");
  const double dt = grid.step();
  const cplx I(0.0, 1.0);
  Trajectory tr{grid, Eigen::MatrixXcd(grid.size(), K)};
  for (Eigen::Index k = 0; k < K; ++k) {
    // c(t) = e^{i mu t} [c(0) - i int_0^t e^{-i mu s} s(s) ds]
    const auto w = rule == DuhamelRule::Fitted ? quadrature::fitted_cell_weights(-mu(k), dt)
                                               : quadrature::CellWeights{0.5 * dt, 0.5 * dt};
    cplx integral = 0.0;
    tr.coeffs(0, k) = initial(k);
    for (Eigen::Index j = 1; j < grid.size(); ++j) {
      const double s0 = grid.at(j - 1);
      if (rule == DuhamelRule::Fitted) {
        integral += std::polar(1.0, -mu(k) * s0) * (w.left * source(j - 1, k) + w.right * source(j, k));
      } else {
        integral += w.left * std::polar(1.0, -mu(k) * s0) * source(j - 1, k) +
                    w.right * std::polar(1.0, -mu(k) * grid.at(j)) * source(j, k);
      }
      tr.coeffs(j, k) = std::polar(1.0, mu(k) * grid.at(j)) * (initial(k) - I * integral);
    }
  }
  return tr;
}

Trajectory duhamel_solve(const SourceModel& src, const SpectralBasis& basis, const TimeGrid& grid, DuhamelRule rule) {
  if (src.grid != grid) throw std::invalid_argument("duhamel_solve: source sampled on a different grid");
  const Eigen::Index K = src.f_modes.size();
  if (K > basis.count()) throw std::invalid_argument("duhamel_solve: source has more modes than the basis");
  const Eigen::MatrixXcd s = src.rho.cast<cplx>() * src.f_modes.transpose();
  return duhamel_modal(basis.eigenvalues.head(K), s, grid, Eigen::VectorXcd::Zero(K), rule);
}

Eigen::MatrixXcd observe(const Trajectory& traj, const ObservationMask& mask, const SpectralBasis& basis) {
  const Eigen::Index K = traj.modes();
  if (K > basis.count()) throw std::invalid_argument("observe: trajectory has more modes than the basis");
  if (mask.size() == 0) throw std::invalid_argument("observe: empty mask");
  const Eigen::MatrixXd phi = mask.restrict(basis.eigenvectors.leftCols(K));
  return traj.coeffs * phi.transpose().cast<cplx>();
}

Eigen::Index numerical_rank(const Eigen::VectorXd& sv, Eigen::Index rows, Eigen::Index cols, double* tolerance) {
  const double tol = static_cast<double>(std::max(rows, cols)) * std::numeric_limits<double>::epsilon() *
                     (sv.size() ? sv(0) : 0.0);
  if (tolerance) *tolerance = tol;
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++r;
  return r;
}

ObservabilityReport observability_matrix(const SpectralBasis& basis, const ObservationMask& mask, const TimeGrid& grid) {
  const Eigen::Index K = basis.count();
  const Eigen::Index nm = mask.size();
  const Eigen::Index nt = grid.size();
  if (nm == 0) throw std::invalid_argument("observability_matrix: empty mask");
  if (K > nt * nm) throw std::invalid_argument("observability_matrix: fewer samples than modes");
  const Eigen::MatrixXd phi = mask.restrict(basis.eigenvectors);
  const Eigen::VectorXd wt = grid.trapezoid_weights();

  ObservabilityReport rep;
  rep.matrix.resize(nt * nm, K);
  for (Eigen::Index k = 0; k < K; ++k) {
    for (Eigen::Index j = 0; j < nt; ++j) {
      const cplx phase = std::polar(std::sqrt(wt(j) * mask.step()), basis.eigenvalues(k) * grid.at(j));
      for (Eigen::Index m = 0; m < nm; ++m) rep.matrix(j * nm + m, k) = phase * phi(m, k);
    }
    if (rep.matrix.col(k).cwiseAbs().maxCoeff() == 0.0)
      throw std::invalid_argument("observability_matrix: all-zero column (basis and mask inconsistent)");
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(rep.matrix);
  rep.singular_values = svd.singularValues();
  rep.rank = numerical_rank(rep.singular_values, rep.matrix.rows(), rep.matrix.cols(), &rep.rank_tolerance);
  return rep;
}

}  // namespace hardylab::evolution
