#include "hardylab/inverse_source.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hardylab/quadrature.hpp"

namespace hardylab::inverse {

using cplx = std::complex<double>;

VolterraSystem::VolterraSystem(TimeGrid grid, Eigen::VectorXd rho, Eigen::VectorXd rho_prime)
    : grid_(grid), rho_(std::move(rho)), rho_prime_(std::move(rho_prime)) {
  if (rho_.size() != grid_.size() || rho_prime_.size() != grid_.size())
    throw std::invalid_argument("VolterraSystem: samples do not match the grid");
}

VolterraSystem VolterraSystem::from_source(const SourceModel& src) { return {src.grid, src.rho, src.rho_prime}; }

Eigen::VectorXcd VolterraSystem::apply(const Eigen::VectorXcd& z, double carrier) const {
  if (z.size() != grid_.size()) throw std::invalid_argument("volterra_apply: samples do not match the grid");
  return rho0() * z + quadrature::convolution(rho_prime_, z, grid_.step(), carrier);
}

Eigen::VectorXcd VolterraSystem::invert(const Eigen::VectorXcd& g, double carrier) const {
  if (g.size() != grid_.size()) throw std::invalid_argument("volterra_invert: samples do not match the grid");
  if (rho0() == 0.0) throw std::domain_error("volterra_invert: rho(0) = 0, the operator is not of the second kind");
  const Eigen::Index n = g.size();
  const double dt = grid_.step();
  const auto w = quadrature::fitted_cell_weights(carrier, dt);
  const cplx right = w.right * std::exp(cplx(0.0, -carrier * dt));
  const cplx inner = w.left + right;
  const cplx lead = rho0() + right * rho_prime_(0);
  Eigen::VectorXcd z(n);
  z(0) = g(0) / rho0();
  for (Eigen::Index m = 1; m < n; ++m) {
    cplx acc = w.left * rho_prime_(m) * z(0);
    for (Eigen::Index j = 1; j < m; ++j) acc += inner * rho_prime_(m - j) * z(j);
    z(m) = (g(m) - acc) / lead;
  }
  return z;
}

FreeEvolutionResidual free_evolution_check(const Eigen::MatrixXcd& z, const SpectralBasis& basis, const TimeGrid& grid) {
  if (z.rows() != grid.size()) throw std::invalid_argument("free_evolution_check: samples do not match the grid");
  const Eigen::VectorXd wt = grid.trapezoid_weights();
  FreeEvolutionResidual out{Eigen::VectorXd::Zero(z.cols())};
  for (Eigen::Index k = 0; k < z.cols(); ++k) {
    const double mu = basis.eigenvalues(k);
    // z' - i mu z = e^{i mu t} d/dt (e^{-i mu t} z)
    Eigen::VectorXcd envelope(z.rows());
    for (Eigen::Index j = 0; j < z.rows(); ++j) envelope(j) = std::polar(1.0, -mu * grid.at(j)) * z(j, k);
    const Eigen::VectorXcd d = quadrature::derivative(envelope, grid.step());
    out.per_mode(k) = std::sqrt((wt.array() * d.cwiseAbs2().array()).sum());
  }
  return out;
}

ReconstructionResult reconstruct_f(const Trajectory& u, const SourceModel& src, const SpectralBasis& basis,
                                   TimeDerivative derivative) {
  if (u.grid != src.grid) throw std::invalid_argument("reconstruct_f: trajectory and source use different grids");
  const Eigen::Index K = u.modes();
  if (src.f_modes.size() != K || basis.count() < K) throw std::invalid_argument("reconstruct_f: mode counts differ");
  const VolterraSystem sys = VolterraSystem::from_source(src);
  if (sys.rho0() == 0.0) throw std::domain_error("reconstruct_f: rho(0) = 0 is not admissible on the Volterra route");

  const TimeGrid& grid = u.grid;
  ReconstructionResult res;
  res.f_true = src.f_modes;
  res.f_recovered.resize(K);
  res.z.resize(grid.size(), K);
  const cplx I(0.0, 1.0);
  for (Eigen::Index k = 0; k < K; ++k) {
    const double mu = basis.eigenvalues(k);
    Eigen::VectorXcd du(grid.size());
    if (derivative == TimeDerivative::Modal) {
      for (Eigen::Index j = 0; j < grid.size(); ++j) du(j) = I * mu * u.coeffs(j, k) - I * src.f_modes(k) * src.rho(j);
    } else {
      du = quadrature::derivative(u.coeffs.col(k), grid.step());
    }
    const Eigen::VectorXcd z = sys.invert(du, mu);
    res.z.col(k) = z;
    res.f_recovered(k) = I * z(0);
    res.derivative_identity = std::max(res.derivative_identity, (sys.apply(z, mu) - du).cwiseAbs().maxCoeff());
    const Eigen::VectorXcd conv = quadrature::convolution(src.rho, z, grid.step(), mu);
    res.duhamel_identity = std::max(res.duhamel_identity, (u.coeffs.col(k) - conv).cwiseAbs().maxCoeff());
    res.initial_trace = std::max(res.initial_trace, std::abs(z(0) + I * src.f_modes(k)));
  }
  const double fn = res.f_true.norm();
  res.relative_error = fn > 0.0 ? (res.f_recovered - res.f_true).norm() / fn : res.f_recovered.norm();
  res.free_evolution = free_evolution_check(res.z, basis, grid).max();
  return res;
}

Trajectory antiderivative_reduce(const Trajectory& u) {
  const double scale = std::max(u.coeffs.cwiseAbs().maxCoeff(), 1.0);
  if (u.coeffs.rows() > 0 && u.coeffs.row(0).cwiseAbs().maxCoeff() > 1e-14 * scale)
    throw std::invalid_argument("antiderivative_reduce: requires u(0) = 0");
  Trajectory w{u.grid, Eigen::MatrixXcd(u.coeffs.rows(), u.coeffs.cols())};
  for (Eigen::Index k = 0; k < u.modes(); ++k) w.coeffs.col(k) = quadrature::cumulative_trapezoid(u.coeffs.col(k), u.grid.step());
  return w;
}

SourceModel antiderivative_source(const SourceModel& src) {
  const double dt = src.grid.step();
  Eigen::VectorXd R(src.grid.size());
  R(0) = 0.0;
  // trapezoid with the endpoint derivative correction (rho' is known exactly)
  for (Eigen::Index j = 1; j < R.size(); ++j)
    R(j) = R(j - 1) + 0.5 * dt * (src.rho(j - 1) + src.rho(j)) - dt * dt / 12.0 * (src.rho_prime(j) - src.rho_prime(j - 1));
  return {src.f_modes, src.grid, std::move(R), src.rho};
}

Trajectory free_solution(const Eigen::VectorXcd& f, const SpectralBasis& basis, const TimeGrid& grid) {
  const evolution::ModeState v0{cplx(0.0, -1.0) * f, 0.0};
  return evolution::free_trajectory(v0, basis, grid);
}

ConvolutionResult convolve_source(const SourceModel& src, const Trajectory& v, const SpectralBasis& basis) {
  if (v.grid != src.grid) throw std::invalid_argument("convolve_source: grids differ");
  if (src.rho0() != 0.0) throw std::invalid_argument("convolve_source: requires rho(0) = 0");
  const Eigen::Index K = v.modes();
  if (src.f_modes.size() != K) throw std::invalid_argument("convolve_source: mode counts differ");
  const cplx I(0.0, 1.0);
  const double scale = std::max(src.f_modes.cwiseAbs().maxCoeff(), 1.0);
  if ((v.coeffs.row(0).transpose() + I * src.f_modes).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("convolve_source: v(0) must equal -i f");

  const TimeGrid& grid = v.grid;
  ConvolutionResult out{Trajectory{grid, Eigen::MatrixXcd(grid.size(), K)}};
  for (Eigen::Index k = 0; k < K; ++k) {
    const double mu = basis.eigenvalues(k);
    const Eigen::VectorXcd vk = v.coeffs.col(k);
    const Eigen::VectorXcd y = quadrature::convolution(src.rho, vk, grid.step(), mu);
    // y' = rho(0) v + rho' * v with rho(0) = 0
    const Eigen::VectorXcd dy = quadrature::convolution(src.rho_prime, vk, grid.step(), mu);
    out.y.coeffs.col(k) = y;
    for (Eigen::Index j = 0; j < grid.size(); ++j)
      out.lopp_residual = std::max(out.lopp_residual, std::abs(I * dy(j) + mu * y(j) - src.f_modes(k) * src.rho(j)));
    out.initial_value = std::max(out.initial_value, std::abs(y(0)));
  }
  return out;
}

ReductionResult reduction_route(const SourceModel& src, const SpectralBasis& basis) {
  const double peak = src.rho.cwiseAbs().maxCoeff();
  Eigen::Index first = 0;
  while (first < src.rho.size() && std::abs(src.rho(first)) <= 1e-12 * peak) ++first;
  if (peak == 0.0 || first > 1) {
    std::ostringstream os;
    os << "reduction_route: temporal factor is not normalized, support starts at t = "
       << (peak == 0.0 ? src.grid.horizon() : src.grid.at(first - 1)) << " instead of 0";
    throw std::invalid_argument(os.str());
  }
  const Trajectory u = evolution::duhamel_solve(src, basis, src.grid);
  ReductionResult out{false, u, u};
  SourceModel reduced = src;
  if (src.rho0() != 0.0) {
    out.reduced = true;
    out.reference = antiderivative_reduce(u);
    reduced = antiderivative_source(src);
  }
  const Trajectory v = free_solution(src.f_modes, basis, src.grid);
  const ConvolutionResult conv = convolve_source(reduced, v, basis);
  out.y = conv.y;
  out.lopp_residual = conv.lopp_residual;
  out.initial_value = conv.initial_value;
  out.agreement = (out.y.coeffs - out.reference.coeffs).cwiseAbs().maxCoeff();
  return out;
}

namespace {
template <class V>
std::optional<Eigen::Index> support_start(const V& x, double threshold) {
  const double peak = x.cwiseAbs().maxCoeff();
  if (peak == 0.0) return std::nullopt;
  for (Eigen::Index j = 0; j < x.size(); ++j)
    if (std::abs(x(j)) > threshold * peak) return j;
  return std::nullopt;
}
}  // namespace

SupportReport titchmarsh_support(const Eigen::VectorXd& rho, const Eigen::VectorXcd& z, double step, double threshold) {
  SupportReport rep;
  rep.convolution = quadrature::convolution(rho, z, step);
  const auto a = support_start(rho, threshold);
  const auto b = support_start(z, threshold);
  const auto c = support_start(rep.convolution, threshold);
  if (a) rep.rho_start = static_cast<double>(*a) * step;
  if (b) rep.z_start = static_cast<double>(*b) * step;
  if (c) rep.conv_start = static_cast<double>(*c) * step;
  rep.checked = a && b && c;
  if (rep.checked) rep.additivity_error = std::abs(*rep.conv_start - (*rep.rho_start + *rep.z_start));
  return rep;
}

}  // namespace hardylab::inverse
