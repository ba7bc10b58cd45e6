#include "hardylab/angular_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <stdexcept>

#include "hardylab/errors.hpp"
#include "hardylab/tridiagonal.hpp"

namespace hardylab::angular {

namespace {
constexpr double kPi = std::numbers::pi;
}

double AngularProblem::step() const { return kPi / static_cast<double>(n_ang + 1); }

Eigen::VectorXd AngularBasis::angles() const {
  const Eigen::Index n = 2 * (problem.n_ang + 1);
  Eigen::VectorXd a(n);
  for (Eigen::Index j = 0; j < n; ++j) a(j) = static_cast<double>(j) * problem.step();
  return a;
}

SymTridiagonal arc_operator(double lambda, Eigen::Index n) {
  if (!(lambda < 0.25)) throw SupercriticalCoupling(lambda, 0.25);
  if (n < 3) throw std::invalid_argument("arc_operator: need at least three interior nodes");
  // u = sin^s g with the Friedrichs exponent s, s(s-1) = -lambda; g solves
  // -(sin^{2s} g')' / sin^{2s} + (s - lambda) g = mu g, which is regular at the endpoints.
  // Flux form with Neumann ends for g, symmetrized back to u; then u_j = sin^s_j g_j exactly.
  const double s = 0.5 + std::sqrt(0.25 - lambda);
  const double h = std::numbers::pi / static_cast<double>(n + 1);
  auto flux = [&](double alpha) { return std::pow(std::sin(alpha), 2.0 * s); };
  SymTridiagonal a;
  a.diag.resize(n);
  a.off.resize(n - 1);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double alpha = static_cast<double>(j + 1) * h;
    const double left = j == 0 ? 0.0 : flux(alpha - 0.5 * h);
    const double right = j == n - 1 ? 0.0 : flux(alpha + 0.5 * h);
    a.diag(j) = (left + right) / (h * h * flux(alpha)) + (s - lambda);
    if (j + 1 < n) a.off(j) = -right / (h * h * std::pow(std::sin(alpha) * std::sin(alpha + h), s));
  }
  return a;
}

AngularBasis angular_spectrum(const AngularProblem& prob, Eigen::Index k_count) {
  if (prob.N != 2) throw std::invalid_argument("angular_spectrum: only the N = 2 model case is discretized");
  if (!(prob.lambda < 0.25)) throw SupercriticalCoupling(prob.lambda, 0.25);
  if (prob.n_ang < 64) throw std::invalid_argument("angular_spectrum: need n_ang >= 64");
  if (k_count < 1) throw std::invalid_argument("angular_spectrum: need k_count >= 1");
  const Eigen::Index n = prob.n_ang;
  const Eigen::Index arcs = (k_count + 1) / 2;
  if (arcs > n) throw std::invalid_argument("angular_spectrum: k_count exceeds the arc resolution");
  const double h = prob.step();

  const SymTridiagonal a = arc_operator(prob.lambda, n);
  const TridiagonalEigenpairs arc = lowest_eigenpairs(a, arcs);

  AngularBasis out;
  out.problem = prob;
  out.arc_eigenvalues = arc.values;
  const Eigen::Index total = 2 * arcs;
  const Eigen::Index nodes = 2 * (n + 1);
  out.eigenvalues.resize(total);
  out.functions = Eigen::MatrixXd::Zero(nodes, total);
  // unit Euclidean arc vector -> unit under h * sum over one arc -> split over two arcs
  const double scale = 1.0 / std::sqrt(2.0 * h);
  for (Eigen::Index k = 0; k < arcs; ++k) {
    for (int p = 0; p < 2; ++p) {
      const Eigen::Index col = 2 * k + p;
      const double sign = p == 0 ? -1.0 : 1.0;  // odd first, then even
      out.eigenvalues(col) = arc.values(k);
      for (Eigen::Index j = 0; j < n; ++j) {
        out.functions(j + 1, col) = scale * arc.vectors(j, k);
        out.functions(n + 2 + j, col) = sign * scale * arc.vectors(j, k);
      }
      out.arc_index.push_back(k + 1);
      out.parity.push_back(p == 0 ? Parity::Odd : Parity::Even);
    }
  }
  return out;
}

double arc_eigenvalue_exact(double lambda, Eigen::Index k) {
  if (!(lambda < 0.25)) throw SupercriticalCoupling(lambda, 0.25);
  const double v = static_cast<double>(k) - 0.5 + std::sqrt(0.25 - lambda);
  return v * v;
}

double gamma_exponent(double mu, int N) {
  const double half = 0.5 * static_cast<double>(N - 2);
  const double radicand = half * half + mu;
  if (radicand < 0.0) throw std::invalid_argument("gamma_exponent: negative radicand");
  return -half + std::sqrt(radicand);
}

Eigen::VectorXd beta_coefficients(const Eigen::VectorXd& w, const AngularBasis& basis, double gamma, double R) {
  if (!(R > 0.0)) throw std::invalid_argument("beta_coefficients: R must be positive");
  if (w.size() != basis.functions.rows()) throw std::invalid_argument("beta_coefficients: need full-circle samples");
  const double h = basis.problem.step();
  return std::pow(R, -gamma) * h * (basis.functions.transpose() * w);
}

namespace {

// Periodic central difference on the circle grid.
Eigen::MatrixXd angular_derivative(const Eigen::MatrixXd& f, double h) {
  const Eigen::Index n = f.rows();
  Eigen::MatrixXd d(n, f.cols());
  for (Eigen::Index j = 0; j < n; ++j) d.row(j) = (f.row((j + 1) % n) - f.row((j + n - 1) % n)) / (2.0 * h);
  return d;
}

}  // namespace

BlowupStudy blowup_profile_check(const std::vector<SeparatedTerm>& terms, const AngularBasis& basis,
                                 const std::vector<double>& radii, Eigen::Index radial_nodes) {
  if (terms.empty()) throw std::invalid_argument("blowup_profile_check: no terms");
  BlowupStudy study;
  study.radii = radii;
  double g1 = terms.front().gamma;
  for (const auto& t : terms) g1 = std::min(g1, t.gamma);
  study.leading_gamma = g1;
  double g2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (std::abs(terms[i].gamma - g1) <= 1e-12) study.profile_terms.push_back(static_cast<Eigen::Index>(i));
    else g2 = std::min(g2, terms[i].gamma);
  }
  study.exact = !std::isfinite(g2);
  study.expected_rate = study.exact ? 0.0 : g2 - g1;

  const double h = basis.problem.step();
  const Eigen::Index na = basis.functions.rows();
  Eigen::MatrixXd psi(na, static_cast<Eigen::Index>(terms.size()));
  for (std::size_t i = 0; i < terms.size(); ++i) psi.col(static_cast<Eigen::Index>(i)) = basis.functions.col(terms[i].index);
  const Eigen::MatrixXd dpsi = angular_derivative(psi, h);
  const double dr = 1.0 / static_cast<double>(radial_nodes);

  for (double r : radii) {
    // coefficient of rho^{gamma_j} psi_j in r^{-g1} w(r rho) - profile
    Eigen::VectorXd c(static_cast<Eigen::Index>(terms.size()));
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const double scaled = terms[i].amplitude * std::pow(r, terms[i].gamma) / std::pow(r, g1);
      const bool in_profile = std::abs(terms[i].gamma - g1) <= 1e-12;
      c(static_cast<Eigen::Index>(i)) = in_profile ? scaled - terms[i].amplitude : scaled;
    }
    double sq = 0.0;
    for (Eigen::Index q = 0; q < radial_nodes; ++q) {
      const double rho = (static_cast<double>(q) + 0.5) * dr;
      Eigen::VectorXd val(psi.cols()), dval(psi.cols());
      for (Eigen::Index i = 0; i < psi.cols(); ++i) {
        const double g = terms[static_cast<std::size_t>(i)].gamma;
        val(i) = c(i) * std::pow(rho, g);
        dval(i) = c(i) * g * std::pow(rho, g - 1.0);
      }
      const Eigen::VectorXd f = psi * val;
      const Eigen::VectorXd f_rho = psi * dval;
      const Eigen::VectorXd f_alpha = dpsi * val;
      const double integrand = f.squaredNorm() + f_rho.squaredNorm() + f_alpha.squaredNorm() / (rho * rho);
      sq += integrand * h * rho * dr;
    }
    study.discrepancy.push_back(std::sqrt(sq));
  }

  if (!study.exact && radii.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) {
      const double x = std::log(radii[i]), y = std::log(study.discrepancy[i]);
      sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    study.fitted_rate = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  return study;
}

SeparatedResidual separated_residual(Eigen::Index k, const AngularBasis& basis, double gamma, Eigen::Index radial_nodes) {
  if (k < 0 || k >= basis.count()) throw std::invalid_argument("separated_residual: mode index out of range");
  if (radial_nodes < 3) throw std::invalid_argument("separated_residual: need at least three radial nodes");
  const double r0 = 0.2, r1 = 0.8;
  const double hr = (r1 - r0) / static_cast<double>(radial_nodes - 1);
  const Eigen::Index n = basis.problem.n_ang;
  const Eigen::VectorXd psi = basis.functions.col(k);
  const SymTridiagonal arc = arc_operator(basis.problem.lambda, n);

  // (-d_aa - lambda / sin^2) psi with the operator the spectrum was computed from, arc by arc
  Eigen::VectorXd angular(psi.size());
  angular.setZero();
  for (Eigen::Index start : {Eigen::Index{1}, n + 2}) angular.segment(start, n) = arc.apply(psi.segment(start, n));

  SeparatedResidual out;
  out.radial_step = hr;
  for (Eigen::Index q = 1; q + 1 < radial_nodes; ++q) {
    const double r = r0 + static_cast<double>(q) * hr;
    // radial factor differentiated in closed form: (d_rr + d_r / r) r^g = g^2 r^{g-2}
    const double rg2 = std::pow(r, gamma - 2.0);
    for (Eigen::Index j = 0; j < psi.size(); ++j) {
      if (j == 0 || j == n + 1) continue;  // singular directions
      out.max_abs = std::max(out.max_abs, std::abs(rg2 * (angular(j) - gamma * gamma * psi(j))));
    }
  }
  return out;
}

}  // namespace hardylab::angular
