#include "hardylab/lab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>

#include "hardylab/angular_spectrum.hpp"
#include "hardylab/bessel.hpp"
#include "hardylab/controllability.hpp"
#include "hardylab/elliptic_transform.hpp"
#include "hardylab/flatness_kernel.hpp"
#include "hardylab/inverse_source.hpp"
#include "hardylab/quadrature.hpp"
#include "hardylab/schrodinger_evolution.hpp"
#include "hardylab/spectral_core.hpp"

namespace hardylab::lab {

namespace {

using cplx = std::complex<double>;
using json = nlohmann::json;
using spectral::RadialGrid;
using spectral::SpectralBasis;
using evolution::ModeState;
using evolution::ObservationMask;
using evolution::TimeGrid;

// Each experiment draws from its own stream so results do not depend on what ran before.
std::mt19937_64 stream(const LabConfig& c, std::uint64_t salt) { return std::mt19937_64(c.seed * 0x9E3779B97F4A7C15ULL + salt); }

Eigen::VectorXcd random_coeffs(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::VectorXcd v(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double re = g(rng);
    const double im = g(rng);
    v(k) = cplx(re, im);
  }
  return v;
}

SpectralBasis make_basis(const LabConfig& c, Eigen::Index k) {
  const RadialGrid grid(c.n_interior);
  return spectral::solve_spectrum(spectral::assemble_hardy_operator(grid, c.lambda, c.dimension), k);
}

ObservationMask make_mask(const LabConfig& c, const RadialGrid& grid) {
  if (c.mask.kind == MaskSpec::Kind::FatCantor) return evolution::fat_cantor_mask(grid, c.mask.a, c.mask.b);
  return ObservationMask::interval(grid, c.mask.a, c.mask.b);
}

json to_json(const Eigen::VectorXd& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

json to_json(const Eigen::VectorXcd& v) {
  json arr = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) arr.push_back({v(k).real(), v(k).imag()});
  return arr;
}

void add(ExperimentOutput& out, ExperimentOutput&& part) {
  for (auto& c : part.checks) out.checks.push_back(std::move(c));
  for (auto& f : part.files) out.files.push_back(std::move(f));
}

ExperimentOutput spectrum(const LabConfig& c) {
  ExperimentOutput out;
  const RadialGrid grid(c.n_interior);
  const auto op = spectral::assemble_hardy_operator(grid, c.lambda, c.dimension);
  const auto basis = spectral::solve_spectrum(op, c.spectrum_modes);
  const auto rows = spectral::spectrum_table(op, basis);

  CsvWriter csv(c, "spectrum", {"k", "mu_k", "bessel_oracle", "rel_err"});
  double worst = 0.0;
  for (const auto& r : rows) {
    csv.row({static_cast<double>(r.k), r.mu, r.oracle, r.rel_err});
    worst = std::max(worst, r.rel_err);
  }
  out.files.push_back(csv.finish("spectrum.csv"));
  out.checks.push_back(check_le("spectrum.max_rel_err", worst, c.tol("spectrum_rel")));
  const Eigen::VectorXd res = spectral::eigen_residuals(op, basis);
  out.checks.push_back(check_le("spectrum.eigen_residual", res.maxCoeff(), c.tol("eigen_residual")));
  out.checks.push_back(check_le("spectrum.orthonormality", spectral::orthonormality_defect(basis), c.tol("orthonormality")));
  out.checks.push_back(check_gt("spectrum.coercivity_min_mu", basis.eigenvalues(0), 0.0));

  // mu_1 on N/4, N/2, N
  CsvWriter conv(c, "spectrum", {"n_interior", "mu_1", "oracle", "abs_err"});
  const double j1 = spectral::bessel_zeros(op.bessel_order, 1)[0];
  std::vector<double> errs;
  for (long n : {c.n_interior / 4, c.n_interior / 2, c.n_interior}) {
    const RadialGrid g(n);
    const auto b = spectral::solve_spectrum(spectral::assemble_hardy_operator(g, c.lambda, c.dimension), 1);
    const double err = std::abs(b.eigenvalues(0) - j1 * j1);
    errs.push_back(err);
    conv.row({static_cast<double>(n), b.eigenvalues(0), j1 * j1, err});
  }
  out.files.push_back(conv.finish("spectrum_convergence.csv"));
  const double order_lo = std::log2(errs[0] / errs[1]);
  const double order_hi = std::log2(errs[1] / errs[2]);
  // second order is only expected for the regular case nu = 1/2
  if (std::abs(op.bessel_order - 0.5) < 1e-12) {
    out.checks.push_back(check_le("spectrum.richardson_order_dev", std::max(std::abs(order_lo - 2.0), std::abs(order_hi - 2.0)),
                                  c.tol("richardson_order")));
  }
  json rep{{"bessel_order", op.bessel_order},
           {"reduced_coupling", op.reduced_lambda},
           {"critical_constant", spectral::critical_constant(c.dimension)},
           {"eigen_residuals", to_json(res)},
           {"orthonormality_defect", spectral::orthonormality_defect(basis)},
           {"observed_orders", {order_lo, order_hi}}};
  out.files.push_back(json_artifact("spectrum_report.json", c, "spectrum", rep));
  return out;
}

ExperimentOutput hardy(const LabConfig& c) {
  ExperimentOutput out;
  auto rng = stream(c, 2);
  const RadialGrid grid(c.n_interior);
  std::normal_distribution<double> g(0.0, 1.0);
  double worst = std::numeric_limits<double>::infinity();
  for (long i = 0; i < c.random_vectors; ++i) {
    Eigen::VectorXd v(grid.size());
    for (Eigen::Index j = 0; j < v.size(); ++j) v(j) = g(rng);
    worst = std::min(worst, spectral::hardy_rayleigh(grid, v));
  }
  const Eigen::VectorXd bubble = grid.nodes().array() * (1.0 - grid.nodes().array());
  const double bubble_ratio = spectral::hardy_rayleigh(grid, bubble);

  CsvWriter csv(c, "hardy", {"n_interior", "infimum"});
  std::vector<double> inf;
  for (long n : {c.n_interior / 4, c.n_interior / 2, c.n_interior}) {
    inf.push_back(spectral::hardy_infimum(RadialGrid(n)));
    csv.row({static_cast<double>(n), inf.back()});
  }
  out.files.push_back(csv.finish("hardy.csv"));
  const double crit = 0.25;
  out.checks.push_back(check_ge("hardy.random_min_ratio", worst, crit - c.tol("hardy")));
  out.checks.push_back(check_ge("hardy.bubble_ratio", bubble_ratio, crit));
  out.checks.push_back(check_gt("hardy.infimum_above_critical", inf[2], crit));
  out.checks.push_back(check_lt("hardy.infimum_below_upper", inf[2], c.tol("hardy_upper")));
  out.checks.push_back(check_true("hardy.infimum_decreasing_in_n", inf[0] > inf[1] && inf[1] > inf[2]));
  json rep{{"random_vectors", c.random_vectors}, {"min_random_ratio", worst}, {"bubble_ratio", bubble_ratio}, {"infimum", inf}};
  out.files.push_back(json_artifact("hardy_report.json", c, "hardy", rep));
  return out;
}

ExperimentOutput evolve(const LabConfig& c) {
  ExperimentOutput out;
  auto rng = stream(c, 3);
  const SpectralBasis basis = make_basis(c, c.k_modes);
  const ModeState c0{random_coeffs(c.k_modes, rng), 0.0};
  double drift = 0.0, reversal = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double t = 0.1 * i;
    const ModeState ct = evolution::propagate(c0, basis, t);
    drift = std::max(drift, std::abs(ct.coeffs.norm() - c0.coeffs.norm()));
    reversal = std::max(reversal, (evolution::propagate(ct, basis, -t).coeffs - c0.coeffs).norm());
  }
  out.checks.push_back(check_le("evolve.norm_drift", drift, c.tol("norm_drift")));
  out.checks.push_back(check_le("evolve.time_reversal", reversal, c.tol("reversal")));

  const TimeGrid grid(c.horizon, c.time_steps);
  const auto traj = evolution::free_trajectory(c0, basis, grid);
  CsvWriter csv(c, "evolve", {"t", "node", "re_u", "im_u"});
  for (int s = 0; s <= 10; ++s) {
    const Eigen::Index j = grid.steps() * s / 10;
    const Eigen::VectorXcd u = basis.eigenvectors.cast<cplx>() * traj.coeffs.row(j).transpose();
    for (Eigen::Index m = 0; m < u.size(); ++m) csv.row({grid.at(j), basis.grid.node(m), u(m).real(), u(m).imag()});
  }
  out.files.push_back(csv.finish("trajectory.csv"));

  const auto mask = make_mask(c, basis.grid);
  const auto obs = evolution::observability_matrix(basis, mask, grid);
  out.checks.push_back(check_true("evolve.observability_full_rank", obs.rank == basis.count()));
  json rep{{"mask", mask.describe()},
           {"mask_measure_grid", mask.measure()},
           {"mask_measure_analytic", mask.analytic_measure()},
           {"singular_values", to_json(obs.singular_values)},
           {"rank", obs.rank},
           {"rank_tolerance", obs.rank_tolerance},
           {"modes", basis.count()}};
  out.files.push_back(json_artifact("observability.json", c, "evolve", rep));
  return out;
}

ExperimentOutput kernel(const LabConfig& c) {
  ExperimentOutput out;
  const auto bump = flatness::gevrey_bump(c.horizon, 2.0);
  const TimeGrid grid(c.horizon, c.time_steps);
  const auto K = flatness::build_kernel(bump, c.k_trunc, grid, 201);
  double boundary = 0.0, initial = 0.0;
  for (Eigen::Index i = 0; i < K.ts.size(); ++i)
    boundary = std::max({boundary, std::abs(K.values(i, 0)), std::abs(K.values(i, K.taus.size() - 1))});
  for (Eigen::Index j = 0; j < K.taus.size(); ++j) initial = std::max(initial, std::abs(K.values(0, j) - bump(K.taus(j))));
  const auto res = flatness::kernel_residual(K);
  out.checks.push_back(check_le("kernel.boundary_zero", boundary, c.tol("kernel_boundary")));
  out.checks.push_back(check_le("kernel.initial_trace", initial, c.tol("kernel_boundary")));
  out.checks.push_back(check_le("kernel.relative_residual", res.relative(), c.tol("kernel_residual")));
  out.checks.push_back(check_le("kernel.tail_mismatch", res.max_tail_mismatch, c.tol("kernel_tail")));

  CsvWriter csv(c, "kernel", {"t", "tau", "re_K", "im_K"});
  const Eigen::Index tau_stride = std::max<Eigen::Index>(1, K.taus.size() / 100);
  for (Eigen::Index i = 0; i < K.ts.size(); i += 10)
    for (Eigen::Index j = 0; j < K.taus.size(); j += tau_stride)
      csv.row({K.ts(i), K.taus(j), K.values(i, j).real(), K.values(i, j).imag()});
  out.files.push_back(csv.finish("kernel.csv"));

  const Eigen::VectorXcd v = flatness::control_trace(K);
  CsvWriter tr(c, "kernel", {"tau", "re_v", "im_v"});
  for (Eigen::Index j = 0; j < v.size(); ++j) tr.row({K.taus(j), v(j).real(), v(j).imag()});
  out.files.push_back(tr.finish("control_trace.csv"));

  json rep{{"truncation", c.k_trunc},
           {"max_residual", res.max_residual},
           {"max_kernel", res.max_kernel},
           {"relative_residual", res.relative()},
           {"max_tail", res.max_tail},
           {"max_tail_mismatch", res.max_tail_mismatch},
           {"argmax", {res.at_t, res.at_tau}},
           {"boundary_max", boundary},
           {"initial_trace_error", initial},
           {"control_trace_sup", v.cwiseAbs().maxCoeff()}};
  out.files.push_back(json_artifact("kernel_residual.json", c, "kernel", rep));
  return out;
}

ExperimentOutput transform(const LabConfig& c) {
  ExperimentOutput out;
  auto rng = stream(c, 5);
  const SpectralBasis basis = make_basis(c, c.k_modes);
  const ModeState c0{random_coeffs(c.k_modes, rng), 0.0};
  const TimeGrid grid(c.horizon, c.time_steps);
  const auto traj = evolution::free_trajectory(c0, basis, grid);
  const auto K = flatness::build_kernel(flatness::gevrey_bump(c.horizon), c.k_trunc, grid, 2);
  const auto prof = elliptic::transform(traj, K, elliptic::uniform_t(c.profile_samples));
  const auto res = elliptic::elliptic_residual(prof, basis);
  const Eigen::VectorXcd trace = elliptic::moment_trace(K.bump, traj);
  const auto at = elliptic::transform(traj, K, Eigen::VectorXd::Constant(1, -1.0));
  const double consistency = (trace - at.values.row(0).transpose()).cwiseAbs().maxCoeff();
  const Eigen::VectorXcd m = elliptic::moments(K.bump, basis.eigenvalues, grid);
  out.checks.push_back(check_le("transform.elliptic_residual", res.max(), c.tol("elliptic")));
  out.checks.push_back(check_le("transform.trace_consistency", consistency, c.tol("trace")));

  CsvWriter csv(c, "transform", {"k", "t", "re_W", "im_W"});
  const Eigen::Index stride = std::max<Eigen::Index>(1, (prof.ts.size() - 1) / 100);
  for (Eigen::Index k = 0; k < prof.values.cols(); ++k)
    for (Eigen::Index i = 0; i < prof.ts.size(); i += stride)
      csv.row({static_cast<double>(k + 1), prof.ts(i), prof.values(i, k).real(), prof.values(i, k).imag()});
  out.files.push_back(csv.finish("elliptic_profile.csv"));

  CsvWriter mc(c, "transform", {"k", "mu_k", "re_m", "im_m", "abs_m"});
  for (Eigen::Index k = 0; k < m.size(); ++k)
    mc.row({static_cast<double>(k + 1), basis.eigenvalues(k), m(k).real(), m(k).imag(), std::abs(m(k))});
  out.files.push_back(mc.finish("moments.csv"));

  json rep{{"truncation", c.k_trunc},
           {"per_mode_residual", to_json(res.per_mode)},
           {"trace_consistency", consistency},
           {"moment_trace", to_json(trace)}};
  out.files.push_back(json_artifact("transform_report.json", c, "transform", rep));
  return out;
}

ExperimentOutput uniqueness(const LabConfig& c) {
  ExperimentOutput out;
  auto rng = stream(c, 6);
  const SpectralBasis basis = make_basis(c, c.k_modes);
  const ModeState c0{random_coeffs(c.k_modes, rng), 0.0};
  const TimeGrid grid(c.horizon, c.time_steps);
  const auto mask = make_mask(c, basis.grid);
  const auto K = flatness::build_kernel(flatness::gevrey_bump(c.horizon), c.k_trunc, grid, 2);
  const elliptic::PipelineGrids grids{grid, elliptic::uniform_t(c.profile_samples), elliptic::uniform_t(41)};
  const auto cert = elliptic::uniqueness_pipeline(c0, mask, basis, K, grids);
  const double rec_err = (cert.c0_recovered - c0.coeffs).norm() / c0.coeffs.norm();
  out.checks.push_back(check_ge("uniqueness.bound_dominates_norm", cert.bound * (1.0 + 1e-12), cert.c0_norm));
  out.checks.push_back(check_le("uniqueness.least_squares_recovery", rec_err, 1e-8));
  out.checks.push_back(check_true("uniqueness.observability_rank", cert.observability_rank == c.k_modes));
  out.checks.push_back(check_true("uniqueness.ucp_rank", cert.ucp_rank == 2 * c.k_modes));

  json chain{{"kernel_relative_residual", cert.kernel_residual},
             {"kernel_tail_mismatch", cert.kernel_tail_mismatch},
             {"elliptic_residual", cert.elliptic_residual},
             {"trace_consistency", cert.trace_consistency},
             {"moments_abs", to_json(Eigen::VectorXd(cert.moments.cwiseAbs()))},
             {"min_moment", cert.min_moment},
             {"ucp_sigma_min", cert.ucp_sigma_min},
             {"ucp_rank", cert.ucp_rank}};
  Eigen::VectorXd route_err = (cert.c0_elliptic_route - c0.coeffs).cwiseAbs();
  json rep{{"mask", mask.describe()},
           {"eta", cert.eta},
           {"sigma_min", cert.sigma_min},
           {"bound", cert.bound},
           {"c0_norm", cert.c0_norm},
           {"observability_rank", cert.observability_rank},
           {"least_squares_relative_error", rec_err},
           {"residual_chain", chain},
           {"elliptic_route_abs_error", to_json(route_err)}};
  out.files.push_back(json_artifact("certificate.json", c, "uniqueness", rep));
  return out;
}

ExperimentOutput angular(const LabConfig& c) {
  ExperimentOutput out;
  std::vector<double> lambdas{0.0, 0.1, 0.1875, 0.24};
  if (c.lambda < 0.25 && std::find(lambdas.begin(), lambdas.end(), c.lambda) == lambdas.end()) lambdas.push_back(c.lambda);
  std::sort(lambdas.begin(), lambdas.end());
  const Eigen::Index count = 8;

  CsvWriter csv(c, "angular", {"lambda", "k", "mu_k", "gamma_k"});
  std::map<double, angular::AngularBasis> bases;
  double gamma_identity = 0.0, arc_err = 0.0;
  for (double lam : lambdas) {
    const angular::AngularProblem prob{2, lam, c.n_ang};
    auto b = angular::angular_spectrum(prob, count);
    for (Eigen::Index k = 0; k < b.count(); ++k) {
      const double mu = b.eigenvalues(k);
      const double g = angular::gamma_exponent(mu, 2);
      gamma_identity = std::max(gamma_identity, std::abs(g * g - mu));
      csv.row({lam, static_cast<double>(k + 1), mu, g});
    }
    if (lam == 0.0)
      for (Eigen::Index k = 0; k < b.arc_eigenvalues.size(); ++k) {
        const double exact = static_cast<double>((k + 1) * (k + 1));
        arc_err = std::max(arc_err, std::abs(b.arc_eigenvalues(k) - exact) / exact);
      }
    bases.emplace(lam, std::move(b));
  }
  out.files.push_back(csv.finish("angular_spectrum.csv"));
  out.checks.push_back(check_le("angular.gamma_identity", gamma_identity, c.tol("gamma")));
  out.checks.push_back(check_le("angular.arc_spectrum_lambda0", arc_err, c.tol("arc")));
  bool monotone = true;
  for (std::size_t i = 0; i + 1 < lambdas.size(); ++i) {
    const auto& lo = bases.at(lambdas[i]).eigenvalues;
    const auto& hi = bases.at(lambdas[i + 1]).eigenvalues;
    for (Eigen::Index k = 0; k < lo.size(); ++k) monotone = monotone && hi(k) <= lo(k);
  }
  out.checks.push_back(check_true("angular.monotone_in_lambda", monotone));

  // w = y on circles of radius R against the odd first eigenfunction
  const auto& b0 = bases.at(0.0);
  const Eigen::VectorXd alpha = b0.angles();
  double beta_err = 0.0, beta_spread = 0.0;
  double beta_first = 0.0;
  for (double R : {0.1, 0.2, 0.5}) {
    const Eigen::VectorXd w = R * alpha.array().sin();
    const double beta = angular::beta_coefficients(w, b0, angular::gamma_exponent(1.0, 2), R)(0);
    beta_err = std::max(beta_err, std::abs(beta - std::sqrt(std::numbers::pi)));
    if (R == 0.1) beta_first = beta;
    beta_spread = std::max(beta_spread, std::abs(beta - beta_first));
  }
  out.checks.push_back(check_le("angular.beta_sqrt_pi", beta_err, c.tol("beta")));
  out.checks.push_back(check_le("angular.beta_radius_invariance", beta_spread, c.tol("beta")));

  // mixed synthetic solution: leading odd mode plus the second arc mode
  const double lam_b = bases.count(c.lambda) ? c.lambda : 0.0;
  const auto& bb = bases.at(lam_b);
  const double g1 = angular::gamma_exponent(bb.eigenvalues(0), 2);
  const double g2 = angular::gamma_exponent(bb.eigenvalues(2), 2);
  const std::vector<angular::SeparatedTerm> terms{{1.0, 0, g1}, {0.5, 2, g2}};
  const std::vector<double> radii{1e-1, 1e-2, 1e-3, 1e-4};
  const auto study = angular::blowup_profile_check(terms, bb, radii);
  CsvWriter bc(c, "angular", {"r", "discrepancy"});
  for (std::size_t i = 0; i < radii.size(); ++i) bc.row({radii[i], study.discrepancy[i]});
  out.files.push_back(bc.finish("blowup.csv"));
  const double rate_dev = std::abs(study.fitted_rate - study.expected_rate) / study.expected_rate;
  out.checks.push_back(check_le("angular.blowup_rate_relative_dev", rate_dev, c.tol("blowup_rate")));

  const auto sep0 = angular::separated_residual(0, b0, angular::gamma_exponent(b0.eigenvalues(0), 2));
  json rep{{"lambdas", lambdas},
           {"gamma_identity", gamma_identity},
           {"arc_rel_err_lambda0", arc_err},
           {"beta_error", beta_err},
           {"blowup_lambda", lam_b},
           {"blowup_expected_rate", study.expected_rate},
           {"blowup_fitted_rate", study.fitted_rate},
           {"separated_residual_lambda0_k1", sep0.max_abs},
           {"boundary_condition", "Friedrichs (Dirichlet) at alpha in {0, pi} for every lambda"}};
  out.files.push_back(json_artifact("angular_report.json", c, "angular", rep));
  return out;
}

ExperimentOutput hum(const LabConfig& c) {
  ExperimentOutput out;
  auto rng = stream(c, 8);
  const SpectralBasis basis = make_basis(c, c.k_modes);
  const auto mask = make_mask(c, basis.grid);
  const auto G = control::gramian(basis, mask, c.horizon);
  const ModeState u0{random_coeffs(c.k_modes, rng).normalized(), 0.0};
  const ModeState ud{random_coeffs(c.k_modes, rng).normalized(), 0.0};
  const Eigen::VectorXd eig = G.eigenvalues();
  out.checks.push_back(check_le("hum.hermitian_defect", G.hermitian_defect(), c.tol("hermitian")));
  out.checks.push_back(check_ge("hum.min_eigenvalue", eig(0), -c.tol("hermitian") * eig(eig.size() - 1)));

  const auto rows = control::defect_curve(G, basis, u0, ud, c.eps_list);
  CsvWriter csv(c, "hum", {"eps", "defect", "cost", "sigma_min"});
  bool dec = true, cost_up = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    csv.row({rows[i].eps, rows[i].defect, rows[i].cost, rows[i].sigma_min});
    if (i) {
      dec = dec && rows[i].defect < rows[i - 1].defect;
      cost_up = cost_up && rows[i].cost >= rows[i - 1].cost;
    }
  }
  out.files.push_back(csv.finish("defect_curve.csv"));
  out.checks.push_back(check_true("hum.defect_strictly_decreasing", dec));
  out.checks.push_back(check_true("hum.cost_nondecreasing", cost_up));

  const double eps = c.eps_list[c.eps_list.size() / 2];
  const auto res = control::hum_solve(G, basis, u0, ud, eps);
  const TimeGrid fine(c.horizon, c.hum_steps);
  const auto fwd = control::verify_control(res, u0, ud, basis, mask, fine);
  out.checks.push_back(check_le("hum.forward_defect_mismatch", fwd.mismatch(), c.tol("hum_defect")));

  const TimeGrid coarse(c.horizon, 20);
  const Eigen::MatrixXcd h = control::sample_control(res, basis, mask, coarse);
  CsvWriter hc(c, "hum", {"t", "node", "re_h", "im_h"});
  for (Eigen::Index j = 0; j < h.rows(); ++j)
    for (Eigen::Index m = 0; m < h.cols(); ++m)
      hc.row({coarse.at(j), basis.grid.node(mask.indices()[static_cast<std::size_t>(m)]), h(j, m).real(), h(j, m).imag()});
  out.files.push_back(hc.finish("control.csv"));

  json rep{{"mask", mask.describe()},
           {"gramian_eigenvalues", to_json(eig)},
           {"eps", eps},
           {"target_norm", res.target.norm()},
           {"predicted_defect", res.defect},
           {"forward_defect", fwd.forward_defect},
           {"cost", res.cost},
           {"forward_steps", c.hum_steps}};
  out.files.push_back(json_artifact("hum_report.json", c, "hum", rep));
  return out;
}

ExperimentOutput inverse_source(const LabConfig& c) {
  ExperimentOutput out;
  auto rng = stream(c, 9);
  const Eigen::Index modes = 6;
  const SpectralBasis basis = make_basis(c, modes);
  const TimeGrid grid(c.horizon, c.time_steps);
  const Eigen::VectorXcd f = random_coeffs(modes, rng);
  const auto src = evolution::make_source(f, grid, [](double t) { return 1.0 + 0.5 * t; }, [](double) { return 0.5; });
  const auto u = evolution::duhamel_solve(src, basis, grid);
  const auto rec = inverse::reconstruct_f(u, src, basis);
  const auto rec_fd = inverse::reconstruct_f(u, src, basis, inverse::TimeDerivative::FiniteDifference);

  const inverse::VolterraSystem sys = inverse::VolterraSystem::from_source(src);
  const Eigen::VectorXcd z = random_coeffs(grid.size(), rng);
  const double roundtrip = (sys.invert(sys.apply(z)) - z).cwiseAbs().maxCoeff() / z.cwiseAbs().maxCoeff();

  bool rejected = false;
  const auto src_zero = evolution::make_source(f, grid, [](double t) { return t; }, [](double) { return 1.0; });
  try {
    (void)inverse::reconstruct_f(evolution::duhamel_solve(src_zero, basis, grid), src_zero, basis);
  } catch (const std::domain_error&) {
    rejected = true;
  }
  const auto red = inverse::reduction_route(src, basis);
  const auto direct = inverse::reduction_route(src_zero, basis);

  out.checks.push_back(check_le("inverse.volterra_roundtrip", roundtrip, c.tol("volterra")));
  out.checks.push_back(check_le("inverse.reconstruction_rel_err", rec.relative_error, c.tol("reconstruction")));
  out.checks.push_back(check_le("inverse.derivative_identity", rec.derivative_identity, c.tol("derivative_identity")));
  out.checks.push_back(check_le("inverse.duhamel_identity", rec.duhamel_identity, c.tol("duhamel_identity")));
  out.checks.push_back(check_le("inverse.free_evolution", rec.free_evolution, c.tol("free_evolution")));
  out.checks.push_back(check_true("inverse.rho0_zero_rejected", rejected));
  out.checks.push_back(check_le("inverse.reduced_pipeline_agreement", red.agreement, c.tol("pipeline")));
  out.checks.push_back(check_le("inverse.reduced_lopp_residual", red.lopp_residual, c.tol("lopp")));
  out.checks.push_back(check_le("inverse.direct_pipeline_agreement", direct.agreement, c.tol("pipeline")));
  out.checks.push_back(check_le("inverse.y_initial_value", std::max(red.initial_value, direct.initial_value), 0.0));

  CsvWriter csv(c, "inverse-source", {"k", "t", "re_u", "im_u", "re_rho_conv_z", "im_rho_conv_z"});
  for (Eigen::Index k = 0; k < modes; ++k) {
    const Eigen::VectorXcd conv = quadrature::convolution(src.rho, rec.z.col(k), grid.step(), basis.eigenvalues(k));
    for (Eigen::Index j = 0; j < grid.size(); j += std::max<Eigen::Index>(1, grid.steps() / 200))
      csv.row({static_cast<double>(k + 1), grid.at(j), u.coeffs(j, k).real(), u.coeffs(j, k).imag(), conv(j).real(), conv(j).imag()});
  }
  out.files.push_back(csv.finish("convolution.csv"));

  json rep{{"rho", "1 + t/2"},
           {"f_true", to_json(rec.f_true)},
           {"f_recovered", to_json(rec.f_recovered)},
           {"relative_error", rec.relative_error},
           {"relative_error_fd_derivative", rec_fd.relative_error},
           {"residual_chain",
            {{"volterra_roundtrip", roundtrip},
             {"derivative_identity", rec.derivative_identity},
             {"duhamel_identity", rec.duhamel_identity},
             {"free_evolution", rec.free_evolution},
             {"initial_trace", rec.initial_trace}}},
           {"rho0_zero_rejected", rejected},
           {"reduction_rho_1_plus_t_over_2", {{"reduced", red.reduced}, {"agreement", red.agreement}, {"lopp_residual", red.lopp_residual}}},
           {"reduction_rho_t", {{"reduced", direct.reduced}, {"agreement", direct.agreement}, {"lopp_residual", direct.lopp_residual}}}};
  out.files.push_back(json_artifact("reconstruction.json", c, "inverse-source", rep));
  return out;
}

ExperimentOutput titchmarsh(const LabConfig& c) {
  ExperimentOutput out;
  auto rng = stream(c, 10);
  const TimeGrid grid(c.horizon, c.time_steps);
  const double T = c.horizon;
  std::uniform_real_distribution<double> start(0.05 * T, 0.4 * T), width(0.05 * T, 0.2 * T), phase(0.0, 2.0 * std::numbers::pi);
  auto bump = [&](double s, double w, double t) {
    if (t <= s || t >= s + w) return 0.0;
    const double x = std::sin(std::numbers::pi * (t - s) / w);
    return x * x;
  };
  CsvWriter csv(c, "titchmarsh", {"pair", "rho_start", "z_start", "conv_start", "additivity_error"});
  double worst = 0.0;
  for (long p = 0; p < c.titchmarsh_pairs; ++p) {
    const double s1 = start(rng), w1 = width(rng), s2 = start(rng), w2 = width(rng), th = phase(rng);
    Eigen::VectorXd rho(grid.size());
    Eigen::VectorXcd Z(grid.size());
    for (Eigen::Index j = 0; j < grid.size(); ++j) {
      rho(j) = bump(s1, w1, grid.at(j));
      Z(j) = std::polar(bump(s2, w2, grid.at(j)), th);
    }
    const auto rep = inverse::titchmarsh_support(rho, Z, grid.step());
    if (!rep.checked) throw std::logic_error("titchmarsh: generated bump vanished on the grid");
    worst = std::max(worst, rep.additivity_error);
    csv.row({static_cast<double>(p + 1), *rep.rho_start, *rep.z_start, *rep.conv_start, rep.additivity_error});
  }
  out.files.push_back(csv.finish("titchmarsh.csv"));
  out.checks.push_back(check_le("titchmarsh.support_additivity", worst, c.tol("support_steps") * grid.step()));
  return out;
}

const std::map<std::string, std::function<ExperimentOutput(const LabConfig&)>>& table() {
  static const std::map<std::string, std::function<ExperimentOutput(const LabConfig&)>> t{
      {"spectrum", spectrum}, {"hardy", hardy},         {"evolve", evolve},         {"kernel", kernel},
      {"transform", transform}, {"uniqueness", uniqueness}, {"angular", angular},   {"hum", hum},
      {"inverse-source", inverse_source}, {"titchmarsh", titchmarsh},
  };
  return t;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"spectrum", "hardy",   "evolve", "kernel",         "transform",
                                              "uniqueness", "angular", "hum",    "inverse-source", "titchmarsh"};
  return names;
}

bool is_subcommand(const std::string& name) {
  return name == "all" || std::find(experiment_names().begin(), experiment_names().end(), name) != experiment_names().end();
}

ExperimentOutput run_experiment(const std::string& name, const LabConfig& cfg) {
  if (name == "all") {
    ExperimentOutput out;
    for (const auto& n : experiment_names()) add(out, table().at(n)(cfg));
    return out;
  }
  const auto it = table().find(name);
  if (it == table().end()) throw std::invalid_argument("unknown subcommand '" + name + "'");
  return it->second(cfg);
}

}  // namespace hardylab::lab
