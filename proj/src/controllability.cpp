#include "hardylab/controllability.hpp"

#include <cmath>
#include <stdexcept>

#include "hardylab/errors.hpp"

namespace hardylab::control {

cplx eta(double delta, double T) {
  if (delta == 0.0) return T;
  const double x = delta * T;
  if (std::abs(x) < 1e-4) {
    // series avoids cancellation: T (1 + i x/2 - x^2/6 - i x^3/24)
    return T * cplx(1.0 - x * x / 6.0, 0.5 * x - x * x * x / 24.0);
  }
  return (std::polar(1.0, x) - 1.0) / cplx(0.0, delta);
}

Eigen::VectorXd Gramian::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

Gramian gramian(const SpectralBasis& basis, const ObservationMask& mask, double T) {
  if (mask.size() == 0) throw std::invalid_argument("gramian: empty mask");
  if (!(T > 0.0)) throw std::invalid_argument("gramian: horizon must be positive");
  const Eigen::MatrixXd phi = mask.restrict(basis.eigenvectors);
  Gramian g;
  g.horizon = T;
  g.mass = mask.step() * phi.transpose() * phi;
  const Eigen::Index K = basis.count();
  g.G.resize(K, K);
  for (Eigen::Index j = 0; j < K; ++j)
    for (Eigen::Index l = 0; l < K; ++l) g.G(j, l) = g.mass(j, l) * eta(basis.eigenvalues(j) - basis.eigenvalues(l), T);
  return g;
}

Eigen::VectorXcd ControlResult::adjoint_coeffs(double t) const {
  Eigen::VectorXcd a(q.size());
  for (Eigen::Index l = 0; l < q.size(); ++l) a(l) = cplx(0.0, 1.0) * std::polar(1.0, -mu(l) * (horizon - t)) * q(l);
  return a;
}

ControlResult hum_solve(const Gramian& G, const SpectralBasis& basis, const ModeState& u0, const ModeState& ud, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("hum_solve: eps must be positive");
  const Eigen::Index K = G.size();
  if (u0.coeffs.size() != K || ud.coeffs.size() != K || basis.count() < K)
    throw std::invalid_argument("hum_solve: state sizes differ from the Gramian");
  ControlResult res;
  res.mu = basis.eigenvalues.head(K);
  res.horizon = G.horizon;
  res.eps = eps;
  res.target = ud.coeffs - evolution::propagate(u0, basis.truncated(K), G.horizon).coeffs;

  const Eigen::MatrixXcd A = G.G + eps * Eigen::MatrixXcd::Identity(K, K);
  Eigen::LLT<Eigen::MatrixXcd> llt(A);
  if (llt.info() != Eigen::Success) throw NumericalFault("hum_solve: G + eps I is not positive definite (assembly fault)");
  res.q = llt.solve(res.target);
  res.defect = (eps * res.q).norm();
  const cplx qgq = res.q.dot(G.G * res.q);
  res.cost = std::sqrt(std::max(qgq.real(), 0.0));
  return res;
}

Eigen::MatrixXcd sample_control(const ControlResult& res, const SpectralBasis& basis, const ObservationMask& mask,
                                const TimeGrid& grid) {
  const Eigen::Index K = res.q.size();
  const Eigen::MatrixXd phi = mask.restrict(basis.eigenvectors.leftCols(K));
  Eigen::MatrixXcd h(grid.size(), mask.size());
  for (Eigen::Index j = 0; j < grid.size(); ++j) h.row(j) = (phi.cast<cplx>() * res.adjoint_coeffs(grid.at(j))).transpose();
  return h;
}

ForwardCheck verify_control(const ControlResult& res, const ModeState& u0, const ModeState& ud,
                            const SpectralBasis& basis, const ObservationMask& mask, const TimeGrid& grid) {
  const Eigen::Index K = res.q.size();
  if (grid.horizon() != res.horizon) throw std::invalid_argument("verify_control: grid horizon differs from the control");
  const Eigen::MatrixXd phi = mask.restrict(basis.eigenvectors.leftCols(K));
  const Eigen::MatrixXcd project = (mask.step() * phi.transpose()).cast<cplx>();
  const double dt = grid.step();

  // i c' + mu c = h_k(t), h_k = <1_omega h, phi_k>; streamed cell by cell. The control carries every
  // frequency mu_l, so a linear envelope is not enough: 3-point Gauss-Legendre per cell.
  const double gx[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
  const double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  const Eigen::MatrixXcd synth = phi.cast<cplx>();
  Eigen::VectorXcd integral = Eigen::VectorXcd::Zero(K);
  for (Eigen::Index j = 1; j < grid.size(); ++j) {
    const double left = grid.at(j - 1);
    for (int g = 0; g < 3; ++g) {
      const double s = left + 0.5 * dt * (1.0 + gx[g]);
      const Eigen::VectorXcd hk = project * (synth * res.adjoint_coeffs(s));
      for (Eigen::Index k = 0; k < K; ++k) integral(k) += 0.5 * dt * gw[g] * std::polar(1.0, -res.mu(k) * s) * hk(k);
    }
  }
  ForwardCheck out;
  out.final_state.resize(K);
  for (Eigen::Index k = 0; k < K; ++k)
    out.final_state(k) = std::polar(1.0, res.mu(k) * grid.horizon()) * (u0.coeffs(k) - cplx(0.0, 1.0) * integral(k));
  out.forward_defect = (out.final_state - ud.coeffs).norm();
  out.predicted_defect = res.defect;
  return out;
}

void require_consistent(const ForwardCheck& check, double tol) {
  if (check.mismatch() > tol)
    throw NumericalFault("verify_control: forward defect disagrees with the Gramian prediction");
}

std::vector<DefectRow> defect_curve(const Gramian& G, const SpectralBasis& basis, const ModeState& u0,
                                    const ModeState& ud, const std::vector<double>& eps_list) {
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0)) throw std::invalid_argument("defect_curve: eps values must be positive");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1])) throw std::invalid_argument("defect_curve: eps values must decrease");
  }
  const double smin = G.sigma_min();
  std::vector<DefectRow> rows;
  for (double eps : eps_list) {
    const ControlResult r = hum_solve(G, basis, u0, ud, eps);
    rows.push_back({eps, r.defect, r.cost, smin});
  }
  return rows;
}

}  // namespace hardylab::control
