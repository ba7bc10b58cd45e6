#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hardylab/schrodinger_evolution.hpp"

namespace hardylab::control {

using evolution::ModeState;
using evolution::ObservationMask;
using evolution::TimeGrid;
using spectral::SpectralBasis;
using cplx = std::complex<double>;

// eta(D, T) = (e^{i D T} - 1)/(i D), eta(0, T) = T
cplx eta(double delta, double T);

struct Gramian {
  Eigen::MatrixXcd G;
  Eigen::MatrixXd mass;  // mask-restricted mass matrix of eigenfunctions
  double horizon = 0.0;

  Eigen::Index size() const { return G.rows(); }
  Eigen::VectorXd eigenvalues() const;  // ascending
  double sigma_min() const { return eigenvalues()(0); }
  double hermitian_defect() const { return (G - G.adjoint()).cwiseAbs().maxCoeff(); }
};

Gramian gramian(const SpectralBasis& basis, const ObservationMask& mask, double T);

struct ControlResult {
  Eigen::VectorXcd q;        // multipliers
  Eigen::VectorXcd target;   // d = ud - e^{i mu T} u0
  Eigen::VectorXd mu;
  double horizon = 0.0;
  double eps = 0.0;
  double defect = 0.0;       // predicted ||eps (G + eps I)^{-1} d||
  double cost = 0.0;         // ||h||_{L^2((0,T) x omega)} = sqrt(q^* G q)

  // h(t, .) = 1_omega i sum_l e^{-i mu_l (T - t)} q_l phi_l, modal coefficients before masking.
  Eigen::VectorXcd adjoint_coeffs(double t) const;
};

ControlResult hum_solve(const Gramian& G, const SpectralBasis& basis, const ModeState& u0, const ModeState& ud, double eps);

// h(t_j, r_m) on masked nodes: rows time, columns masked nodes.
Eigen::MatrixXcd sample_control(const ControlResult& res, const SpectralBasis& basis, const ObservationMask& mask,
                                const TimeGrid& grid);

struct ForwardCheck {
  Eigen::VectorXcd final_state;
  double forward_defect = 0.0;
  double predicted_defect = 0.0;
  double mismatch() const { return std::abs(forward_defect - predicted_defect); }
};

// Forward simulation of the controlled equation with the control synthesized on masked nodes, streamed in time.
ForwardCheck verify_control(const ControlResult& res, const ModeState& u0, const ModeState& ud,
                            const SpectralBasis& basis, const ObservationMask& mask, const TimeGrid& grid);

// Throws NumericalFault when |forward - predicted| exceeds tol.
void require_consistent(const ForwardCheck& check, double tol = 1e-6);

struct DefectRow {
  double eps;
  double defect;
  double cost;
  double sigma_min;
};
std::vector<DefectRow> defect_curve(const Gramian& G, const SpectralBasis& basis, const ModeState& u0,
                                    const ModeState& ud, const std::vector<double>& eps_list);

}  // namespace hardylab::control
