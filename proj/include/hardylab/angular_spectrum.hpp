#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hardylab/tridiagonal.hpp"

namespace hardylab::angular {

// -d^2/dalpha^2 - lambda / sin^2(alpha) on the two arcs (0, pi) and (pi, 2 pi) of the unit circle,
// Dirichlet (Friedrichs) conditions at the singular points.
struct AngularProblem {
  int N = 2;
  double lambda = 0.0;
  Eigen::Index n_ang = 1024;  // interior nodes per arc

  double step() const;
};

enum class Parity { Even, Odd };  // under alpha -> alpha + pi

struct AngularBasis {
  AngularProblem problem;
  Eigen::VectorXd eigenvalues;  // ascending, each arc eigenvalue listed twice
  Eigen::MatrixXd functions;    // samples at alpha_j = j h, j = 0..2(n_ang+1)-1, orthonormal under h * sum
  std::vector<Eigen::Index> arc_index;  // 1-based arc eigenvalue index
  std::vector<Parity> parity;
  Eigen::VectorXd arc_eigenvalues;  // simple spectrum of one arc

  Eigen::Index count() const { return eigenvalues.size(); }
  Eigen::VectorXd angles() const;
};

// `k_count` circle eigenpairs (rounded up to whole doubled pairs).
// One open arc of n interior nodes: -d_aa - lambda / sin^2 a, written in the
// Frobenius-factored flux form so the sin^s endpoint behaviour is resolved to second order.
SymTridiagonal arc_operator(double lambda, Eigen::Index n);

AngularBasis angular_spectrum(const AngularProblem& prob, Eigen::Index k_count);

// Exact arc eigenvalue (k - 1/2 + sqrt(1/4 - lambda))^2 of the continuous problem.
double arc_eigenvalue_exact(double lambda, Eigen::Index k);

double gamma_exponent(double mu, int N);

// beta_i = R^{-gamma} * h * sum_j w(R, alpha_j) psi_i(alpha_j)
Eigen::VectorXd beta_coefficients(const Eigen::VectorXd& w_on_circle, const AngularBasis& basis, double gamma, double R);

struct SeparatedTerm {
  double amplitude;
  Eigen::Index index;  // column of AngularBasis::functions
  double gamma;
};

struct BlowupStudy {
  std::vector<double> radii;
  std::vector<double> discrepancy;  // H^1(B_1) norm of r^{-gamma_min} w(r .) - limit profile
  double leading_gamma = 0.0;
  double expected_rate = 0.0;  // gamma_2 - gamma_1
  double fitted_rate = 0.0;    // least-squares slope of log discrepancy vs log r
  bool exact = false;          // single exponent: discrepancy identically zero
  std::vector<Eigen::Index> profile_terms;
};

BlowupStudy blowup_profile_check(const std::vector<SeparatedTerm>& terms, const AngularBasis& basis,
                                 const std::vector<double>& radii, Eigen::Index radial_nodes = 400);

struct SeparatedResidual {
  double max_abs = 0.0;
  double radial_step = 0.0;
};

// Residual of -Lap w - lambda w / y^2 for w = r^gamma psi_k on the annulus [0.2, 0.8]:
// angular part by the discrete circle stencil, radial part exact.
SeparatedResidual separated_residual(Eigen::Index k, const AngularBasis& basis, double gamma, Eigen::Index radial_nodes = 601);

}  // namespace hardylab::angular
