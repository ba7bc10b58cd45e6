#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hardylab/tridiagonal.hpp"

namespace hardylab::spectral {

// Interior nodes r_j = j h, j = 1..n, h = 1/(n+1); Dirichlet zeros at r = 0 and r = 1 are implicit.
class RadialGrid {
 public:
  explicit RadialGrid(Eigen::Index n_interior);

  Eigen::Index size() const { return nodes_.size(); }
  double step() const { return h_; }
  double node(Eigen::Index j) const { return nodes_(j); }
  const Eigen::VectorXd& nodes() const { return nodes_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  double inner(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const { return h_ * u.dot(v); }

  bool operator==(const RadialGrid& o) const { return size() == o.size(); }

 private:
  double h_;
  Eigen::VectorXd nodes_;
  Eigen::VectorXd weights_;
};

double critical_constant(int n);
// lambda - (n-1)(n-3)/4, the coefficient left after the Liouville substitution
double reduced_coupling(double lambda, int n);
double bessel_order(double lambda, int n);

struct HardyDiscretization {
  double lambda;
  int dimension;
  double reduced_lambda;
  double bessel_order;
  RadialGrid grid;
  SymTridiagonal matrix;
};

HardyDiscretization assemble_hardy_operator(const RadialGrid& grid, double lambda, int n = 3);

struct Tolerances {
  double eigen_residual = 1e-10;  // relative to ||A||_inf
  double orthonormality = 1e-10;
  double oracle = 1e-2;
};

struct SpectralBasis {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // columns orthonormal under h * sum
  RadialGrid grid;

  Eigen::Index count() const { return eigenvalues.size(); }
  const Eigen::VectorXd& mu() const { return eigenvalues; }
  // Leading k modes.
  SpectralBasis truncated(Eigen::Index k) const;
};

SpectralBasis solve_spectrum(const HardyDiscretization& op, Eigen::Index k_modes);

// ||A v - mu v|| / (||v|| ||A||_inf) for each retained pair.
Eigen::VectorXd eigen_residuals(const HardyDiscretization& op, const SpectralBasis& basis);
// max |<phi_j, phi_k>_h - delta_jk|
double orthonormality_defect(const SpectralBasis& basis);

// Reduced 1-D Hardy quotient; v holds interior values, v_0 = v_{N+1} = 0.
double hardy_rayleigh(const RadialGrid& grid, const Eigen::VectorXd& v);
// Smallest generalized eigenvalue of the quotient's pencil.
double hardy_infimum(const RadialGrid& grid);

struct SpectrumRow {
  Eigen::Index k;
  double mu;
  double oracle;
  double rel_err;
};
// mu_k against j_{nu,k}^2.
std::vector<SpectrumRow> spectrum_table(const HardyDiscretization& op, const SpectralBasis& basis);

}  // namespace hardylab::spectral
