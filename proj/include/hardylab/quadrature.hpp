#pragma once

#include <Eigen/Dense>
#include <complex>

namespace hardylab::quadrature {

using cplx = std::complex<double>;

// Weights of  int_0^step e^{i omega s} l(s) ds  for the linear interpolant l of (left, right).
// omega = 0 gives the trapezoid pair (step/2, step/2).
struct CellWeights {
  cplx left;
  cplx right;
};
CellWeights fitted_cell_weights(double omega, double step);

// (a * z)(t_n) = int_0^{t_n} a(t_n - s) z(s) ds on a uniform grid.
// z is treated as e^{i omega s} times a piecewise-linear envelope; omega = 0 is the plain trapezoid.
Eigen::VectorXcd convolution(const Eigen::VectorXd& a, const Eigen::VectorXcd& z, double step, double omega = 0.0);

// Running trapezoid integral, starting at 0.
Eigen::VectorXcd cumulative_trapezoid(const Eigen::VectorXcd& f, double step);

// Second-order derivative on a uniform grid (central inside, one-sided at the ends).
Eigen::VectorXcd derivative(const Eigen::VectorXcd& f, double step);

}  // namespace hardylab::quadrature
