#include "hardylab/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace hardylab::quadrature {

CellWeights fitted_cell_weights(double omega, double step) {
  const double theta = omega * step;
  const cplx I(0.0, 1.0);
  cplx a, b;
  if (std::abs(theta) < 0.5) {
    // int_0^1 (1-s) e^{i theta s} ds and int_0^1 s e^{i theta s} ds by Taylor series
    cplx term(1.0, 0.0);
    for (int n = 0; n < 30; ++n) {
      a += term / static_cast<double>((n + 1) * (n + 2));
      b += term / static_cast<double>(n + 2);
      term *= I * theta / static_cast<double>(n + 1);
    }
  } else {
    const cplx e = std::exp(I * theta);
    const cplx full = (e - 1.0) / (I * theta);
    b = e / (I * theta) + (e - 1.0) / (theta * theta);
    a = full - b;
  }
  return {a * step, b * step};
}

Eigen::VectorXcd convolution(const Eigen::VectorXd& a, const Eigen::VectorXcd& z, double step, double omega) {
  if (a.size() != z.size()) throw std::invalid_argument("convolution: sample counts differ");
  const Eigen::Index n = z.size();
  const CellWeights w = fitted_cell_weights(omega, step);
  const cplx right = w.right * std::exp(cplx(0.0, -omega * step));
  const cplx inner = w.left + right;
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n);
  for (Eigen::Index m = 1; m < n; ++m) {
    cplx acc = w.left * a(m) * z(0) + right * a(0) * z(m);
    for (Eigen::Index j = 1; j < m; ++j) acc += inner * a(m - j) * z(j);
    out(m) = acc;
  }
  return out;
}

Eigen::VectorXcd cumulative_trapezoid(const Eigen::VectorXcd& f, double step) {
  Eigen::VectorXcd out(f.size());
  if (f.size() == 0) return out;
  out(0) = 0.0;
  for (Eigen::Index j = 1; j < f.size(); ++j) out(j) = out(j - 1) + 0.5 * step * (f(j - 1) + f(j));
  return out;
}

Eigen::VectorXcd derivative(const Eigen::VectorXcd& f, double step) {
  const Eigen::Index n = f.size();
  if (n < 3) throw std::invalid_argument("derivative: need at least three samples");
  Eigen::VectorXcd d(n);
  for (Eigen::Index j = 1; j + 1 < n; ++j) d(j) = (f(j + 1) - f(j - 1)) / (2.0 * step);
  d(0) = (-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * step);
  d(n - 1) = (3.0 * f(n - 1) - 4.0 * f(n - 2) + f(n - 3)) / (2.0 * step);
  return d;
}

}  // namespace hardylab::quadrature
