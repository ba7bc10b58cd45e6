#include "hardylab/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hardylab/errors.hpp"

namespace hardylab {

Eigen::VectorXd SymTridiagonal::apply(const Eigen::VectorXd& x) const {
  const Eigen::Index n = size();
  Eigen::VectorXd y = diag.cwiseProduct(x);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    y(i) += off(i) * x(i + 1);
    y(i + 1) += off(i) * x(i);
  }
  return y;
}

double SymTridiagonal::norm_inf() const {
  const Eigen::Index n = size();
  double best = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double row = std::abs(diag(i));
    if (i > 0) row += std::abs(off(i - 1));
    if (i + 1 < n) row += std::abs(off(i));
    best = std::max(best, row);
  }
  return best;
}

Eigen::MatrixXd SymTridiagonal::dense() const {
  const Eigen::Index n = size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  m.diagonal() = diag;
  for (Eigen::Index i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = off(i);
  return m;
}

Eigen::VectorXd tridiagonal_eigenvalues(const SymTridiagonal& a, int max_sweeps) {
  const Eigen::Index n = a.size();
  if (n == 0) return {};
  if (a.off.size() != n - 1) throw std::invalid_argument("tridiagonal: off-diagonal length must be n-1");
  Eigen::VectorXd d = a.diag;
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  e.head(n - 1) = a.off;

  for (Eigen::Index l = 0; l < n; ++l) {
    int sweeps = 0;
    Eigen::Index m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d(m)) + std::abs(d(m + 1));
        if (std::abs(e(m)) + dd == dd) break;
      }
      if (m == l) break;
      if (sweeps++ == max_sweeps) throw NumericalFault("tridiagonal QL: iteration cap reached");

      double g = (d(l + 1) - d(l)) / (2.0 * e(l));
      double r = std::hypot(g, 1.0);
      g = d(m) - d(l) + e(l) / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      bool underflow = false;
      for (Eigen::Index i = m - 1; i >= l; --i) {
        const double f = s * e(i);
        const double b = c * e(i);
        r = std::hypot(f, g);
        e(i + 1) = r;
        if (r == 0.0) {
          d(i + 1) -= p;
          e(m) = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d(i + 1) - p;
        r = (d(i) - g) * s + 2.0 * c * b;
        p = s * r;
        d(i + 1) = g + p;
        g = c * r - b;
      }
      if (underflow) continue;
      d(l) -= p;
      e(l) = g;
      e(m) = 0.0;
    } while (true);
  }
  for (Eigen::Index i = 0; i < n; ++i)
    if (!std::isfinite(d(i))) throw NumericalFault("tridiagonal QL: non-finite eigenvalue");
  std::sort(d.data(), d.data() + n);
  return d;
}

ShiftedTridiagonalSolver::ShiftedTridiagonalSolver(const SymTridiagonal& a, double shift) {
  const Eigen::Index n = a.size();
  u0_.resize(n);
  u1_ = Eigen::VectorXd::Zero(n);
  u2_ = Eigen::VectorXd::Zero(n);
  factor_ = Eigen::VectorXd::Zero(n);
  swapped_.assign(static_cast<std::size_t>(n), false);
  const double tiny = std::numeric_limits<double>::epsilon() * std::max(a.norm_inf(), 1.0);

  // current row i holds (c0, c1, c2) at columns i, i+1, i+2
  double c0 = a.diag(0) - shift;
  double c1 = n > 1 ? a.off(0) : 0.0;
  double c2 = 0.0;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double b0 = a.off(i);
    const double b1 = a.diag(i + 1) - shift;
    const double b2 = i + 2 < n ? a.off(i + 1) : 0.0;
    if (std::abs(c0) >= std::abs(b0)) {
      if (c0 == 0.0) c0 = tiny;
      const double f = b0 / c0;
      u0_(i) = c0; u1_(i) = c1; u2_(i) = c2;
      factor_(i) = f;
      c0 = b1 - f * c1;
      c1 = b2 - f * c2;
    } else {
      const double f = c0 / b0;
      u0_(i) = b0; u1_(i) = b1; u2_(i) = b2;
      factor_(i) = f;
      swapped_[static_cast<std::size_t>(i)] = true;
      c0 = c1 - f * b1;
      c1 = c2 - f * b2;
    }
    c2 = 0.0;
  }
  u0_(n - 1) = c0 == 0.0 ? tiny : c0;
}

Eigen::VectorXd ShiftedTridiagonalSolver::solve(const Eigen::VectorXd& rhs) const {
  const Eigen::Index n = u0_.size();
  Eigen::VectorXd y(n);
  double cur = rhs(0);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double next = rhs(i + 1);
    if (swapped_[static_cast<std::size_t>(i)]) {
      y(i) = next;
      cur = cur - factor_(i) * next;
    } else {
      y(i) = cur;
      cur = next - factor_(i) * cur;
    }
  }
  y(n - 1) = cur;
  Eigen::VectorXd x(n);
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    double v = y(i);
    if (i + 1 < n) v -= u1_(i) * x(i + 1);
    if (i + 2 < n) v -= u2_(i) * x(i + 2);
    x(i) = v / u0_(i);
  }
  return x;
}

namespace {

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  const double cutoff = 1e-12 * v.cwiseAbs().maxCoeff();
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    if (std::abs(v(j)) > cutoff) {
      if (v(j) < 0) v = -v;
      return;
    }
  }
}

}  // namespace

TridiagonalEigenpairs lowest_eigenpairs(const SymTridiagonal& a, Eigen::Index count) {
  const Eigen::Index n = a.size();
  if (count < 0 || count > n) throw std::invalid_argument("lowest_eigenpairs: count must lie in [0, n]");
  const Eigen::VectorXd all = tridiagonal_eigenvalues(a);
  TridiagonalEigenpairs out;
  out.values = all.head(count);
  out.vectors.resize(n, count);
  const double scale = std::max(a.norm_inf(), 1.0);

  for (Eigen::Index k = 0; k < count; ++k) {
    const double mu = out.values(k);
    // perturb off the eigenvalue so the factorization is not exactly singular
    const ShiftedTridiagonalSolver solver(a, mu + 4.0 * std::numeric_limits<double>::epsilon() * scale);
    Eigen::VectorXd x(n);
    for (Eigen::Index j = 0; j < n; ++j) x(j) = 1.0 + 0.5 * std::sin(1.7 * static_cast<double>(j) + static_cast<double>(k));
    x.normalize();
    for (int it = 0; it < 6; ++it) {
      x = solver.solve(x);
      for (Eigen::Index p = 0; p < k; ++p) x -= out.vectors.col(p).dot(x) * out.vectors.col(p);
      const double nx = x.norm();
      if (!std::isfinite(nx) || nx == 0.0) throw NumericalFault("inverse iteration broke down");
      x /= nx;
      if (it >= 2 && (a.apply(x) - mu * x).norm() <= 1e-13 * scale) break;
    }
    fix_sign(x);
    out.vectors.col(k) = x;
  }
  return out;
}

}  // namespace hardylab
