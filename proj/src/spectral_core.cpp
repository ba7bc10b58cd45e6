#include "hardylab/spectral_core.hpp"

#include <cmath>
#include <stdexcept>

#include "hardylab/bessel.hpp"
#include "hardylab/errors.hpp"

namespace hardylab::spectral {

RadialGrid::RadialGrid(Eigen::Index n_interior) {
  if (n_interior < 1) throw std::invalid_argument("RadialGrid: need at least one interior node");
  h_ = 1.0 / static_cast<double>(n_interior + 1);
  nodes_.resize(n_interior);
  for (Eigen::Index j = 0; j < n_interior; ++j) nodes_(j) = static_cast<double>(j + 1) * h_;
  weights_ = Eigen::VectorXd::Constant(n_interior, h_);
}

double critical_constant(int n) {
  if (n < 1) throw std::invalid_argument("critical_constant: dimension must be >= 1");
  if (n == 2) throw std::invalid_argument("critical_constant: n = 2 is excluded (lambda* would vanish)");
  const double m = static_cast<double>(n - 2);
  return 0.25 * m * m;
}

double reduced_coupling(double lambda, int n) {
  return lambda - 0.25 * static_cast<double>((n - 1) * (n - 3));
}

double bessel_order(double lambda, int n) {
  const double crit = critical_constant(n);
  if (!(lambda < crit)) throw SupercriticalCoupling(lambda, crit);
  return std::sqrt(crit - lambda);
}

HardyDiscretization assemble_hardy_operator(const RadialGrid& grid, double lambda, int n) {
  if (grid.size() < 8) throw std::invalid_argument("assemble_hardy_operator: need n_interior >= 8");
  const double nu = bessel_order(lambda, n);
  const double lred = reduced_coupling(lambda, n);
  const double h = grid.step();
  const Eigen::Index N = grid.size();
  SymTridiagonal a;
  a.diag.resize(N);
  for (Eigen::Index j = 0; j < N; ++j) {
    const double r = grid.node(j);
    a.diag(j) = 2.0 / (h * h) - lred / (r * r);
  }
  a.off = Eigen::VectorXd::Constant(N - 1, -1.0 / (h * h));
  return {lambda, n, lred, nu, grid, std::move(a)};
}

SpectralBasis SpectralBasis::truncated(Eigen::Index k) const {
  if (k > count()) throw std::invalid_argument("SpectralBasis::truncated: more modes than stored");
  return {eigenvalues.head(k), eigenvectors.leftCols(k), grid};
}

SpectralBasis solve_spectrum(const HardyDiscretization& op, Eigen::Index k_modes) {
  if (k_modes < 1 || k_modes > op.grid.size()) throw std::invalid_argument("solve_spectrum: k_modes must lie in [1, n_interior]");
  TridiagonalEigenpairs pairs = lowest_eigenpairs(op.matrix, k_modes);
  // unit Euclidean -> unit under h * sum
  pairs.vectors /= std::sqrt(op.grid.step());
  return {std::move(pairs.values), std::move(pairs.vectors), op.grid};
}

Eigen::VectorXd eigen_residuals(const HardyDiscretization& op, const SpectralBasis& basis) {
  const double anorm = op.matrix.norm_inf();
  Eigen::VectorXd res(basis.count());
  for (Eigen::Index k = 0; k < basis.count(); ++k) {
    const Eigen::VectorXd v = basis.eigenvectors.col(k);
    res(k) = (op.matrix.apply(v) - basis.eigenvalues(k) * v).norm() / (v.norm() * anorm);
  }
  return res;
}

double orthonormality_defect(const SpectralBasis& basis) {
  const Eigen::MatrixXd gram = basis.grid.step() * basis.eigenvectors.transpose() * basis.eigenvectors;
  return (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

double hardy_rayleigh(const RadialGrid& grid, const Eigen::VectorXd& v) {
  if (v.size() != grid.size()) throw std::invalid_argument("hardy_rayleigh: vector length differs from grid");
  const double h = grid.step();
  double num = 0.0, den = 0.0, prev = 0.0;
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    const double d = (v(j) - prev) / h;
    num += d * d * h;
    const double q = v(j) / grid.node(j);
    den += q * q * h;
    prev = v(j);
  }
  // the step into the right Dirichlet zero
  num += (prev / h) * (prev / h) * h;
  if (den == 0.0) throw std::invalid_argument("hardy_rayleigh: zero denominator (degenerate input)");
  return num / den;
}

double hardy_infimum(const RadialGrid& grid) {
  // Numerator form L = tridiag(-1, 2, -1)/h, denominator D = diag(h / r_j^2).
  // Symmetrize: D^{-1/2} L D^{-1/2}.
  const Eigen::Index N = grid.size();
  const double h = grid.step();
  SymTridiagonal b;
  b.diag.resize(N);
  b.off.resize(N - 1);
  for (Eigen::Index j = 0; j < N; ++j) {
    const double r = grid.node(j);
    b.diag(j) = 2.0 * r * r / (h * h);
    if (j + 1 < N) b.off(j) = -r * grid.node(j + 1) / (h * h);
  }
  return tridiagonal_eigenvalues(b)(0);
}

std::vector<SpectrumRow> spectrum_table(const HardyDiscretization& op, const SpectralBasis& basis) {
  const auto zeros = bessel_zeros(op.bessel_order, static_cast<int>(basis.count()));
  std::vector<SpectrumRow> rows;
  for (Eigen::Index k = 0; k < basis.count(); ++k) {
    const double j = zeros[static_cast<std::size_t>(k)];
    const double oracle = j * j;
    rows.push_back({k + 1, basis.eigenvalues(k), oracle, std::abs(basis.eigenvalues(k) - oracle) / oracle});
  }
  return rows;
}

}  // namespace hardylab::spectral
