#pragma once

#include <Eigen/Dense>
#include <vector>

namespace hardylab {

struct SymTridiagonal {
  Eigen::VectorXd diag;
  Eigen::VectorXd off;  // off(i) couples rows i and i+1

  Eigen::Index size() const { return diag.size(); }
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  double norm_inf() const;
  Eigen::MatrixXd dense() const;
};

// All eigenvalues, ascending. Implicit QL with Wilkinson shifts.
Eigen::VectorXd tridiagonal_eigenvalues(const SymTridiagonal& a, int max_sweeps = 60);

// LU with partial pivoting of (A - shift I); reused across inverse-iteration solves.
class ShiftedTridiagonalSolver {
 public:
  ShiftedTridiagonalSolver(const SymTridiagonal& a, double shift);
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

 private:
  Eigen::VectorXd u0_, u1_, u2_, factor_;
  std::vector<bool> swapped_;
};

struct TridiagonalEigenpairs {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;  // unit Euclidean columns, first nonzero entry positive
};

// Lowest `count` eigenpairs: QL for the values, inverse iteration for the vectors.
TridiagonalEigenpairs lowest_eigenpairs(const SymTridiagonal& a, Eigen::Index count);

}  // namespace hardylab
