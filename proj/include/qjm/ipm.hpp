#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "qjm/hermitian.hpp"

namespace qjm::conic {

/// Cone K = (product of Hermitian PSD blocks) x (nonnegative orthant).
/// Cone-space vectors concatenate hvec coordinates of each block followed by
/// the scalar entries.
struct ConeLayout {
  std::vector<int> block_dims;
  int nonneg = 0;

  int total_len() const {
    int n = nonneg;
    for (int d : block_dims) n += d * d;
    return n;
  }
  int degree() const {
    int nu = nonneg;
    for (int d : block_dims) nu += d;
    return nu;
  }
  /// hvec offset of block i.
  int block_offset(int i) const {
    int off = 0;
    for (int j = 0; j < i; ++j) off += block_dims[j] * block_dims[j];
    return off;
  }
  int scalar_offset() const { return total_len() - nonneg; }
};

/// minimize c.x  subject to  A x = b,  x in K.
struct StandardForm {
  ConeLayout cone;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
};

enum class IpmStatus {
  Optimal,
  PrimalInfeasible,
  DualInfeasible,
  IterationLimit,
  Stalled,
};

struct IpmSettings {
  double feastol = 1e-8;
  double abstol = 1e-8;
  double reltol = 1e-8;
  int max_iterations = 200;
  double step_fraction = 0.99;
};

struct IpmSolution {
  IpmStatus status = IpmStatus::Stalled;
  Eigen::VectorXd x;  // cone-feasible primal point (Optimal)
  Eigen::VectorXd y;  // equality multipliers (Optimal) / Farkas certificate (PrimalInfeasible)
  Eigen::VectorXd z;  // dual cone point
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double gap = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  std::string notes;
};

/// Homogeneous self-dual primal-dual interior-point method with
/// Nesterov-Todd scaling and a Mehrotra-style corrector.
///
/// Infeasible problems terminate with a Farkas certificate y normalized to
/// unit norm: A^T y in K* and b.y < 0. Unbounded problems report
/// DualInfeasible. Requires A to have full row rank (see presolve in the
/// kernel front end).
IpmSolution solve_standard_form(const StandardForm& p, const IpmSettings& settings);

}  // namespace qjm::conic
