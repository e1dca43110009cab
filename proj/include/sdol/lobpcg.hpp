#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

namespace sdol {

/// Applies an operator column by column: out.col(k) = A in.col(k).
using BlockOperator = std::function<void(const Eigen::MatrixXcd& in, Eigen::MatrixXcd& out)>;

struct LobpcgOptions {
  int max_iterations = 500;
  double tolerance = 1e-9;  // residual norm relative to max(|lambda|, 1)
};

struct LobpcgResult {
  std::vector<double> eigenvalues;
  Eigen::MatrixXcd vectors;
  std::vector<double> residuals;
  int iterations = 0;
  bool converged = false;
};

/// Locally optimal block preconditioned conjugate gradient for the lowest
/// `wanted` eigenpairs of a Hermitian operator. The block size is the column
/// count of `initial`; extra columns only accelerate convergence.
LobpcgResult lobpcg(const BlockOperator& apply_h, const BlockOperator& precondition,
                    Eigen::MatrixXcd initial, int wanted, const LobpcgOptions& options = {});

}  // namespace sdol
