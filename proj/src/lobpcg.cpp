#include "sdol/lobpcg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace sdol {
namespace {

// Orthonormalises the columns of S by the Gram-matrix eigendecomposition
// (SVQB). Returns the transform C with S*C orthonormal. Nearly dependent
// directions are dropped: keeping them would scale rounding errors in the
// implicitly updated H*S by 1/sqrt(weight) and produce spurious Ritz values
// below the spectrum.
Eigen::MatrixXcd svqb(const Eigen::MatrixXcd& s) {
  Eigen::MatrixXcd gram = s.adjoint() * s;
  gram = 0.5 * (gram + gram.adjoint()).eval();
  Eigen::VectorXd d = gram.diagonal().real().cwiseSqrt();
  for (int i = 0; i < d.size(); ++i) d[i] = d[i] > 0 ? 1.0 / d[i] : 0.0;
  const Eigen::MatrixXcd scaled = d.asDiagonal() * gram * d.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(scaled);
  const auto& w = eig.eigenvalues();
  const double cutoff = 1e-10 * w.maxCoeff();
  std::vector<int> keep;
  for (int i = 0; i < w.size(); ++i)
    if (w[i] > cutoff) keep.push_back(i);
  Eigen::MatrixXcd c(s.cols(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k)
    c.col(static_cast<Eigen::Index>(k)) = eig.eigenvectors().col(keep[k]) / std::sqrt(w[keep[k]]);
  return d.asDiagonal() * c;
}

}  // namespace

LobpcgResult lobpcg(const BlockOperator& apply_h, const BlockOperator& precondition, Eigen::MatrixXcd initial,
                    int wanted, const LobpcgOptions& options) {
  const Eigen::Index m = initial.cols();
  if (wanted <= 0 || wanted > m) throw std::invalid_argument("lobpcg: wanted must be in [1, block size]");

  Eigen::MatrixXcd x = initial * svqb(initial);
  if (x.cols() < m) throw std::invalid_argument("lobpcg: initial block is rank deficient");
  Eigen::MatrixXcd hx(x.rows(), m);
  apply_h(x, hx);

  // Initial Rayleigh-Ritz.
  {
    Eigen::MatrixXcd a = x.adjoint() * hx;
    a = 0.5 * (a + a.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(a);
    x = (x * eig.eigenvectors()).eval();
    hx = (hx * eig.eigenvectors()).eval();
  }
  Eigen::VectorXd lambda = (x.adjoint() * hx).diagonal().real();

  Eigen::MatrixXcd p, hp;
  LobpcgResult result;
  result.residuals.assign(static_cast<std::size_t>(wanted), 0.0);

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    Eigen::MatrixXcd r = hx - x * lambda.asDiagonal();
    bool done = true;
    for (int k = 0; k < wanted; ++k) {
      const double res = r.col(k).norm() / std::max(std::abs(lambda[k]), 1.0);
      result.residuals[static_cast<std::size_t>(k)] = res;
      if (res > options.tolerance) done = false;
    }
    result.iterations = iter;
    if (done) {
      result.converged = true;
      break;
    }

    Eigen::MatrixXcd w(r.rows(), r.cols());
    precondition(r, w);
    // Keep W orthogonal to the current block before forming the basis.
    w -= x * (x.adjoint() * w);
    w -= x * (x.adjoint() * w);
    Eigen::MatrixXcd hw(w.rows(), w.cols());
    apply_h(w, hw);

    const Eigen::Index np = p.cols();
    Eigen::MatrixXcd s(x.rows(), m + w.cols() + np);
    Eigen::MatrixXcd hs(x.rows(), s.cols());
    s.leftCols(m) = x;
    s.middleCols(m, w.cols()) = w;
    hs.leftCols(m) = hx;
    hs.middleCols(m, w.cols()) = hw;
    if (np > 0) {
      s.rightCols(np) = p;
      hs.rightCols(np) = hp;
    }

    const Eigen::MatrixXcd c = svqb(s);
    const Eigen::MatrixXcd q = s * c;
    const Eigen::MatrixXcd hq = hs * c;
    Eigen::MatrixXcd a = q.adjoint() * hq;
    a = 0.5 * (a + a.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(a);
    const Eigen::MatrixXcd y = eig.eigenvectors().leftCols(m);

    // Coefficients in the [X W P] basis. The new P is built from the W and P
    // blocks alone; forming it as X_new - X (X^H X_new) cancels to rounding
    // noise once X converges, and H P then no longer matches P.
    const Eigen::MatrixXcd coeff = c * y;
    const Eigen::Index tail = s.cols() - m;
    p = s.rightCols(tail) * coeff.bottomRows(tail);
    hp = hs.rightCols(tail) * coeff.bottomRows(tail);
    x = q * y;
    hx = hq * y;
    // The implicit products drift slowly; refresh them now and then.
    if ((iter + 1) % 20 == 0) {
      apply_h(x, hx);
      apply_h(p, hp);
    }
    lambda = eig.eigenvalues().head(m);
  }

  result.eigenvalues.assign(lambda.data(), lambda.data() + wanted);
  result.vectors = x.leftCols(wanted);
  return result;
}

}  // namespace sdol
