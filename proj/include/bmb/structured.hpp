#pragma once

#include <memory>
#include <vector>

#include "bmb/matrix.hpp"

namespace bmb {

// Positive p x q matrix of Gibbs scale parameters t_ij.
class ScaleMatrix {
 public:
  explicit ScaleMatrix(Matrix t);

  static ScaleMatrix ones(Index p, Index q) { return ScaleMatrix(Matrix::Ones(p, q)); }

  const Matrix& values() const noexcept { return t_; }
  Index p() const noexcept { return t_.rows(); }
  Index q() const noexcept { return t_.cols(); }

  // Diagonal of D_i, i.e. 1 / t_i.
  Vector inverse_row(Index i) const { return t_.row(i).cwiseInverse().transpose(); }

 private:
  Matrix t_;
};

// The pq x pq precision C = U (x) K + blockdiag(D_1, ..., D_p) of the stacked
// rows of W12, held as its pieces. Block (i, j) is u_ij K + [i == j] D_i.
class StructuredPrecision {
 public:
  StructuredPrecision(Matrix u, std::shared_ptr<const Matrix> k, std::vector<Vector> d);

  Index p() const noexcept { return u_.rows(); }
  Index q() const noexcept { return k_->rows(); }

  const Matrix& u() const noexcept { return u_; }
  const Matrix& k() const noexcept { return *k_; }
  const std::shared_ptr<const Matrix>& shared_k() const noexcept { return k_; }
  const std::vector<Vector>& d() const noexcept { return d_; }

  Matrix block(Index i, Index j) const;
  // C x without forming C.
  Vector multiply(const Vector& x) const;
  // Full pq x pq matrix; for tests and small problems only.
  Matrix densify() const;

 private:
  Matrix u_;
  std::shared_ptr<const Matrix> k_;
  std::vector<Vector> d_;
};

// U = W11^{-1}, K = S22 + I, D_i = diag(1 / t_i).
StructuredPrecision build_structured_precision(const SpdMatrix& w11, const Matrix& s22,
                                               const ScaleMatrix& t);
StructuredPrecision build_structured_precision(const SpdMatrix& w11,
                                               std::shared_ptr<const Matrix> k,
                                               const ScaleMatrix& t);

// Block lower-triangular Cholesky factor of a StructuredPrecision over the
// p x p grid of q x q blocks.
class StructuredFactor {
 public:
  StructuredFactor(Index p, Index q, std::vector<Matrix> blocks);

  Index p() const noexcept { return p_; }
  Index q() const noexcept { return q_; }

  // Block (i, j) of L, i >= j.
  const Matrix& block(Index i, Index j) const { return blocks_[packed(i, j)]; }

  Vector solve_lower(const Vector& b) const;  // L y = b
  Vector solve_upper(const Vector& y) const;  // L^T x = y
  Vector solve(const Vector& b) const;        // C x = b
  Matrix densify() const;

 private:
  static std::size_t packed(Index i, Index j) {
    return static_cast<std::size_t>(i * (i + 1) / 2 + j);
  }

  Index p_;
  Index q_;
  std::vector<Matrix> blocks_;
};

// Block Cholesky. The first block column shares one triangular solve and one
// Gram product across all rows because its blocks differ only by u_i1; later
// columns use generic block updates. Cost is cubic in q for fixed p.
StructuredFactor structured_chol(const StructuredPrecision& c);

}  // namespace bmb
