#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

#include "bmb/error.hpp"

namespace bmb {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Lower-triangular Cholesky factor L with L * L^T equal to the source matrix.
class CholeskyFactor {
 public:
  explicit CholeskyFactor(Matrix lower);

  const Matrix& lower() const noexcept { return lower_; }
  Index dim() const noexcept { return lower_.rows(); }

  Matrix reconstruct() const;
  Vector solve(const Vector& b) const;
  Matrix solve(const Matrix& b) const;
  Matrix inverse() const;
  double log_det() const;

  // L^{-1} b and L^{-T} b.
  Vector solve_lower(const Vector& b) const;
  Vector solve_upper(const Vector& b) const;

 private:
  Matrix lower_;
};

// Factor a symmetric matrix. Every pivot must exceed rel_pivot_tol * max|diag|
// and be strictly positive; otherwise NotPositiveDefiniteError names the first
// failing pivot. Only the lower triangle of `sym` is read.
CholeskyFactor cholesky_factor(const Matrix& sym, double rel_pivot_tol = 0.0);

// Symmetric positive-definite matrix. The input is symmetrized as (A + A^T)/2
// and factored on construction; the factor is kept alongside the values.
class SpdMatrix {
 public:
  static constexpr double kPivotTolerance = 1e-12;

  explicit SpdMatrix(const Matrix& m);

  static SpdMatrix identity(Index dim);

  const Matrix& matrix() const noexcept { return values_; }
  const CholeskyFactor& factor() const noexcept { return factor_; }
  Index dim() const noexcept { return values_.rows(); }
  double operator()(Index i, Index j) const { return values_(i, j); }

  SpdMatrix inverse() const;
  double log_det() const { return factor_.log_det(); }

 private:
  Matrix values_;
  CholeskyFactor factor_;
};

CholeskyFactor cholesky(const SpdMatrix& m);
Vector chol_solve(const CholeskyFactor& f, const Vector& b);

// Variables in rows, observations in columns.
class DataMatrix {
 public:
  DataMatrix(Matrix values, std::vector<std::string> names);

  const Matrix& values() const noexcept { return values_; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  Index variables() const noexcept { return values_.rows(); }
  Index observations() const noexcept { return values_.cols(); }

  // Throws UnknownVariable.
  Index index_of(const std::string& name) const;

 private:
  Matrix values_;
  std::vector<std::string> names_;
};

// Scatter matrix split into query (p) and remainder (q) blocks. The first p
// rows/columns of the full matrix are the query variables.
class PartitionedCov {
 public:
  PartitionedCov(const Matrix& full, Index p, double n, std::vector<std::string> names = {});

  Index p() const noexcept { return p_; }
  Index q() const noexcept { return q_; }
  double n() const noexcept { return n_; }

  const Matrix& s11() const noexcept { return s11_; }
  const Matrix& s12() const noexcept { return s12_; }
  const Matrix& s22() const noexcept { return s22_; }
  Matrix full() const;

  // Query names followed by remainder names, empty when constructed unnamed.
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::vector<std::string> query_names() const;
  std::vector<std::string> other_names() const;

 private:
  Index p_;
  Index q_;
  double n_;
  Matrix s11_;
  Matrix s12_;
  Matrix s22_;
  std::vector<std::string> names_;
};

// S = X X^T (after optional row centering) with the query variables moved to
// the leading block in the order given; remaining variables keep their order.
// n is the observation count, minus one when centered.
PartitionedCov partition_scatter(const DataMatrix& x, const std::vector<std::string>& query,
                                 bool center);

double relative_frobenius(const Matrix& a, const Matrix& reference);

}  // namespace bmb
