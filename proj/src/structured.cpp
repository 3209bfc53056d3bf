#include "bmb/structured.hpp"

#include <cmath>

namespace bmb {

ScaleMatrix::ScaleMatrix(Matrix t) : t_(std::move(t)) {
  for (Index i = 0; i < t_.rows(); ++i) {
    for (Index j = 0; j < t_.cols(); ++j) {
      if (!(t_(i, j) > 0.0) || !std::isfinite(t_(i, j))) {
        throw Error(ErrorKind::InvalidParameter, "scale parameters must be positive and finite");
      }
    }
  }
}

StructuredPrecision::StructuredPrecision(Matrix u, std::shared_ptr<const Matrix> k,
                                         std::vector<Vector> d)
    : u_(std::move(u)), k_(std::move(k)), d_(std::move(d)) {
  if (!k_ || k_->rows() != k_->cols()) {
    throw Error(ErrorKind::DimensionMismatch, "K must be square");
  }
  if (u_.rows() != u_.cols() || static_cast<Index>(d_.size()) != u_.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "U must be p x p with one D_i per row");
  }
  for (const auto& di : d_) {
    if (di.size() != k_->rows()) throw Error(ErrorKind::DimensionMismatch, "D_i must have length q");
  }
}

Matrix StructuredPrecision::block(Index i, Index j) const {
  Matrix b = u_(i, j) * (*k_);
  if (i == j) b.diagonal() += d_[static_cast<std::size_t>(i)];
  return b;
}

Vector StructuredPrecision::multiply(const Vector& x) const {
  const Index p_ = p();
  const Index q_ = q();
  if (x.size() != p_ * q_) throw Error(ErrorKind::DimensionMismatch, "C x: length must be pq");
  // Columns of `rows` are the stacked q-vectors.
  Eigen::Map<const Matrix> rows(x.data(), q_, p_);
  Matrix out = (*k_) * rows * u_.transpose();
  for (Index i = 0; i < p_; ++i) {
    out.col(i).array() += d_[static_cast<std::size_t>(i)].array() * rows.col(i).array();
  }
  return Eigen::Map<Vector>(out.data(), p_ * q_);
}

Matrix StructuredPrecision::densify() const {
  const Index q_ = q();
  Matrix c(p() * q_, p() * q_);
  for (Index i = 0; i < p(); ++i) {
    for (Index j = 0; j < p(); ++j) c.block(i * q_, j * q_, q_, q_) = block(i, j);
  }
  return c;
}

StructuredPrecision build_structured_precision(const SpdMatrix& w11, const Matrix& s22,
                                               const ScaleMatrix& t) {
  if (s22.rows() != s22.cols()) throw Error(ErrorKind::DimensionMismatch, "S22 must be square");
  auto k = std::make_shared<Matrix>(s22);
  k->diagonal().array() += 1.0;
  return build_structured_precision(w11, std::move(k), t);
}

StructuredPrecision build_structured_precision(const SpdMatrix& w11,
                                               std::shared_ptr<const Matrix> k,
                                               const ScaleMatrix& t) {
  if (t.p() != w11.dim() || t.q() != k->rows()) {
    throw Error(ErrorKind::DimensionMismatch, "scale matrix must be p x q");
  }
  std::vector<Vector> d;
  d.reserve(static_cast<std::size_t>(t.p()));
  for (Index i = 0; i < t.p(); ++i) d.push_back(t.inverse_row(i));
  return StructuredPrecision(w11.factor().inverse(), std::move(k), std::move(d));
}

StructuredFactor::StructuredFactor(Index p, Index q, std::vector<Matrix> blocks)
    : p_(p), q_(q), blocks_(std::move(blocks)) {
  if (static_cast<Index>(blocks_.size()) != p_ * (p_ + 1) / 2) {
    throw Error(ErrorKind::DimensionMismatch, "factor needs p(p+1)/2 blocks");
  }
}

Vector StructuredFactor::solve_lower(const Vector& b) const {
  if (b.size() != p_ * q_) throw Error(ErrorKind::DimensionMismatch, "solve_lower: length must be pq");
  Vector y = b;
  for (Index i = 0; i < p_; ++i) {
    auto yi = y.segment(i * q_, q_);
    for (Index j = 0; j < i; ++j) yi.noalias() -= block(i, j) * y.segment(j * q_, q_);
    block(i, i).triangularView<Eigen::Lower>().solveInPlace(yi);
  }
  return y;
}

Vector StructuredFactor::solve_upper(const Vector& y) const {
  if (y.size() != p_ * q_) throw Error(ErrorKind::DimensionMismatch, "solve_upper: length must be pq");
  Vector x = y;
  for (Index i = p_; i-- > 0;) {
    auto xi = x.segment(i * q_, q_);
    for (Index j = i + 1; j < p_; ++j) xi.noalias() -= block(j, i).transpose() * x.segment(j * q_, q_);
    block(i, i).transpose().triangularView<Eigen::Upper>().solveInPlace(xi);
  }
  return x;
}

Vector StructuredFactor::solve(const Vector& b) const { return solve_upper(solve_lower(b)); }

Matrix StructuredFactor::densify() const {
  Matrix l = Matrix::Zero(p_ * q_, p_ * q_);
  for (Index i = 0; i < p_; ++i) {
    for (Index j = 0; j <= i; ++j) {
      l.block(i * q_, j * q_, q_, q_) = block(i, j);
    }
  }
  return l;
}

namespace {

// Lower Cholesky of a diagonal block in place; failures report the pivot
// position within the whole pq system.
void factor_diagonal_block(Matrix& a, Index block_index, Index q) {
  Eigen::LLT<Eigen::Ref<Matrix>, Eigen::Lower> llt(a);
  bool ok = llt.info() == Eigen::Success;
  if (ok) {
    for (Index k = 0; k < q; ++k) {
      if (!(a(k, k) > 0.0) || !std::isfinite(a(k, k))) {
        ok = false;
        break;
      }
    }
  }
  if (!ok) {
    throw NotPositiveDefiniteError(static_cast<std::size_t>(block_index * q),
                                   "structured precision block " + std::to_string(block_index) +
                                       " is not positive definite");
  }
  a.triangularView<Eigen::StrictlyUpper>().setZero();
}

}  // namespace

StructuredFactor structured_chol(const StructuredPrecision& c) {
  const Index p = c.p();
  const Index q = c.q();
  const Matrix& k = c.k();
  const Matrix& u = c.u();
  auto at = [](Index i, Index j) { return static_cast<std::size_t>(i * (i + 1) / 2 + j); };

  std::vector<Matrix> blocks(static_cast<std::size_t>(p * (p + 1) / 2));

  // First block column.
  Matrix& l00 = blocks[at(0, 0)];
  l00 = u(0, 0) * k;
  l00.diagonal() += c.d()[0];
  factor_diagonal_block(l00, 0, q);
  if (p == 1) return StructuredFactor(p, q, std::move(blocks));

  // P = K L00^{-T}; every L_i0 = u_i0 P.
  Matrix shared = k;
  l00.transpose().triangularView<Eigen::Upper>().solveInPlace<Eigen::OnTheRight>(shared);
  Matrix gram = Matrix::Zero(q, q);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(shared);
  gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();

  for (Index i = 1; i < p; ++i) {
    blocks[at(i, 0)] = u(i, 0) * shared;
    for (Index j = 1; j <= i; ++j) {
      Matrix& w = blocks[at(i, j)];
      w = u(i, j) * k - (u(i, 0) * u(j, 0)) * gram;
      if (i == j) w.diagonal() += c.d()[static_cast<std::size_t>(i)];
    }
  }

  // Remaining columns on the dense trailing blocks.
  for (Index col = 1; col < p; ++col) {
    Matrix& diag = blocks[at(col, col)];
    factor_diagonal_block(diag, col, q);
    const auto lt = diag.transpose().triangularView<Eigen::Upper>();
    for (Index i = col + 1; i < p; ++i) lt.solveInPlace<Eigen::OnTheRight>(blocks[at(i, col)]);
    for (Index i = col + 1; i < p; ++i) {
      const Matrix& li = blocks[at(i, col)];
      for (Index j = col + 1; j < i; ++j) {
        blocks[at(i, j)].noalias() -= li * blocks[at(j, col)].transpose();
      }
      blocks[at(i, i)].selfadjointView<Eigen::Lower>().rankUpdate(li, -1.0);
    }
  }
  return StructuredFactor(p, q, std::move(blocks));
}

}  // namespace bmb
