#include "bmb/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

namespace bmb {

namespace {

// Unblocked factorization, only used to locate the failing pivot once the
// fast path has rejected the matrix.
std::size_t first_bad_pivot(const Matrix& a, double floor) {
  const Index n = a.rows();
  Matrix l = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    double d = a(j, j) - l.row(j).head(j).squaredNorm();
    if (!(d > floor) || !std::isfinite(d)) return static_cast<std::size_t>(j);
    l(j, j) = std::sqrt(d);
    for (Index i = j + 1; i < n; ++i) {
      l(i, j) = (a(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / l(j, j);
    }
  }
  return static_cast<std::size_t>(n);
}

}  // namespace

CholeskyFactor::CholeskyFactor(Matrix lower) : lower_(std::move(lower)) {}

Matrix CholeskyFactor::reconstruct() const { return lower_ * lower_.transpose(); }

Vector CholeskyFactor::solve(const Vector& b) const {
  if (b.size() != dim()) {
    throw Error(ErrorKind::DimensionMismatch, "right-hand side length " + std::to_string(b.size()) +
                                                  " does not match factor dimension " +
                                                  std::to_string(dim()));
  }
  Vector y = lower_.triangularView<Eigen::Lower>().solve(b);
  return lower_.transpose().triangularView<Eigen::Upper>().solve(y);
}

Matrix CholeskyFactor::solve(const Matrix& b) const {
  if (b.rows() != dim()) {
    throw Error(ErrorKind::DimensionMismatch, "right-hand side rows do not match factor dimension");
  }
  Matrix y = lower_.triangularView<Eigen::Lower>().solve(b);
  return lower_.transpose().triangularView<Eigen::Upper>().solve(y);
}

Vector CholeskyFactor::solve_lower(const Vector& b) const {
  if (b.size() != dim()) throw Error(ErrorKind::DimensionMismatch, "solve_lower");
  return lower_.triangularView<Eigen::Lower>().solve(b);
}

Vector CholeskyFactor::solve_upper(const Vector& b) const {
  if (b.size() != dim()) throw Error(ErrorKind::DimensionMismatch, "solve_upper");
  return lower_.transpose().triangularView<Eigen::Upper>().solve(b);
}

Matrix CholeskyFactor::inverse() const {
  Matrix inv = solve(Matrix(Matrix::Identity(dim(), dim())));
  return 0.5 * (inv + inv.transpose());
}

double CholeskyFactor::log_det() const {
  return 2.0 * lower_.diagonal().array().log().sum();
}

CholeskyFactor cholesky_factor(const Matrix& sym, double rel_pivot_tol) {
  if (sym.rows() != sym.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "Cholesky of a non-square matrix");
  }
  if (sym.rows() == 0) throw Error(ErrorKind::DimensionMismatch, "Cholesky of an empty matrix");
  if (!sym.allFinite()) throw Error(ErrorKind::InvalidParameter, "matrix has non-finite entries");

  const double max_diag = sym.diagonal().cwiseAbs().maxCoeff();
  const double floor = rel_pivot_tol * max_diag;

  Eigen::LLT<Matrix, Eigen::Lower> llt(sym);
  bool ok = llt.info() == Eigen::Success;
  Matrix lower;
  if (ok) {
    lower = llt.matrixL();
    for (Index k = 0; k < lower.rows(); ++k) {
      const double pivot = lower(k, k) * lower(k, k);
      if (!(pivot > floor) || !(lower(k, k) > 0.0)) {
        ok = false;
        break;
      }
    }
  }
  if (!ok) {
    const std::size_t k = first_bad_pivot(sym, floor);
    throw NotPositiveDefiniteError(k, "pivot " + std::to_string(k) + " is not positive (threshold " +
                                          std::to_string(floor) + ")");
  }
  return CholeskyFactor(std::move(lower));
}

SpdMatrix::SpdMatrix(const Matrix& m)
    : values_(m.rows() == m.cols() ? Matrix(0.5 * (m + m.transpose())) : Matrix()),
      factor_(Matrix()) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch, "SpdMatrix requires a non-empty square matrix");
  }
  factor_ = cholesky_factor(values_, kPivotTolerance);
}

SpdMatrix SpdMatrix::identity(Index dim) { return SpdMatrix(Matrix::Identity(dim, dim)); }

SpdMatrix SpdMatrix::inverse() const { return SpdMatrix(factor_.inverse()); }

CholeskyFactor cholesky(const SpdMatrix& m) { return m.factor(); }

Vector chol_solve(const CholeskyFactor& f, const Vector& b) { return f.solve(b); }

DataMatrix::DataMatrix(Matrix values, std::vector<std::string> names)
    : values_(std::move(values)), names_(std::move(names)) {
  if (static_cast<Index>(names_.size()) != values_.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "one name per variable row is required");
  }
  std::unordered_set<std::string> seen;
  for (const auto& name : names_) {
    if (!seen.insert(name).second) throw Error(ErrorKind::DuplicateName, name);
  }
}

Index DataMatrix::index_of(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw Error(ErrorKind::UnknownVariable, name);
  return static_cast<Index>(it - names_.begin());
}

PartitionedCov::PartitionedCov(const Matrix& full, Index p, double n, std::vector<std::string> names)
    : p_(p), q_(full.rows() - p), n_(n), names_(std::move(names)) {
  if (full.rows() != full.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "scatter matrix must be square");
  }
  if (p < 1 || q_ < 1) {
    throw Error(ErrorKind::DimensionMismatch, "partition needs p >= 1 and q >= 1");
  }
  if (!(n > 0.0)) throw Error(ErrorKind::InvalidParameter, "degrees of freedom must be positive");
  if (!names_.empty() && static_cast<Index>(names_.size()) != full.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "one name per variable is required");
  }
  Matrix sym = 0.5 * (full + full.transpose());
  s11_ = sym.topLeftCorner(p_, p_);
  s12_ = sym.topRightCorner(p_, q_);
  s22_ = sym.bottomRightCorner(q_, q_);
}

Matrix PartitionedCov::full() const {
  Matrix s(p_ + q_, p_ + q_);
  s.topLeftCorner(p_, p_) = s11_;
  s.topRightCorner(p_, q_) = s12_;
  s.bottomLeftCorner(q_, p_) = s12_.transpose();
  s.bottomRightCorner(q_, q_) = s22_;
  return s;
}

std::vector<std::string> PartitionedCov::query_names() const {
  if (names_.empty()) return {};
  return {names_.begin(), names_.begin() + p_};
}

std::vector<std::string> PartitionedCov::other_names() const {
  if (names_.empty()) return {};
  return {names_.begin() + p_, names_.end()};
}

PartitionedCov partition_scatter(const DataMatrix& x, const std::vector<std::string>& query,
                                 bool center) {
  if (query.empty()) throw Error(ErrorKind::EmptyQuery, "no query variables given");

  std::vector<Index> order;
  std::unordered_set<Index> chosen;
  for (const auto& name : query) {
    const Index idx = x.index_of(name);
    if (!chosen.insert(idx).second) throw Error(ErrorKind::DuplicateName, name);
    order.push_back(idx);
  }
  if (static_cast<Index>(order.size()) >= x.variables()) {
    throw Error(ErrorKind::QueryIsEverything, "query must leave at least one other variable");
  }
  for (Index i = 0; i < x.variables(); ++i) {
    if (!chosen.count(i)) order.push_back(i);
  }

  Matrix rows(x.variables(), x.observations());
  std::vector<std::string> names;
  names.reserve(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    rows.row(static_cast<Index>(k)) = x.values().row(order[k]);
    names.push_back(x.names()[static_cast<std::size_t>(order[k])]);
  }
  double n = static_cast<double>(x.observations());
  if (center) {
    if (x.observations() < 2) {
      throw Error(ErrorKind::InvalidParameter, "centering needs at least two observations");
    }
    Vector means = rows.rowwise().mean();
    rows.colwise() -= means;
    n -= 1.0;
  }
  Matrix s = Matrix::Zero(rows.rows(), rows.rows());
  s.selfadjointView<Eigen::Lower>().rankUpdate(rows);
  s = s.selfadjointView<Eigen::Lower>();
  return PartitionedCov(s, static_cast<Index>(query.size()), n, std::move(names));
}

double relative_frobenius(const Matrix& a, const Matrix& reference) {
  const double denom = reference.norm();
  const double diff = (a - reference).norm();
  return denom > 0.0 ? diff / denom : diff;
}

}  // namespace bmb
