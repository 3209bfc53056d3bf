#include "bmb/synthbench.hpp"

#include <algorithm>
#include <cmath>

namespace bmb {

void GraphSpec::validate() const {
  if (p < 1 || q < 1) throw Error(ErrorKind::InvalidParameter, "p and q must be >= 1");
  if (!(beta_a > 0.0) || !(beta_b > 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "beta parameters must be positive");
  }
  if (!(edge_density >= 0.0) || !(edge_density < 1.0)) {
    throw Error(ErrorKind::InvalidParameter, "edge density must lie in [0, 1)");
  }
  if (!(weight_lo > 0.0) || !(weight_lo < weight_hi)) {
    throw Error(ErrorKind::InvalidParameter, "need 0 < weight_lo < weight_hi");
  }
}

Matrix GroundTruth::schur_complement() const {
  const Index r = w_full.dim();
  const Matrix& w = w_full.matrix();
  const Matrix w12 = w.topRightCorner(p, r - p);
  const SpdMatrix w11(w.topLeftCorner(p, p));
  return w.bottomRightCorner(r - p, r - p) - w12.transpose() * w11.factor().solve(w12);
}

std::vector<std::string> default_names(Index count) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(count));
  for (Index i = 0; i < count; ++i) names.push_back("v" + std::to_string(i + 1));
  return names;
}

namespace {

// Solve sum_{u<v} min(1, c pi_u pi_v) = target by bisection on c.
double edge_scale(const std::vector<double>& pi, double target) {
  auto expected = [&](double c) {
    double total = 0.0;
    for (std::size_t u = 0; u < pi.size(); ++u)
      for (std::size_t v = u + 1; v < pi.size(); ++v) total += std::min(1.0, c * pi[u] * pi[v]);
    return total;
  };
  double lo = 0.0, hi = 1.0;
  while (expected(hi) < target) {
    hi *= 2.0;
    if (hi > 1e300) break;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (expected(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

GroundTruth gen_precision(const GraphSpec& spec, RngStream& rng) {
  spec.validate();
  const Index r = spec.p + spec.q;
  std::vector<double> pi(static_cast<std::size_t>(r));
  for (auto& x : pi) x = rng.beta(spec.beta_a, spec.beta_b);

  const double pairs = 0.5 * static_cast<double>(r) * static_cast<double>(r - 1);
  const double c = spec.edge_density > 0.0 ? edge_scale(pi, spec.edge_density * pairs) : 0.0;

  Matrix w = Matrix::Zero(r, r);
  for (Index u = 0; u < r; ++u) {
    for (Index v = u + 1; v < r; ++v) {
      const double prob = std::min(1.0, c * pi[u] * pi[v]);
      // Draw every variate regardless so the stream layout does not depend on c.
      const double coin = rng.uniform();
      const double magnitude = spec.weight_lo + (spec.weight_hi - spec.weight_lo) * rng.uniform();
      const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
      if (coin < prob) {
        w(u, v) = sign * magnitude;
        w(v, u) = w(u, v);
      }
    }
  }
  const double min_eig = Eigen::SelfAdjointEigenSolver<Matrix>(w, Eigen::EigenvaluesOnly).eigenvalues()(0);
  if (min_eig <= 0.0) w.diagonal().array() += std::abs(min_eig) + 0.1;

  GroundTruth truth{SpdMatrix(w), Matrix(), spec.p};
  truth.true_blanket = truth.w_full.matrix().topRightCorner(spec.p, spec.q);
  return truth;
}

DataMatrix simulate_data(const GroundTruth& truth, Index n, RngStream& rng) {
  if (n < 1) throw Error(ErrorKind::InvalidParameter, "n must be >= 1");
  const Index r = truth.w_full.dim();
  Matrix z(r, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < r; ++i) z(i, j) = rng.normal();
  const Matrix& l = truth.w_full.factor().lower();
  l.transpose().triangularView<Eigen::Upper>().solveInPlace(z);
  return DataMatrix(std::move(z), default_names(r));
}

double sorted_quantile(const std::vector<double>& sorted, double prob) {
  if (sorted.empty()) throw Error(ErrorKind::InsufficientSamples, "no samples");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

BlanketEstimate threshold_blanket(const std::vector<Matrix>& samples, double level) {
  if (samples.size() < 2) throw Error(ErrorKind::InsufficientSamples, "need at least 2 samples");
  if (!(level > 0.0) || !(level < 1.0)) {
    throw Error(ErrorKind::InvalidParameter, "credible level must lie in (0, 1)");
  }
  const Index p = samples.front().rows(), q = samples.front().cols();
  for (const auto& m : samples) {
    if (m.rows() != p || m.cols() != q) throw Error(ErrorKind::DimensionMismatch, "sample shapes differ");
  }
  BlanketEstimate est{p, q, level, {}};
  std::vector<double> column(samples.size());
  for (Index i = 0; i < p; ++i) {
    for (Index j = 0; j < q; ++j) {
      for (std::size_t k = 0; k < samples.size(); ++k) column[k] = samples[k](i, j);
      std::sort(column.begin(), column.end());
      const double lo = sorted_quantile(column, 0.5 * (1.0 - level));
      const double hi = sorted_quantile(column, 0.5 * (1.0 + level));
      if (lo > 0.0 || hi < 0.0) {
        const double median = sorted_quantile(column, 0.5);
        est.edges.push_back({i, j, median > 0.0 ? 1 : -1});
      }
    }
  }
  return est;
}

ScoreReport score(const BlanketEstimate& estimate, const Matrix& true_blanket) {
  if (estimate.p != true_blanket.rows() || estimate.q != true_blanket.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "estimate and truth shapes differ");
  }
  ScoreReport r;
  r.true_edges = static_cast<long>((true_blanket.array() != 0.0).count());
  r.inferred = static_cast<long>(estimate.edges.size());
  for (const auto& e : estimate.edges) {
    if (e.query < 0 || e.query >= estimate.p || e.other < 0 || e.other >= estimate.q) {
      throw Error(ErrorKind::DimensionMismatch, "edge index out of range");
    }
    const double w = true_blanket(e.query, e.other);
    if (w == 0.0) {
      ++r.spurious;
    } else if ((w > 0.0) == (e.sign > 0)) {
      ++r.true_positive;
    } else {
      ++r.wrong_sign;
    }
  }
  r.missed = r.true_edges - r.true_positive;
  r.precision = r.inferred > 0 ? static_cast<double>(r.true_positive) / r.inferred : 0.0;
  r.recall = r.true_edges > 0 ? static_cast<double>(r.true_positive) / r.true_edges : 0.0;
  r.fscore = r.precision + r.recall > 0.0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
  return r;
}

ScoreReport score(const BlanketEstimate& estimate, const GroundTruth& truth) {
  return score(estimate, truth.true_blanket);
}

}  // namespace bmb
