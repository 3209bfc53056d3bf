#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bmb/matrix.hpp"
#include "bmb/random.hpp"

namespace bmb {

// Hub-structured sparse precision generator settings. Node propensities are
// Beta(beta_a, beta_b); an edge (u, v) appears with probability c * pi_u * pi_v
// (capped at 1), c chosen so the expected edge fraction is edge_density.
struct GraphSpec {
  Index p = 10;
  Index q = 90;
  double beta_a = 0.5;
  double beta_b = 5.0;
  double edge_density = 0.04;
  double weight_lo = 0.3;
  double weight_hi = 1.0;

  void validate() const;
};

struct GroundTruth {
  SpdMatrix w_full;
  Matrix true_blanket;  // the p x q off-diagonal block of w_full
  Index p = 0;

  Index q() const noexcept { return w_full.dim() - p; }
  // Schur complement W22 - W21 W11^{-1} W12.
  Matrix schur_complement() const;
};

// v1 .. v{count}
std::vector<std::string> default_names(Index count);

GroundTruth gen_precision(const GraphSpec& spec, RngStream& rng);

// n columns from N(0, W^{-1}) as L^{-T} z with W = L L^T.
DataMatrix simulate_data(const GroundTruth& truth, Index n, RngStream& rng);

struct BlanketEdge {
  Index query = 0;
  Index other = 0;
  int sign = 0;
};

struct BlanketEstimate {
  Index p = 0;
  Index q = 0;
  double level = 0.0;
  std::vector<BlanketEdge> edges;
};

// Type-7 (linear interpolation) sample quantile of sorted data.
double sorted_quantile(const std::vector<double>& sorted, double prob);

// Equal-tailed interval [q((1-level)/2), q((1+level)/2)] per entry; an edge is
// kept when the interval excludes zero, signed by the sample median.
BlanketEstimate threshold_blanket(const std::vector<Matrix>& samples, double level);

struct ScoreReport {
  double precision = 0.0;
  double recall = 0.0;
  double fscore = 0.0;
  long true_positive = 0;
  long wrong_sign = 0;
  long spurious = 0;
  long missed = 0;
  long inferred = 0;
  long true_edges = 0;
};

// Wrong-sign edges are neither true positives nor correct inferences: they
// count against both precision and recall.
ScoreReport score(const BlanketEstimate& estimate, const Matrix& true_blanket);
ScoreReport score(const BlanketEstimate& estimate, const GroundTruth& truth);

}  // namespace bmb
