#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "bmb/matrix.hpp"
#include "bmb/random.hpp"
#include "bmb/sampler.hpp"

namespace bmb {

enum class VariableKind { Continuous, Ordinal };

// Observed values, variables in rows. NaN marks a missing cell. Ordinal cells
// must hold integer codes. Every variable needs two distinct observed values.
class MixedDataTable {
 public:
  MixedDataTable(Matrix values, std::vector<std::string> names, std::vector<VariableKind> kinds);

  const Matrix& values() const noexcept { return values_; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::vector<VariableKind>& kinds() const noexcept { return kinds_; }
  Index variables() const noexcept { return values_.rows(); }
  Index observations() const noexcept { return values_.cols(); }
  bool missing(Index i, Index j) const { return std::isnan(values_(i, j)); }

 private:
  Matrix values_;
  std::vector<std::string> names_;
  std::vector<VariableKind> kinds_;
};

// Within-variable order structure of the observed cells. Cells of one
// variable are grouped into levels of equal value, sorted ascending; a cell is
// bounded below by the latents of all strictly smaller levels and above by
// those of all strictly larger levels. Ties impose nothing on each other.
class RankBounds {
 public:
  explicit RankBounds(const MixedDataTable& y);

  Index variables() const noexcept { return static_cast<Index>(levels_.size()); }
  Index observations() const noexcept { return n_; }

  // Level index of a cell, or -1 when missing.
  int level_of(Index i, Index j) const { return level_of_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
  // Observation indices per level, ascending by value.
  const std::vector<std::vector<Index>>& levels(Index i) const { return levels_[static_cast<std::size_t>(i)]; }

  std::vector<Index> lower_neighbors(Index i, Index j) const;
  std::vector<Index> upper_neighbors(Index i, Index j) const;

  // (max over lower neighbors, min over upper neighbors) of the current latents.
  std::pair<double, double> interval(const Matrix& x, Index i, Index j) const;

  // True when every observed cell lies strictly inside its interval.
  bool satisfied(const Matrix& x) const;

 private:
  Index n_ = 0;
  std::vector<std::vector<std::vector<Index>>> levels_;
  std::vector<std::vector<int>> level_of_;
};

RankBounds compute_bounds(const MixedDataTable& y);

// x_ij = Phi^{-1}(midrank_ij / (n_i + 1)) over the n_i observed cells; missing cells 0.
Matrix init_latent(const MixedDataTable& y);

// One systematic sweep over variables. Each variable's cells are redrawn
// from the Gaussian conditional given the other rows, truncated to the rank
// bounds; levels are visited in ascending order so bounds see fresh values.
void sample_latent(Matrix& x, const SpdMatrix& sigma, const RankBounds& bounds, RngStream& rng);

struct CopulaConfig {
  ChainConfig chain;
  long inner_sweeps = 1;
  // Inverse-Wishart prior degrees of freedom; NaN selects r + 2.
  double iw_df = std::numeric_limits<double>::quiet_NaN();

  double prior_df(Index r) const { return std::isnan(iw_df) ? static_cast<double>(r) + 2.0 : iw_df; }
  void validate(Index r) const;
};

// Draw from inverse-Wishart(df + n, I + X X^T) as the inverse of a Wishart draw.
SpdMatrix sample_sigma_iw(const Matrix& x, const CopulaConfig& cfg, RngStream& rng);

// sample_sigma_iw followed by rescaling to unit diagonal; the rows of x are
// divided by the same standard deviations.
SpdMatrix sample_sigma_full(Matrix& x, const CopulaConfig& cfg, RngStream& rng);

// Outer loop: latent sweep, Sigma draw, then inner_sweeps blanket sweeps on
// S = X X^T with n equal to the observation count. Runs
// burn_in + samples * thin outer iterations.
ChainOutput run_copula_chain(const MixedDataTable& y, const std::vector<std::string>& query,
                             const CopulaConfig& cfg, const ProgressFn& progress = {});

}  // namespace bmb
