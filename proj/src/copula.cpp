#include "bmb/copula.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace bmb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

MixedDataTable::MixedDataTable(Matrix values, std::vector<std::string> names,
                               std::vector<VariableKind> kinds)
    : values_(std::move(values)), names_(std::move(names)), kinds_(std::move(kinds)) {
  const Index r = values_.rows();
  if (r < 1 || values_.cols() < 1) throw Error(ErrorKind::InvalidParameter, "table must be non-empty");
  if (static_cast<Index>(names_.size()) != r || static_cast<Index>(kinds_.size()) != r) {
    throw Error(ErrorKind::DimensionMismatch, "names and kinds must match the variable count");
  }
  if (std::set<std::string>(names_.begin(), names_.end()).size() != names_.size()) {
    throw Error(ErrorKind::DuplicateName, "variable names must be unique");
  }
  for (Index i = 0; i < r; ++i) {
    std::set<double> distinct;
    for (Index j = 0; j < values_.cols(); ++j) {
      const double v = values_(i, j);
      if (std::isnan(v)) continue;
      if (!std::isfinite(v)) throw Error(ErrorKind::InvalidParameter, "infinite value in " + names_[i]);
      if (kinds_[i] == VariableKind::Ordinal && v != std::round(v)) {
        throw Error(ErrorKind::InvalidParameter, "ordinal variable " + names_[i] + " has a non-integer value");
      }
      distinct.insert(v);
      if (distinct.size() > 1) break;
    }
    if (distinct.size() < 2) {
      throw Error(ErrorKind::ConstantVariable, "variable " + names_[i] + " has fewer than two distinct observed values");
    }
  }
}

RankBounds::RankBounds(const MixedDataTable& y) : n_(y.observations()) {
  const Index r = y.variables();
  levels_.resize(static_cast<std::size_t>(r));
  level_of_.assign(static_cast<std::size_t>(r), std::vector<int>(static_cast<std::size_t>(n_), -1));
  for (Index i = 0; i < r; ++i) {
    std::map<double, std::vector<Index>> groups;
    for (Index j = 0; j < n_; ++j) {
      if (!y.missing(i, j)) groups[y.values()(i, j)].push_back(j);
    }
    auto& lv = levels_[static_cast<std::size_t>(i)];
    for (auto& [value, cells] : groups) {
      for (Index j : cells) level_of_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = static_cast<int>(lv.size());
      lv.push_back(std::move(cells));
    }
  }
}

std::vector<Index> RankBounds::lower_neighbors(Index i, Index j) const {
  std::vector<Index> out;
  const int l = level_of(i, j);
  for (int k = 0; k < l; ++k) {
    const auto& cells = levels(i)[static_cast<std::size_t>(k)];
    out.insert(out.end(), cells.begin(), cells.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Index> RankBounds::upper_neighbors(Index i, Index j) const {
  std::vector<Index> out;
  const int l = level_of(i, j);
  if (l < 0) return out;
  const auto& lv = levels(i);
  for (std::size_t k = static_cast<std::size_t>(l) + 1; k < lv.size(); ++k) {
    out.insert(out.end(), lv[k].begin(), lv[k].end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::pair<double, double> RankBounds::interval(const Matrix& x, Index i, Index j) const {
  double lo = -kInf, hi = kInf;
  for (Index k : lower_neighbors(i, j)) lo = std::max(lo, x(i, k));
  for (Index k : upper_neighbors(i, j)) hi = std::min(hi, x(i, k));
  return {lo, hi};
}

bool RankBounds::satisfied(const Matrix& x) const {
  for (Index i = 0; i < variables(); ++i) {
    const auto& lv = levels(i);
    double prev_max = -kInf;
    for (const auto& cells : lv) {
      double lo = kInf, hi = -kInf;
      for (Index j : cells) {
        lo = std::min(lo, x(i, j));
        hi = std::max(hi, x(i, j));
      }
      if (!(lo > prev_max)) return false;
      prev_max = hi;
    }
  }
  return true;
}

RankBounds compute_bounds(const MixedDataTable& y) { return RankBounds(y); }

Matrix init_latent(const MixedDataTable& y) {
  const RankBounds bounds(y);
  Matrix x = Matrix::Zero(y.variables(), y.observations());
  for (Index i = 0; i < y.variables(); ++i) {
    const auto& lv = bounds.levels(i);
    double observed = 0.0;
    for (const auto& cells : lv) observed += static_cast<double>(cells.size());
    double below = 0.0;
    for (const auto& cells : lv) {
      const double size = static_cast<double>(cells.size());
      const double midrank = below + 0.5 * (size + 1.0);
      const double value = normal_quantile(midrank / (observed + 1.0));
      for (Index j : cells) x(i, j) = value;
      below += size;
    }
  }
  return x;
}

void sample_latent(Matrix& x, const SpdMatrix& sigma, const RankBounds& bounds, RngStream& rng) {
  const Index r = x.rows(), n = x.cols();
  if (sigma.dim() != r || bounds.variables() != r || bounds.observations() != n) {
    throw Error(ErrorKind::DimensionMismatch, "latent matrix, Sigma and bounds disagree");
  }
  const Matrix omega = sigma.inverse().matrix();
  for (Index i = 0; i < r; ++i) {
    const double omega_ii = omega(i, i);
    const double sd = std::sqrt(1.0 / omega_ii);
    // Conditional mean -(Omega_{i,-i} X_{-i}) / Omega_ii.
    Vector mean = -(omega.row(i) * x).transpose() / omega_ii;
    mean += x.row(i).transpose();

    const auto& lv = bounds.levels(i);
    std::vector<char> observed(static_cast<std::size_t>(n), 0);
    for (std::size_t l = 0; l < lv.size(); ++l) {
      double lo = -kInf, hi = kInf;
      if (l > 0) {
        for (Index k : lv[l - 1]) lo = std::max(lo, x(i, k));
      }
      if (l + 1 < lv.size()) {
        for (Index k : lv[l + 1]) hi = std::min(hi, x(i, k));
      }
      for (Index j : lv[l]) {
        x(i, j) = sample_truncated_normal(rng, mean(j), sd, lo, hi);
        observed[static_cast<std::size_t>(j)] = 1;
      }
    }
    for (Index j = 0; j < n; ++j) {
      if (!observed[static_cast<std::size_t>(j)]) x(i, j) = mean(j) + sd * rng.normal();
    }
  }
}

void CopulaConfig::validate(Index r) const {
  chain.validate();
  if (inner_sweeps < 1) throw Error(ErrorKind::InvalidParameter, "inner_sweeps must be >= 1");
  if (!(prior_df(r) > static_cast<double>(r) - 1.0)) {
    throw Error(ErrorKind::InvalidDegreesOfFreedom, "inverse-Wishart df must exceed r - 1");
  }
}

SpdMatrix sample_sigma_iw(const Matrix& x, const CopulaConfig& cfg, RngStream& rng) {
  const Index r = x.rows();
  Matrix post = x * x.transpose();
  post.diagonal().array() += 1.0;
  const double df = cfg.prior_df(r) + static_cast<double>(x.cols());
  const Matrix precision = sample_wishart_inverse_scale(rng, df, cholesky_factor(post));
  return SpdMatrix(precision).inverse();
}

SpdMatrix sample_sigma_full(Matrix& x, const CopulaConfig& cfg, RngStream& rng) {
  const SpdMatrix sigma = sample_sigma_iw(x, cfg, rng);
  const Vector sd = sigma.matrix().diagonal().cwiseSqrt();
  const Vector inv_sd = sd.cwiseInverse();
  x = inv_sd.asDiagonal() * x;
  Matrix corr = inv_sd.asDiagonal() * sigma.matrix() * inv_sd.asDiagonal();
  corr.diagonal().setOnes();
  return SpdMatrix(corr);
}

ChainOutput run_copula_chain(const MixedDataTable& y, const std::vector<std::string>& query,
                             const CopulaConfig& cfg, const ProgressFn& progress) {
  cfg.validate(y.variables());
  const RankBounds bounds(y);
  Matrix x = init_latent(y);
  RngStream rng(cfg.chain.seed);

  // Fix the partition layout once; S is rebuilt from the latents each outer step.
  const PartitionedCov layout = partition_scatter(DataMatrix(Matrix::Zero(y.variables(), 1), y.names()), query, false);
  std::vector<Index> order;
  for (const auto& name : layout.names()) {
    order.push_back(static_cast<Index>(std::find(y.names().begin(), y.names().end(), name) - y.names().begin()));
  }
  const Index p = layout.p(), q = layout.q(), r = y.variables();
  const double n = static_cast<double>(y.observations());

  SpdMatrix sigma = SpdMatrix::identity(r);
  BlanketState state = BlanketState::initial(p, q);
  ChainOutput out;
  out.w12_samples.reserve(static_cast<std::size_t>(cfg.chain.samples));
  out.w11_samples.reserve(static_cast<std::size_t>(cfg.chain.samples));

  const long total = cfg.chain.burn_in + cfg.chain.samples * cfg.chain.thin;
  Matrix reordered(r, y.observations());
  for (long it = 0; it < total; ++it) {
    try {
      sample_latent(x, sigma, bounds, rng);
      sigma = sample_sigma_full(x, cfg, rng);
      for (Index k = 0; k < r; ++k) reordered.row(k) = x.row(order[static_cast<std::size_t>(k)]);
      const PartitionedCov s(reordered * reordered.transpose(), p, n, layout.names());
      GibbsKernel kernel(s, cfg.chain);
      for (long k = 0; k < cfg.inner_sweeps; ++k) state = kernel.sweep(state, rng);
      out.mh_corrected_count += kernel.mh_corrected_count();
      const PhaseTimes& t = kernel.times();
      out.wall.scales += t.scales;
      out.wall.w12 += t.w12;
      out.wall.w11 += t.w11;
      out.wall.total += t.total;
    } catch (const Error& e) {
      throw Error(ErrorKind::SamplerFailure, "outer iteration " + std::to_string(it) + " failed: " + e.what());
    }
    const long kept = it - cfg.chain.burn_in + 1;
    if (kept > 0 && kept % cfg.chain.thin == 0) {
      out.w12_samples.push_back(state.w12);
      out.w11_samples.push_back(state.w11.matrix());
    }
    if (progress && (it + 1) % 100 == 0) progress(it + 1, total);
  }
  out.sweeps = total * cfg.inner_sweeps;
  return out;
}

}  // namespace bmb
