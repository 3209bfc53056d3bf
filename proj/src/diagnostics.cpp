#include "bmb/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "bmb/error.hpp"

namespace bmb {

namespace {

constexpr std::size_t kMinEssLength = 10;
constexpr std::size_t kMinWindow = 10;

// Centered copy plus the lag-0 sum of squares.
struct Centered {
  std::vector<double> x;
  double c0 = 0.0;
};

Centered center(const std::vector<double>& v) {
  Centered out;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  out.x.reserve(v.size());
  for (double x : v) out.x.push_back(x - mean);
  for (double x : out.x) out.c0 += x * x;
  // A series whose spread is at rounding level of its mean is constant.
  const double scale = std::max(std::abs(mean), 1e-300);
  if (!(out.c0 > 0.0) || std::sqrt(out.c0 / v.size()) <= 1e-14 * scale) {
    throw Error(ErrorKind::ConstantSeries, "series has zero variance");
  }
  return out;
}

double lag_sum(const std::vector<double>& x, std::size_t k) {
  double s = 0.0;
  for (std::size_t t = k; t < x.size(); ++t) s += x[t] * x[t - k];
  return s;
}

double ess_of(const std::vector<double>& v) {
  const Centered c = center(v);
  const std::size_t n = v.size();
  double tau = -1.0;
  for (std::size_t m = 0; 2 * m + 1 < n; ++m) {
    const double pair = (lag_sum(c.x, 2 * m) + lag_sum(c.x, 2 * m + 1)) / c.c0;
    if (!(pair > 0.0)) break;
    tau += 2.0 * pair;
  }
  const double nd = static_cast<double>(n);
  if (!(tau > 0.0)) return nd;
  return std::min(nd / tau, nd);
}

}  // namespace

ChainSeries::ChainSeries(std::vector<double> values, std::string label)
    : values_(std::move(values)), label_(std::move(label)) {
  if (values_.size() < 2) throw Error(ErrorKind::SeriesTooShort, "series needs at least 2 values");
  for (double x : values_) {
    if (!std::isfinite(x)) throw Error(ErrorKind::InvalidParameter, "series has a non-finite value");
  }
}

std::vector<double> autocorrelation(const ChainSeries& s, std::size_t max_lag) {
  if (max_lag >= s.size()) {
    throw Error(ErrorKind::LagTooLarge, "max_lag " + std::to_string(max_lag) +
                                            " must be below the series length " +
                                            std::to_string(s.size()));
  }
  const Centered c = center(s.values());
  std::vector<double> rho(max_lag + 1);
  rho[0] = 1.0;
  for (std::size_t k = 1; k <= max_lag; ++k) rho[k] = lag_sum(c.x, k) / c.c0;
  return rho;
}

double effective_sample_size(const ChainSeries& s) {
  if (s.size() < kMinEssLength) {
    throw Error(ErrorKind::SeriesTooShort, "ESS needs at least 10 values");
  }
  return ess_of(s.values());
}

double geweke_z(const ChainSeries& s, double frac_a, double frac_b) {
  if (!(frac_a > 0.0) || !(frac_b > 0.0) || frac_a + frac_b > 1.0) {
    throw Error(ErrorKind::InvalidParameter, "Geweke fractions must be positive and sum to <= 1");
  }
  const std::size_t n = s.size();
  const auto na = static_cast<std::size_t>(std::floor(frac_a * n));
  const auto nb = static_cast<std::size_t>(std::floor(frac_b * n));
  if (na < kMinWindow || nb < kMinWindow) {
    throw Error(ErrorKind::SeriesTooShort, "Geweke windows need at least 10 values each");
  }
  const auto& v = s.values();
  const std::vector<double> a(v.begin(), v.begin() + na);
  const std::vector<double> b(v.end() - nb, v.end());

  auto mean_and_var = [](const std::vector<double>& w) {
    double m = 0.0;
    for (double x : w) m += x;
    m /= static_cast<double>(w.size());
    double var = 0.0;
    for (double x : w) var += (x - m) * (x - m);
    var /= static_cast<double>(w.size() - 1);
    return std::pair{m, var};
  };
  // Variance of a window mean; a flat window contributes nothing.
  auto mean_var = [&](const std::vector<double>& w, double var) {
    try {
      return var / ess_of(w);
    } catch (const Error&) {
      return 0.0;
    }
  };
  const auto [ma, va] = mean_and_var(a);
  const auto [mb, vb] = mean_and_var(b);
  const double se2 = mean_var(a, va) + mean_var(b, vb);
  if (!(se2 > 0.0)) throw Error(ErrorKind::ConstantSeries, "both Geweke windows are constant");
  return (ma - mb) / std::sqrt(se2);
}

}  // namespace bmb
