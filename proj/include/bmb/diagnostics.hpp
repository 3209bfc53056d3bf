#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace bmb {

// One scalar quantity traced across the stored samples of a chain.
class ChainSeries {
 public:
  explicit ChainSeries(std::vector<double> values, std::string label = {});

  const std::vector<double>& values() const noexcept { return values_; }
  const std::string& label() const noexcept { return label_; }
  std::size_t size() const noexcept { return values_.size(); }

 private:
  std::vector<double> values_;
  std::string label_;
};

// Sample autocorrelation rho(0..max_lag), normalized by the lag-0 sum (biased form).
std::vector<double> autocorrelation(const ChainSeries& s, std::size_t max_lag);

// Geyer initial positive sequence estimate, capped at the series length.
double effective_sample_size(const ChainSeries& s);

// Difference of the means of the first frac_a and last frac_b of the series
// over its standard error. Window variances are s^2 / ESS of each window.
double geweke_z(const ChainSeries& s, double frac_a = 0.1, double frac_b = 0.5);

}  // namespace bmb
