#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bmb/matrix.hpp"
#include "bmb/random.hpp"

namespace bmbtest {

using bmb::Matrix;
using bmb::Vector;

inline Matrix random_gaussian(bmb::RngStream& rng, bmb::Index rows, bmb::Index cols) {
  Matrix g(rows, cols);
  for (bmb::Index j = 0; j < cols; ++j)
    for (bmb::Index i = 0; i < rows; ++i) g(i, j) = rng.normal();
  return g;
}

// G G^T + I
inline Matrix random_spd(bmb::RngStream& rng, bmb::Index dim) {
  Matrix g = random_gaussian(rng, dim, dim);
  Matrix a = g * g.transpose();
  a.diagonal().array() += 1.0;
  return a;
}

struct Moments {
  double mean = 0.0;
  double var = 0.0;
  double se = 0.0;
};

inline Moments moments(const std::vector<double>& xs) {
  Moments m;
  const double n = static_cast<double>(xs.size());
  for (double x : xs) m.mean += x;
  m.mean /= n;
  for (double x : xs) m.var += (x - m.mean) * (x - m.mean);
  m.var /= (n - 1.0);
  m.se = std::sqrt(m.var / n);
  return m;
}

// Standard error of the sample variance, from the fourth central moment.
inline double variance_se(const std::vector<double>& xs) {
  const Moments m = moments(xs);
  const double n = static_cast<double>(xs.size());
  double m4 = 0.0;
  for (double x : xs) m4 += std::pow(x - m.mean, 4);
  m4 /= n;
  return std::sqrt(std::max(m4 - m.var * m.var, 0.0) / n);
}

// One-sample Kolmogorov-Smirnov statistic.
inline double ks_distance(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max(d, std::max(f - i / n, (i + 1) / n - f));
  }
  return d;
}

// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  return d;
}

}  // namespace bmbtest

namespace bmbtest {

// CDF of x^(-lambda-1) exp(-(a x + b/x)/2) by quadrature in u = log x.
class GigQuadrature {
 public:
  GigQuadrature(double lambda, double a, double b) : lambda_(lambda), a_(a), b_(b) {
    const double y = (-lambda + std::sqrt(lambda * lambda + a * b)) / a;
    u_mode_ = std::log(y);
    shift_ = log_integrand(u_mode_);
    using boost::math::quadrature::gauss_kronrod;
    const auto f = [this](double u) { return integrand(u); };
    norm_ = gauss_kronrod<double, 61>::integrate(f, -std::numeric_limits<double>::infinity(),
                                                 u_mode_, 15, 1e-13) +
            gauss_kronrod<double, 61>::integrate(f, u_mode_, std::numeric_limits<double>::infinity(),
                                                 15, 1e-13);
  }

  double mean() const {
    using boost::math::quadrature::gauss_kronrod;
    const auto f = [this](double u) { return std::exp(u + log_integrand(u) - shift_); };
    return (gauss_kronrod<double, 61>::integrate(f, -std::numeric_limits<double>::infinity(), u_mode_,
                                                 15, 1e-13) +
            gauss_kronrod<double, 61>::integrate(f, u_mode_, std::numeric_limits<double>::infinity(),
                                                 15, 1e-13)) /
           norm_;
  }

  // KS distance of the sample to this law; CDF accumulated between sorted draws.
  double ks(std::vector<double> xs) const {
    std::sort(xs.begin(), xs.end());
    using boost::math::quadrature::gauss;
    using boost::math::quadrature::gauss_kronrod;
    const auto f = [this](double u) { return integrand(u); };
    double cdf = gauss_kronrod<double, 61>::integrate(f, -std::numeric_limits<double>::infinity(),
                                                      std::log(xs.front()), 15, 1e-13) /
                 norm_;
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i > 0) cdf += gauss<double, 20>::integrate(f, std::log(xs[i - 1]), std::log(xs[i])) / norm_;
      d = std::max(d, std::max(cdf - i / n, (i + 1) / n - cdf));
    }
    return d;
  }

 private:
  double log_integrand(double u) const {
    return -lambda_ * u - 0.5 * (a_ * std::exp(u) + b_ * std::exp(-u));
  }
  double integrand(double u) const { return std::exp(log_integrand(u) - shift_); }

  double lambda_, a_, b_;
  double u_mode_ = 0.0;
  double shift_ = 0.0;
  double norm_ = 1.0;
};

}  // namespace bmbtest
