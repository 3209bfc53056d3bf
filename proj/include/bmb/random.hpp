#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "bmb/matrix.hpp"

namespace bmb {

// Seedable random stream. Same seed, same build: bit-identical draws.
// Single owner; parallel work takes independent streams from split().
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() { return engine_(); }
  // Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  double exponential();
  // Gamma with the given shape and unit scale.
  double gamma(double shape);
  double chi_square(double df);
  double beta(double a, double b);

  // k streams whose seeds are distinct deterministic functions of seed().
  std::vector<RngStream> split(std::size_t k) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::optional<double> spare_normal_;
};

std::uint64_t splitmix64(std::uint64_t x);

Vector standard_normal_vector(RngStream& rng, Index n);

// Wishart(df, scale) through the Bartlett decomposition L A A^T L^T.
SpdMatrix sample_wishart(RngStream& rng, double df, const SpdMatrix& scale);
// Wishart(df, P^{-1}) given the Cholesky factor of the inverse scale P.
Matrix sample_wishart_inverse_scale(RngStream& rng, double df, const CholeskyFactor& inverse_scale);

// Inverse Gaussian IG(mu, shape) by the Michael-Schucany-Haas transform.
double sample_inverse_gaussian(RngStream& rng, double mu, double shape);

// Scalar density proportional to x^(-lambda-1) exp(-(a x + b / x) / 2).
struct GigParams {
  GigParams(double lambda, double a, double b);

  double lambda;
  double a;
  double b;
};

double sample_gig(RngStream& rng, const GigParams& params);
double gig_log_density_unnorm(const GigParams& params, double x);

// N(mu, sigma^2) restricted to (lo, hi); lo may be -inf and hi +inf.
double sample_truncated_normal(RngStream& rng, double mu, double sigma, double lo, double hi);

double normal_cdf(double x);
double normal_quantile(double u);

// Matrix GIG with density det(M)^(-lambda-1) exp tr(-(A M + B M^{-1}) / 2).
//
// Draws use the Wishart random continued fraction. With shape
// k = lambda - (dim-1)/2 the fraction needs k > (dim-1)/2 and then requires B
// positive definite (A may be semi-definite). For lambda < 0 the inverse is
// drawn instead, which requires A positive definite. Orders in [0, dim-1]
// are not supported.
class MgigParams {
 public:
  static constexpr double kRegularization = 1e-12;

  MgigParams(double lambda, const Matrix& a, const Matrix& b);

  double lambda() const noexcept { return lambda_; }
  const Matrix& a() const noexcept { return a_; }
  const Matrix& b() const noexcept { return b_; }
  Index dim() const noexcept { return a_.rows(); }
  // True when the draw goes through the inverse matrix.
  bool uses_inverse() const noexcept { return inverted_; }

  // Factors of the (regularized) coefficient matrices.
  const CholeskyFactor& a_factor() const noexcept { return a_factor_; }
  const CholeskyFactor& b_factor() const noexcept { return b_factor_; }

  double log_density_unnorm(const Matrix& m) const;

 private:
  double lambda_;
  Matrix a_;
  Matrix b_;
  bool inverted_;
  CholeskyFactor a_factor_;
  CholeskyFactor b_factor_;
};

struct MgigDraw {
  SpdMatrix value;
  int depth = 0;              // continued-fraction levels evaluated
  bool mh_corrected = false;  // fraction hit max_iter; one MH step applied
  bool mh_accepted = false;
};

// `current` is the chain state used as the MH starting point when the fraction
// does not converge; without it the last fraction iterate is used.
MgigDraw sample_mgig(RngStream& rng, const MgigParams& params, double tol = 1e-9,
                     int max_iter = 100, const Matrix* current = nullptr);

}  // namespace bmb
