#include "bmb/random.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace bmb {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

double RngStream::uniform() {
  // 53 random bits, shifted half a step off zero.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
  if (spare_normal_) {
    double z = *spare_normal_;
    spare_normal_.reset();
    return z;
  }
  // Marsaglia polar method.
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_normal_ = v * f;
  return u * f;
}

double RngStream::exponential() { return -std::log(uniform()); }

double RngStream::gamma(double shape) {
  if (!(shape > 0.0)) throw Error(ErrorKind::InvalidParameter, "gamma shape must be positive");
  if (shape < 1.0) {
    // Boost from shape + 1.
    const double g = gamma(shape + 1.0);
    return g * std::pow(uniform(), 1.0 / shape);
  }
  // Marsaglia and Tsang (2000).
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double RngStream::chi_square(double df) { return 2.0 * gamma(0.5 * df); }

double RngStream::beta(double a, double b) {
  const double x = gamma(a);
  const double y = gamma(b);
  return x / (x + y);
}

std::vector<RngStream> RngStream::split(std::size_t k) const {
  std::vector<RngStream> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    out.emplace_back(splitmix64(seed_ ^ splitmix64(0xA5A5A5A5ULL + i)));
  }
  return out;
}

Vector standard_normal_vector(RngStream& rng, Index n) {
  Vector z(n);
  for (Index i = 0; i < n; ++i) z(i) = rng.normal();
  return z;
}

namespace {

// Lower-triangular Bartlett factor: chi on the diagonal, normals below.
Matrix bartlett_factor(RngStream& rng, double df, Index dim) {
  Matrix a = Matrix::Zero(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    a(i, i) = std::sqrt(rng.chi_square(df - static_cast<double>(i)));
    for (Index j = 0; j < i; ++j) a(i, j) = rng.normal();
  }
  return a;
}

void check_df(double df, Index dim) {
  if (!(df > static_cast<double>(dim) - 1.0) || !std::isfinite(df)) {
    throw Error(ErrorKind::InvalidDegreesOfFreedom,
                "Wishart needs df > dim - 1 (df=" + std::to_string(df) +
                    ", dim=" + std::to_string(dim) + ")");
  }
}

}  // namespace

SpdMatrix sample_wishart(RngStream& rng, double df, const SpdMatrix& scale) {
  check_df(df, scale.dim());
  const Matrix la = scale.factor().lower() * bartlett_factor(rng, df, scale.dim());
  return SpdMatrix(la * la.transpose());
}

Matrix sample_wishart_inverse_scale(RngStream& rng, double df, const CholeskyFactor& inverse_scale) {
  check_df(df, inverse_scale.dim());
  // With P = L L^T, L^{-T} A has covariance structure P^{-1}.
  Matrix m = inverse_scale.lower().transpose().triangularView<Eigen::Upper>().solve(
      bartlett_factor(rng, df, inverse_scale.dim()));
  Matrix w = m * m.transpose();
  return 0.5 * (w + w.transpose());
}

double sample_inverse_gaussian(RngStream& rng, double mu, double shape) {
  if (!(mu > 0.0) || !(shape > 0.0) || std::isnan(mu) || std::isnan(shape)) {
    throw Error(ErrorKind::InvalidParameter, "inverse Gaussian needs mu > 0 and shape > 0");
  }
  mu = std::max(mu, 1e-12);
  shape = std::max(shape, 1e-12);
  const double z = rng.normal();
  const double y = z * z;
  double x = mu;
  if (y > 0.0) {
    // mu + mu^2 y/(2 shape) - mu/(2 shape) sqrt(4 mu shape y + mu^2 y^2), rearranged
    // to avoid cancellation when mu y >> shape.
    if (std::isinf(mu)) {
      x = shape / y;
    } else {
      const double s = std::sqrt(1.0 + 4.0 * shape / (mu * y));
      x = 4.0 * shape / (y * (s + 1.0) * (s + 1.0));
    }
  }
  if (std::isinf(mu)) return x;
  if (rng.uniform() <= mu / (mu + x)) return x;
  return mu * (mu / x);
}

// ---------------------------------------------------------------------------
// Scalar GIG: Hoermann and Leydold (2014), with the three regimes
// ratio-of-uniforms with mode shift, without shift, and the hat function for
// the non-T-concave region.

GigParams::GigParams(double lambda_, double a_, double b_) : lambda(lambda_), a(a_), b(b_) {
  if (!std::isfinite(lambda) || !(a > 0.0) || !(b > 0.0) || !std::isfinite(a) ||
      !std::isfinite(b)) {
    throw Error(ErrorKind::InvalidParameter, "GIG needs finite order and a, b > 0");
  }
  a = std::max(a, 1e-12);
  b = std::max(b, 1e-12);
}

double gig_log_density_unnorm(const GigParams& params, double x) {
  if (!(x > 0.0)) return -std::numeric_limits<double>::infinity();
  return (-params.lambda - 1.0) * std::log(x) - 0.5 * (params.a * x + params.b / x);
}

namespace {

double gig_mode(double lambda, double omega) {
  if (lambda >= 1.0) {
    return (std::sqrt((lambda - 1.0) * (lambda - 1.0) + omega * omega) + (lambda - 1.0)) / omega;
  }
  return omega / (std::sqrt((1.0 - lambda) * (1.0 - lambda) + omega * omega) + (1.0 - lambda));
}

// Density x^(lambda-1) exp(-omega (x + 1/x) / 2), lambda >= 0.
double gig_rou_noshift(RngStream& rng, double lambda, double omega) {
  const double t = 0.5 * (lambda - 1.0);
  const double s = 0.25 * omega;
  const double xm = gig_mode(lambda, omega);
  const double nc = t * std::log(xm) - s * (xm + 1.0 / xm);
  const double ym = ((lambda + 1.0) + std::sqrt((lambda + 1.0) * (lambda + 1.0) + omega * omega)) / omega;
  const double um = std::exp(0.5 * (lambda + 1.0) * std::log(ym) - s * (ym + 1.0 / ym) - nc);
  for (;;) {
    const double u = um * rng.uniform();
    const double v = rng.uniform();
    const double x = u / v;
    if (std::log(v) <= t * std::log(x) - s * (x + 1.0 / x) - nc) return x;
  }
}

double gig_rou_shift(RngStream& rng, double lambda, double omega) {
  const double t = 0.5 * (lambda - 1.0);
  const double s = 0.25 * omega;
  const double xm = gig_mode(lambda, omega);
  const double nc = t * std::log(xm) - s * (xm + 1.0 / xm);

  // Extremes of (x - xm) sqrt(f(x)) are the roots of a cubic (Cardano).
  const double a = -(2.0 * (lambda + 1.0) / omega + xm);
  const double b = (2.0 * (lambda - 1.0) * xm / omega - 1.0);
  const double c = xm;
  const double p = b - a * a / 3.0;
  const double q = (2.0 * a * a * a) / 27.0 - (a * b) / 3.0 + c;
  const double fi = std::acos(-q / (2.0 * std::sqrt(-(p * p * p) / 27.0)));
  const double fak = 2.0 * std::sqrt(-p / 3.0);
  const double y1 = fak * std::cos(fi / 3.0) - a / 3.0;
  const double y2 = fak * std::cos(fi / 3.0 + 4.0 / 3.0 * std::numbers::pi) - a / 3.0;
  const double uplus = (y1 - xm) * std::exp(t * std::log(y1) - s * (y1 + 1.0 / y1) - nc);
  const double uminus = (y2 - xm) * std::exp(t * std::log(y2) - s * (y2 + 1.0 / y2) - nc);

  for (;;) {
    const double u = uminus + rng.uniform() * (uplus - uminus);
    const double v = rng.uniform();
    const double x = u / v + xm;
    if (x <= 0.0) continue;
    if (std::log(v) <= t * std::log(x) - s * (x + 1.0 / x) - nc) return x;
  }
}

// 0 <= lambda < 1 and small omega, where the density is not T_{-1/2}-concave.
double gig_hat(RngStream& rng, double lambda, double omega) {
  const double xm = gig_mode(lambda, omega);
  const double x0 = omega / (1.0 - lambda);
  const double k0 = std::exp((lambda - 1.0) * std::log(xm) - 0.5 * omega * (xm + 1.0 / xm));
  double area[3];
  area[0] = k0 * x0;

  double k1, k2;
  if (x0 >= 2.0 / omega) {
    k1 = 0.0;
    area[1] = 0.0;
    k2 = std::pow(x0, lambda - 1.0);
    area[2] = k2 * 2.0 * std::exp(-omega * x0 / 2.0) / omega;
  } else {
    k1 = std::exp(-omega);
    area[1] = lambda == 0.0 ? k1 * std::log(2.0 / (omega * omega))
                            : k1 / lambda * (std::pow(2.0 / omega, lambda) - std::pow(x0, lambda));
    k2 = std::pow(2.0 / omega, lambda - 1.0);
    area[2] = k2 * 2.0 * std::exp(-1.0) / omega;
  }
  const double total = area[0] + area[1] + area[2];

  for (;;) {
    double v = total * rng.uniform();
    double x, hx;
    if (v <= area[0]) {
      x = x0 * v / area[0];
      hx = k0;
    } else if ((v -= area[0]) <= area[1]) {
      if (lambda == 0.0) {
        x = omega * std::exp(std::exp(omega) * v);
        hx = k1 / x;
      } else {
        x = std::pow(std::pow(x0, lambda) + (lambda / k1 * v), 1.0 / lambda);
        hx = k1 * std::pow(x, lambda - 1.0);
      }
    } else {
      v -= area[1];
      const double lo = std::max(x0, 2.0 / omega);
      x = -2.0 / omega * std::log(std::exp(-omega / 2.0 * lo) - omega / (2.0 * k2) * v);
      hx = k2 * std::exp(-omega / 2.0 * x);
    }
    const double u = rng.uniform() * hx;
    if (std::log(u) <= (lambda - 1.0) * std::log(x) - omega / 2.0 * (x + 1.0 / x)) return x;
  }
}

}  // namespace

double sample_gig(RngStream& rng, const GigParams& params) {
  // x^(-lambda-1) exp(-(a x + b/x)/2) is the standard GIG with index -lambda,
  // psi = a, chi = b. Write X = alpha Y with Y ~ GIG(index, omega, omega).
  const double index = -params.lambda;
  const double alpha = std::sqrt(params.b / params.a);
  const double omega = std::sqrt(params.a * params.b);
  const double order = std::abs(index);

  double y;
  if (order > 2.0 || omega > 3.0) {
    y = gig_rou_shift(rng, order, omega);
  } else if (order >= 1.0 - 2.25 * omega * omega || omega > 0.2) {
    y = gig_rou_noshift(rng, order, omega);
  } else {
    y = gig_hat(rng, order, omega);
  }
  // GIG(-k, w, w) is the law of 1 / GIG(k, w, w).
  return index < 0.0 ? alpha / y : alpha * y;
}

// ---------------------------------------------------------------------------

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double u) {
  if (!(u > 0.0 && u < 1.0)) {
    if (u == 0.0) return -std::numeric_limits<double>::infinity();
    if (u == 1.0) return std::numeric_limits<double>::infinity();
    throw Error(ErrorKind::InvalidParameter, "normal quantile outside [0, 1]");
  }
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u);
}

namespace {

double upper_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }
double upper_tail_quantile(double u) { return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u); }

// Standard normal restricted to [a, b] with a >= 4.
double right_tail_truncated(RngStream& rng, double a, double b) {
  if (b - a < 1.0 / a) {
    // Narrow window: uniform proposal, acceptance >= exp(-1).
    for (;;) {
      const double z = a + (b - a) * rng.uniform();
      if (rng.uniform() <= std::exp(0.5 * (a * a - z * z))) return z;
    }
  }
  // Robert (1995) exponential proposal with the optimal rate.
  const double rate = 0.5 * (a + std::sqrt(a * a + 4.0));
  for (;;) {
    const double z = a + rng.exponential() / rate;
    if (z >= b) continue;
    const double d = z - rate;
    if (rng.uniform() <= std::exp(-0.5 * d * d)) return z;
  }
}

double standard_truncated(RngStream& rng, double a, double b) {
  constexpr double kTail = 4.0;
  if (a >= kTail) return right_tail_truncated(rng, a, b);
  if (b <= -kTail) return -right_tail_truncated(rng, -b, -a);

  if (a > 0.0) {
    // Both ends in the upper half: work with survival probabilities.
    const double pa = upper_tail(a);
    const double pb = upper_tail(b);
    for (;;) {
      const double u = pb + rng.uniform() * (pa - pb);
      if (u > 0.0 && u < 1.0) return std::clamp(upper_tail_quantile(u), a, b);
    }
  }
  const double pa = normal_cdf(a);
  const double pb = normal_cdf(b);
  for (;;) {
    const double u = pa + rng.uniform() * (pb - pa);
    if (u > 0.0 && u < 1.0) return std::clamp(normal_quantile(u), a, b);
  }
}

}  // namespace

double sample_truncated_normal(RngStream& rng, double mu, double sigma, double lo, double hi) {
  if (!(lo < hi)) throw Error(ErrorKind::EmptyInterval, "truncation interval is empty");
  if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(mu)) {
    throw Error(ErrorKind::InvalidParameter, "truncated normal needs finite mu and sigma > 0");
  }
  const double a = (lo - mu) / sigma;
  const double b = (hi - mu) / sigma;
  double x = mu + sigma * standard_truncated(rng, a, b);
  if (x <= lo) x = std::nextafter(lo, std::numeric_limits<double>::infinity());
  if (x >= hi) x = std::nextafter(hi, -std::numeric_limits<double>::infinity());
  if (!(x > lo && x < hi)) throw Error(ErrorKind::EmptyInterval, "interval has no interior point");
  return x;
}

// ---------------------------------------------------------------------------
// Matrix GIG.

namespace {

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

// Factor a PSD coefficient, adding the regularization when it is singular.
CholeskyFactor factor_semidefinite(const Matrix& m) {
  try {
    return cholesky_factor(m, 1e-14);
  } catch (const NotPositiveDefiniteError&) {
    return cholesky_factor(m + MgigParams::kRegularization * Matrix::Identity(m.rows(), m.cols()));
  }
}

}  // namespace

MgigParams::MgigParams(double lambda, const Matrix& a, const Matrix& b)
    : lambda_(lambda), a_(), b_(), inverted_(false), a_factor_(Matrix()), b_factor_(Matrix()) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows() || a.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch, "MGIG coefficients must be square and equal-sized");
  }
  if (!std::isfinite(lambda)) throw Error(ErrorKind::InvalidParameter, "MGIG order must be finite");
  a_ = symmetrize(a);
  b_ = symmetrize(b);
  const double p = static_cast<double>(a_.rows());
  const double shape = lambda - 0.5 * (p - 1.0);

  try {
    if (shape > 0.5 * (p - 1.0)) {
      inverted_ = false;
      b_factor_ = cholesky_factor(b_);
      a_factor_ = factor_semidefinite(a_);
    } else if (lambda < 0.0) {
      inverted_ = true;
      a_factor_ = cholesky_factor(a_);
      b_factor_ = factor_semidefinite(b_);
    } else {
      throw Error(ErrorKind::InvalidParameter,
                  "MGIG order " + std::to_string(lambda) + " lies in the unsupported range [0, dim-1]");
    }
  } catch (const NotPositiveDefiniteError& e) {
    throw Error(ErrorKind::InvalidParameter,
                std::string("MGIG coefficient is not positive definite: ") + e.what());
  }
}

double MgigParams::log_density_unnorm(const Matrix& m) const {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) return -std::numeric_limits<double>::infinity();
  const Matrix l = llt.matrixL();
  const double log_det = 2.0 * l.diagonal().array().log().sum();
  const Matrix m_inv = llt.solve(Matrix::Identity(m.rows(), m.cols()));
  return (-lambda_ - 1.0) * log_det - 0.5 * ((a_ * m).trace() + (b_ * m_inv).trace());
}

namespace {

Matrix spd_inverse(const Matrix& m) {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::NotPositiveDefinite, "continued-fraction level lost definiteness");
  }
  return symmetrize(llt.solve(Matrix::Identity(m.rows(), m.cols())));
}

// x = (Y_b + (Y_a + x)^{-1})^{-1} evaluated from the deepest level outwards,
// starting at x = 0.
Matrix evaluate_fraction(const std::vector<Matrix>& ya, const std::vector<Matrix>& yb) {
  const Index p = ya.front().rows();
  Matrix x = Matrix::Zero(p, p);
  for (std::size_t k = ya.size(); k-- > 0;) {
    x = spd_inverse(yb[k] + spd_inverse(ya[k] + x));
  }
  return x;
}

double wishart_log_density_unnorm(const Matrix& x, double df, const Matrix& scale_inv,
                                  double scale_log_det) {
  Eigen::LLT<Matrix> llt(x);
  if (llt.info() != Eigen::Success) return -std::numeric_limits<double>::infinity();
  const Matrix l = llt.matrixL();
  const double p = static_cast<double>(x.rows());
  const double log_det = 2.0 * l.diagonal().array().log().sum();
  return 0.5 * (df - p - 1.0) * log_det - 0.5 * (scale_inv * x).trace() - 0.5 * df * scale_log_det;
}

}  // namespace

MgigDraw sample_mgig(RngStream& rng, const MgigParams& params, double tol, int max_iter,
                     const Matrix* current) {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidParameter, "MGIG tolerance must be positive");
  if (max_iter < 1) throw Error(ErrorKind::InvalidParameter, "MGIG max_iter must be >= 1");

  const Index p = params.dim();
  const double pd = static_cast<double>(p);
  // Fraction variable: the matrix itself, or its inverse (order p-1-lambda, A and B swapped).
  const double order = params.uses_inverse() ? pd - 1.0 - params.lambda() : params.lambda();
  const double df = 2.0 * (order - 0.5 * (pd - 1.0));
  // Y_a pairs with the coefficient on the fraction variable, Y_b with its inverse.
  const CholeskyFactor& on_var = params.uses_inverse() ? params.b_factor() : params.a_factor();
  const CholeskyFactor& on_inv = params.uses_inverse() ? params.a_factor() : params.b_factor();

  std::vector<Matrix> ya, yb;
  Matrix previous;
  Matrix iterate;
  bool converged = false;
  int depth = 0;
  while (depth < max_iter) {
    ya.push_back(sample_wishart_inverse_scale(rng, df, on_var));
    yb.push_back(sample_wishart_inverse_scale(rng, df, on_inv));
    ++depth;
    iterate = evaluate_fraction(ya, yb);
    if (depth > 1 && relative_frobenius(iterate, previous) < tol) {
      converged = true;
      break;
    }
    previous = iterate;
  }

  Matrix value = params.uses_inverse() ? spd_inverse(iterate) : iterate;
  MgigDraw draw{SpdMatrix(Matrix::Identity(p, p)), depth, false, false};

  if (!converged) {
    // Independence Metropolis-Hastings step with a Wishart proposal whose mean
    // is the last fraction iterate. The proposal depends only on randomness
    // independent of the chain state, so the step leaves the target invariant.
    draw.mh_corrected = true;
    const double prop_df = pd + 2.0 + 2.0 * std::abs(params.lambda());
    const CholeskyFactor scale_factor = cholesky_factor(symmetrize(value / prop_df));
    const Matrix scale_inv = scale_factor.inverse();
    const double scale_log_det = scale_factor.log_det();
    const Matrix start = current != nullptr ? symmetrize(*current) : value;

    const Matrix la = scale_factor.lower() * bartlett_factor(rng, prop_df, p);
    const Matrix proposal = symmetrize(la * la.transpose());

    const double log_ratio = params.log_density_unnorm(proposal) - params.log_density_unnorm(start) +
                             wishart_log_density_unnorm(start, prop_df, scale_inv, scale_log_det) -
                             wishart_log_density_unnorm(proposal, prop_df, scale_inv, scale_log_det);
    if (!std::isnan(log_ratio) && std::log(rng.uniform()) < log_ratio) {
      value = proposal;
      draw.mh_accepted = true;
    } else {
      value = start;
    }
  }

  try {
    draw.value = SpdMatrix(value);
  } catch (const Error& e) {
    throw Error(ErrorKind::NonConvergence, std::string("MGIG draw is not SPD: ") + e.what());
  }
  return draw;
}

}  // namespace bmb
