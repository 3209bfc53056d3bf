#include "bmb/sampler.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace bmb {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

constexpr double kMinAbsWeight = 1e-12;
constexpr double kBRegularization = 1e-12;

std::shared_ptr<const Matrix> make_k(const PartitionedCov& s) {
  auto k = std::make_shared<Matrix>(s.s22());
  k->diagonal().array() += 1.0;
  return k;
}

Vector stacked_rows(const Matrix& m) {
  Matrix mt = m.transpose();
  return Eigen::Map<const Vector>(mt.data(), mt.size());
}

Matrix unstack_rows(const Vector& x, Index p, Index q) {
  Matrix out(p, q);
  for (Index i = 0; i < p; ++i) out.row(i) = x.segment(i * q, q).transpose();
  return out;
}

}  // namespace

HyperParams::HyperParams(double gamma_) : gamma(gamma_) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorKind::InvalidParameter, "gamma must be positive and finite");
  }
}

BlanketState BlanketState::initial(Index p, Index q) {
  return BlanketState{SpdMatrix::identity(p), Matrix::Zero(p, q), ScaleMatrix::ones(p, q)};
}

bool BlanketState::finite() const { return w11.matrix().allFinite() && w12.allFinite(); }

void ChainConfig::validate() const {
  if (burn_in < 0) throw Error(ErrorKind::InvalidParameter, "burn_in must be >= 0");
  if (samples < 1) throw Error(ErrorKind::InvalidParameter, "samples must be >= 1");
  if (thin < 1) throw Error(ErrorKind::InvalidParameter, "thin must be >= 1");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw Error(ErrorKind::InvalidParameter, "gamma must be > 0");
  if (!(mgig_tol > 0.0)) throw Error(ErrorKind::InvalidParameter, "mgig_tol must be > 0");
  if (mgig_max_iter < 1) throw Error(ErrorKind::InvalidParameter, "mgig_max_iter must be >= 1");
}

ScaleMatrix sample_scales(const Matrix& w12, double gamma, RngStream& rng) {
  HyperParams hyper(gamma);
  const double shape = hyper.gamma * hyper.gamma;
  Matrix t(w12.rows(), w12.cols());
  for (Index j = 0; j < w12.cols(); ++j) {
    for (Index i = 0; i < w12.rows(); ++i) {
      const double w = std::max(std::abs(w12(i, j)), kMinAbsWeight);
      const double mu = hyper.gamma / w;
      t(i, j) = 1.0 / sample_inverse_gaussian(rng, mu, shape);
    }
  }
  return ScaleMatrix(std::move(t));
}

Matrix w12_conditional_mean(const SpdMatrix& w11, const PartitionedCov& s, const ScaleMatrix& t) {
  const StructuredFactor f = structured_chol(build_structured_precision(w11, s.s22(), t));
  return unstack_rows(f.solve(-stacked_rows(s.s12())), s.p(), s.q());
}

Matrix sample_w12(const SpdMatrix& w11, const PartitionedCov& s, const ScaleMatrix& t,
                  RngStream& rng) {
  return sample_w12(w11, s, make_k(s), t, rng);
}

Matrix sample_w12(const SpdMatrix& w11, const PartitionedCov& s,
                  const std::shared_ptr<const Matrix>& k, const ScaleMatrix& t, RngStream& rng) {
  if (w11.dim() != s.p() || k->rows() != s.q()) {
    throw Error(ErrorKind::DimensionMismatch, "W11 / K do not match the partition");
  }
  const StructuredFactor f = structured_chol(build_structured_precision(w11, k, t));
  // mean + L^{-T} z = L^{-T} (L^{-1}(-v) + z)
  Vector y = f.solve_lower(-stacked_rows(s.s12()));
  y += standard_normal_vector(rng, s.p() * s.q());
  return unstack_rows(f.solve_upper(y), s.p(), s.q());
}

MgigDraw sample_w11(const Matrix& w12, const PartitionedCov& s, RngStream& rng,
                    const ChainConfig& cfg, const Matrix* current) {
  return sample_w11(w12, s, *make_k(s), rng, cfg, current);
}

MgigDraw sample_w11(const Matrix& w12, const PartitionedCov& s, const Matrix& k, RngStream& rng,
                    const ChainConfig& cfg, const Matrix* current) {
  if (w12.rows() != s.p() || w12.cols() != s.q()) {
    throw Error(ErrorKind::DimensionMismatch, "W12 must be p x q");
  }
  const Index p = s.p();
  Matrix a = s.s11();
  a.diagonal().array() += 1.0;
  Matrix b = w12 * k * w12.transpose();
  b.diagonal().array() += kBRegularization;
  // det(W11)^(n/2) = det(W11)^(-lambda-1)
  const double lambda = -(0.5 * s.n() + 1.0);
  (void)p;
  return sample_mgig(rng, MgigParams(lambda, a, b), cfg.mgig_tol, cfg.mgig_max_iter, current);
}

GibbsKernel::GibbsKernel(const PartitionedCov& s, const ChainConfig& cfg)
    : s_(s), cfg_(cfg), k_(make_k(s)) {
  cfg_.validate();
}

BlanketState GibbsKernel::sweep(const BlanketState& state, RngStream& rng) {
  const auto start = Clock::now();
  auto mark = start;

  ScaleMatrix t = sample_scales(state.w12, cfg_.gamma, rng);
  times_.scales += seconds_since(mark);
  mark = Clock::now();

  Matrix w12 = sample_w12(state.w11, s_, k_, t, rng);
  times_.w12 += seconds_since(mark);
  mark = Clock::now();
  if (!w12.allFinite()) throw Error(ErrorKind::SamplerFailure, "non-finite W12 draw");

  MgigDraw w11 = sample_w11(w12, s_, *k_, rng, cfg_, &state.w11.matrix());
  times_.w11 += seconds_since(mark);
  if (w11.mh_corrected) ++mh_corrected_;

  times_.total += seconds_since(start);
  return BlanketState{std::move(w11.value), std::move(w12), std::move(t)};
}

BlanketState gibbs_sweep(const BlanketState& state, const PartitionedCov& s, const HyperParams& hyper,
                         RngStream& rng) {
  ChainConfig cfg;
  cfg.gamma = hyper.gamma;
  GibbsKernel kernel(s, cfg);
  return kernel.sweep(state, rng);
}

ChainOutput run_chain(const PartitionedCov& s, const ChainConfig& cfg, const ProgressFn& progress) {
  return run_chain(s, cfg, RngStream(cfg.seed), progress);
}

ChainOutput run_chain(const PartitionedCov& s, const ChainConfig& cfg, RngStream rng,
                      const ProgressFn& progress) {
  cfg.validate();
  GibbsKernel kernel(s, cfg);
  BlanketState state = BlanketState::initial(s.p(), s.q());

  ChainOutput out;
  out.w12_samples.reserve(static_cast<std::size_t>(cfg.samples));
  out.w11_samples.reserve(static_cast<std::size_t>(cfg.samples));

  const long total = cfg.burn_in + cfg.samples * cfg.thin;
  for (long sweep = 0; sweep < total; ++sweep) {
    try {
      state = kernel.sweep(state, rng);
    } catch (const Error& e) {
      throw Error(ErrorKind::SamplerFailure,
                  "sweep " + std::to_string(sweep) + " failed: " + e.what());
    }
    const long kept = sweep - cfg.burn_in + 1;
    if (kept > 0 && kept % cfg.thin == 0) {
      out.w12_samples.push_back(state.w12);
      out.w11_samples.push_back(state.w11.matrix());
    }
    if (progress && (sweep + 1) % 100 == 0) progress(sweep + 1, total);
  }
  out.mh_corrected_count = kernel.mh_corrected_count();
  out.sweeps = total;
  out.wall = kernel.times();
  return out;
}

std::vector<ChainOutput> run_chains(const PartitionedCov& s, const ChainConfig& cfg, std::size_t chains,
                                    std::size_t threads) {
  if (chains == 0) throw Error(ErrorKind::InvalidParameter, "need at least one chain");
  std::vector<RngStream> streams = RngStream(cfg.seed).split(chains);
  std::vector<ChainOutput> outputs(chains);
  std::vector<std::exception_ptr> errors(chains);

  threads = std::clamp<std::size_t>(threads, 1, chains);
  std::mutex next_mutex;
  std::size_t next = 0;
  auto worker = [&] {
    for (;;) {
      std::size_t idx;
      {
        std::lock_guard<std::mutex> lock(next_mutex);
        if (next >= chains) return;
        idx = next++;
      }
      try {
        outputs[idx] = run_chain(s, cfg, streams[idx]);
      } catch (...) {
        errors[idx] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return outputs;
}

double log_posterior_unnorm(const Matrix& w11, const Matrix& w12, const ScaleMatrix& t,
                            const PartitionedCov& s) {
  Eigen::LLT<Matrix> llt(0.5 * (w11 + w11.transpose()));
  if (llt.info() != Eigen::Success) return -std::numeric_limits<double>::infinity();
  const Matrix l = llt.matrixL();
  if ((l.diagonal().array() <= 0.0).any()) return -std::numeric_limits<double>::infinity();
  const double log_det = 2.0 * l.diagonal().array().log().sum();

  Matrix a = s.s11();
  a.diagonal().array() += 1.0;
  Matrix k = s.s22();
  k.diagonal().array() += 1.0;

  const double det_term = 0.5 * s.n() * log_det;
  const double trace_term = -0.5 * (a * w11).trace();
  const double cross_term = -(w12.array() * s.s12().array()).sum();
  const Matrix u_w12 = llt.solve(w12);
  const double inverse_term = -0.5 * (u_w12 * k * w12.transpose()).trace();
  const double scale_term = -0.5 * (w12.array().square() / t.values().array()).sum();
  return det_term + trace_term + cross_term + inverse_term + scale_term;
}

double log_posterior_unnorm(const BlanketState& state, const PartitionedCov& s) {
  return log_posterior_unnorm(state.w11.matrix(), state.w12, state.t, s);
}

Matrix log_posterior_grad_w12(const BlanketState& state, const PartitionedCov& s) {
  Matrix k = s.s22();
  k.diagonal().array() += 1.0;
  const Matrix u_w12 = state.w11.factor().solve(state.w12);
  Matrix g = -s.s12() - u_w12 * k;
  g.array() -= state.w12.array() / state.t.values().array();
  return g;
}

}  // namespace bmb
