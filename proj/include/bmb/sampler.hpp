#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "bmb/matrix.hpp"
#include "bmb/random.hpp"
#include "bmb/structured.hpp"

namespace bmb {

// Sparsity hyperparameter of the double-exponential prior on W12. The Wishart
// part of the prior is fixed at W(p + q + 1, I).
struct HyperParams {
  explicit HyperParams(double gamma);

  double gamma;
};

// Gibbs state for the query block. W22 and its Schur complement are never
// represented.
struct BlanketState {
  SpdMatrix w11;
  Matrix w12;
  ScaleMatrix t;

  // W11 = I, W12 = 0, T = 1.
  static BlanketState initial(Index p, Index q);

  bool finite() const;
};

struct ChainConfig {
  long burn_in = 300;
  long samples = 700;
  long thin = 1;
  std::uint64_t seed = 1;
  double gamma = 1.0;
  double mgig_tol = 1e-9;
  int mgig_max_iter = 100;

  void validate() const;
};

struct PhaseTimes {
  double scales = 0.0;
  double w12 = 0.0;
  double w11 = 0.0;
  double total = 0.0;
};

struct ChainOutput {
  std::vector<Matrix> w12_samples;
  std::vector<Matrix> w11_samples;
  long mh_corrected_count = 0;
  long sweeps = 0;
  PhaseTimes wall;
};

// t_ij = 1 / IG(sqrt(gamma^2 / w_ij^2), gamma^2), |w_ij| clamped to >= 1e-12.
ScaleMatrix sample_scales(const Matrix& w12, double gamma, RngStream& rng);

// Draw of W12 from N(-C^{-1} v, C^{-1}) over the stacked rows, v = vec(S12^T).
Matrix sample_w12(const SpdMatrix& w11, const PartitionedCov& s, const ScaleMatrix& t,
                  RngStream& rng);
Matrix sample_w12(const SpdMatrix& w11, const PartitionedCov& s,
                  const std::shared_ptr<const Matrix>& k, const ScaleMatrix& t, RngStream& rng);

// Mean -C^{-1} v of the W12 conditional, as a p x q matrix.
Matrix w12_conditional_mean(const SpdMatrix& w11, const PartitionedCov& s, const ScaleMatrix& t);

// Draw of W11 from density det(W11)^(n/2) exp tr(-((S11+I) W11 + B W11^{-1}) / 2)
// with B = W12 (S22 + I) W12^T (+1e-12 I).
MgigDraw sample_w11(const Matrix& w12, const PartitionedCov& s, RngStream& rng,
                    const ChainConfig& cfg, const Matrix* current = nullptr);
MgigDraw sample_w11(const Matrix& w12, const PartitionedCov& s, const Matrix& k, RngStream& rng,
                    const ChainConfig& cfg, const Matrix* current = nullptr);

// Reusable sweep kernel for a fixed scatter matrix; caches K = S22 + I.
class GibbsKernel {
 public:
  GibbsKernel(const PartitionedCov& s, const ChainConfig& cfg);

  // T, then W12, then W11.
  BlanketState sweep(const BlanketState& state, RngStream& rng);

  const PartitionedCov& scatter() const noexcept { return s_; }
  const std::shared_ptr<const Matrix>& k() const noexcept { return k_; }
  long mh_corrected_count() const noexcept { return mh_corrected_; }
  const PhaseTimes& times() const noexcept { return times_; }

 private:
  const PartitionedCov& s_;
  ChainConfig cfg_;
  std::shared_ptr<const Matrix> k_;
  long mh_corrected_ = 0;
  PhaseTimes times_;
};

BlanketState gibbs_sweep(const BlanketState& state, const PartitionedCov& s, const HyperParams& hyper,
                         RngStream& rng);

using ProgressFn = std::function<void(long sweep, long total)>;

ChainOutput run_chain(const PartitionedCov& s, const ChainConfig& cfg, const ProgressFn& progress = {});
ChainOutput run_chain(const PartitionedCov& s, const ChainConfig& cfg, RngStream rng,
                      const ProgressFn& progress = {});

// k chains on split streams of cfg.seed, at most `threads` at once.
std::vector<ChainOutput> run_chains(const PartitionedCov& s, const ChainConfig& cfg, std::size_t chains,
                                    std::size_t threads);

// Log of the unnormalized conditional posterior of (W11, W12) given S and T:
//   n/2 log det W11 - tr((S11 + I) W11)/2 - tr(W12 S21)
//   - tr(W11^{-1} W12 (S22 + I) W21)/2 - sum_k beta_k^T D_k beta_k / 2.
// Returns -inf when W11 is not positive definite.
double log_posterior_unnorm(const Matrix& w11, const Matrix& w12, const ScaleMatrix& t,
                            const PartitionedCov& s);
double log_posterior_unnorm(const BlanketState& state, const PartitionedCov& s);

// Gradient of log_posterior_unnorm with respect to W12.
Matrix log_posterior_grad_w12(const BlanketState& state, const PartitionedCov& s);

}  // namespace bmb
