#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "prosper/config.hpp"
#include "prosper/game.hpp"
#include "prosper/policy.hpp"
#include "prosper/rng.hpp"

namespace prosper {

// Samples for one prompt and one iteration.
struct BatchSample {
  std::vector<std::size_t> y;        // M draws from pi_t
  std::vector<std::size_t> y_ref;    // M draws from pi_ref
  std::vector<std::size_t> z;        // rollouts from pi_t
  std::vector<std::size_t> z_ref;    // rollouts from pi_ref
  // Separate draws for the gradient weights when fresh sampling is enabled;
  // empty otherwise, in which case y / y_ref are reused.
  std::vector<std::size_t> y_grad;
  std::vector<std::size_t> y_ref_grad;

  std::span<const std::size_t> weight_y() const { return y_grad.empty() ? y : y_grad; }
  std::span<const std::size_t> weight_y_ref() const { return y_ref_grad.empty() ? y_ref : y_ref_grad; }
};

// Stream roles for derive_seed(seed, {iteration, prompt, role}).
enum class SampleRole : std::uint64_t { kY = 0, kYRef = 1, kZ = 2, kZRef = 3, kYGrad = 4, kYRefGrad = 5 };

std::uint64_t batch_seed(std::uint64_t seed, std::size_t iteration, std::size_t prompt, SampleRole role);

// i.i.d. categorical draws. `rollouts` and `reference_rollouts` count the z
// and z' samples.
BatchSample sample_batch(std::span<const double> pi_t, std::span<const double> pi_ref, std::size_t M,
                         std::size_t rollouts, std::size_t reference_rollouts, bool fresh, std::uint64_t seed,
                         std::size_t iteration, std::size_t prompt);

struct KhatEstimate {
  std::size_t k_hat = 0;
  std::vector<double> values;  // -beta log Zhat^k
};

// Zhat^k = (1/M') sum_j exp(-(1/(M beta)) sum_i P^k(y_i > y'_j)).
// `y` and `y_ref` may differ in length (M and M').
KhatEstimate estimate_khat(std::span<const std::size_t> y, std::span<const std::size_t> y_ref,
                           const PromptGame& game, double beta);
KhatEstimate estimate_khat(const BatchSample& batch, const PromptGame& game, double beta);

// ghat(z) = sum_j P^k(z > y'_j) w_j / sum_j w_j,
// w_j = exp(-(1/(M beta)) sum_i P^k(y_i > y'_j)).
double estimate_gradient(std::span<const std::size_t> y, std::span<const std::size_t> y_ref,
                         const PromptGame& game, std::size_t k, double beta, std::size_t z);
double estimate_gradient(const BatchSample& batch, const PromptGame& game, std::size_t k, double beta,
                         std::size_t z);

// beta -> infinity limits of the two estimators. Expanding
// -beta log Zhat^k for large beta gives the mean preference of the pi_t
// draws over the pi_ref draws, and the weights w_j all tend to one.
KhatEstimate estimate_khat_limit(std::span<const std::size_t> y, std::span<const std::size_t> y_ref,
                                 const PromptGame& game);
double estimate_gradient_limit(std::span<const std::size_t> y_ref, const PromptGame& game, std::size_t k,
                               std::size_t z);

struct RegressionPair {
  std::size_t prompt = 0;
  std::size_t z = 0;
  std::size_t z_ref = 0;
  double target = 0.0;      // ghat(z)
  double target_ref = 0.0;  // ghat(z')
  double weight = 1.0;

  double gap() const;
};

// Per-prompt rollouts and their gradient targets (target[i] belongs to
// rollouts[i]).
struct PromptTargets {
  std::vector<std::size_t> z;
  std::vector<double> g_z;
  std::vector<std::size_t> z_ref;
  std::vector<double> g_z_ref;
};

// Forms the cross pairs (z from pi_t, z' from pi_ref) of every prompt,
// optionally the same-policy pairs too, pools them and keeps the top
// ceil(rho * count) by gap. Ties keep (prompt, z, z') lexicographic order.
// Throws no-pairs when the pool is empty.
std::vector<RegressionPair> build_and_filter_pairs(std::span<const PromptTargets> targets, double rho,
                                                   bool include_same_policy = false);

// Keeps the top ceil(rho * count) pairs by gap.
std::vector<RegressionPair> filter_pairs(std::vector<RegressionPair> pairs, double rho);

// Minimizes sum_p w_p ((d(z) - d(z')) / eta - (ghat(z) - ghat(z')))^2
// + ridge ||theta - theta_t||^2 over the log-probability change d.
//
// Tabular: theta holds log pi per prompt. With ridge = 0 every connected
// component of the pair graph moves by eta * ghat up to its own constant,
// fixed at the minimum-norm choice; unpaired responses stay put.
TabularPolicy regression_update(const TabularPolicy& pi_t, std::span<const RegressionPair> pairs, double eta,
                                double ridge);
// Linear softmax: per-prompt normalizers cancel in the paired difference, so
// the problem is linear least squares in theta - theta_t. Throws
// rank-deficiency when ridge = 0 and the normal equations are singular.
LinearSoftmaxPolicy regression_update(const LinearSoftmaxPolicy& pi_t, std::span<const RegressionPair> pairs,
                                      double eta, double ridge);

// Weighted mean squared residual of the fitted update on `pairs`.
double regression_residual(const TabularPolicy& before, const TabularPolicy& after,
                           std::span<const RegressionPair> pairs, double eta);

struct TrainRow {
  std::size_t iteration = 0;
  double value = 0.0;            // V(pi_t) under the original game set
  double epsilon = 0.0;          // residual of the update pi_t -> pi_{t+1}
  double concentrability = 0.0;  // of pi_t against pi_ref
  std::vector<std::size_t> khat_histogram;
  std::size_t khat_mode = 0;
  std::size_t pairs_kept = 0;
};

struct TrainDiagnostics {
  std::vector<TrainRow> rows;    // t = 0..T-1
  std::vector<double> values;    // V(pi_t), t = 0..T
};

struct TrainOptions {
  PolicyClass policy_class = PolicyClass::kTabular;
  // Linear-softmax features; one-hot when empty.
  std::vector<Eigen::MatrixXd> features;
  std::optional<Eigen::VectorXd> initial_theta;
  std::optional<TabularPolicy> initial_policy;  // tabular class only
  std::size_t threads = 1;
  // Added to the iteration coordinate of every random stream, so that
  // consecutive epochs draw fresh samples.
  std::size_t iteration_offset = 0;
};

struct TrainResult {
  Policy final_policy;
  TabularPolicy final_tabular;
  TabularPolicy best;            // argmax V over pi_1..pi_T
  std::size_t best_iteration = 0;
  double best_value = 0.0;
  double eta = 0.0;
  TrainDiagnostics diagnostics;
};

// T iterations of sample -> k-hat -> g-hat -> filter -> regress. The exact
// estimator replaces the sampled quantities by k*, g and all N x N pairs
// weighted by pi_t(z) pi_ref(z'). JC trains on the scalarized game set; the
// reported values always use the original multi-criterion game set.
TrainResult train(const GameSet& games, const TabularPolicy& pi_ref, const SolverConfig& config,
                  const TrainOptions& options = {});

struct EpochSpec {
  std::size_t T = 100;
  double rho = 0.15;
};

std::vector<EpochSpec> default_schedule(std::size_t T);

struct ScheduleResult {
  std::vector<TrainResult> epochs;
  Policy final_policy;
  TabularPolicy final_tabular;
};

// Runs `train` once per epoch, starting each epoch from the previous final
// policy with pi_ref held fixed.
ScheduleResult train_schedule(const GameSet& games, const TabularPolicy& pi_ref, const SolverConfig& config,
                              std::span<const EpochSpec> schedule, const TrainOptions& options = {});

}  // namespace prosper
