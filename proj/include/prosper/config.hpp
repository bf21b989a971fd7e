#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace prosper {

enum class Variant {
  kFull,              // multi-criterion worst case with the KL-regularized adversary
  kJointCheck,        // criteria scalarized into one judge before training
  kVariationalBound,  // beta -> infinity limit: fixed comparator pi_ref
};

enum class Estimator { kExact, kMonteCarlo };

enum class PolicyClass { kTabular, kLinearSoftmax };

std::string_view to_string(Variant v);
std::string_view to_string(Estimator e);
std::string_view to_string(PolicyClass c);
Variant parse_variant(std::string_view s);
Estimator parse_estimator(std::string_view s);
PolicyClass parse_policy_class(std::string_view s);

// Every scalar of the training procedure.
struct SolverConfig {
  double beta = 0.5;            // KL strength on the comparator
  std::optional<double> eta;    // step size; unset -> sqrt(ln N / T)
  std::size_t T = 100;          // iterations
  std::size_t M = 2;            // samples per side for partition/gradient estimates
  std::size_t K = 4;            // rollouts per prompt, split between pi_t and pi_ref
  double rho = 0.15;            // fraction of pooled pairs kept by gap
  double p = 0.5;               // target-set threshold for Blackwell summaries
  Variant variant = Variant::kFull;
  Estimator estimator = Estimator::kMonteCarlo;
  std::uint64_t seed = 0;
  double ridge = 1e-8;
  // Draw separate samples for the k-hat estimate and the gradient weights.
  bool fresh_samples = false;
  // Also regress on (pi_t, pi_t) and (pi_ref, pi_ref) rollout pairs.
  bool include_same_policy_pairs = false;

  void validate() const;

  // sqrt(ln n / (A^2 T)) with advantage bound A = 1, unless eta is set.
  double step_size(std::size_t n_responses) const;

  std::size_t current_rollouts() const { return (K + 1) / 2; }
  std::size_t reference_rollouts() const { return K / 2; }
};

// sqrt(ln n / T) with the advantage bound A = 1.
double default_step_size(std::size_t n_responses, std::size_t T);

}  // namespace prosper
