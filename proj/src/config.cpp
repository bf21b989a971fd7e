#include "prosper/config.hpp"

#include <cmath>
#include <string>

#include "prosper/error.hpp"

namespace prosper {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::kFull: return "full";
    case Variant::kJointCheck: return "jc";
    case Variant::kVariationalBound: return "vb";
  }
  return "full";
}

std::string_view to_string(Estimator e) {
  return e == Estimator::kExact ? "exact" : "monte_carlo";
}

std::string_view to_string(PolicyClass c) {
  return c == PolicyClass::kTabular ? "tabular" : "linear_softmax";
}

Variant parse_variant(std::string_view s) {
  if (s == "full" || s == "FULL") return Variant::kFull;
  if (s == "jc" || s == "JC") return Variant::kJointCheck;
  if (s == "vb" || s == "VB") return Variant::kVariationalBound;
  throw Error(ErrorCategory::kInvalidArgument, "unknown variant '" + std::string(s) + "'");
}

Estimator parse_estimator(std::string_view s) {
  if (s == "exact" || s == "EXACT") return Estimator::kExact;
  if (s == "monte_carlo" || s == "MONTE_CARLO" || s == "mc") return Estimator::kMonteCarlo;
  throw Error(ErrorCategory::kInvalidArgument, "unknown estimator '" + std::string(s) + "'");
}

PolicyClass parse_policy_class(std::string_view s) {
  if (s == "tabular") return PolicyClass::kTabular;
  if (s == "linear_softmax" || s == "linear") return PolicyClass::kLinearSoftmax;
  throw Error(ErrorCategory::kInvalidArgument, "unknown policy class '" + std::string(s) + "'");
}

void SolverConfig::validate() const {
  require(beta > 0.0 && std::isfinite(beta), "solver config: beta must be positive");
  require(!eta || (*eta > 0.0 && std::isfinite(*eta)), "solver config: eta must be positive");
  require(T >= 1, "solver config: T must be at least 1");
  require(M >= 1, "solver config: M must be at least 1");
  require(K >= 2, "solver config: K must be at least 2 (one rollout per policy)");
  require(rho > 0.0 && rho <= 1.0, "solver config: rho must lie in (0, 1]");
  require(p >= 0.5 && p <= 1.0, "solver config: p must lie in [1/2, 1]");
  require(ridge >= 0.0, "solver config: ridge must be nonnegative");
}

double SolverConfig::step_size(std::size_t n_responses) const {
  return eta ? *eta : default_step_size(n_responses, T);
}

double default_step_size(std::size_t n_responses, std::size_t T) {
  require(n_responses >= 2, "default step size needs at least two responses");
  return std::sqrt(std::log(static_cast<double>(n_responses)) / static_cast<double>(T));
}

}  // namespace prosper
