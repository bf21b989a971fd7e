#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "prosper/game.hpp"
#include "prosper/policy.hpp"

namespace prosper {

// Exact MaxEntBW machinery on enumerable response sets. For criterion k the
// comparator's soft worst case against pi is
//   -beta * log Z^k,  Z^k = sum_y' pi_ref(y') exp(-P_pi^k(y') / beta),
// with P_pi^k(y') = sum_y pi(y) P[k][y][y']. All sums run in the log domain.

// P_pi^k(y') for every y'.
std::vector<double> comparator_preference(const PromptGame& game, std::span<const double> pi, std::size_t k);

// -beta log Z^k(pi).
double partition_value(const PromptGame& game, std::span<const double> pi, std::span<const double> pi_ref,
                       std::size_t k, double beta);

// -beta log Z(w, pi) for a criterion mixture w.
double partition_value(const PromptGame& game, std::span<const double> pi, std::span<const double> pi_ref,
                       std::span<const double> w, double beta);

struct CriterionChoice {
  std::size_t k_star = 0;       // lowest index among minimizers
  std::vector<double> values;   // -beta log Z^k per criterion
};

CriterionChoice worst_case_criterion(const PromptGame& game, std::span<const double> pi,
                                     std::span<const double> pi_ref, double beta);

struct PromptValue {
  std::string prompt_id;
  std::vector<double> values;
  std::size_t k_star = 0;
  double value = 0.0;
};

struct ValueReport {
  std::vector<PromptValue> prompts;
  double total = 0.0;  // V(pi): weighted mean of per-prompt minima
};

ValueReport game_value(const GameSet& games, const TabularPolicy& pi, const TabularPolicy& pi_ref, double beta);

// Closed-form minimizer of <w, P(pi > pi')> + beta KL(pi' || pi_ref):
// pi'(y') proportional to pi_ref(y') exp(-<w, P_pi(y')> / beta).
Distribution adversary_best_response(const PromptGame& game, std::span<const double> pi,
                                     std::span<const double> pi_ref, std::span<const double> w, double beta);

// <w, P(pi > comparator)> + beta KL(comparator || pi_ref).
double regularized_objective(const PromptGame& game, std::span<const double> pi,
                             std::span<const double> comparator, std::span<const double> pi_ref,
                             std::span<const double> w, double beta);

// Functional gradient of -beta log Z^k with respect to pi(z):
// g(z) = sum_y' q(y') P[k][z][y'] with q the closed-form adversary at e_k.
std::vector<double> criterion_gradient(const PromptGame& game, std::span<const double> pi,
                                       std::span<const double> pi_ref, std::size_t k, double beta);

struct PromptGradient {
  std::vector<double> g;
  std::vector<double> advantage;  // g - E_{z ~ pi}[g]
  std::size_t k_star = 0;
};

struct GradientField {
  std::vector<PromptGradient> prompts;
};

GradientField exact_gradient(const GameSet& games, const TabularPolicy& pi, const TabularPolicy& pi_ref,
                             double beta);

// pi_{t+1}(z|x) proportional to pi_t(z|x) exp(eta * A(x, z)).
TabularPolicy mirror_descent_step(const TabularPolicy& pi, const GradientField& grad, double eta);

struct SolveOptions {
  bool record_policies = false;
  bool record_k_star = false;
};

struct ExactSolveResult {
  std::vector<double> values;                          // V(pi_t), t = 0..T
  std::vector<std::vector<std::size_t>> k_star;        // [t][prompt] when recorded
  std::vector<TabularPolicy> policies;                 // pi_t when recorded
  TabularPolicy best;                                  // argmax over pi_1..pi_T
  std::size_t best_iteration = 0;
  double best_value = 0.0;
  TabularPolicy last;
  double eta = 0.0;
};

// Exact mirror ascent from pi_0 = pi_ref. `eta` defaults to
// sqrt(ln N_max / T).
ExactSolveResult solve_exact(const GameSet& games, const TabularPolicy& pi_ref, double beta,
                             std::optional<double> eta, std::size_t T, const SolveOptions& options = {});

struct VonNeumannResult {
  double value = 0.0;
  Distribution policy;
};

// max_pi min_{y' in support} P_pi(y') for a single-criterion game, solved as
// a linear program.
VonNeumannResult von_neumann_value(const PromptGame& game, std::span<const std::size_t> support);
// Support taken from the positive entries of pi_ref.
VonNeumannResult von_neumann_value(const PromptGame& game, std::span<const double> pi_ref);

}  // namespace prosper
