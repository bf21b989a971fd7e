#include "prosper/solver.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

#include "prosper/config.hpp"
#include "prosper/error.hpp"

namespace prosper {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kBoundSlack = 1e-12;

void check_beta(double beta) {
  require(beta > 0.0 && std::isfinite(beta), "beta must be positive and finite");
}

void check_inputs(const PromptGame& game, std::span<const double> pi, std::span<const double> pi_ref) {
  validate_simplex(pi, game.n_responses(), "policy");
  validate_simplex(pi_ref, game.n_responses(), "reference policy");
}

// out[y'] = sum_y pi(y) P[k][y][y'], accumulated row by row.
void accumulate_comparator_preference(const PromptGame& game, std::span<const double> pi, std::size_t k,
                                      std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  const std::size_t n = game.n_responses();
  for (std::size_t y = 0; y < n; ++y) {
    const double w = pi[y];
    if (w == 0.0) continue;
    const auto row = game.row(k, y);
    for (std::size_t j = 0; j < n; ++j) out[j] += w * row[j];
  }
}

std::vector<double> log_of(std::span<const double> p) {
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = p[i] > 0.0 ? std::log(p[i]) : kNegInf;
  return out;
}

// Fills log_weights[y'] = log pi_ref(y') - score(y') / beta and returns the
// log partition function.
double log_partition(std::span<const double> score, std::span<const double> log_ref, double beta,
                     std::span<double> log_weights) {
  for (std::size_t j = 0; j < score.size(); ++j) {
    log_weights[j] = log_ref[j] == kNegInf ? kNegInf : log_ref[j] - score[j] / beta;
  }
  return log_sum_exp(log_weights);
}

// Reusable buffers for the per-prompt evaluation.
struct Workspace {
  std::vector<double> score, log_w, best_log_w;
  void resize(std::size_t n) {
    score.resize(n);
    log_w.resize(n);
    best_log_w.resize(n);
  }
};

// Computes -beta log Z^k for every k, returns k*, and, when `g` is non-empty,
// the gradient at k*.
std::size_t evaluate_prompt(const PromptGame& game, std::span<const double> pi, std::span<const double> log_ref,
                            double beta, std::span<double> values, std::span<double> g, Workspace& ws) {
  const std::size_t n = game.n_responses();
  ws.resize(n);
  std::size_t k_star = 0;
  double best_lse = 0.0;
  for (std::size_t k = 0; k < game.n_criteria(); ++k) {
    accumulate_comparator_preference(game, pi, k, ws.score);
    const double lse = log_partition(ws.score, log_ref, beta, ws.log_w);
    values[k] = -beta * lse;
    assert(values[k] >= -kBoundSlack && values[k] <= 1.0 + kBoundSlack);
    if (k == 0 || values[k] < values[k_star]) {
      k_star = k;
      best_lse = lse;
      std::swap(ws.log_w, ws.best_log_w);
    }
  }
  if (!g.empty()) {
    for (std::size_t j = 0; j < n; ++j) {
      ws.best_log_w[j] = ws.best_log_w[j] == kNegInf ? 0.0 : std::exp(ws.best_log_w[j] - best_lse);
    }
    for (std::size_t z = 0; z < n; ++z) {
      const auto row = game.row(k_star, z);
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += row[j] * ws.best_log_w[j];
      g[z] = acc;
      assert(acc >= -kBoundSlack && acc <= 1.0 + kBoundSlack);
    }
  }
  return k_star;
}

void centered(std::span<const double> g, std::span<const double> pi, std::vector<double>& advantage) {
  double mean = 0.0;
  for (std::size_t z = 0; z < g.size(); ++z) mean += pi[z] * g[z];
  advantage.resize(g.size());
  for (std::size_t z = 0; z < g.size(); ++z) advantage[z] = g[z] - mean;
}

// In-place pi <- pi * exp(eta * a) / normalizer via log-domain softmax.
void exponentiated_step(std::vector<double>& pi, std::span<const double> a, double eta, std::vector<double>& logits) {
  logits.resize(pi.size());
  for (std::size_t z = 0; z < pi.size(); ++z) {
    logits[z] = pi[z] > 0.0 ? std::log(pi[z]) + eta * a[z] : kNegInf;
  }
  const double lse = log_sum_exp(logits);
  for (std::size_t z = 0; z < pi.size(); ++z) pi[z] = logits[z] == kNegInf ? 0.0 : std::exp(logits[z] - lse);
}

}  // namespace

std::vector<double> comparator_preference(const PromptGame& game, std::span<const double> pi, std::size_t k) {
  validate_simplex(pi, game.n_responses(), "policy");
  require(k < game.n_criteria(), "criterion index out of range");
  std::vector<double> out(game.n_responses());
  accumulate_comparator_preference(game, pi, k, out);
  return out;
}

double partition_value(const PromptGame& game, std::span<const double> pi, std::span<const double> pi_ref,
                       std::size_t k, double beta) {
  check_inputs(game, pi, pi_ref);
  check_beta(beta);
  require(k < game.n_criteria(), "criterion index out of range");
  const std::size_t n = game.n_responses();
  std::vector<double> score(n), log_w(n);
  accumulate_comparator_preference(game, pi, k, score);
  return -beta * log_partition(score, log_of(pi_ref), beta, log_w);
}

double partition_value(const PromptGame& game, std::span<const double> pi, std::span<const double> pi_ref,
                       std::span<const double> w, double beta) {
  check_inputs(game, pi, pi_ref);
  check_beta(beta);
  validate_simplex(w, game.n_criteria(), "criterion weights");
  const std::size_t n = game.n_responses();
  std::vector<double> score(n, 0.0), part(n), log_w(n);
  for (std::size_t k = 0; k < game.n_criteria(); ++k) {
    if (w[k] == 0.0) continue;
    accumulate_comparator_preference(game, pi, k, part);
    for (std::size_t j = 0; j < n; ++j) score[j] += w[k] * part[j];
  }
  return -beta * log_partition(score, log_of(pi_ref), beta, log_w);
}

CriterionChoice worst_case_criterion(const PromptGame& game, std::span<const double> pi,
                                     std::span<const double> pi_ref, double beta) {
  check_inputs(game, pi, pi_ref);
  check_beta(beta);
  CriterionChoice out;
  out.values.resize(game.n_criteria());
  Workspace ws;
  out.k_star = evaluate_prompt(game, pi, log_of(pi_ref), beta, out.values, {}, ws);
  return out;
}

ValueReport game_value(const GameSet& games, const TabularPolicy& pi, const TabularPolicy& pi_ref, double beta) {
  pi.check_compatible(games, "game_value(pi)");
  pi_ref.check_compatible(games, "game_value(pi_ref)");
  ValueReport report;
  for (std::size_t x = 0; x < games.size(); ++x) {
    auto choice = worst_case_criterion(games[x], pi[x], pi_ref[x], beta);
    PromptValue pv;
    pv.prompt_id = games[x].prompt_id();
    pv.k_star = choice.k_star;
    pv.value = choice.values[choice.k_star];
    pv.values = std::move(choice.values);
    report.total += games.weight(x) * pv.value;
    report.prompts.push_back(std::move(pv));
  }
  return report;
}

Distribution adversary_best_response(const PromptGame& game, std::span<const double> pi,
                                     std::span<const double> pi_ref, std::span<const double> w, double beta) {
  check_inputs(game, pi, pi_ref);
  check_beta(beta);
  validate_simplex(w, game.n_criteria(), "criterion weights");
  const std::size_t n = game.n_responses();
  std::vector<double> score(n, 0.0), part(n), log_w(n);
  for (std::size_t k = 0; k < game.n_criteria(); ++k) {
    if (w[k] == 0.0) continue;
    accumulate_comparator_preference(game, pi, k, part);
    for (std::size_t j = 0; j < n; ++j) score[j] += w[k] * part[j];
  }
  const double lse = log_partition(score, log_of(pi_ref), beta, log_w);
  Distribution out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = log_w[j] == kNegInf ? 0.0 : std::exp(log_w[j] - lse);
  return out;
}

double regularized_objective(const PromptGame& game, std::span<const double> pi,
                             std::span<const double> comparator, std::span<const double> pi_ref,
                             std::span<const double> w, double beta) {
  validate_simplex(w, game.n_criteria(), "criterion weights");
  const auto v = policy_pref_vector(game, pi, comparator);
  double acc = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) acc += w[k] * v[k];
  return acc + beta * kl_divergence(comparator, pi_ref);
}

std::vector<double> criterion_gradient(const PromptGame& game, std::span<const double> pi,
                                       std::span<const double> pi_ref, std::size_t k, double beta) {
  require(k < game.n_criteria(), "criterion index out of range");
  const auto w = point_mass(game.n_criteria(), k);
  const auto q = adversary_best_response(game, pi, pi_ref, w, beta);
  const std::size_t n = game.n_responses();
  std::vector<double> g(n);
  for (std::size_t z = 0; z < n; ++z) {
    const auto row = game.row(k, z);
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += row[j] * q[j];
    g[z] = acc;
  }
  return g;
}

GradientField exact_gradient(const GameSet& games, const TabularPolicy& pi, const TabularPolicy& pi_ref,
                             double beta) {
  pi.check_compatible(games, "exact_gradient(pi)");
  pi_ref.check_compatible(games, "exact_gradient(pi_ref)");
  check_beta(beta);
  GradientField field;
  Workspace ws;
  for (std::size_t x = 0; x < games.size(); ++x) {
    const auto& game = games[x];
    PromptGradient pg;
    pg.g.resize(game.n_responses());
    std::vector<double> values(game.n_criteria());
    pg.k_star = evaluate_prompt(game, pi[x], log_of(pi_ref[x]), beta, values, pg.g, ws);
    centered(pg.g, pi[x], pg.advantage);
    field.prompts.push_back(std::move(pg));
  }
  return field;
}

TabularPolicy mirror_descent_step(const TabularPolicy& pi, const GradientField& grad, double eta) {
  require(eta > 0.0 && std::isfinite(eta), "mirror_descent_step: eta must be positive");
  require(grad.prompts.size() == pi.size(), "mirror_descent_step: gradient covers a different prompt count");
  std::vector<Distribution> next;
  std::vector<double> logits;
  for (std::size_t x = 0; x < pi.size(); ++x) {
    require(grad.prompts[x].advantage.size() == pi[x].size(), "mirror_descent_step: gradient size mismatch");
    Distribution p(pi[x].begin(), pi[x].end());
    exponentiated_step(p, grad.prompts[x].advantage, eta, logits);
    next.push_back(std::move(p));
  }
  return TabularPolicy(pi.prompt_ids(), std::move(next));
}

ExactSolveResult solve_exact(const GameSet& games, const TabularPolicy& pi_ref, double beta,
                             std::optional<double> eta, std::size_t T, const SolveOptions& options) {
  pi_ref.check_compatible(games, "solve_exact(pi_ref)");
  check_beta(beta);
  require(T >= 1, "solve_exact: T must be at least 1");
  ExactSolveResult result;
  result.eta = eta ? *eta : default_step_size(games.max_responses(), T);
  require(result.eta > 0.0 && std::isfinite(result.eta), "solve_exact: eta must be positive");

  const std::size_t P = games.size();
  std::vector<std::vector<double>> log_ref(P), values(P), grad(P), adv(P);
  std::vector<Distribution> pi(P);
  for (std::size_t x = 0; x < P; ++x) {
    log_ref[x] = log_of(pi_ref[x]);
    values[x].resize(games[x].n_criteria());
    grad[x].resize(games[x].n_responses());
    pi[x].assign(pi_ref[x].begin(), pi_ref[x].end());
  }
  Workspace ws;
  std::vector<double> logits;
  std::vector<std::size_t> k_star(P);

  // Evaluates V(pi) and leaves gradients for the next step in `grad`.
  auto evaluate_all = [&]() {
    double total = 0.0;
    for (std::size_t x = 0; x < P; ++x) {
      k_star[x] = evaluate_prompt(games[x], pi[x], log_ref[x], beta, values[x], grad[x], ws);
      total += games.weight(x) * values[x][k_star[x]];
    }
    return total;
  };
  auto record = [&](double v) {
    result.values.push_back(v);
    if (options.record_k_star) result.k_star.push_back(k_star);
    if (options.record_policies) result.policies.emplace_back(pi_ref.prompt_ids(), pi);
  };

  std::vector<Distribution> best_pi;
  result.values.reserve(T + 1);
  record(evaluate_all());
  result.best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 1; t <= T; ++t) {
    for (std::size_t x = 0; x < P; ++x) {
      centered(grad[x], pi[x], adv[x]);
      exponentiated_step(pi[x], adv[x], result.eta, logits);
    }
    const double v = evaluate_all();
    record(v);
    if (v > result.best_value) {
      result.best_value = v;
      result.best_iteration = t;
      best_pi = pi;
    }
  }
  result.best = TabularPolicy(pi_ref.prompt_ids(), std::move(best_pi));
  result.last = TabularPolicy(pi_ref.prompt_ids(), pi);
  return result;
}

}  // namespace prosper
