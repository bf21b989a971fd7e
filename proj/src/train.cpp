#include "prosper/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "prosper/error.hpp"
#include "prosper/judge.hpp"
#include "prosper/solver.hpp"
#include "parallel.hpp"

namespace prosper {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<std::size_t> draw(std::span<const double> p, std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::size_t> out(count);
  for (auto& v : out) v = rng.categorical(p);
  return out;
}

// out[j] = (1/M) sum_i P^k(y_i > y'_j).
void comparator_exponents(std::span<const std::size_t> y, std::span<const std::size_t> y_ref,
                          const PromptGame& game, std::size_t k, std::vector<double>& out) {
  out.assign(y_ref.size(), 0.0);
  for (std::size_t j = 0; j < y_ref.size(); ++j) {
    double s = 0.0;
    for (std::size_t i : y) s += game.pref(k, i, y_ref[j]);
    out[j] = s / static_cast<double>(y.size());
  }
}

void check_indices(std::span<const std::size_t> idx, std::size_t n, const char* what) {
  for (std::size_t v : idx) require(v < n, std::string(what) + ": response index out of range");
}

// Pairs grouped by prompt, preserving order.
std::vector<std::vector<const RegressionPair*>> group_pairs(std::size_t n_prompts,
                                                            std::span<const RegressionPair> pairs) {
  std::vector<std::vector<const RegressionPair*>> out(n_prompts);
  for (const auto& p : pairs) {
    require(p.prompt < n_prompts, "regression pair prompt index out of range");
    out[p.prompt].push_back(&p);
  }
  return out;
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t v) {
  while (parent[v] != v) {
    parent[v] = parent[parent[v]];
    v = parent[v];
  }
  return v;
}

// Minimum-norm solution of the ridge-free tabular problem for one prompt, or
// nullopt when the per-response targets disagree across pairs.
std::optional<Eigen::VectorXd> tabular_closed_form(std::size_t n, const std::vector<const RegressionPair*>& pairs,
                                                   double eta) {
  std::vector<double> target(n, std::numeric_limits<double>::quiet_NaN());
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto assign = [&](std::size_t z, double g) {
    if (std::isnan(target[z])) {
      target[z] = g;
      return true;
    }
    return target[z] == g;
  };
  for (const auto* p : pairs) {
    if (p->weight <= 0.0 || p->z == p->z_ref) continue;
    if (!assign(p->z, p->target) || !assign(p->z_ref, p->target_ref)) return std::nullopt;
    parent[find_root(parent, p->z)] = find_root(parent, p->z_ref);
  }
  Eigen::VectorXd delta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  std::vector<double> sum(n, 0.0);
  std::vector<std::size_t> count(n, 0);
  for (std::size_t z = 0; z < n; ++z) {
    if (std::isnan(target[z])) continue;
    const std::size_t r = find_root(parent, z);
    sum[r] += eta * target[z];
    ++count[r];
  }
  for (std::size_t z = 0; z < n; ++z) {
    if (std::isnan(target[z])) continue;
    const std::size_t r = find_root(parent, z);
    delta[static_cast<Eigen::Index>(z)] = eta * target[z] - sum[r] / static_cast<double>(count[r]);
  }
  return delta;
}

// Solves (sum_p w a a^T + lambda I) u = sum_p w d a with d the target
// difference; the parameter change is eta * u. The scaling by eta keeps the
// system well conditioned for small step sizes.
Eigen::VectorXd solve_normal_equations(const Eigen::MatrixXd& gram, const Eigen::VectorXd& rhs, double ridge,
                                       double eta, bool allow_pseudo_inverse) {
  const Eigen::Index d = gram.rows();
  if (ridge > 0.0) {
    Eigen::MatrixXd h = gram;
    h.diagonal().array() += ridge * eta * eta;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
    return eta * ldlt.solve(rhs);
  }
  if (allow_pseudo_inverse) {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(gram);
    return eta * cod.solve(rhs);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(gram);
  if (qr.rank() < d) {
    throw Error(ErrorCategory::kRankDeficiency,
                "regression normal equations are singular (rank " + std::to_string(qr.rank()) + " of " +
                    std::to_string(d) + "); use ridge > 0");
  }
  return eta * qr.solve(rhs);
}

Eigen::VectorXd tabular_delta(std::size_t n, const std::vector<const RegressionPair*>& pairs, double eta,
                              double ridge) {
  if (pairs.empty()) return Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  if (ridge == 0.0) {
    if (auto closed = tabular_closed_form(n, pairs, eta)) return *closed;
  }
  const auto dim = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
  for (const auto* p : pairs) {
    const auto a = static_cast<Eigen::Index>(p->z);
    const auto b = static_cast<Eigen::Index>(p->z_ref);
    if (a == b) continue;
    const double d = p->target - p->target_ref;
    gram(a, a) += p->weight;
    gram(b, b) += p->weight;
    gram(a, b) -= p->weight;
    gram(b, a) -= p->weight;
    rhs[a] += p->weight * d;
    rhs[b] -= p->weight * d;
  }
  // The tabular problem always has per-component constant directions in its
  // null space; they do not change the policy, so the minimum-norm solution
  // is used instead of reporting rank deficiency.
  return solve_normal_equations(gram, rhs, ridge, eta, true);
}

TabularPolicy apply_log_delta(const TabularPolicy& pi, const std::vector<Eigen::VectorXd>& delta) {
  std::vector<Distribution> probs(pi.size());
  std::vector<double> logits;
  for (std::size_t x = 0; x < pi.size(); ++x) {
    const auto p = pi[x];
    // A constant shift is no change; copy to avoid log/exp round-off.
    const auto& d = delta[x];
    if (d.size() == 0 || (d.array() == d[0]).all()) {
      probs[x].assign(p.begin(), p.end());
      continue;
    }
    logits.resize(p.size());
    for (std::size_t z = 0; z < p.size(); ++z) {
      logits[z] = p[z] > 0.0 ? std::log(p[z]) + delta[x][static_cast<Eigen::Index>(z)] : kNegInf;
    }
    probs[x] = softmax(logits);
  }
  return TabularPolicy(pi.prompt_ids(), std::move(probs));
}

std::size_t mode_of(const std::vector<std::size_t>& histogram) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < histogram.size(); ++k) {
    if (histogram[k] > histogram[best]) best = k;
  }
  return best;
}

// Exact targets for one prompt: k* (or the large-beta criterion) and the
// full gradient vector.
struct ExactTargets {
  std::size_t k = 0;
  std::vector<double> g;
};

ExactTargets exact_targets(const PromptGame& game, std::span<const double> pi, std::span<const double> pi_ref,
                           double beta, Variant variant) {
  ExactTargets out;
  const std::size_t n = game.n_responses();
  if (variant == Variant::kVariationalBound) {
    out.k = argmin_lowest(policy_pref_vector(game, pi, pi_ref));
    out.g.assign(n, 0.0);
    for (std::size_t z = 0; z < n; ++z) {
      for (std::size_t y = 0; y < n; ++y) out.g[z] += pi_ref[y] * game.pref(out.k, z, y);
    }
    return out;
  }
  out.k = worst_case_criterion(game, pi, pi_ref, beta).k_star;
  out.g = criterion_gradient(game, pi, pi_ref, out.k, beta);
  return out;
}

}  // namespace

std::uint64_t batch_seed(std::uint64_t seed, std::size_t iteration, std::size_t prompt, SampleRole role) {
  return derive_seed(seed, {iteration, prompt, static_cast<std::uint64_t>(role)});
}

BatchSample sample_batch(std::span<const double> pi_t, std::span<const double> pi_ref, std::size_t M,
                         std::size_t rollouts, std::size_t reference_rollouts, bool fresh, std::uint64_t seed,
                         std::size_t iteration, std::size_t prompt) {
  require(M >= 1, "sample_batch: M must be at least 1");
  require(pi_t.size() == pi_ref.size(), "sample_batch: policy sizes differ");
  BatchSample b;
  b.y = draw(pi_t, M, batch_seed(seed, iteration, prompt, SampleRole::kY));
  b.y_ref = draw(pi_ref, M, batch_seed(seed, iteration, prompt, SampleRole::kYRef));
  b.z = draw(pi_t, rollouts, batch_seed(seed, iteration, prompt, SampleRole::kZ));
  b.z_ref = draw(pi_ref, reference_rollouts, batch_seed(seed, iteration, prompt, SampleRole::kZRef));
  if (fresh) {
    b.y_grad = draw(pi_t, M, batch_seed(seed, iteration, prompt, SampleRole::kYGrad));
    b.y_ref_grad = draw(pi_ref, M, batch_seed(seed, iteration, prompt, SampleRole::kYRefGrad));
  }
  return b;
}

KhatEstimate estimate_khat(std::span<const std::size_t> y, std::span<const std::size_t> y_ref,
                           const PromptGame& game, double beta) {
  require(!y.empty() && !y_ref.empty(), "estimate_khat: empty batch");
  require(beta > 0.0, "estimate_khat: beta must be positive");
  check_indices(y, game.n_responses(), "estimate_khat");
  check_indices(y_ref, game.n_responses(), "estimate_khat");
  KhatEstimate out;
  out.values.resize(game.n_criteria());
  std::vector<double> e;
  for (std::size_t k = 0; k < game.n_criteria(); ++k) {
    comparator_exponents(y, y_ref, game, k, e);
    for (double& v : e) v = -v / beta;
    const double log_z = log_sum_exp(e) - std::log(static_cast<double>(y_ref.size()));
    out.values[k] = -beta * log_z;
  }
  out.k_hat = argmin_lowest(out.values);
  return out;
}

KhatEstimate estimate_khat(const BatchSample& batch, const PromptGame& game, double beta) {
  return estimate_khat(batch.y, batch.y_ref, game, beta);
}

double estimate_gradient(std::span<const std::size_t> y, std::span<const std::size_t> y_ref,
                         const PromptGame& game, std::size_t k, double beta, std::size_t z) {
  require(!y.empty() && !y_ref.empty(), "estimate_gradient: empty batch");
  require(k < game.n_criteria(), "estimate_gradient: criterion out of range");
  require(z < game.n_responses(), "estimate_gradient: response out of range");
  check_indices(y, game.n_responses(), "estimate_gradient");
  check_indices(y_ref, game.n_responses(), "estimate_gradient");
  std::vector<double> e;
  comparator_exponents(y, y_ref, game, k, e);
  for (double& v : e) v = -v / beta;
  const double top = *std::max_element(e.begin(), e.end());
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < y_ref.size(); ++j) {
    const double w = std::exp(e[j] - top);
    num += w * game.pref(k, z, y_ref[j]);
    den += w;
  }
  return std::clamp(num / den, 0.0, 1.0);
}

double estimate_gradient(const BatchSample& batch, const PromptGame& game, std::size_t k, double beta,
                         std::size_t z) {
  return estimate_gradient(batch.weight_y(), batch.weight_y_ref(), game, k, beta, z);
}

KhatEstimate estimate_khat_limit(std::span<const std::size_t> y, std::span<const std::size_t> y_ref,
                                 const PromptGame& game) {
  require(!y.empty() && !y_ref.empty(), "estimate_khat_limit: empty batch");
  check_indices(y, game.n_responses(), "estimate_khat_limit");
  check_indices(y_ref, game.n_responses(), "estimate_khat_limit");
  KhatEstimate out;
  out.values.resize(game.n_criteria());
  std::vector<double> e;
  for (std::size_t k = 0; k < game.n_criteria(); ++k) {
    comparator_exponents(y, y_ref, game, k, e);
    out.values[k] = std::accumulate(e.begin(), e.end(), 0.0) / static_cast<double>(e.size());
  }
  out.k_hat = argmin_lowest(out.values);
  return out;
}

double estimate_gradient_limit(std::span<const std::size_t> y_ref, const PromptGame& game, std::size_t k,
                               std::size_t z) {
  require(!y_ref.empty(), "estimate_gradient_limit: empty batch");
  require(k < game.n_criteria() && z < game.n_responses(), "estimate_gradient_limit: index out of range");
  check_indices(y_ref, game.n_responses(), "estimate_gradient_limit");
  double s = 0.0;
  for (std::size_t y : y_ref) s += game.pref(k, z, y);
  return s / static_cast<double>(y_ref.size());
}

double RegressionPair::gap() const { return std::abs(target - target_ref); }

std::vector<RegressionPair> filter_pairs(std::vector<RegressionPair> pairs, double rho) {
  require(rho > 0.0 && rho <= 1.0, "filtration ratio must lie in (0, 1]");
  if (pairs.empty()) throw Error(ErrorCategory::kNoPairs, "no regression pairs to filter");
  std::stable_sort(pairs.begin(), pairs.end(), [](const RegressionPair& a, const RegressionPair& b) {
    const double ga = a.gap();
    const double gb = b.gap();
    if (ga != gb) return ga > gb;
    if (a.prompt != b.prompt) return a.prompt < b.prompt;
    if (a.z != b.z) return a.z < b.z;
    return a.z_ref < b.z_ref;
  });
  // The small slack keeps products such as (1/3) * 3 from rounding up.
  const double raw = rho * static_cast<double>(pairs.size());
  auto keep = static_cast<std::size_t>(std::ceil(raw - 1e-9));
  keep = std::clamp<std::size_t>(keep, 1, pairs.size());
  pairs.resize(keep);
  return pairs;
}

std::vector<RegressionPair> build_and_filter_pairs(std::span<const PromptTargets> targets, double rho,
                                                   bool include_same_policy) {
  std::vector<RegressionPair> pool;
  for (std::size_t x = 0; x < targets.size(); ++x) {
    const auto& t = targets[x];
    require(t.z.size() == t.g_z.size() && t.z_ref.size() == t.g_z_ref.size(),
            "rollouts and targets differ in length");
    for (std::size_t a = 0; a < t.z.size(); ++a) {
      for (std::size_t b = 0; b < t.z_ref.size(); ++b) {
        pool.push_back({x, t.z[a], t.z_ref[b], t.g_z[a], t.g_z_ref[b], 1.0});
      }
    }
    if (include_same_policy) {
      for (std::size_t a = 0; a < t.z.size(); ++a) {
        for (std::size_t b = a + 1; b < t.z.size(); ++b) pool.push_back({x, t.z[a], t.z[b], t.g_z[a], t.g_z[b], 1.0});
      }
      for (std::size_t a = 0; a < t.z_ref.size(); ++a) {
        for (std::size_t b = a + 1; b < t.z_ref.size(); ++b) {
          pool.push_back({x, t.z_ref[a], t.z_ref[b], t.g_z_ref[a], t.g_z_ref[b], 1.0});
        }
      }
    }
  }
  return filter_pairs(std::move(pool), rho);
}

TabularPolicy regression_update(const TabularPolicy& pi_t, std::span<const RegressionPair> pairs, double eta,
                                double ridge) {
  require(eta > 0.0, "step size must be positive");
  require(ridge >= 0.0, "ridge must be nonnegative");
  if (pairs.empty()) throw Error(ErrorCategory::kNoPairs, "regression_update: no pairs");
  const auto grouped = group_pairs(pi_t.size(), pairs);
  std::vector<Eigen::VectorXd> delta(pi_t.size());
  for (std::size_t x = 0; x < pi_t.size(); ++x) {
    const std::size_t n = pi_t[x].size();
    for (const auto* p : grouped[x]) require(p->z < n && p->z_ref < n, "regression pair response out of range");
    delta[x] = tabular_delta(n, grouped[x], eta, ridge);
  }
  return apply_log_delta(pi_t, delta);
}

LinearSoftmaxPolicy regression_update(const LinearSoftmaxPolicy& pi_t, std::span<const RegressionPair> pairs,
                                      double eta, double ridge) {
  require(eta > 0.0, "step size must be positive");
  require(ridge >= 0.0, "ridge must be nonnegative");
  if (pairs.empty()) throw Error(ErrorCategory::kNoPairs, "regression_update: no pairs");
  const auto d = static_cast<Eigen::Index>(pi_t.dimension());
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd a(d);
  for (const auto& p : pairs) {
    require(p.prompt < pi_t.size(), "regression pair prompt index out of range");
    const auto& phi = pi_t.features()[p.prompt];
    require(p.z < static_cast<std::size_t>(phi.rows()) && p.z_ref < static_cast<std::size_t>(phi.rows()),
            "regression pair response out of range");
    a = phi.row(static_cast<Eigen::Index>(p.z)) - phi.row(static_cast<Eigen::Index>(p.z_ref));
    gram.noalias() += p.weight * a * a.transpose();
    rhs.noalias() += p.weight * (p.target - p.target_ref) * a;
  }
  const Eigen::VectorXd step = solve_normal_equations(gram, rhs, ridge, eta, false);
  return pi_t.with_theta(pi_t.theta() + step);
}

double regression_residual(const TabularPolicy& before, const TabularPolicy& after,
                           std::span<const RegressionPair> pairs, double eta) {
  require(before.size() == after.size(), "regression_residual: policy sizes differ");
  double num = 0.0;
  double den = 0.0;
  for (const auto& p : pairs) {
    const auto b = before[p.prompt];
    const auto a = after[p.prompt];
    if (b[p.z] <= 0.0 || b[p.z_ref] <= 0.0 || a[p.z] <= 0.0 || a[p.z_ref] <= 0.0) continue;
    const double dz = std::log(a[p.z]) - std::log(b[p.z]);
    const double dz_ref = std::log(a[p.z_ref]) - std::log(b[p.z_ref]);
    const double r = (dz - dz_ref) / eta - (p.target - p.target_ref);
    num += p.weight * r * r;
    den += p.weight;
  }
  return den > 0.0 ? num / den : 0.0;
}

TrainResult train(const GameSet& games, const TabularPolicy& pi_ref, const SolverConfig& config,
                  const TrainOptions& options) {
  config.validate();
  pi_ref.check_compatible(games, "reference policy");
  const std::size_t n_prompts = games.size();

  std::optional<GameSet> jc_games;
  if (config.variant == Variant::kJointCheck) jc_games = scalarize_to_jc(games);
  const GameSet& train_games = jc_games ? *jc_games : games;

  TrainResult result;
  result.eta = config.step_size(games.max_responses());
  const double eta = result.eta;

  bool ref_positive = true;
  for (std::size_t x = 0; x < n_prompts; ++x) {
    for (double v : pi_ref[x]) ref_positive = ref_positive && v > 0.0;
  }

  std::optional<LinearSoftmaxPolicy> linear;
  TabularPolicy pi = pi_ref;
  if (options.policy_class == PolicyClass::kLinearSoftmax) {
    require(ref_positive, "linear-softmax training needs a strictly positive reference policy");
    auto features = options.features.empty() ? LinearSoftmaxPolicy::one_hot_features(games) : options.features;
    std::vector<Eigen::VectorXd> offsets(n_prompts);
    for (std::size_t x = 0; x < n_prompts; ++x) {
      const auto r = pi_ref[x];
      offsets[x].resize(static_cast<Eigen::Index>(r.size()));
      for (std::size_t z = 0; z < r.size(); ++z) offsets[x][static_cast<Eigen::Index>(z)] = std::log(r[z]);
    }
    const Eigen::Index d = features.empty() ? 0 : features.front().cols();
    Eigen::VectorXd theta = options.initial_theta ? *options.initial_theta : Eigen::VectorXd::Zero(d);
    linear.emplace(pi_ref.prompt_ids(), std::move(features), std::move(theta), std::move(offsets));
    pi = linear->induced();
  } else if (options.initial_policy) {
    options.initial_policy->check_compatible(games, "initial policy");
    pi = *options.initial_policy;
  }

  auto value_of = [&](const TabularPolicy& policy) { return game_value(games, policy, pi_ref, config.beta).total; };

  auto& diag = result.diagnostics;
  diag.values.push_back(value_of(pi));
  result.best = pi;
  result.best_value = -std::numeric_limits<double>::infinity();
  const std::size_t m_max = train_games.max_criteria();

  for (std::size_t t = 0; t < config.T; ++t) {
    const std::size_t stream_t = options.iteration_offset + t;
    TrainRow row;
    row.iteration = t;
    row.value = diag.values.back();
    row.concentrability = ref_positive ? concentrability(pi, pi_ref, games) : std::numeric_limits<double>::quiet_NaN();
    row.khat_histogram.assign(m_max, 0);

    std::vector<std::size_t> k_used(n_prompts, 0);
    std::vector<RegressionPair> pairs;
    if (config.estimator == Estimator::kExact) {
      std::vector<ExactTargets> exact(n_prompts);
      detail::parallel_for(n_prompts, options.threads, [&](std::size_t x) {
        exact[x] = exact_targets(train_games[x], pi[x], pi_ref[x], config.beta, config.variant);
      });
      for (std::size_t x = 0; x < n_prompts; ++x) {
        k_used[x] = exact[x].k;
        const auto p = pi[x];
        const auto r = pi_ref[x];
        for (std::size_t z = 0; z < p.size(); ++z) {
          for (std::size_t zr = 0; zr < r.size(); ++zr) {
            const double w = p[z] * r[zr];
            if (z == zr || w <= 0.0) continue;
            pairs.push_back({x, z, zr, exact[x].g[z], exact[x].g[zr], w});
          }
        }
      }
      if (pairs.empty()) throw Error(ErrorCategory::kNoPairs, "exact estimator produced no pairs");
    } else {
      std::vector<PromptTargets> targets(n_prompts);
      detail::parallel_for(n_prompts, options.threads, [&](std::size_t x) {
        const auto& game = train_games[x];
        const auto batch = sample_batch(pi[x], pi_ref[x], config.M, config.current_rollouts(),
                                        config.reference_rollouts(), config.fresh_samples, config.seed, stream_t, x);
        auto& tx = targets[x];
        tx.z = batch.z;
        tx.z_ref = batch.z_ref;
        if (config.variant == Variant::kVariationalBound) {
          k_used[x] = estimate_khat_limit(batch.y, batch.y_ref, game).k_hat;
          for (std::size_t z : batch.z) tx.g_z.push_back(estimate_gradient_limit(batch.weight_y_ref(), game, k_used[x], z));
          for (std::size_t z : batch.z_ref) {
            tx.g_z_ref.push_back(estimate_gradient_limit(batch.weight_y_ref(), game, k_used[x], z));
          }
        } else {
          k_used[x] = estimate_khat(batch, game, config.beta).k_hat;
          for (std::size_t z : batch.z) tx.g_z.push_back(estimate_gradient(batch, game, k_used[x], config.beta, z));
          for (std::size_t z : batch.z_ref) {
            tx.g_z_ref.push_back(estimate_gradient(batch, game, k_used[x], config.beta, z));
          }
        }
      });
      pairs = build_and_filter_pairs(targets, config.rho, config.include_same_policy_pairs);
    }
    for (std::size_t k : k_used) ++row.khat_histogram[k];
    row.khat_mode = mode_of(row.khat_histogram);
    row.pairs_kept = pairs.size();

    TabularPolicy next;
    if (linear) {
      linear = regression_update(*linear, pairs, eta, config.ridge);
      next = linear->induced();
    } else {
      next = regression_update(pi, pairs, eta, config.ridge);
    }
    row.epsilon = regression_residual(pi, next, pairs, eta);
    diag.rows.push_back(std::move(row));
    pi = std::move(next);
    const double v = value_of(pi);
    diag.values.push_back(v);
    if (v > result.best_value) {
      result.best_value = v;
      result.best_iteration = t + 1;
      result.best = pi;
    }
  }

  result.final_tabular = pi;
  if (linear) {
    result.final_policy = *linear;
  } else {
    result.final_policy = pi;
  }
  return result;
}

std::vector<EpochSpec> default_schedule(std::size_t T) { return {{T, 0.15}, {T, 0.17}}; }

ScheduleResult train_schedule(const GameSet& games, const TabularPolicy& pi_ref, const SolverConfig& config,
                              std::span<const EpochSpec> schedule, const TrainOptions& options) {
  require(!schedule.empty(), "training schedule is empty");
  ScheduleResult out;
  TrainOptions opts = options;
  std::size_t offset = options.iteration_offset;
  for (const auto& epoch : schedule) {
    SolverConfig cfg = config;
    cfg.T = epoch.T;
    cfg.rho = epoch.rho;
    opts.iteration_offset = offset;
    auto res = train(games, pi_ref, cfg, opts);
    offset += epoch.T;
    if (const auto* lin = std::get_if<LinearSoftmaxPolicy>(&res.final_policy)) {
      opts.initial_theta = lin->theta();
    } else {
      opts.initial_policy = res.final_tabular;
    }
    out.epochs.push_back(std::move(res));
  }
  out.final_policy = out.epochs.back().final_policy;
  out.final_tabular = out.epochs.back().final_tabular;
  return out;
}

}  // namespace prosper
