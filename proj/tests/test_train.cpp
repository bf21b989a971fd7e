#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "prosper/error.hpp"
#include "prosper/judge.hpp"
#include "prosper/solver.hpp"
#include "prosper/train.hpp"

using namespace prosper;

namespace {

ErrorCategory category_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.category();
  }
  FAIL("expected an error");
  return ErrorCategory::kIo;
}

GameSet random_set(std::mt19937_64& rng, std::size_t prompts, std::size_t n, std::size_t m) {
  std::vector<PromptGame> games;
  for (std::size_t x = 0; x < prompts; ++x) {
    auto g = oracle::random_game(rng, n, m);
    games.push_back(PromptGame("p" + std::to_string(x), n, g.criteria(), g.data()));
  }
  return GameSet(games);
}

GameSet constant_set(std::size_t prompts, std::size_t n, std::size_t m) {
  std::vector<PromptGame> games;
  for (std::size_t x = 0; x < prompts; ++x) {
    std::vector<std::vector<std::vector<double>>> p(m, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.5)));
    games.push_back(PromptGame::from_matrices("c" + std::to_string(x), p));
  }
  return GameSet(games);
}

std::vector<std::string> ids(const GameSet& gs) { return TabularPolicy::uniform(gs).prompt_ids(); }

double max_tv(const TabularPolicy& a, const TabularPolicy& b) {
  double out = 0.0;
  for (std::size_t x = 0; x < a.size(); ++x) out = std::max(out, oracle::total_variation(a[x], b[x]));
  return out;
}

// All cross pairs of every prompt with exact targets g.
std::vector<RegressionPair> all_pairs(const std::vector<std::vector<double>>& g) {
  std::vector<RegressionPair> pairs;
  for (std::size_t x = 0; x < g.size(); ++x) {
    for (std::size_t z = 0; z < g[x].size(); ++z) {
      for (std::size_t zr = 0; zr < g[x].size(); ++zr) {
        if (z != zr) pairs.push_back({x, z, zr, g[x][z], g[x][zr], 1.0});
      }
    }
  }
  return pairs;
}

}  // namespace

TEST_CASE("sample_batch determinism, degenerate and frequency checks") {
  const std::vector<double> d0{1.0, 0.0, 0.0};
  const std::vector<double> u3{1.0 / 3, 1.0 / 3, 1.0 / 3};
  const auto b = sample_batch(d0, u3, 50, 3, 2, false, 7, 0, 0);
  for (auto y : b.y) CHECK(y == 0);
  for (auto z : b.z) CHECK(z == 0);
  CHECK(b.y.size() == 50);
  CHECK(b.y_ref.size() == 50);
  CHECK(b.z.size() == 3);
  CHECK(b.z_ref.size() == 2);
  CHECK(b.y_grad.empty());

  const auto again = sample_batch(d0, u3, 50, 3, 2, false, 7, 0, 0);
  CHECK(again.y_ref == b.y_ref);
  CHECK(again.z_ref == b.z_ref);
  CHECK(sample_batch(d0, u3, 50, 3, 2, false, 7, 1, 0).y_ref != b.y_ref);
  CHECK(sample_batch(d0, u3, 50, 3, 2, false, 7, 0, 1).y_ref != b.y_ref);

  const auto fresh = sample_batch(u3, u3, 50, 1, 1, true, 7, 0, 0);
  CHECK(fresh.y_grad.size() == 50);
  CHECK(fresh.y_grad != fresh.y);

  const std::vector<double> u4(4, 0.25);
  const auto big = sample_batch(u4, u4, 100000, 1, 1, false, 3, 0, 0);
  std::vector<double> freq(4, 0.0);
  for (auto y : big.y) freq[y] += 1e-5;
  for (double f : freq) CHECK(std::abs(f - 0.25) <= 0.01);
}

TEST_CASE("estimators on a constant game") {
  const auto g = constant_set(1, 4, 3)[0];
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::size_t> pick(0, 3);
  for (double beta : {0.01, 0.5, 3.0}) {
    std::vector<std::size_t> y(5), yr(5);
    for (auto& v : y) v = pick(rng);
    for (auto& v : yr) v = pick(rng);
    const auto kh = estimate_khat(y, yr, g, beta);
    CHECK(kh.k_hat == 0);
    // -beta log exp(-1 / (2 beta)) = 1/2.
    for (double v : kh.values) CHECK(v == doctest::Approx(0.5).epsilon(1e-14));
    for (std::size_t z = 0; z < 4; ++z) CHECK(estimate_gradient(y, yr, g, 1, beta, z) == 0.5);
  }
}

TEST_CASE("enumeration-mode batches reproduce the exact partition value and gradient") {
  std::mt19937_64 rng(2);
  const std::vector<std::size_t> counts_pi{3, 1, 4, 2};
  const std::vector<std::size_t> counts_ref{2, 2, 5, 1};
  const auto y = oracle::enumerate_counts(counts_pi);
  const auto yr = oracle::enumerate_counts(counts_ref);
  const std::vector<double> pi{0.3, 0.1, 0.4, 0.2};
  const std::vector<double> ref{0.2, 0.2, 0.5, 0.1};
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = oracle::random_game(rng, 4, 3);
    const double beta = 0.05 + 0.1 * double(trial % 10);
    const auto kh = estimate_khat(y, yr, g, beta);
    const auto exact = worst_case_criterion(g, pi, ref, beta);
    for (std::size_t k = 0; k < 3; ++k) CHECK(kh.values[k] == doctest::Approx(exact.values[k]).epsilon(1e-12));
    CHECK(kh.k_hat == exact.k_star);
    const auto grad = criterion_gradient(g, pi, ref, kh.k_hat, beta);
    for (std::size_t z = 0; z < 4; ++z) {
      CHECK(estimate_gradient(y, yr, g, kh.k_hat, beta, z) == doctest::Approx(grad[z]).epsilon(1e-12));
    }
  }
}

TEST_CASE("large-beta estimators approach their limits") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> pick(0, 4);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = oracle::random_game(rng, 5, 2);
    std::vector<std::size_t> y(6), yr(6);
    for (auto& v : y) v = pick(rng);
    for (auto& v : yr) v = pick(rng);
    const auto lim = estimate_khat_limit(y, yr, g);
    for (double beta : {1e2, 1e4}) {
      const auto kh = estimate_khat(y, yr, g, beta);
      for (std::size_t k = 0; k < 2; ++k) CHECK(std::abs(kh.values[k] - lim.values[k]) <= 1.0 / beta);
      for (std::size_t z = 0; z < 5; ++z) {
        const double a = estimate_gradient(y, yr, g, 1, beta, z);
        CHECK(std::abs(a - estimate_gradient_limit(yr, g, 1, z)) <= 1.0 / beta);
        CHECK(a >= 0.0);
        CHECK(a <= 1.0);
      }
    }
  }
}

TEST_CASE("tiny beta keeps estimates finite") {
  const auto g = gen_cyclic_game(0, 5, 2, 0.45);
  const std::vector<std::size_t> y{0, 1, 2}, yr{3, 4, 0};
  const auto kh = estimate_khat(y, yr, g, 1e-4);
  for (double v : kh.values) CHECK(std::isfinite(v));
  for (std::size_t z = 0; z < 5; ++z) {
    const double a = estimate_gradient(y, yr, g, kh.k_hat, 1e-4, z);
    CHECK(std::isfinite(a));
    CHECK(a >= 0.0);
    CHECK(a <= 1.0);
  }
}

TEST_CASE("pair filtering semantics") {
  std::vector<PromptTargets> t(1);
  t[0].z = {0, 1, 2};
  t[0].g_z = {0.95, 0.55, 0.15};
  t[0].z_ref = {3};
  t[0].g_z_ref = {0.05};
  // Gaps 0.9, 0.5, 0.1.
  const auto third = build_and_filter_pairs(t, 1.0 / 3.0);
  REQUIRE(third.size() == 1);
  CHECK(third[0].z == 0);
  CHECK(third[0].gap() == doctest::Approx(0.9));
  CHECK(build_and_filter_pairs(t, 1.0).size() == 3);
  CHECK(build_and_filter_pairs(t, 0.01).size() == 1);
  CHECK(build_and_filter_pairs(t, 1.0, true).size() == 3 + 3);

  // Ties keep (prompt, z, z') order.
  std::vector<RegressionPair> tied{{1, 0, 1, 0.6, 0.4, 1}, {0, 2, 1, 0.6, 0.4, 1}, {0, 1, 0, 0.6, 0.4, 1}};
  const auto kept = filter_pairs(tied, 0.5);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].prompt == 0);
  CHECK(kept[0].z == 1);
  CHECK(kept[1].z == 2);

  std::vector<PromptTargets> empty(2);
  CHECK(category_of([&] { build_and_filter_pairs(empty, 0.5); }) == ErrorCategory::kNoPairs);
  CHECK_THROWS_AS(filter_pairs(tied, 0.0), Error);

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<PromptTargets> ts(3);
    for (auto& p : ts) {
      for (std::size_t i = 0; i < 2; ++i) {
        p.z.push_back(i);
        p.g_z.push_back(u(rng));
        p.z_ref.push_back(i + 2);
        p.g_z_ref.push_back(u(rng));
      }
    }
    const double rho = 0.05 + 0.95 * u(rng);
    const auto all = build_and_filter_pairs(ts, 1.0);
    const auto top = build_and_filter_pairs(ts, rho);
    CHECK(top.size() == std::max<std::size_t>(1, std::size_t(std::ceil(rho * 12 - 1e-9))));
    double min_kept = 1.0;
    for (const auto& p : top) min_kept = std::min(min_kept, p.gap());
    std::size_t above = 0;
    for (const auto& p : all) above += p.gap() > min_kept;
    CHECK(above < top.size());
  }
}

TEST_CASE("tabular regression with ridge 0 is the exponentiated-gradient step") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto gs = random_set(rng, 3, 2 + trial % 5, 1);
    std::vector<Distribution> probs;
    std::vector<std::vector<double>> g;
    for (std::size_t x = 0; x < gs.size(); ++x) {
      probs.push_back(oracle::random_simplex(rng, gs[x].n_responses()));
      g.emplace_back(gs[x].n_responses());
      for (auto& v : g.back()) v = u(rng);
    }
    const TabularPolicy pi(ids(gs), probs);
    const double eta = 0.1 + u(rng);
    const auto pairs = all_pairs(g);
    const auto next = regression_update(pi, pairs, eta, 0.0);

    std::vector<Distribution> oracle_probs;
    for (std::size_t x = 0; x < pi.size(); ++x) {
      Distribution q(pi[x].size());
      double s = 0.0;
      for (std::size_t z = 0; z < q.size(); ++z) s += q[z] = pi[x][z] * std::exp(eta * g[x][z]);
      for (auto& v : q) v /= s;
      oracle_probs.push_back(q);
    }
    CHECK(max_tv(next, TabularPolicy(ids(gs), oracle_probs)) <= 1e-8);
    CHECK(regression_residual(pi, next, pairs, eta) <= 1e-16);
  }
}

TEST_CASE("zero target differences leave the policy unchanged") {
  std::mt19937_64 rng(6);
  const auto gs = random_set(rng, 2, 4, 1);
  const TabularPolicy pi(ids(gs), {oracle::random_simplex(rng, 4), oracle::random_simplex(rng, 4)});
  const auto pairs = all_pairs({{0.3, 0.3, 0.3, 0.3}, {0.7, 0.7, 0.7, 0.7}});
  for (double ridge : {0.0, 1e-8, 1.0}) CHECK(regression_update(pi, pairs, 0.5, ridge).probs() == pi.probs());

  const auto features = LinearSoftmaxPolicy::one_hot_features(gs);
  Eigen::VectorXd theta = Eigen::VectorXd::Random(8);
  const LinearSoftmaxPolicy lin(ids(gs), features, theta);
  CHECK(regression_update(lin, pairs, 0.5, 1e-8).theta() == theta);
}

TEST_CASE("one-hot linear softmax matches the tabular update") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + trial % 4;
    const auto gs = random_set(rng, 2, n, 1);
    const auto features = LinearSoftmaxPolicy::one_hot_features(gs);
    Eigen::VectorXd theta(2 * n);
    for (Eigen::Index i = 0; i < theta.size(); ++i) theta[i] = u(rng) - 0.5;
    const LinearSoftmaxPolicy lin(ids(gs), features, theta);
    const auto tab = lin.induced();
    std::vector<std::vector<double>> g(2, std::vector<double>(n));
    for (auto& row : g) {
      for (auto& v : row) v = u(rng);
    }
    auto pairs = all_pairs(g);
    // Drop a random half to exercise partial pair graphs.
    std::vector<RegressionPair> some;
    for (const auto& p : pairs) {
      if (u(rng) < 0.6) some.push_back(p);
    }
    if (some.empty()) some.push_back(pairs.front());
    for (double ridge : {1e-8, 1e-3, 0.5}) {
      const auto a = regression_update(lin, some, 0.4, ridge).induced();
      const auto b = regression_update(tab, some, 0.4, ridge);
      CHECK(max_tv(a, b) <= 1e-8);
    }
  }
}

TEST_CASE("rank-deficient linear regression without ridge is an error") {
  std::mt19937_64 rng(8);
  const auto gs = random_set(rng, 1, 3, 1);
  const LinearSoftmaxPolicy lin(ids(gs), LinearSoftmaxPolicy::one_hot_features(gs), Eigen::VectorXd::Zero(3));
  const auto pairs = all_pairs({{0.2, 0.5, 0.9}});
  CHECK(category_of([&] { regression_update(lin, pairs, 0.5, 0.0); }) == ErrorCategory::kRankDeficiency);
  CHECK_NOTHROW(regression_update(lin, pairs, 0.5, 1e-8));
}

TEST_CASE("exact estimator training reproduces solve_exact") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 8; ++trial) {
    const auto gs = random_set(rng, 3, 3 + trial % 4, 1 + trial % 3);
    const auto ref = TabularPolicy::uniform(gs);
    SolverConfig cfg;
    cfg.estimator = Estimator::kExact;
    cfg.ridge = 0.0;
    cfg.T = 60;
    cfg.beta = 0.3;
    const auto tr = train(gs, ref, cfg);
    const auto ex = solve_exact(gs, ref, cfg.beta, std::nullopt, cfg.T);
    REQUIRE(tr.diagnostics.values.size() == ex.values.size());
    for (std::size_t t = 0; t < ex.values.size(); ++t) {
      CHECK(std::abs(tr.diagnostics.values[t] - ex.values[t]) <= 1e-10);
    }
    CHECK(tr.best_iteration == ex.best_iteration);
    for (const auto& row : tr.diagnostics.rows) CHECK(row.epsilon <= 1e-16);
  }
}

TEST_CASE("Monte-Carlo tabular training fits its targets exactly with ridge 0") {
  std::mt19937_64 rng(10);
  const auto gs = random_set(rng, 4, 5, 2);
  SolverConfig cfg;
  cfg.ridge = 0.0;
  cfg.T = 30;
  cfg.rho = 0.5;
  const auto r = train(gs, TabularPolicy::uniform(gs), cfg);
  for (const auto& row : r.diagnostics.rows) {
    CHECK(row.epsilon >= 0.0);
    CHECK(row.epsilon <= 1e-16);
    CHECK(row.pairs_kept >= 1);
    CHECK(row.concentrability >= 1.0);
  }
}

TEST_CASE("constant games leave every variant at the reference") {
  const auto gs = constant_set(3, 4, 2);
  std::vector<Distribution> probs{{0.1, 0.2, 0.3, 0.4}, {0.25, 0.25, 0.25, 0.25}, {0.7, 0.1, 0.1, 0.1}};
  const TabularPolicy ref(ids(gs), probs);
  for (Variant v : {Variant::kFull, Variant::kJointCheck, Variant::kVariationalBound}) {
    for (Estimator e : {Estimator::kExact, Estimator::kMonteCarlo}) {
      for (PolicyClass c : {PolicyClass::kTabular, PolicyClass::kLinearSoftmax}) {
        SolverConfig cfg;
        cfg.variant = v;
        cfg.estimator = e;
        cfg.T = 10;
        TrainOptions opts;
        opts.policy_class = c;
        const auto r = train(gs, ref, cfg, opts);
        CHECK(max_tv(r.final_tabular, ref) <= 1e-15);
        for (double val : r.diagnostics.values) CHECK(val == doctest::Approx(0.5).epsilon(1e-15));
      }
    }
  }
}

TEST_CASE("training is deterministic and thread-count independent") {
  std::mt19937_64 rng(11);
  const auto gs = random_set(rng, 9, 6, 3);
  SolverConfig cfg;
  cfg.T = 25;
  cfg.seed = 42;
  cfg.fresh_samples = true;
  TrainOptions one;
  TrainOptions many;
  many.threads = 4;
  const auto ref = TabularPolicy::uniform(gs);
  const auto a = train(gs, ref, cfg, one);
  const auto b = train(gs, ref, cfg, one);
  const auto c = train(gs, ref, cfg, many);
  CHECK(a.diagnostics.values == b.diagnostics.values);
  CHECK(a.diagnostics.values == c.diagnostics.values);
  CHECK(a.final_tabular.probs() == c.final_tabular.probs());
  cfg.seed = 43;
  CHECK(train(gs, ref, cfg, one).diagnostics.values != a.diagnostics.values);
}

TEST_CASE("JC training reports values on the original criteria") {
  std::mt19937_64 rng(12);
  const auto gs = random_set(rng, 3, 4, 3);
  const auto ref = TabularPolicy::uniform(gs);
  SolverConfig cfg;
  cfg.variant = Variant::kJointCheck;
  cfg.estimator = Estimator::kExact;
  cfg.T = 20;
  const auto r = train(gs, ref, cfg);
  for (std::size_t t = 0; t < r.diagnostics.rows.size(); ++t) {
    CHECK(r.diagnostics.rows[t].khat_histogram.size() == 1);
  }
  CHECK(r.diagnostics.values.back() ==
        doctest::Approx(game_value(gs, r.final_tabular, ref, cfg.beta).total).epsilon(1e-13));
}

TEST_CASE("epoch schedule warm-starts and draws fresh streams") {
  std::mt19937_64 rng(13);
  const auto gs = random_set(rng, 3, 5, 2);
  const auto ref = TabularPolicy::uniform(gs);
  SolverConfig cfg;
  const auto sched = default_schedule(15);
  REQUIRE(sched.size() == 2);
  CHECK(sched[0].rho == 0.15);
  CHECK(sched[1].rho == 0.17);
  const auto r = train_schedule(gs, ref, cfg, sched);
  REQUIRE(r.epochs.size() == 2);
  CHECK(r.epochs[1].diagnostics.values.front() == r.epochs[0].diagnostics.values.back());
  CHECK(r.final_tabular.probs() == r.epochs[1].final_tabular.probs());
}
