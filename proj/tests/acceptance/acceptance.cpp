// Acceptance suite. Usage: acceptance [all | N ...]. Prints one
// "C<N> <name>: PASS|FAIL (...)" line per criterion and exits nonzero when
// any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "oracles.hpp"
#include "prosper/audit.hpp"
#include "prosper/cli.hpp"
#include "prosper/eval.hpp"
#include "prosper/game_io.hpp"
#include "prosper/judge.hpp"
#include "prosper/solver.hpp"
#include "prosper/train.hpp"

using namespace prosper;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

using Vec = std::vector<double>;

GameSet single(const PromptGame& g) { return GameSet({g}); }

TabularPolicy one(const Vec& p) { return TabularPolicy({"g"}, {p}); }

double kl(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > 0.0) s += a[i] * std::log(a[i] / b[i]);
  }
  return s;
}

double tv(const TabularPolicy& a, const TabularPolicy& b) {
  double out = 0.0;
  for (std::size_t x = 0; x < a.size(); ++x) out = std::max(out, oracle::total_variation(a[x], b[x]));
  return out;
}

// ---------------------------------------------------------------------------

Outcome concavity() {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;  // largest violation rhs - lhs
  std::size_t checks = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + trial % 9;
    const std::size_t m = 1 + (trial / 9) % 5;
    const double beta = trial % 2 == 0 ? 0.1 : 1.0;
    const auto g = oracle::random_game(rng, n, m);
    const auto a = oracle::random_simplex(rng, n, 0.2);
    const auto b = oracle::random_simplex(rng, n, 0.2);
    const auto ref = oracle::random_simplex(rng, n);
    const double lambda = u(rng);
    const auto mid = oracle::mix(a, b, lambda);
    for (std::size_t k = 0; k < m; ++k) {
      const double lhs = partition_value(g, mid, ref, k, beta);
      const double rhs =
          (1 - lambda) * partition_value(g, a, ref, k, beta) + lambda * partition_value(g, b, ref, k, beta);
      worst = std::max(worst, rhs - lhs);
      ++checks;
    }
    const auto gs = single(g);
    const auto val = [&](const Vec& p) { return game_value(gs, one(p), one(ref), beta).total; };
    worst = std::max(worst, (1 - lambda) * val(a) + lambda * val(b) - val(mid));
    ++checks;
  }
  return {worst <= 1e-9, fmt::format("{} inequalities, max violation {:.3g} (tol 1e-9)", checks, worst)};
}

Outcome gradient_oracle() {
  std::mt19937_64 rng(202);
  const double h = 1e-6;
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 9;
    const std::size_t m = 1 + trial % 5;
    const double beta = trial % 2 == 0 ? 0.1 : 1.0;
    const auto g = oracle::random_game(rng, n, m);
    const auto pi = oracle::random_simplex(rng, n);
    const auto ref = oracle::random_simplex(rng, n);
    const auto target = oracle::random_simplex(rng, n);
    const auto field = exact_gradient(single(g), one(pi), one(ref), beta);
    const auto& pg = field.prompts[0];
    double analytic = 0.0;
    for (std::size_t z = 0; z < n; ++z) analytic += (target[z] - pi[z]) * pg.g[z];
    const double fd = (partition_value(g, oracle::mix(pi, target, h), ref, pg.k_star, beta) -
                       partition_value(g, oracle::mix(pi, target, -h), ref, pg.k_star, beta)) /
                      (2 * h);
    worst = std::max(worst, std::abs(fd - analytic) / std::max(std::abs(analytic), 1e-3));
  }
  return {worst <= 1e-5, fmt::format("200 instances, max relative error {:.3g} (tol 1e-5)", worst)};
}

Outcome adversary_identity() {
  std::mt19937_64 rng(303);
  double identity = 0.0;
  double optimality = 0.0;  // max of objective(q*) - objective(probe)
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 9;
    const std::size_t m = 1 + trial % 5;
    const double beta = trial % 2 == 0 ? 0.1 : 1.0;
    const auto g = oracle::random_game(rng, n, m);
    const auto pi = oracle::random_simplex(rng, n);
    const auto ref = oracle::random_simplex(rng, n);
    const auto w = oracle::random_simplex(rng, m);
    const auto q = adversary_best_response(g, pi, ref, w, beta);
    double inner = beta * kl(q, ref);
    for (std::size_t k = 0; k < m; ++k) inner += w[k] * oracle::bilinear(g, k, pi, q);
    identity = std::max(identity, std::abs(inner - partition_value(g, pi, ref, w, beta)));
    for (int probe = 0; probe < 100; ++probe) {
      const auto c = oracle::random_simplex(rng, n, 0.3);
      double obj = beta * kl(c, ref);
      for (std::size_t k = 0; k < m; ++k) obj += w[k] * oracle::bilinear(g, k, pi, c);
      optimality = std::max(optimality, inner - obj);
    }
  }
  return {identity <= 1e-10 && optimality <= 0.0,
          fmt::format("identity error {:.3g} (tol 1e-10), worst probe advantage {:.3g} (must be <= 0)", identity,
                      optimality)};
}

Outcome regression_equivalence() {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double tab_err = 0.0;
  double lin_err = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 9;
    const std::size_t prompts = 1 + trial % 3;
    std::vector<std::string> ids;
    std::vector<Distribution> probs;
    std::vector<Vec> g;
    std::vector<PromptGame> games;
    for (std::size_t x = 0; x < prompts; ++x) {
      ids.push_back("p" + std::to_string(x));
      auto game = oracle::random_game(rng, n, 1);
      games.emplace_back(ids.back(), n, game.criteria(), game.data());
      probs.push_back(oracle::random_simplex(rng, n));
      g.emplace_back(n);
      for (auto& v : g.back()) v = u(rng);
    }
    const TabularPolicy pi(ids, probs);
    const double eta = 0.05 + u(rng);
    std::vector<RegressionPair> pairs;
    for (std::size_t x = 0; x < prompts; ++x) {
      for (std::size_t z = 0; z < n; ++z) {
        for (std::size_t zr = 0; zr < n; ++zr) {
          if (z != zr) pairs.push_back({x, z, zr, g[x][z], g[x][zr], 1.0});
        }
      }
    }
    std::vector<Distribution> closed;
    for (std::size_t x = 0; x < prompts; ++x) {
      Vec q(n);
      double s = 0.0;
      for (std::size_t z = 0; z < n; ++z) s += q[z] = probs[x][z] * std::exp(eta * g[x][z]);
      for (auto& v : q) v /= s;
      closed.push_back(q);
    }
    const auto tab0 = regression_update(pi, pairs, eta, 0.0);
    tab_err = std::max(tab_err, tv(tab0, TabularPolicy(ids, closed)));

    const GameSet gs(games);
    const auto features = LinearSoftmaxPolicy::one_hot_features(gs);
    Eigen::VectorXd theta(static_cast<Eigen::Index>(prompts * n));
    for (std::size_t x = 0; x < prompts; ++x) {
      for (std::size_t z = 0; z < n; ++z) theta[static_cast<Eigen::Index>(x * n + z)] = std::log(probs[x][z]);
    }
    const LinearSoftmaxPolicy lin(ids, features, theta);
    const double ridge = 1e-8;
    lin_err = std::max(lin_err, tv(regression_update(lin, pairs, eta, ridge).induced(),
                                   regression_update(lin.induced(), pairs, eta, ridge)));
  }
  return {tab_err <= 1e-8 && lin_err <= 1e-8,
          fmt::format("tabular vs closed form TV {:.3g}, one-hot linear vs tabular TV {:.3g} (tol 1e-8)", tab_err,
                      lin_err)};
}

Outcome rate() {
  GameFactory factory = [](std::uint64_t seed) {
    const std::size_t n = 3 + seed % 8;
    const std::size_t m = 1 + seed % 5;
    return GameSet({gen_uniform_game(seed, n, m, "g")});
  };
  ConvergenceOptions opts;
  opts.betas = {0.5};
  opts.Ts = {100, 1000, 10000};
  opts.seeds.clear();
  for (std::uint64_t s = 0; s < 20; ++s) opts.seeds.push_back(s);
  opts.oracle_T = 1000000;
  opts.threads = std::max(1u, std::thread::hardware_concurrency());
  const auto study = convergence_study(factory, opts);
  double gap_end = 0.0;
  double gap_init = 0.0;
  for (const auto& c : study.cells) {
    if (c.T == 10000) {
      gap_end += std::max(c.gap, 0.0);
      gap_init += c.initial_gap;
    }
  }
  const auto& s = study.slopes.front();
  const double ratio = gap_end / gap_init;
  return {s.slope_of_mean_gap <= -0.4 && ratio <= 1e-2,
          fmt::format("slope of mean gap {:.3f} (<= -0.4), mean per-seed slope {:.3f}, gap(1e4)/initial {:.3g} "
                      "(<= 1e-2)",
                      s.slope_of_mean_gap, s.mean_seed_slope, ratio)};
}

Outcome sandwich() {
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double lower = 0.0;  // most negative V - min P
  double upper = 0.0;  // largest excess over beta log(1 / min ref)
  std::size_t stated_holds = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 9;
    const auto g = oracle::random_game(rng, n, 1);
    const auto pi = oracle::random_simplex(rng, n, 0.3);
    const auto ref = oracle::random_simplex(rng, n);
    const double beta = std::pow(10.0, -3.0 + 3.0 * u(rng));
    const double v = game_value(single(g), one(pi), one(ref), beta).total;
    const auto cp = comparator_preference(g, pi, 0);
    const double hard = *std::min_element(cp.begin(), cp.end());
    const double bound = beta * std::log(1.0 / *std::min_element(ref.begin(), ref.end()));
    lower = std::min(lower, v - hard);
    upper = std::max(upper, (v - hard) - bound);
    if (hard - v >= -1e-10 && hard - v <= bound + 1e-10) ++stated_holds;
  }
  const bool sandwich_ok = lower >= -1e-10 && upper <= 1e-10;

  const double beta = 1e-3;
  double worst = 0.0;
  double slack = 1.0;
  for (std::uint64_t seed = 0; seed < 14; ++seed) {
    const std::size_t n = 2 + seed % 7;
    const auto g = gen_uniform_game(seed, n, 1, "g");
    const auto gs = single(g);
    const auto ref = TabularPolicy::uniform(gs);
    const auto vn = von_neumann_value(g, ref[0]);
    const auto sol = solve_exact(gs, ref, beta, std::nullopt, 200000);
    const double diff = std::abs(sol.best_value - vn.value);
    const double allowed = beta * std::log(double(n)) + 1e-3;
    worst = std::max(worst, diff);
    slack = std::min(slack, allowed - diff);
  }
  return {sandwich_ok && slack >= 0.0,
          fmt::format("0 <= V - min P <= beta log(1/min ref): min {:.3g}, excess {:.3g} (tol 1e-10); reversed "
                      "orientation (0 <= min P - V) holds on {}/200; |V(oracle) - vN| max {:.3g}, min slack {:.3g}",
                      lower, upper, stated_holds, worst, slack)};
}

Outcome circulant() {
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  std::size_t games = 0;
  for (std::size_t n : {3, 5, 7}) {
    std::vector<PromptGame> cands{gen_cyclic_game(0, n, 1, 0.3, "g")};
    // Random circulant rows with c[d] + c[n - d] = 1.
    for (int r = 0; r < 2; ++r) {
      Vec c(n, 0.5);
      for (std::size_t d = 1; d <= (n - 1) / 2; ++d) {
        c[d] = u(rng);
        c[n - d] = 1.0 - c[d];
      }
      Vec p(n * n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) p[i * n + j] = c[(j + n - i) % n];
      }
      cands.emplace_back("g", n, std::vector<std::string>{"c"}, p);
    }
    for (const auto& g : cands) {
      const auto gs = single(g);
      const auto ref = TabularPolicy::uniform(gs);
      const auto sol = solve_exact(gs, ref, 0.1, std::nullopt, 100000);
      worst = std::max(worst, tv(sol.best, ref));
      ++games;
    }
  }
  return {worst <= 1e-3, fmt::format("{} circulant games, max TV to uniform {:.3g} (tol 1e-3)", games, worst)};
}

// RMSE of the partition-value and gradient estimators at sample size M.
std::pair<double, double> mc_rmse(const PromptGame& g, const Vec& pi, const Vec& ref, double beta, std::size_t M) {
  const std::size_t n = g.n_responses();
  const auto exact = worst_case_criterion(g, pi, ref, beta);
  std::vector<Vec> grads;
  for (std::size_t k = 0; k < g.n_criteria(); ++k) grads.push_back(criterion_gradient(g, pi, ref, k, beta));
  double se_v = 0.0;
  double se_g = 0.0;
  std::size_t nv = 0;
  std::size_t ng = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto b = sample_batch(pi, ref, M, 0, 0, false, seed, 0, 0);
    const auto kh = estimate_khat(b, g, beta);
    for (std::size_t k = 0; k < g.n_criteria(); ++k) {
      se_v += std::pow(kh.values[k] - exact.values[k], 2);
      ++nv;
      for (std::size_t z = 0; z < n; ++z) {
        se_g += std::pow(estimate_gradient(b, g, k, beta, z) - grads[k][z], 2);
        ++ng;
      }
    }
  }
  return {std::sqrt(se_v / double(nv)), std::sqrt(se_g / double(ng))};
}

Outcome monte_carlo() {
  const auto g = gen_uniform_game(8, 6, 3, "g");
  std::mt19937_64 rng(808);
  const auto pi = oracle::random_simplex(rng, 6);
  const auto ref = oracle::random_simplex(rng, 6);
  const double beta = 0.5;
  const auto r4 = mc_rmse(g, pi, ref, beta, 4);
  const auto r16 = mc_rmse(g, pi, ref, beta, 16);
  const auto r64 = mc_rmse(g, pi, ref, beta, 64);
  const double rv[2] = {r4.first / r16.first, r16.first / r64.first};
  const double rg[2] = {r4.second / r16.second, r16.second / r64.second};
  bool ok = true;
  for (double r : {rv[0], rv[1], rg[0], rg[1]}) ok = ok && r >= 1.4 && r <= 2.6;
  return {ok, fmt::format("RMSE ratios per 4x M: value {:.3f}, {:.3f}; gradient {:.3f}, {:.3f} (each in [1.4, 2.6])",
                          rv[0], rv[1], rg[0], rg[1])};
}

double audit_fraction(const GameSet& gs, AuditMode mode, std::size_t size) {
  AuditOptions opts;
  opts.subset_sizes = {size};
  opts.mode = mode;
  opts.shuffle = false;
  return audit(gs, opts).rows.front().fraction_intransitive;
}

Outcome audit_checks() {
  std::vector<std::string> failures;
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  };
  const auto rps = strict_tournament(gen_cyclic_game(0, 3, 1, 0.4), 0);
  expect(!condorcet_winner(rps) && has_cycle(rps), "rps");
  LatentUtilityModel order{{{3.0, 2.0, 1.0, 0.0}}, 1.0};
  const auto tr = strict_tournament(order.to_game("u"), 0);
  expect(condorcet_winner(tr) == std::optional<std::size_t>(0) && !has_cycle(tr), "transitive");
  std::vector<std::vector<double>> wc(4, std::vector<double>(4, 0.5));
  auto set = [&](std::size_t i, std::size_t j, double p) {
    wc[i][j] = p;
    wc[j][i] = 1.0 - p;
  };
  set(0, 1, 0.8);
  set(1, 2, 0.8);
  set(2, 0, 0.8);
  for (std::size_t j = 0; j < 3; ++j) set(3, j, 0.7);
  const auto wt = strict_tournament(PromptGame::from_matrices("w", {wc}), 0);
  expect(condorcet_winner(wt) == std::optional<std::size_t>(3) && has_cycle(wt), "winner above cycle");

  const std::size_t n = 16;
  const std::size_t m = 3;
  std::vector<PromptGame> latent, likert, jc_likert;
  LikertConfig lk;
  lk.levels = 5;
  lk.noise_sd = 0.1;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto id = "p" + std::to_string(s);
    const auto model = sample_utility_model(s, n, m, 1.0);
    latent.push_back(model.to_game(id));
    likert.push_back(apply_likert_protocol(latent.back(), lk, s));
    jc_likert.push_back(apply_likert_protocol(scalarize_to_jc(latent.back()), lk, s));
  }
  const double raw = audit_fraction(GameSet(latent), AuditMode::kPerCriterion, n);
  const double quant = audit_fraction(GameSet(likert), AuditMode::kPerCriterion, n);
  const double jc = audit_fraction(GameSet(jc_likert), AuditMode::kPerCriterion, n);
  expect(raw == 0.0, "unquantized utilities");
  expect(quant > 0.0, "quantized utilities");
  expect(jc >= quant, "JC vs SC");
  std::string detail = fmt::format(
      "cycle, order and winner-above-cycle tournaments checked; N=16 over 100 seeds: latent {:.3f} (== 0), Likert "
      "per-criterion {:.3f} (> 0), Likert on JC scalarization {:.3f} (>= per-criterion)",
      raw, quant, jc);
  for (const auto& f : failures) detail += "; failed: " + f;
  return {failures.empty(), detail};
}

Outcome tournaments() {
  std::mt19937_64 rng(1010);
  std::vector<PromptGame> games;
  for (std::size_t x = 0; x < 4; ++x) {
    auto g = oracle::random_game(rng, 6, 3);
    games.emplace_back("p" + std::to_string(x), 6, g.criteria(), g.data());
  }
  const GameSet gs(games);
  std::vector<TabularPolicy> ps;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < 4; ++i) {
    std::vector<Distribution> probs;
    for (std::size_t x = 0; x < gs.size(); ++x) probs.push_back(oracle::random_simplex(rng, 6, 0.2));
    ps.emplace_back(TabularPolicy::uniform(gs).prompt_ids(), probs);
    labels.push_back("pi" + std::to_string(i));
  }
  const auto e = tournament(ps, labels, gs);
  const auto s4 = tournament(ps, labels, gs, {TournamentKind::kSampled, 10000, 1});
  const auto s5 = tournament(ps, labels, gs, {TournamentKind::kSampled, 100000, 2});
  double anti_e = 0.0, anti_s = 0.0, agree = 0.0;
  bool diag = true;
  for (std::size_t i = 0; i < 4; ++i) {
    diag = diag && e.W[i][i] == 0.5 && s4.W[i][i] == 0.5 && s5.W[i][i] == 0.5;
    for (std::size_t j = 0; j < 4; ++j) {
      anti_e = std::max(anti_e, std::abs(e.W[i][j] + e.W[j][i] - 1.0));
      anti_s = std::max(anti_s, std::abs(s4.W[i][j] + s4.W[j][i] - 1.0));
      agree = std::max(agree, std::abs(s5.W[i][j] - e.W[i][j]));
    }
  }
  const double tol_s = 2.0 / std::sqrt(1e4);
  return {diag && anti_e <= 1e-10 && anti_s <= tol_s && agree <= 0.01,
          fmt::format("diagonal 1/2: {}; antisymmetry expected {:.3g} (1e-10), sampled n=1e4 {:.3g} ({:.3g}); "
                      "sampled n=1e5 vs expected {:.3g} (0.01)",
                      diag, anti_e, anti_s, tol_s, agree)};
}

// A game set counts as intransitive when some prompt's scalarized judge has a
// preference cycle, so no single criterion ordering explains it.
bool intransitive(const GameSet& gs) {
  for (std::size_t x = 0; x < gs.size(); ++x) {
    if (has_cycle(strict_tournament(scalarize_to_jc(gs[x]), 0))) return true;
  }
  return false;
}

Outcome ablation() {
  std::size_t vb_ok = 0, jc_ok = 0, win_ok = 0, used = 0, skipped = 0;
  double min_win = 1.0;
  for (std::uint64_t seed = 0; used < 50; ++seed) {
    std::vector<PromptGame> games;
    for (std::size_t x = 0; x < 6; ++x) {
      games.push_back(gen_uniform_game(derive_seed(seed, {x}), 6, 3, "p" + std::to_string(x)));
    }
    const GameSet gs(games);
    if (!intransitive(gs)) {
      ++skipped;
      continue;
    }
    const auto ref = TabularPolicy::uniform(gs);
    SolverConfig cfg;
    cfg.seed = seed;
    cfg.beta = 0.1;
    cfg.M = 2;
    cfg.K = 4;
    cfg.T = 3000;
    const auto schedule = default_schedule(cfg.T);
    auto value_of = [&](Variant v) {
      SolverConfig c = cfg;
      c.variant = v;
      const auto r = train_schedule(gs, ref, c, schedule);
      return std::make_pair(game_value(gs, r.final_tabular, ref, cfg.beta).total, r.final_tabular);
    };
    const auto [v_full, pi_full] = value_of(Variant::kFull);
    const double v_vb = value_of(Variant::kVariationalBound).first;
    const double v_jc = value_of(Variant::kJointCheck).first;
    const std::vector<TabularPolicy> pair{pi_full, ref};
    const std::vector<std::string> names{"full", "reference"};
    const double w = tournament(pair, names, gs).W[0][1];
    vb_ok += v_full >= v_vb - 1e-3;
    jc_ok += v_full >= v_jc - 1e-3;
    win_ok += w > 0.5;
    min_win = std::min(min_win, w);
    ++used;
  }
  const auto frac = [&](std::size_t k) { return double(k) / double(used); };
  return {frac(vb_ok) >= 0.9 && frac(jc_ok) >= 0.9 && frac(win_ok) >= 0.9,
          fmt::format("{} intransitive seeds ({} transitive skipped), Monte-Carlo M=2 K=4, 2 x 3000 iterations: "
                      "V(FULL) >= V(VB) - 1e-3 on {:.0f}%, >= V(JC) - 1e-3 on {:.0f}%, win rate vs reference > 0.5 "
                      "on {:.0f}% (min {:.3f}); each needs >= 90%",
                      used, skipped, 100 * frac(vb_ok), 100 * frac(jc_ok), 100 * frac(win_ok), min_win)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  std::random_device rd;
  const fs::path root = fs::temp_directory_path() / ("prosper_accept_" + std::to_string(rd()));
  fs::create_directories(root);
  {
    std::ofstream cfg(root / "run.json");
    cfg << R"({"seed": 5,
      "generator": {"kind": "uniform", "n_prompts": 6, "N": 6, "m": 3, "likert": {"levels": 5, "noise_sd": 0.1}},
      "solver": {"T": 40, "beta": 0.3, "oracle": true},
      "audit": {"subset_sizes": [2, 4, 6], "modes": ["per_criterion", "aggregate"]},
      "eval": {"mode": "sampled", "n": 2000},
      "converge": {"Ts": [10, 100], "seeds": [0, 1, 2], "oracle_T": 2000},
      "diag": {"p": 0.6}})";
  }
  const std::string cfg = (root / "run.json").string();
  std::ostringstream sink;
  int failures = 0;
  for (const char* dir : {"a", "b"}) {
    const std::string out = (root / dir).string();
    const std::vector<std::vector<std::string>> commands{
        {"gen", "--config", cfg, "--out", out + "/gen"},
        {"audit", "--config", cfg, "--out", out + "/audit"},
        {"solve", "--config", cfg, "--out", out + "/solve", "--threads", "2"},
        {"tournament", "--config", cfg, "--out", out + "/tournament", "--policy",
         "final=" + out + "/solve/policies/final.json", "--policy", "best=" + out + "/solve/policies/best.json"},
        {"converge", "--config", cfg, "--out", out + "/converge"},
        {"diag", "--config", cfg, "--out", out + "/diag", "--policy-file", out + "/solve/policies/final.json"},
    };
    for (auto args : commands) {
      args.insert(args.begin(), "prosper");
      failures += cli::run_cli(args, sink, sink) != 0;
    }
  }
  std::size_t files = 0, same = 0;
  for (const auto& entry : fs::recursive_directory_iterator(root / "a")) {
    if (!entry.is_regular_file() || entry.path().filename() == "manifest.json") continue;
    ++files;
    const auto other = root / "b" / fs::relative(entry.path(), root / "a");
    same += fs::exists(other) && slurp(entry.path()) == slurp(other);
  }
  std::error_code ec;
  fs::remove_all(root, ec);
  return {failures == 0 && files > 0 && same == files,
          fmt::format("6 commands x 2 runs, {} failed runs; {}/{} report files byte-identical", failures, same, files)};
}

std::vector<Criterion> criteria() {
  return {
      {1, "concavity", 10, concavity},
      {2, "gradient finite differences", 10, gradient_oracle},
      {3, "closed-form adversary", 10, adversary_identity},
      {4, "regression equals mirror descent", 10, regression_equivalence},
      {5, "best-iterate rate", 300, rate},
      {6, "soft-min sandwich and von Neumann link", 60, sandwich},
      {7, "symmetric cyclic games", 60, circulant},
      {8, "Monte-Carlo consistency", 120, monte_carlo},
      {9, "audit correctness", 60, audit_checks},
      {10, "tournament properties", 60, tournaments},
      {11, "ablation dominance", 300, ablation},
      {12, "determinism", 60, determinism},
  };
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "all") continue;
    try {
      selected.push_back(std::stoi(a[0] == 'C' || a[0] == 'c' ? a.substr(1) : a));
    } catch (const std::exception&) {
      std::cerr << "usage: acceptance [all | N ...]\n";
      return 2;
    }
  }
  int failed = 0;
  for (const auto& c : criteria()) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.budget_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::cout << fmt::format("C{} {}: {} ({}; {:.2f} s of {:.0f} s{})", c.id, c.name, pass ? "PASS" : "FAIL", o.detail,
                             secs, c.budget_s, in_time ? "" : ", over budget")
              << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
