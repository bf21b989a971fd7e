#include "prosper/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "parallel.hpp"
#include "prosper/error.hpp"
#include "prosper/numeric.hpp"
#include "prosper/rng.hpp"
#include "prosper/solver.hpp"

namespace prosper {

namespace {

double expected_win_rate(const TabularPolicy& a, const TabularPolicy& b, const GameSet& games) {
  double total = 0.0;
  for (std::size_t x = 0; x < games.size(); ++x) {
    const auto v = policy_pref_vector(games[x], a[x], b[x]);
    double mean = 0.0;
    for (double c : v) mean += c;
    total += games.weight(x) * mean / static_cast<double>(v.size());
  }
  return total;
}

double sampled_win_rate(const TabularPolicy& a, const TabularPolicy& b, const GameSet& games, std::size_t n,
                        std::uint64_t seed) {
  double total = 0.0;
  for (std::size_t x = 0; x < games.size(); ++x) {
    const auto& game = games[x];
    Rng rng(derive_seed(seed, {x}));
    double credit = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      const std::size_t ya = rng.categorical(a[x]);
      const std::size_t yb = rng.categorical(b[x]);
      double c = 0.0;
      // Each criterion's verdict is a Bernoulli(q) draw; an exact 1/2 is a
      // declared tie and splits the credit.
      for (std::size_t k = 0; k < game.n_criteria(); ++k) {
        const double q = game.pref(k, ya, yb);
        c += q == 0.5 ? 0.5 : (rng.uniform() < q ? 1.0 : 0.0);
      }
      credit += c / static_cast<double>(game.n_criteria());
    }
    total += games.weight(x) * credit / static_cast<double>(n);
  }
  return total;
}

}  // namespace

std::string_view to_string(TournamentKind kind) {
  return kind == TournamentKind::kExpected ? "expected" : "sampled";
}

TournamentKind parse_tournament_kind(std::string_view s) {
  if (s == "expected") return TournamentKind::kExpected;
  if (s == "sampled") return TournamentKind::kSampled;
  throw Error(ErrorCategory::kInvalidArgument, "unknown tournament mode '" + std::string(s) + "'");
}

WinRateMatrix tournament(std::span<const TabularPolicy> policies, std::span<const std::string> labels,
                         const GameSet& games, const TournamentMode& mode) {
  require(policies.size() >= 2, "tournament needs at least two policies");
  require(labels.size() == policies.size(), "tournament: one label per policy required");
  for (const auto& p : policies) p.check_compatible(games, "tournament policy");
  if (mode.kind == TournamentKind::kSampled) require(mode.n >= 1, "tournament: sample count must be positive");
  const std::size_t n = policies.size();
  WinRateMatrix out;
  out.labels.assign(labels.begin(), labels.end());
  out.W.assign(n, std::vector<double>(n, 0.5));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (mode.kind == TournamentKind::kExpected) {
        // Filling the lower triangle from the upper one keeps antisymmetry
        // exact rather than up to rounding.
        out.W[i][j] = i < j ? expected_win_rate(policies[i], policies[j], games) : 1.0 - out.W[j][i];
      } else {
        out.W[i][j] = sampled_win_rate(policies[i], policies[j], games, mode.n, derive_seed(mode.seed, {i, j}));
      }
    }
  }
  return out;
}

BlackwellSummary blackwell_summary(const TabularPolicy& pi, const GameSet& games, double p,
                                   std::span<const TabularPolicy> comparators, bool include_pure_responses) {
  require(p >= 0.5 && p <= 1.0, "target threshold p must lie in [1/2, 1]");
  pi.check_compatible(games, "policy");
  for (const auto& c : comparators) c.check_compatible(games, "comparator");
  require(!comparators.empty() || include_pure_responses, "blackwell_summary: empty comparator set");
  BlackwellSummary out;
  out.per_prompt.resize(games.size(), 0.0);
  for (std::size_t x = 0; x < games.size(); ++x) {
    const auto& game = games[x];
    double worst = 0.0;
    for (const auto& c : comparators) {
      worst = std::max(worst, blackwell_distance(policy_pref_vector(game, pi[x], c[x]), p));
    }
    if (include_pure_responses) {
      for (std::size_t y = 0; y < game.n_responses(); ++y) {
        const auto e = point_mass(game.n_responses(), y);
        worst = std::max(worst, blackwell_distance(policy_pref_vector(game, pi[x], e), p));
      }
    }
    out.per_prompt[x] = worst;
    out.mean += games.weight(x) * worst;
  }
  return out;
}

BlackwellSummary blackwell_summary(const TabularPolicy& pi, const GameSet& games, double p,
                                   const TabularPolicy& pi_ref) {
  return blackwell_summary(pi, games, p, std::span<const TabularPolicy>(&pi_ref, 1), true);
}

ConvergenceStudy convergence_study(const GameFactory& factory, const ConvergenceOptions& options) {
  require(!options.betas.empty() && !options.Ts.empty() && !options.seeds.empty(),
          "convergence_study: empty grid");
  for (std::size_t T : options.Ts) require(T >= 1, "convergence_study: T must be positive");
  std::vector<std::size_t> Ts = options.Ts;
  std::sort(Ts.begin(), Ts.end());
  Ts.erase(std::unique(Ts.begin(), Ts.end()), Ts.end());

  const std::size_t n_beta = options.betas.size();
  const std::size_t n_seed = options.seeds.size();
  std::vector<std::vector<ConvergenceCell>> blocks(n_beta * n_seed);
  detail::parallel_for(blocks.size(), options.threads, [&](std::size_t idx) {
    const double beta = options.betas[idx / n_seed];
    const std::uint64_t seed = options.seeds[idx % n_seed];
    const GameSet games = factory(seed);
    const auto pi_ref = TabularPolicy::uniform(games);
    const double v_ref = game_value(games, pi_ref, pi_ref, beta).total;
    const auto oracle = solve_exact(games, pi_ref, beta, std::nullopt, options.oracle_T);
    for (std::size_t T : Ts) {
      const auto start = std::chrono::steady_clock::now();
      const auto run = solve_exact(games, pi_ref, beta, options.eta, T);
      const auto stop = std::chrono::steady_clock::now();
      ConvergenceCell cell;
      cell.beta = beta;
      cell.T = T;
      cell.seed = seed;
      cell.oracle_value = oracle.best_value;
      cell.best_value = run.best_value;
      cell.best_iteration = run.best_iteration;
      cell.gap = oracle.best_value - run.best_value;
      cell.initial_gap = oracle.best_value - v_ref;
      cell.runtime_ms = std::chrono::duration<double, std::milli>(stop - start).count();
      blocks[idx].push_back(cell);
    }
  });

  ConvergenceStudy study;
  std::vector<double> log_t;
  for (std::size_t T : Ts) log_t.push_back(std::log(static_cast<double>(T)));
  for (std::size_t b = 0; b < n_beta; ++b) {
    ConvergenceSlope slope;
    slope.beta = options.betas[b];
    std::vector<double> mean_gap(Ts.size(), 0.0);
    for (std::size_t s = 0; s < n_seed; ++s) {
      const auto& block = blocks[b * n_seed + s];
      std::vector<double> log_gap;
      for (std::size_t i = 0; i < block.size(); ++i) {
        log_gap.push_back(std::log(std::max(block[i].gap, kGapFloor)));
        mean_gap[i] += std::max(block[i].gap, 0.0) / static_cast<double>(n_seed);
        study.cells.push_back(block[i]);
      }
      slope.seed_slopes.push_back(Ts.size() >= 2 ? fit_slope(log_t, log_gap) : 0.0);
    }
    std::vector<double> log_mean;
    for (double g : mean_gap) log_mean.push_back(std::log(std::max(g, kGapFloor)));
    slope.slope_of_mean_gap = Ts.size() >= 2 ? fit_slope(log_t, log_mean) : 0.0;
    double acc = 0.0;
    for (double s : slope.seed_slopes) acc += s;
    slope.mean_seed_slope = acc / static_cast<double>(slope.seed_slopes.size());
    study.slopes.push_back(std::move(slope));
  }
  return study;
}

}  // namespace prosper
