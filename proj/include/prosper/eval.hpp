#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "prosper/game.hpp"
#include "prosper/policy.hpp"

namespace prosper {

struct WinRateMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> W;  // W[i][j]: policy i beats policy j
};

enum class TournamentKind { kExpected, kSampled };

struct TournamentMode {
  TournamentKind kind = TournamentKind::kExpected;
  std::size_t n = 10000;  // response pairs per prompt and ordered policy pair
  std::uint64_t seed = 0;
};

std::string_view to_string(TournamentKind kind);
TournamentKind parse_tournament_kind(std::string_view s);

// EXPECTED: W[i][j] = sum_x w_x (1/m) sum_k pi_i^T P[k] pi_j.
// SAMPLED: n response pairs per prompt; each criterion's judge picks a winner
// with probability P[k][y][y'] and credits 1 or 0, an exact 1/2 is a tie
// worth 1/2. Credits are averaged over criteria, draws and then prompts. Every ordered pair draws from its own stream, the
// diagonal is exactly 1/2.
WinRateMatrix tournament(std::span<const TabularPolicy> policies, std::span<const std::string> labels,
                         const GameSet& games, const TournamentMode& mode = {});

struct BlackwellSummary {
  std::vector<double> per_prompt;  // max over comparators of the distance
  double mean = 0.0;               // game-set weighted
};

// Distance of policy_pref_vector(pi, comparator) to [p, inf]^m, maximized over
// `comparators` and, when requested, every pure response.
BlackwellSummary blackwell_summary(const TabularPolicy& pi, const GameSet& games, double p,
                                   std::span<const TabularPolicy> comparators, bool include_pure_responses);
// Default comparator set: pi_ref plus all pure responses.
BlackwellSummary blackwell_summary(const TabularPolicy& pi, const GameSet& games, double p,
                                   const TabularPolicy& pi_ref);

using GameFactory = std::function<GameSet(std::uint64_t seed)>;

struct ConvergenceOptions {
  std::vector<double> betas{0.5};
  std::vector<std::size_t> Ts{100, 1000, 10000};
  std::vector<std::uint64_t> seeds{0};
  std::size_t oracle_T = 1000000;
  std::optional<double> eta;  // default sqrt(ln N / T) per run
  std::size_t threads = 1;
};

struct ConvergenceCell {
  double beta = 0.0;
  std::size_t T = 0;
  std::uint64_t seed = 0;
  double gap = 0.0;            // V(oracle best) - V(best of pi_1..pi_T)
  double initial_gap = 0.0;    // V(oracle best) - V(pi_ref)
  double best_value = 0.0;
  double oracle_value = 0.0;
  std::size_t best_iteration = 0;
  double runtime_ms = 0.0;
};

struct ConvergenceSlope {
  double beta = 0.0;
  double slope_of_mean_gap = 0.0;   // log-log fit of the seed-averaged gap
  double mean_seed_slope = 0.0;     // average of per-seed fits
  std::vector<double> seed_slopes;
};

struct ConvergenceStudy {
  std::vector<ConvergenceCell> cells;  // ordered by beta, seed, T
  std::vector<ConvergenceSlope> slopes;
};

// Gaps below this floor are clamped before taking logarithms.
inline constexpr double kGapFloor = 1e-12;

// Uniform reference policy on every generated game set.
ConvergenceStudy convergence_study(const GameFactory& factory, const ConvergenceOptions& options);

}  // namespace prosper
