#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <vector>

#include "prosper/game.hpp"
#include "prosper/rng.hpp"

namespace prosper {

// Per-criterion latent utilities u_k(i) with a logistic link at temperature tau.
struct LatentUtilityModel {
  std::vector<std::vector<double>> utilities;  // [k][i]
  double tau = 1.0;

  void validate() const;
  // P[k][i][j] = logistic((u_k(i) - u_k(j)) / tau).
  PromptGame to_game(std::string prompt_id) const;
};

LatentUtilityModel sample_utility_model(std::uint64_t seed, std::size_t n, std::size_t m, double tau);

// Transitive per criterion: utilities drawn i.i.d. from a seeded unit normal.
PromptGame gen_random_utility_game(std::uint64_t seed, std::size_t n, std::size_t m, double tau,
                                   std::string prompt_id = "p0");

// Circulant tournament of strength s in [0, 1/2]: i beats j with probability
// 1/2 + s when (j - i) mod N lies in {1, ..., floor((N-1)/2)}. Criterion 0 uses
// the natural labeling; every further criterion applies a seeded relabeling.
PromptGame gen_cyclic_game(std::uint64_t seed, std::size_t n, std::size_t m, double strength,
                           std::string prompt_id = "p0");

// Upper-triangle preferences drawn i.i.d. uniform on [0, 1].
PromptGame gen_uniform_game(std::uint64_t seed, std::size_t n, std::size_t m,
                            std::string prompt_id = "p0");

// Single-criterion judge sum_k w_k P[k].
PromptGame scalarize_to_jc(const PromptGame& game, std::span<const double> weights);
PromptGame scalarize_to_jc(const PromptGame& game);  // uniform weights
GameSet scalarize_to_jc(const GameSet& games);

struct LikertConfig {
  int levels = 5;
  int n_queries = 5;
  double noise_sd = 0.0;
  bool swap_average = true;

  void validate() const;
};

// Nearest point of {0, 1/(L-1), ..., 1}; exact midpoints round toward 1/2.
double quantize_likert(double q, int levels);

// One simulated judgment of latent preference p: n_queries noisy quantized
// scores averaged, optionally combined with the swapped presentation.
double likert_score(double p, const LikertConfig& cfg, Rng& forward, Rng& swapped);

// Applies likert_score to every unordered pair of every criterion. Each
// (k, i, j) uses its own noise streams derived from `seed`.
PromptGame apply_likert_protocol(const PromptGame& game, const LikertConfig& cfg, std::uint64_t seed);

// Line-delimited JSON judgments {"prompt_id","criterion","a","b","score"}.
// Reversed records (a > b) contribute 1 - score to the (b, a) entry; all
// contributions for an unordered pair are averaged.
GameSet ingest_log(const std::filesystem::path& path);
GameSet ingest_log(std::istream& in, const std::string& source);

}  // namespace prosper
