#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "prosper/numeric.hpp"

namespace prosper {

inline constexpr double kComplementTolerance = 1e-12;

// One prompt's preference tensor P[k][i][j]: the probability that response i
// is preferred to response j under criterion k.
//
// The constructor symmetrizes its input, P[k][i][j] <- (P[k][i][j] + 1 -
// P[k][j][i]) / 2 with a diagonal of exactly 1/2, and then validates
// complementarity and the [0, 1] range. Immutable afterwards.
class PromptGame {
 public:
  // `pref` is criterion-major, then row-major: index (k * N + i) * N + j.
  PromptGame(std::string prompt_id, std::size_t n_responses,
             std::vector<std::string> criteria, std::vector<double> pref);

  // Nested-matrix convenience; criteria are named c0, c1, ... when `names`
  // is empty.
  static PromptGame from_matrices(std::string prompt_id,
                                  const std::vector<std::vector<std::vector<double>>>& matrices,
                                  std::vector<std::string> names = {});

  const std::string& prompt_id() const noexcept { return prompt_id_; }
  std::size_t n_responses() const noexcept { return n_; }
  std::size_t n_criteria() const noexcept { return criteria_.size(); }
  const std::vector<std::string>& criteria() const noexcept { return criteria_; }

  double pref(std::size_t k, std::size_t i, std::size_t j) const noexcept {
    return pref_[(k * n_ + i) * n_ + j];
  }
  // N*N row-major matrix of criterion k.
  std::span<const double> matrix(std::size_t k) const noexcept {
    return {pref_.data() + k * n_ * n_, n_ * n_};
  }
  std::span<const double> row(std::size_t k, std::size_t i) const noexcept {
    return {pref_.data() + (k * n_ + i) * n_, n_};
  }
  const std::vector<double>& data() const noexcept { return pref_; }

  // Same preferences restricted to `responses` (in the given order).
  PromptGame restricted(std::span<const std::size_t> responses) const;

 private:
  std::string prompt_id_;
  std::size_t n_;
  std::vector<std::string> criteria_;
  std::vector<double> pref_;
};

// Weighted collection of prompt games (the prompt distribution).
class GameSet {
 public:
  // Empty `weights` means uniform.
  explicit GameSet(std::vector<PromptGame> games, std::vector<double> weights = {});

  std::size_t size() const noexcept { return games_.size(); }
  const PromptGame& operator[](std::size_t i) const { return games_[i]; }
  const std::vector<PromptGame>& games() const noexcept { return games_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double weight(std::size_t i) const { return weights_[i]; }

  std::size_t max_responses() const;
  std::size_t max_criteria() const;

 private:
  std::vector<PromptGame> games_;
  std::vector<double> weights_;
};

// Coordinate k is a^T P[k] b, the probability that a draw from `a` beats a
// draw from `b` under criterion k.
std::vector<double> policy_pref_vector(const PromptGame& game, std::span<const double> a,
                                       std::span<const double> b);

// l-infinity distance from v to the target set [p, inf]^m:
// max_k max(0, p - v_k).
double blackwell_distance(std::span<const double> v, double p);

}  // namespace prosper
