#include "prosper/game.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "prosper/error.hpp"

namespace prosper {

PromptGame::PromptGame(std::string prompt_id, std::size_t n_responses,
                       std::vector<std::string> criteria, std::vector<double> pref)
    : prompt_id_(std::move(prompt_id)),
      n_(n_responses),
      criteria_(std::move(criteria)),
      pref_(std::move(pref)) {
  require(n_ >= 1, "game '" + prompt_id_ + "': needs at least one response");
  require(!criteria_.empty(), "game '" + prompt_id_ + "': needs at least one criterion");
  const std::size_t m = criteria_.size();
  require(pref_.size() == m * n_ * n_,
          "game '" + prompt_id_ + "': preference tensor has " + std::to_string(pref_.size()) +
              " entries, expected " + std::to_string(m * n_ * n_));
  for (double v : pref_) {
    require(std::isfinite(v) && v >= 0.0 && v <= 1.0,
            "game '" + prompt_id_ + "': preference outside [0, 1]");
  }
  for (std::size_t k = 0; k < m; ++k) {
    double* p = pref_.data() + k * n_ * n_;
    for (std::size_t i = 0; i < n_; ++i) {
      p[i * n_ + i] = 0.5;
      for (std::size_t j = i + 1; j < n_; ++j) {
        // Inputs that already sum to one keep their upper entry bit-exactly.
        const double a = p[i * n_ + j];
        const double b = p[j * n_ + i];
        const double upper = a + b == 1.0 ? a : (a + 1.0 - b) / 2.0;
        p[i * n_ + j] = upper;
        p[j * n_ + i] = 1.0 - upper;
      }
    }
  }
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        require(std::abs(this->pref(k, i, j) + this->pref(k, j, i) - 1.0) <= kComplementTolerance,
                "game '" + prompt_id_ + "': complementarity violated");
      }
    }
  }
}

PromptGame PromptGame::from_matrices(std::string prompt_id,
                                     const std::vector<std::vector<std::vector<double>>>& matrices,
                                     std::vector<std::string> names) {
  require(!matrices.empty(), "game '" + prompt_id + "': no criteria");
  const std::size_t n = matrices.front().size();
  if (names.empty()) {
    for (std::size_t k = 0; k < matrices.size(); ++k) names.push_back("c" + std::to_string(k));
  }
  require(names.size() == matrices.size(), "game '" + prompt_id + "': criterion names mismatch");
  std::vector<double> flat;
  flat.reserve(matrices.size() * n * n);
  for (const auto& matrix : matrices) {
    require(matrix.size() == n, "game '" + prompt_id + "': matrices differ in size");
    for (const auto& row : matrix) {
      require(row.size() == n, "game '" + prompt_id + "': matrix is not square");
      flat.insert(flat.end(), row.begin(), row.end());
    }
  }
  return PromptGame(std::move(prompt_id), n, std::move(names), std::move(flat));
}

PromptGame PromptGame::restricted(std::span<const std::size_t> responses) const {
  const std::size_t n = responses.size();
  std::vector<double> flat;
  flat.reserve(n_criteria() * n * n);
  for (std::size_t k = 0; k < n_criteria(); ++k) {
    for (std::size_t a : responses) {
      require(a < n_, "restricted: response index out of range");
      for (std::size_t b : responses) flat.push_back(pref(k, a, b));
    }
  }
  return PromptGame(prompt_id_, n, criteria_, std::move(flat));
}

GameSet::GameSet(std::vector<PromptGame> games, std::vector<double> weights)
    : games_(std::move(games)), weights_(std::move(weights)) {
  require(!games_.empty(), "game set must contain at least one game");
  if (weights_.empty()) weights_ = uniform_distribution(games_.size());
  validate_simplex(weights_, games_.size(), "game set weights");
}

std::size_t GameSet::max_responses() const {
  std::size_t n = 0;
  for (const auto& g : games_) n = std::max(n, g.n_responses());
  return n;
}

std::size_t GameSet::max_criteria() const {
  std::size_t m = 0;
  for (const auto& g : games_) m = std::max(m, g.n_criteria());
  return m;
}

std::vector<double> policy_pref_vector(const PromptGame& game, std::span<const double> a,
                                       std::span<const double> b) {
  const std::size_t n = game.n_responses();
  validate_simplex(a, n, "policy_pref_vector(a)");
  validate_simplex(b, n, "policy_pref_vector(b)");
  std::vector<double> out(game.n_criteria(), 0.0);
  for (std::size_t k = 0; k < game.n_criteria(); ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (a[i] == 0.0) continue;
      const auto row = game.row(k, i);
      double inner = 0.0;
      for (std::size_t j = 0; j < n; ++j) inner += row[j] * b[j];
      acc += a[i] * inner;
    }
    out[k] = acc;
  }
  return out;
}

double blackwell_distance(std::span<const double> v, double p) {
  require(p >= 0.5 && p <= 1.0, "blackwell_distance: threshold p must lie in [1/2, 1]");
  double worst = 0.0;
  for (double x : v) worst = std::max(worst, p - x);
  return worst;
}

}  // namespace prosper
