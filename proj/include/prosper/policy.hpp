#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "prosper/game.hpp"
#include "prosper/numeric.hpp"

namespace prosper {

// One probability vector per prompt, aligned with a GameSet by index.
class TabularPolicy {
 public:
  TabularPolicy() = default;
  TabularPolicy(std::vector<std::string> prompt_ids, std::vector<Distribution> probs);

  static TabularPolicy uniform(const GameSet& games);
  // Point mass on `responses[x]` at prompt x.
  static TabularPolicy pure(const GameSet& games, std::span<const std::size_t> responses);

  std::size_t size() const noexcept { return probs_.size(); }
  std::span<const double> operator[](std::size_t prompt) const { return probs_[prompt]; }
  const std::vector<std::string>& prompt_ids() const noexcept { return prompt_ids_; }
  const std::vector<Distribution>& probs() const noexcept { return probs_; }

  // Throws invalid-argument unless prompt count, ids and sizes match `games`.
  void check_compatible(const GameSet& games, const char* what) const;

 private:
  std::vector<std::string> prompt_ids_;
  std::vector<Distribution> probs_;
};

// pi_theta(.|x) = softmax(offset(x) + features(x) * theta). The offset is a
// fixed per-prompt logit vector (zero unless given); it lets theta = 0
// represent an arbitrary reference policy.
class LinearSoftmaxPolicy {
 public:
  LinearSoftmaxPolicy(std::vector<std::string> prompt_ids, std::vector<Eigen::MatrixXd> features,
                      Eigen::VectorXd theta, std::vector<Eigen::VectorXd> offsets = {},
                      bool allow_overcomplete = false);

  // One feature per (prompt, response): reproduces the tabular class.
  static Eigen::MatrixXd one_hot_block(const GameSet& games, std::size_t prompt);
  static std::vector<Eigen::MatrixXd> one_hot_features(const GameSet& games);

  std::size_t dimension() const noexcept { return static_cast<std::size_t>(theta_.size()); }
  std::size_t size() const noexcept { return features_.size(); }
  const Eigen::VectorXd& theta() const noexcept { return theta_; }
  const std::vector<Eigen::MatrixXd>& features() const noexcept { return features_; }
  const std::vector<Eigen::VectorXd>& offsets() const noexcept { return offsets_; }
  const std::vector<std::string>& prompt_ids() const noexcept { return prompt_ids_; }

  LinearSoftmaxPolicy with_theta(Eigen::VectorXd theta) const;
  Eigen::VectorXd logits(std::size_t prompt) const;
  TabularPolicy induced() const;

 private:
  std::vector<std::string> prompt_ids_;
  std::vector<Eigen::MatrixXd> features_;
  Eigen::VectorXd theta_;
  std::vector<Eigen::VectorXd> offsets_;
};

using Policy = std::variant<TabularPolicy, LinearSoftmaxPolicy>;

TabularPolicy induced(const Policy& policy);

// max over (x, y) of pi(y|x) / pi_ref(y|x). Throws coverage-violation when the
// reference has a zero entry.
double concentrability(const TabularPolicy& pi, const TabularPolicy& pi_ref, const GameSet& games);

}  // namespace prosper
