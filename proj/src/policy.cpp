#include "prosper/policy.hpp"

#include <algorithm>
#include <cmath>

#include "prosper/error.hpp"

namespace prosper {

TabularPolicy::TabularPolicy(std::vector<std::string> prompt_ids, std::vector<Distribution> probs)
    : prompt_ids_(std::move(prompt_ids)), probs_(std::move(probs)) {
  require(prompt_ids_.size() == probs_.size(), "tabular policy: prompt ids and vectors differ in count");
  for (std::size_t x = 0; x < probs_.size(); ++x) {
    validate_simplex(probs_[x], probs_[x].size(), "tabular policy");
  }
}

TabularPolicy TabularPolicy::uniform(const GameSet& games) {
  std::vector<std::string> ids;
  std::vector<Distribution> probs;
  for (const auto& g : games.games()) {
    ids.push_back(g.prompt_id());
    probs.push_back(uniform_distribution(g.n_responses()));
  }
  return TabularPolicy(std::move(ids), std::move(probs));
}

TabularPolicy TabularPolicy::pure(const GameSet& games, std::span<const std::size_t> responses) {
  require(responses.size() == games.size(), "pure policy: one response per prompt required");
  std::vector<std::string> ids;
  std::vector<Distribution> probs;
  for (std::size_t x = 0; x < games.size(); ++x) {
    require(responses[x] < games[x].n_responses(), "pure policy: response index out of range");
    ids.push_back(games[x].prompt_id());
    probs.push_back(point_mass(games[x].n_responses(), responses[x]));
  }
  return TabularPolicy(std::move(ids), std::move(probs));
}

void TabularPolicy::check_compatible(const GameSet& games, const char* what) const {
  require(probs_.size() == games.size(), std::string(what) + ": policy covers " +
                                             std::to_string(probs_.size()) + " prompts, game set has " +
                                             std::to_string(games.size()));
  for (std::size_t x = 0; x < games.size(); ++x) {
    require(prompt_ids_[x] == games[x].prompt_id(),
            std::string(what) + ": prompt id mismatch at index " + std::to_string(x));
    require(probs_[x].size() == games[x].n_responses(),
            std::string(what) + ": response count mismatch for prompt '" + prompt_ids_[x] + "'");
  }
}

LinearSoftmaxPolicy::LinearSoftmaxPolicy(std::vector<std::string> prompt_ids,
                                         std::vector<Eigen::MatrixXd> features, Eigen::VectorXd theta,
                                         std::vector<Eigen::VectorXd> offsets, bool allow_overcomplete)
    : prompt_ids_(std::move(prompt_ids)),
      features_(std::move(features)),
      theta_(std::move(theta)),
      offsets_(std::move(offsets)) {
  require(prompt_ids_.size() == features_.size(), "linear policy: one feature block per prompt");
  require(!features_.empty(), "linear policy: no prompts");
  std::size_t total_rows = 0;
  for (const auto& phi : features_) {
    require(phi.cols() == theta_.size(), "linear policy: feature width differs from theta");
    require(phi.rows() >= 1, "linear policy: empty feature block");
    require(phi.allFinite(), "linear policy: non-finite feature");
    total_rows += static_cast<std::size_t>(phi.rows());
  }
  require(allow_overcomplete || static_cast<std::size_t>(theta_.size()) <= total_rows,
          "linear policy: feature dimension exceeds total response count");
  if (offsets_.empty()) {
    for (const auto& phi : features_) offsets_.push_back(Eigen::VectorXd::Zero(phi.rows()));
  }
  require(offsets_.size() == features_.size(), "linear policy: one offset vector per prompt");
  for (std::size_t x = 0; x < features_.size(); ++x) {
    require(offsets_[x].size() == features_[x].rows(), "linear policy: offset size mismatch");
  }
}

Eigen::MatrixXd LinearSoftmaxPolicy::one_hot_block(const GameSet& games, std::size_t prompt) {
  std::size_t start = 0, total = 0;
  for (std::size_t x = 0; x < games.size(); ++x) {
    if (x < prompt) start += games[x].n_responses();
    total += games[x].n_responses();
  }
  const auto n = static_cast<Eigen::Index>(games[prompt].n_responses());
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(total));
  phi.block(0, static_cast<Eigen::Index>(start), n, n).setIdentity();
  return phi;
}

std::vector<Eigen::MatrixXd> LinearSoftmaxPolicy::one_hot_features(const GameSet& games) {
  std::vector<Eigen::MatrixXd> out;
  for (std::size_t x = 0; x < games.size(); ++x) out.push_back(one_hot_block(games, x));
  return out;
}

LinearSoftmaxPolicy LinearSoftmaxPolicy::with_theta(Eigen::VectorXd theta) const {
  LinearSoftmaxPolicy copy = *this;
  require(theta.size() == theta_.size(), "linear policy: theta dimension mismatch");
  copy.theta_ = std::move(theta);
  return copy;
}

Eigen::VectorXd LinearSoftmaxPolicy::logits(std::size_t prompt) const {
  return offsets_[prompt] + features_[prompt] * theta_;
}

TabularPolicy LinearSoftmaxPolicy::induced() const {
  std::vector<Distribution> probs;
  probs.reserve(features_.size());
  for (std::size_t x = 0; x < features_.size(); ++x) {
    const Eigen::VectorXd z = logits(x);
    probs.push_back(softmax(std::span<const double>(z.data(), static_cast<std::size_t>(z.size()))));
  }
  return TabularPolicy(prompt_ids_, std::move(probs));
}

TabularPolicy induced(const Policy& policy) {
  if (const auto* tab = std::get_if<TabularPolicy>(&policy)) return *tab;
  return std::get<LinearSoftmaxPolicy>(policy).induced();
}

double concentrability(const TabularPolicy& pi, const TabularPolicy& pi_ref, const GameSet& games) {
  pi.check_compatible(games, "concentrability(pi)");
  pi_ref.check_compatible(games, "concentrability(pi_ref)");
  double worst = 0.0;
  for (std::size_t x = 0; x < games.size(); ++x) {
    for (std::size_t y = 0; y < games[x].n_responses(); ++y) {
      if (!(pi_ref[x][y] > 0.0)) {
        throw Error(ErrorCategory::kCoverageViolation,
                    "reference policy assigns zero probability to response " + std::to_string(y) +
                        " of prompt '" + games[x].prompt_id() + "'");
      }
      // Log-domain ratio.
      if (pi[x][y] > 0.0) worst = std::max(worst, std::exp(std::log(pi[x][y]) - std::log(pi_ref[x][y])));
    }
  }
  return worst;
}

}  // namespace prosper
