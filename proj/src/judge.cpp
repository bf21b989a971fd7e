#include "prosper/judge.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <unordered_map>

#include "json.hpp"
#include "prosper/error.hpp"

namespace prosper {

namespace {

double logistic(double t) { return 1.0 / (1.0 + std::exp(-t)); }

std::vector<std::size_t> seeded_permutation(std::size_t n, Rng& rng) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i));
    std::swap(perm[i - 1], perm[std::min(j, i - 1)]);
  }
  return perm;
}

std::vector<std::string> default_names(std::size_t m) {
  std::vector<std::string> names;
  for (std::size_t k = 0; k < m; ++k) names.push_back("c" + std::to_string(k));
  return names;
}

}  // namespace

void LatentUtilityModel::validate() const {
  require(tau > 0.0 && std::isfinite(tau), "utility model: tau must be positive");
  require(!utilities.empty(), "utility model: no criteria");
  for (const auto& u : utilities) {
    require(u.size() == utilities.front().size(), "utility model: ragged utilities");
    for (double v : u) require(std::isfinite(v), "utility model: non-finite utility");
  }
}

PromptGame LatentUtilityModel::to_game(std::string prompt_id) const {
  validate();
  const std::size_t m = utilities.size();
  const std::size_t n = utilities.front().size();
  std::vector<double> flat(m * n * n);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        flat[(k * n + i) * n + j] = logistic((utilities[k][i] - utilities[k][j]) / tau);
      }
    }
  }
  return PromptGame(std::move(prompt_id), n, default_names(m), std::move(flat));
}

LatentUtilityModel sample_utility_model(std::uint64_t seed, std::size_t n, std::size_t m, double tau) {
  require(n >= 2 && m >= 1, "utility game: needs N >= 2 and m >= 1");
  LatentUtilityModel model;
  model.tau = tau;
  Rng rng(derive_seed(seed, {0x7574696cULL}));
  model.utilities.assign(m, std::vector<double>(n));
  for (auto& u : model.utilities) {
    for (auto& v : u) v = rng.normal(0.0, 1.0);
  }
  model.validate();
  return model;
}

PromptGame gen_random_utility_game(std::uint64_t seed, std::size_t n, std::size_t m, double tau,
                                   std::string prompt_id) {
  return sample_utility_model(seed, n, m, tau).to_game(std::move(prompt_id));
}

PromptGame gen_cyclic_game(std::uint64_t seed, std::size_t n, std::size_t m, double strength,
                           std::string prompt_id) {
  require(n >= 3, "cyclic game: needs N >= 3");
  require(m >= 1, "cyclic game: needs m >= 1");
  require(strength >= 0.0 && strength <= 0.5, "cyclic game: strength must lie in [0, 1/2]");
  const std::size_t reach = (n - 1) / 2;
  std::vector<double> circulant(n * n, 0.5);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t offset = (j + n - i) % n;
      if (offset == 0) continue;
      if (offset <= reach) {
        circulant[i * n + j] = 0.5 + strength;
      } else if (n - offset <= reach) {
        circulant[i * n + j] = 1.0 - (0.5 + strength);
      }
    }
  }
  std::vector<double> flat(m * n * n);
  for (std::size_t k = 0; k < m; ++k) {
    std::vector<std::size_t> label(n);
    std::iota(label.begin(), label.end(), std::size_t{0});
    if (k > 0) {
      Rng rng(derive_seed(seed, {0x6379636cULL, k}));
      label = seeded_permutation(n, rng);
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        flat[(k * n + label[i]) * n + label[j]] = circulant[i * n + j];
      }
    }
  }
  return PromptGame(std::move(prompt_id), n, default_names(m), std::move(flat));
}

PromptGame gen_uniform_game(std::uint64_t seed, std::size_t n, std::size_t m, std::string prompt_id) {
  require(n >= 2 && m >= 1, "uniform game: needs N >= 2 and m >= 1");
  Rng rng(derive_seed(seed, {0x756e6966ULL}));
  std::vector<double> flat(m * n * n, 0.5);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double u = rng.uniform();
        flat[(k * n + i) * n + j] = u;
        flat[(k * n + j) * n + i] = 1.0 - u;
      }
    }
  }
  return PromptGame(std::move(prompt_id), n, default_names(m), std::move(flat));
}

PromptGame scalarize_to_jc(const PromptGame& game, std::span<const double> weights) {
  validate_simplex(weights, game.n_criteria(), "scalarize_to_jc weights");
  const std::size_t n = game.n_responses();
  std::vector<double> flat(n * n, 0.0);
  for (std::size_t k = 0; k < game.n_criteria(); ++k) {
    const auto mat = game.matrix(k);
    for (std::size_t e = 0; e < n * n; ++e) flat[e] += weights[k] * mat[e];
  }
  // Rounding can leave the weighted sum a few ulps outside [0, 1].
  for (double& v : flat) v = std::clamp(v, 0.0, 1.0);
  return PromptGame(game.prompt_id(), n, {"jc"}, std::move(flat));
}

PromptGame scalarize_to_jc(const PromptGame& game) {
  const auto w = uniform_distribution(game.n_criteria());
  return scalarize_to_jc(game, w);
}

GameSet scalarize_to_jc(const GameSet& games) {
  std::vector<PromptGame> out;
  for (const auto& g : games.games()) out.push_back(scalarize_to_jc(g));
  return GameSet(std::move(out), games.weights());
}

void LikertConfig::validate() const {
  require(levels >= 2, "likert: levels must be at least 2");
  require(n_queries >= 1, "likert: n_queries must be at least 1");
  require(noise_sd >= 0.0 && std::isfinite(noise_sd), "likert: noise_sd must be nonnegative");
}

double quantize_likert(double q, int levels) {
  const double steps = static_cast<double>(levels - 1);
  const double x = std::clamp(q, 0.0, 1.0) * steps;
  const double lo = std::floor(x);
  const double frac = x - lo;
  double idx = lo;
  if (frac > 0.5) {
    idx = lo + 1.0;
  } else if (frac == 0.5) {
    // Tie: move toward the indifference point.
    idx = (lo + 0.5 < steps / 2.0) ? lo + 1.0 : lo;
  }
  return std::min(idx, steps) / steps;
}

double likert_score(double p, const LikertConfig& cfg, Rng& forward, Rng& swapped) {
  auto judged = [&](double latent, Rng& rng) {
    double acc = 0.0;
    for (int q = 0; q < cfg.n_queries; ++q) {
      double v = latent;
      if (cfg.noise_sd > 0.0) v = std::clamp(latent + rng.normal(0.0, cfg.noise_sd), 0.0, 1.0);
      acc += quantize_likert(v, cfg.levels);
    }
    return acc / static_cast<double>(cfg.n_queries);
  };
  const double fwd = judged(p, forward);
  if (!cfg.swap_average) return fwd;
  const double swp = judged(1.0 - p, swapped);
  return (fwd + (1.0 - swp)) / 2.0;
}

PromptGame apply_likert_protocol(const PromptGame& game, const LikertConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const std::size_t n = game.n_responses();
  std::vector<double> flat(game.data());
  for (std::size_t k = 0; k < game.n_criteria(); ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        Rng forward(derive_seed(seed, {k, i, j, 0}));
        Rng swapped(derive_seed(seed, {k, i, j, 1}));
        const double s = std::clamp(likert_score(game.pref(k, i, j), cfg, forward, swapped), 0.0, 1.0);
        flat[(k * n + i) * n + j] = s;
        flat[(k * n + j) * n + i] = 1.0 - s;
      }
    }
  }
  return PromptGame(game.prompt_id(), n, game.criteria(), std::move(flat));
}

GameSet ingest_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCategory::kIo, "cannot open judgment log " + path.string());
  return ingest_log(in, path.string());
}

GameSet ingest_log(std::istream& in, const std::string& source) {
  struct Cell {
    double sum = 0.0;
    std::size_t count = 0;
  };
  struct PromptAcc {
    std::string id;
    std::vector<std::string> criteria;
    std::unordered_map<std::string, std::size_t> criterion_index;
    std::vector<std::map<std::pair<std::size_t, std::size_t>, Cell>> cells;
    std::size_t n = 0;
  };
  std::vector<PromptAcc> prompts;
  std::unordered_map<std::string, std::size_t> prompt_index;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCategory::kParse, where + ": " + e.what());
    }
    std::string prompt, criterion;
    long long a = 0, b = 0;
    double score = 0.0;
    try {
      prompt = rec.at("prompt_id").get<std::string>();
      criterion = rec.at("criterion").get<std::string>();
      a = rec.at("a").get<long long>();
      b = rec.at("b").get<long long>();
      score = rec.at("score").get<double>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCategory::kParse, where + ": " + e.what());
    }
    if (!(score >= 0.0 && score <= 1.0)) {
      throw Error(ErrorCategory::kParse, where + ": score " + std::to_string(score) + " outside [0, 1]");
    }
    if (a < 0 || b < 0 || a == b) {
      throw Error(ErrorCategory::kParse, where + ": response indices must be distinct and nonnegative");
    }
    auto [it, fresh] = prompt_index.try_emplace(prompt, prompts.size());
    if (fresh) prompts.push_back(PromptAcc{prompt, {}, {}, {}, 0});
    auto& acc = prompts[it->second];
    auto [cit, cfresh] = acc.criterion_index.try_emplace(criterion, acc.criteria.size());
    if (cfresh) {
      acc.criteria.push_back(criterion);
      acc.cells.emplace_back();
    }
    const auto ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(b);
    acc.n = std::max({acc.n, ua + 1, ub + 1});
    auto& cell = acc.cells[cit->second][{std::min(ua, ub), std::max(ua, ub)}];
    cell.sum += ua < ub ? score : 1.0 - score;
    ++cell.count;
  }
  if (prompts.empty()) throw Error(ErrorCategory::kIncompleteLog, source + ": no judgments");

  std::vector<PromptGame> games;
  for (const auto& acc : prompts) {
    const std::size_t n = acc.n;
    const std::size_t m = acc.criteria.size();
    std::vector<double> flat(m * n * n, 0.5);
    for (std::size_t k = 0; k < m; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          const auto found = acc.cells[k].find({i, j});
          if (found == acc.cells[k].end()) {
            throw Error(ErrorCategory::kIncompleteLog,
                        source + ": prompt '" + acc.id + "' criterion '" + acc.criteria[k] +
                            "' has no judgment for pair (" + std::to_string(i) + ", " + std::to_string(j) + ")");
          }
          const double v = found->second.sum / static_cast<double>(found->second.count);
          flat[(k * n + i) * n + j] = v;
          flat[(k * n + j) * n + i] = 1.0 - v;
        }
      }
    }
    games.emplace_back(acc.id, n, acc.criteria, std::move(flat));
  }
  return GameSet(std::move(games));
}

}  // namespace prosper
