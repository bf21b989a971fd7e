#include "prosper/game_io.hpp"

#include <fstream>
#include <sstream>

#include "prosper/error.hpp"

namespace prosper {

namespace {

template <typename T>
T get_field(const Json& obj, const char* key, const std::string& context) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw Error(ErrorCategory::kParse, context + ": missing field '" + key + "'");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCategory::kParse, context + ": field '" + key + "': " + e.what());
  }
}

}  // namespace

Json to_json(const GameSet& games) {
  Json doc;
  doc["games"] = Json::array();
  for (const auto& g : games.games()) {
    Json game;
    game["prompt_id"] = g.prompt_id();
    game["n_responses"] = g.n_responses();
    game["criteria"] = Json::array();
    const std::size_t n = g.n_responses();
    for (std::size_t k = 0; k < g.n_criteria(); ++k) {
      Json matrix = Json::array();
      for (std::size_t i = 0; i < n; ++i) {
        const auto row = g.row(k, i);
        matrix.push_back(std::vector<double>(row.begin(), row.end()));
      }
      game["criteria"].push_back({{"name", g.criteria()[k]}, {"matrix", std::move(matrix)}});
    }
    doc["games"].push_back(std::move(game));
  }
  doc["weights"] = games.weights();
  return doc;
}

GameSet game_set_from_json(const Json& doc) {
  const auto games_json = get_field<Json>(doc, "games", "game set");
  if (!games_json.is_array()) throw Error(ErrorCategory::kParse, "game set: 'games' must be an array");
  std::vector<PromptGame> games;
  for (const auto& g : games_json) {
    const auto id = get_field<std::string>(g, "prompt_id", "game");
    const auto n = get_field<std::size_t>(g, "n_responses", "game '" + id + "'");
    const auto criteria = get_field<Json>(g, "criteria", "game '" + id + "'");
    std::vector<std::string> names;
    std::vector<double> flat;
    for (const auto& c : criteria) {
      names.push_back(get_field<std::string>(c, "name", "game '" + id + "' criterion"));
      const auto matrix =
          get_field<std::vector<std::vector<double>>>(c, "matrix", "game '" + id + "' criterion");
      if (matrix.size() != n) throw Error(ErrorCategory::kParse, "game '" + id + "': matrix row count differs from n_responses");
      for (const auto& row : matrix) {
        if (row.size() != n) throw Error(ErrorCategory::kParse, "game '" + id + "': matrix is not N x N");
        flat.insert(flat.end(), row.begin(), row.end());
      }
    }
    games.emplace_back(id, n, std::move(names), std::move(flat));
  }
  std::vector<double> weights;
  if (doc.contains("weights")) weights = get_field<std::vector<double>>(doc, "weights", "game set");
  return GameSet(std::move(games), std::move(weights));
}

Json to_json(const TabularPolicy& policy) {
  Json doc = Json::object();
  for (std::size_t x = 0; x < policy.size(); ++x) {
    const auto p = policy[x];
    doc[policy.prompt_ids()[x]] = std::vector<double>(p.begin(), p.end());
  }
  return doc;
}

TabularPolicy tabular_policy_from_json(const Json& doc, const GameSet& games) {
  std::vector<std::string> ids;
  std::vector<Distribution> probs;
  for (const auto& g : games.games()) {
    ids.push_back(g.prompt_id());
    probs.push_back(get_field<std::vector<double>>(doc, g.prompt_id().c_str(), "policy"));
  }
  TabularPolicy policy(std::move(ids), std::move(probs));
  policy.check_compatible(games, "policy file");
  return policy;
}

Json features_to_json(const LinearSoftmaxPolicy& policy) {
  Json doc = Json::object();
  for (std::size_t x = 0; x < policy.size(); ++x) {
    const auto& phi = policy.features()[x];
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < phi.rows(); ++r) {
      std::vector<double> row(static_cast<std::size_t>(phi.cols()));
      for (Eigen::Index c = 0; c < phi.cols(); ++c) row[static_cast<std::size_t>(c)] = phi(r, c);
      rows.push_back(std::move(row));
    }
    doc[policy.prompt_ids()[x]] = std::move(rows);
  }
  return doc;
}

Json to_json(const LinearSoftmaxPolicy& policy, const std::string& features_path) {
  Json doc;
  doc["theta"] = std::vector<double>(policy.theta().data(), policy.theta().data() + policy.theta().size());
  doc["features"] = features_path;
  Json offsets = Json::object();
  for (std::size_t x = 0; x < policy.size(); ++x) {
    const auto& o = policy.offsets()[x];
    offsets[policy.prompt_ids()[x]] = std::vector<double>(o.data(), o.data() + o.size());
  }
  doc["offsets"] = std::move(offsets);
  return doc;
}

std::vector<Eigen::MatrixXd> read_features(const std::filesystem::path& path, const GameSet& games) {
  const Json doc = read_json_file(path);
  std::vector<Eigen::MatrixXd> out;
  for (const auto& g : games.games()) {
    const auto rows = get_field<std::vector<std::vector<double>>>(doc, g.prompt_id().c_str(),
                                                                  "features " + path.string());
    if (rows.size() != g.n_responses()) {
      throw Error(ErrorCategory::kParse, "features " + path.string() + ": prompt '" + g.prompt_id() +
                                             "' needs one row per response");
    }
    const auto d = static_cast<Eigen::Index>(rows.empty() ? 0 : rows.front().size());
    Eigen::MatrixXd phi(static_cast<Eigen::Index>(rows.size()), d);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (static_cast<Eigen::Index>(rows[r].size()) != d) {
        throw Error(ErrorCategory::kParse, "features " + path.string() + ": ragged rows");
      }
      for (Eigen::Index c = 0; c < d; ++c) phi(static_cast<Eigen::Index>(r), c) = rows[r][static_cast<std::size_t>(c)];
    }
    out.push_back(std::move(phi));
  }
  return out;
}

LinearSoftmaxPolicy linear_policy_from_json(const Json& doc, const GameSet& games,
                                            const std::filesystem::path& base_dir) {
  const auto theta_vec = get_field<std::vector<double>>(doc, "theta", "linear policy");
  std::filesystem::path features_path = get_field<std::string>(doc, "features", "linear policy");
  if (features_path.is_relative()) features_path = base_dir / features_path;
  auto features = read_features(features_path, games);
  std::vector<Eigen::VectorXd> offsets;
  if (doc.contains("offsets")) {
    for (const auto& g : games.games()) {
      const auto o = get_field<std::vector<double>>(doc.at("offsets"), g.prompt_id().c_str(), "linear policy offsets");
      offsets.push_back(Eigen::Map<const Eigen::VectorXd>(o.data(), static_cast<Eigen::Index>(o.size())));
    }
  }
  std::vector<std::string> ids;
  for (const auto& g : games.games()) ids.push_back(g.prompt_id());
  Eigen::VectorXd theta = Eigen::Map<const Eigen::VectorXd>(theta_vec.data(), static_cast<Eigen::Index>(theta_vec.size()));
  return LinearSoftmaxPolicy(std::move(ids), std::move(features), std::move(theta), std::move(offsets));
}

Policy read_policy(const std::filesystem::path& path, const GameSet& games) {
  const Json doc = read_json_file(path);
  if (doc.is_object() && doc.contains("theta") && doc.contains("features")) {
    return linear_policy_from_json(doc, games, path.parent_path());
  }
  return tabular_policy_from_json(doc, games);
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCategory::kIo, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCategory::kParse, path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCategory::kIo, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCategory::kIo, "write failed for " + path.string());
}

void write_json_file(const std::filesystem::path& path, const Json& doc) {
  write_text_file(path, doc.dump(2) + "\n");
}

GameSet read_game_set(const std::filesystem::path& path) {
  return game_set_from_json(read_json_file(path));
}

void write_game_set(const std::filesystem::path& path, const GameSet& games) {
  write_json_file(path, to_json(games));
}

}  // namespace prosper
