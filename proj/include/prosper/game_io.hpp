#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "prosper/game.hpp"
#include "prosper/policy.hpp"

namespace prosper {

using Json = nlohmann::ordered_json;

// {"games":[{"prompt_id","n_responses","criteria":[{"name","matrix"}]}],"weights":[...]}
Json to_json(const GameSet& games);
GameSet game_set_from_json(const Json& doc);

// {"<prompt_id>": [probabilities], ...} in game-set order.
Json to_json(const TabularPolicy& policy);
TabularPolicy tabular_policy_from_json(const Json& doc, const GameSet& games);

// {"theta":[...], "features": "<path>", "offsets": {"<prompt_id>": [...]}}.
// The features file maps prompt ids to N x d row lists.
Json to_json(const LinearSoftmaxPolicy& policy, const std::string& features_path);
LinearSoftmaxPolicy linear_policy_from_json(const Json& doc, const GameSet& games,
                                            const std::filesystem::path& base_dir);
Json features_to_json(const LinearSoftmaxPolicy& policy);
std::vector<Eigen::MatrixXd> read_features(const std::filesystem::path& path, const GameSet& games);

// Reads either policy representation.
Policy read_policy(const std::filesystem::path& path, const GameSet& games);

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);
void write_json_file(const std::filesystem::path& path, const Json& doc);

GameSet read_game_set(const std::filesystem::path& path);
void write_game_set(const std::filesystem::path& path, const GameSet& games);

}  // namespace prosper
