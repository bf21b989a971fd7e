#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "prosper/audit.hpp"
#include "prosper/config.hpp"
#include "prosper/eval.hpp"
#include "prosper/game_io.hpp"
#include "prosper/judge.hpp"
#include "prosper/train.hpp"

namespace prosper::cli {

struct GeneratorSpec {
  std::string kind = "cyclic";  // cyclic | random_utility | uniform | log
  std::size_t n_prompts = 1;
  std::size_t N = 5;
  std::size_t m = 2;
  std::uint64_t seed = 0;
  double strength = 0.3;
  double tau = 1.0;
  std::optional<LikertConfig> likert;
  std::filesystem::path log;  // kind == log
};

struct SolverSpec {
  SolverConfig config;
  PolicyClass policy_class = PolicyClass::kTabular;
  std::filesystem::path features;   // linear-softmax features file, optional
  std::filesystem::path reference;  // reference policy file; uniform when empty
  std::vector<EpochSpec> schedule;  // default: (T, 0.15), (T, 0.17)
  bool oracle = false;              // also write the exact mirror-ascent trace
};

struct AuditSpec {
  std::vector<std::size_t> subset_sizes{2, 4, 8, 16};
  bool explicit_sizes = false;  // defaults: sizes below the smallest prompt, then its full size
  std::vector<AuditMode> modes{AuditMode::kPerCriterion, AuditMode::kAggregate};
  bool shuffle = true;
};

struct PolicyRef {
  std::string label;
  std::filesystem::path path;
};

struct EvalSpec {
  std::vector<PolicyRef> policies;
  bool include_reference = true;
  TournamentMode mode;
};

struct ConvergeSpec {
  std::vector<double> betas{0.5};
  std::vector<std::size_t> Ts{100, 1000, 10000};
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  std::size_t oracle_T = 1000000;
};

struct DiagSpec {
  std::filesystem::path policy;
  double p = 0.5;
};

// Everything a command needs, after config-file loading and flag overrides.
struct RunConfig {
  std::string command;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::filesystem::path out = "out";
  std::filesystem::path games;  // input game set; generated inline when empty
  GeneratorSpec generator;
  SolverSpec solver;
  AuditSpec audit;
  EvalSpec eval;
  ConvergeSpec converge;
  DiagSpec diag;
  Json effective;  // merged configuration document, hashed into the manifest
};

// Builds a RunConfig from a merged JSON document. Relative paths resolve
// against `base_dir`.
RunConfig parse_run_config(const std::string& command, const Json& doc, const std::filesystem::path& base_dir);

GameSet generate_games(const GeneratorSpec& spec);

// Entry point shared by the executable and the tests. args[0] is the
// program name. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace prosper::cli
