#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include <openssl/evp.h>

#include "CLI11.hpp"
#include "prosper/cli.hpp"
#include "prosper/error.hpp"
#include "prosper/report_io.hpp"
#include "prosper/solver.hpp"

namespace prosper::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCategory::kIo, "SHA-256 digest failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return hex.str();
}

std::string read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCategory::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return ss.str();
}

int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::kInvalidArgument: return 2;
    case ErrorCategory::kCoverageViolation: return 3;
    case ErrorCategory::kIncompleteLog: return 4;
    case ErrorCategory::kParse: return 5;
    case ErrorCategory::kRankDeficiency: return 6;
    case ErrorCategory::kNoPairs: return 7;
    case ErrorCategory::kIo: return 8;
  }
  return 1;
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

// Output directory bookkeeping shared by all commands.
class Run {
 public:
  explicit Run(const RunConfig& rc) : rc_(rc) {}

  void write_text(const std::string& rel, const std::string& text) {
    write_text_file(rc_.out / rel, text);
    outputs_.push_back(rel);
  }
  void write_json(const std::string& rel, const Json& doc) {
    write_json_file(rc_.out / rel, doc);
    outputs_.push_back(rel);
  }

  template <class Fn>
  auto timed(const std::string& name, Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    auto result = fn();
    timings_[name] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return result;
  }

  Json& extra() { return extra_; }

  void write_manifest(const std::optional<std::filesystem::path>& config_file) {
    Json m;
    m["command"] = rc_.command;
    m["version"] = kVersion;
    m["seed"] = rc_.seed;
    if (config_file) {
      m["config_file"] = config_file->string();
      m["config_file_sha256"] = sha256_hex(read_bytes(*config_file));
    }
    m["effective_config_sha256"] = sha256_hex(rc_.effective.dump());
    m["effective_config"] = rc_.effective;
    m["timestamp"] = utc_timestamp();
    Json t = Json::object();
    for (const auto& [k, v] : timings_) t[k] = v;
    m["timings_ms"] = std::move(t);
    for (auto it = extra_.begin(); it != extra_.end(); ++it) m[it.key()] = it.value();
    std::vector<std::string> sorted = outputs_;
    std::sort(sorted.begin(), sorted.end());
    m["outputs"] = sorted;
    write_json_file(rc_.out / "manifest.json", m);
  }

 private:
  const RunConfig& rc_;
  std::vector<std::string> outputs_;
  std::map<std::string, double> timings_;
  Json extra_ = Json::object();
};

GameSet load_games(const RunConfig& rc) {
  if (!rc.games.empty()) return read_game_set(rc.games);
  return generate_games(rc.generator);
}

TabularPolicy load_reference(const RunConfig& rc, const GameSet& games) {
  if (rc.solver.reference.empty()) return TabularPolicy::uniform(games);
  auto ref = induced(read_policy(rc.solver.reference, games));
  ref.check_compatible(games, "reference policy");
  return ref;
}

AuditReport run_audit(const GameSet& games, const AuditSpec& spec, std::uint64_t seed) {
  AuditReport report;
  for (AuditMode mode : spec.modes) {
    AuditOptions opts;
    opts.subset_sizes = spec.subset_sizes;
    if (!spec.explicit_sizes) {
      std::size_t n_min = games[0].n_responses();
      for (const auto& g : games.games()) n_min = std::min(n_min, g.n_responses());
      std::erase_if(opts.subset_sizes, [&](std::size_t n) { return n >= n_min; });
      opts.subset_sizes.push_back(n_min);
    }
    opts.mode = mode;
    opts.seed = seed;
    opts.shuffle = spec.shuffle;
    auto part = audit(games, opts);
    for (auto& r : part.rows) report.rows.push_back(std::move(r));
  }
  return report;
}

void cmd_gen(const RunConfig& rc, Run& run, std::ostream& out) {
  const GameSet games = run.timed("generate", [&] { return generate_games(rc.generator); });
  run.write_json("games/games.json", to_json(games));
  std::size_t n_min = games[0].n_responses();
  for (const auto& g : games.games()) n_min = std::min(n_min, g.n_responses());
  AuditSpec quick;
  quick.subset_sizes = {n_min};
  quick.modes = {AuditMode::kPerCriterion};
  quick.shuffle = false;
  const auto report = run_audit(games, quick, rc.seed);
  Json summary;
  summary["n_prompts"] = games.size();
  summary["N"] = games.max_responses();
  summary["m"] = games.max_criteria();
  summary["fraction_no_condorcet"] = report.rows.front().fraction_no_condorcet;
  summary["fraction_intransitive"] = report.rows.front().fraction_intransitive;
  run.write_json("reports/gen_summary.json", summary);
  out << "gen: " << summary.dump() << "\n";
}

void cmd_audit(const RunConfig& rc, Run& run, std::ostream& out) {
  const GameSet games = load_games(rc);
  const auto report = run.timed("audit", [&] { return run_audit(games, rc.audit, rc.seed); });
  run.write_text("reports/audit.csv", audit_csv(report));
  run.write_json("reports/audit.json", to_json(report));
  for (const auto& r : report.rows) {
    out << "audit: N=" << r.subset_size << " mode=" << to_string(r.mode)
        << " no_condorcet=" << r.fraction_no_condorcet << " intransitive=" << r.fraction_intransitive << "\n";
  }
}

void write_policy(Run& run, const std::string& name, const Policy& policy) {
  if (const auto* lin = std::get_if<LinearSoftmaxPolicy>(&policy)) {
    const std::string features = name + "_features.json";
    run.write_json("policies/" + features, features_to_json(*lin));
    run.write_json("policies/" + name + ".json", to_json(*lin, features));
  } else {
    run.write_json("policies/" + name + ".json", to_json(std::get<TabularPolicy>(policy)));
  }
}

void cmd_solve(const RunConfig& rc, Run& run, std::ostream& out) {
  const GameSet games = load_games(rc);
  const TabularPolicy pi_ref = load_reference(rc, games);
  const auto& sv = rc.solver;
  TrainOptions opts;
  opts.policy_class = sv.policy_class;
  opts.threads = rc.threads;
  if (!sv.features.empty()) {
    require(sv.policy_class == PolicyClass::kLinearSoftmax, "solver.features needs policy_class linear_softmax");
    opts.features = read_features(sv.features, games);
  }
  const auto result = run.timed("train", [&] { return train_schedule(games, pi_ref, sv.config, sv.schedule, opts); });

  Json epochs = Json::array();
  const TrainResult* best_epoch = nullptr;
  std::size_t best_index = 0;
  for (std::size_t e = 0; e < result.epochs.size(); ++e) {
    const auto& ep = result.epochs[e];
    run.write_text("reports/diagnostics_epoch" + std::to_string(e) + ".csv", diagnostics_csv(ep.diagnostics));
    run.write_json("reports/diagnostics_epoch" + std::to_string(e) + ".json", to_json(ep.diagnostics));
    Json j;
    j["T"] = sv.schedule[e].T;
    j["rho"] = sv.schedule[e].rho;
    j["eta"] = ep.eta;
    j["final_value"] = ep.diagnostics.values.back();
    j["best_value"] = ep.best_value;
    j["best_iteration"] = ep.best_iteration;
    epochs.push_back(std::move(j));
    if (!best_epoch || ep.best_value > best_epoch->best_value) {
      best_epoch = &ep;
      best_index = e;
    }
  }
  write_policy(run, "final", result.final_policy);
  run.write_json("policies/best.json", to_json(best_epoch->best));

  const auto report = game_value(games, result.final_tabular, pi_ref, sv.config.beta);
  run.write_text("reports/value_report.csv", value_report_csv(report));
  run.write_json("reports/value_report.json", to_json(report));

  Json summary;
  summary["variant"] = std::string(to_string(sv.config.variant));
  summary["estimator"] = std::string(to_string(sv.config.estimator));
  summary["policy_class"] = std::string(to_string(sv.policy_class));
  summary["beta"] = sv.config.beta;
  summary["epochs"] = std::move(epochs);
  summary["final_value"] = report.total;
  summary["reference_value"] = game_value(games, pi_ref, pi_ref, sv.config.beta).total;
  summary["best_epoch"] = best_index;
  summary["best_value"] = best_epoch->best_value;

  if (sv.oracle) {
    std::size_t total_T = 0;
    for (const auto& e : sv.schedule) total_T += e.T;
    SolveOptions so;
    so.record_k_star = true;
    const auto oracle = run.timed("oracle", [&] { return solve_exact(games, pi_ref, sv.config.beta, sv.config.eta, total_T, so); });
    run.write_text("reports/oracle_trace.csv", solve_trace_csv(oracle, games.max_criteria()));
    run.write_json("reports/oracle_trace.json", solve_trace_json(oracle));
    run.write_json("policies/oracle_best.json", to_json(oracle.best));
    summary["oracle_best_value"] = oracle.best_value;
  }
  run.write_json("reports/solve_summary.json", summary);
  out << "solve: variant=" << to_string(sv.config.variant) << " V(final)=" << report.total
      << " V(reference)=" << summary["reference_value"].get<double>() << "\n";
}

void cmd_tournament(const RunConfig& rc, Run& run, std::ostream& out) {
  const GameSet games = load_games(rc);
  std::vector<TabularPolicy> policies;
  std::vector<std::string> labels;
  if (rc.eval.include_reference) {
    policies.push_back(load_reference(rc, games));
    labels.push_back("reference");
  }
  for (const auto& ref : rc.eval.policies) {
    policies.push_back(induced(read_policy(ref.path, games)));
    labels.push_back(ref.label);
  }
  const auto w = run.timed("tournament", [&] { return tournament(policies, labels, games, rc.eval.mode); });
  run.write_text("reports/winrate.csv", winrate_csv(w));
  run.write_json("reports/winrate.json", to_json(w));
  out << "tournament: " << labels.size() << " policies, mode=" << to_string(rc.eval.mode.kind) << "\n";
}

void cmd_converge(const RunConfig& rc, Run& run, std::ostream& out) {
  require(rc.generator.kind != "log", "converge needs a synthetic generator");
  ConvergenceOptions opts;
  opts.betas = rc.converge.betas;
  opts.Ts = rc.converge.Ts;
  opts.seeds = rc.converge.seeds;
  opts.oracle_T = rc.converge.oracle_T;
  opts.eta = rc.solver.config.eta;
  opts.threads = rc.threads;
  const GeneratorSpec base = rc.generator;
  const auto study = run.timed("converge", [&] {
    return convergence_study(
        [&](std::uint64_t seed) {
          GeneratorSpec spec = base;
          spec.seed = seed;
          return generate_games(spec);
        },
        opts);
  });
  run.write_text("reports/converge.csv", convergence_csv(study));
  run.write_text("reports/converge_slopes.csv", convergence_slopes_csv(study));
  run.write_json("reports/converge.json", to_json(study));
  Json runtimes = Json::array();
  for (const auto& c : study.cells) {
    runtimes.push_back({{"beta", c.beta}, {"T", c.T}, {"seed", c.seed}, {"runtime_ms", c.runtime_ms}});
  }
  run.extra()["cell_runtimes"] = std::move(runtimes);
  for (const auto& s : study.slopes) {
    out << "converge: beta=" << s.beta << " slope=" << s.slope_of_mean_gap << "\n";
  }
}

void cmd_diag(const RunConfig& rc, Run& run, std::ostream& out) {
  require(!rc.diag.policy.empty(), "diag needs diag.policy (or --policy-file)");
  const GameSet games = load_games(rc);
  const TabularPolicy pi_ref = load_reference(rc, games);
  const TabularPolicy pi = induced(read_policy(rc.diag.policy, games));
  const auto report = game_value(games, pi, pi_ref, rc.solver.config.beta);
  const auto bw = blackwell_summary(pi, games, rc.diag.p, pi_ref);
  Json doc;
  doc["beta"] = rc.solver.config.beta;
  doc["p"] = rc.diag.p;
  doc["value_report"] = to_json(report);
  doc["reference_value"] = game_value(games, pi_ref, pi_ref, rc.solver.config.beta).total;
  try {
    doc["concentrability"] = concentrability(pi, pi_ref, games);
  } catch (const Error& e) {
    if (e.category() != ErrorCategory::kCoverageViolation) throw;
    doc["concentrability"] = nullptr;
  }
  doc["blackwell"] = to_json(bw, games);
  run.write_text("reports/value_report.csv", value_report_csv(report));
  run.write_json("reports/diag.json", doc);
  out << "diag: V=" << report.total << " blackwell_mean=" << bw.mean << "\n";
}

// Flag overrides collected as strings and merged into the config document.
struct Overrides {
  std::map<std::string, std::string> scalars;  // "section.key" -> value
  std::map<std::string, std::vector<std::string>> lists;
  std::vector<std::string> policies;  // label=path
  std::map<std::string, CLI::Option*> options;
};

void set_path(Json& doc, const std::string& dotted, Json value) {
  Json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = dotted.find('.', start);
    const std::string key = dotted.substr(start, dot - start);
    if (dot == std::string::npos) {
      (*node)[key] = std::move(value);
      return;
    }
    if (!node->contains(key) || !(*node)[key].is_object()) (*node)[key] = Json::object();
    node = &(*node)[key];
    start = dot + 1;
  }
}

Json parse_scalar(const std::string& text, bool numeric, const std::string& flag) {
  if (!numeric) return text;
  try {
    Json v = Json::parse(text);
    if (v.is_number() || v.is_boolean()) return v;
  } catch (const nlohmann::json::exception&) {
  }
  throw Error(ErrorCategory::kInvalidArgument, "flag " + flag + " expects a number, got '" + text + "'");
}

struct FlagSpec {
  const char* flag;
  const char* path;
  bool numeric;
  bool is_path;
  const char* help;
};

constexpr FlagSpec kScalarFlags[] = {
    {"--games", "games", false, true, "input game set JSON"},
    {"--kind", "generator.kind", false, false, "generator: cyclic, random_utility, uniform, log"},
    {"--log", "generator.log", false, true, "judgment log for --kind log"},
    {"--n-prompts", "generator.n_prompts", true, false, "number of generated prompts"},
    {"--N", "generator.N", true, false, "responses per prompt"},
    {"--m", "generator.m", true, false, "criteria per prompt"},
    {"--strength", "generator.strength", true, false, "cyclic strength in [0, 1/2]"},
    {"--tau", "generator.tau", true, false, "random-utility temperature"},
    {"--likert-levels", "generator.likert.levels", true, false, "Likert grid size"},
    {"--likert-queries", "generator.likert.n_queries", true, false, "Likert queries per order"},
    {"--likert-noise", "generator.likert.noise_sd", true, false, "Likert noise standard deviation"},
    {"--beta", "solver.beta", true, false, "KL strength"},
    {"--eta", "solver.eta", true, false, "step size"},
    {"--T", "solver.T", true, false, "iterations per epoch"},
    {"--M", "solver.M", true, false, "estimation samples"},
    {"--K", "solver.K", true, false, "rollouts per prompt"},
    {"--rho", "solver.rho", true, false, "filtration ratio"},
    {"--p", "solver.p", true, false, "target threshold"},
    {"--variant", "solver.variant", false, false, "full, jc or vb"},
    {"--estimator", "solver.estimator", false, false, "exact or monte_carlo"},
    {"--ridge", "solver.ridge", true, false, "regression ridge"},
    {"--policy-class", "solver.policy_class", false, false, "tabular or linear_softmax"},
    {"--features", "solver.features", false, true, "linear-softmax feature file"},
    {"--reference", "solver.reference", false, true, "reference policy file"},
    {"--mode", "audit.mode", false, false, "audit mode: per_criterion, aggregate or both"},
    {"--tournament-mode", "eval.mode", false, false, "expected or sampled"},
    {"--samples", "eval.n", true, false, "sampled tournament draws"},
    {"--oracle-T", "converge.oracle_T", true, false, "oracle iterations"},
    {"--policy-file", "diag.policy", false, true, "policy to diagnose"},
};

constexpr FlagSpec kListFlags[] = {
    {"--subset-sizes", "audit.subset_sizes", true, false, "audit subset sizes"},
    {"--betas", "converge.betas", true, false, "convergence betas"},
    {"--Ts", "converge.Ts", true, false, "convergence horizons"},
    {"--seeds", "converge.seeds", true, false, "convergence seeds"},
};

int dispatch(const std::string& command, const std::optional<std::filesystem::path>& config_file, Json doc,
             const std::filesystem::path& base_dir, std::ostream& out) {
  const RunConfig rc = parse_run_config(command, doc, base_dir);
  Run run(rc);
  if (command == "gen") {
    cmd_gen(rc, run, out);
  } else if (command == "audit") {
    cmd_audit(rc, run, out);
  } else if (command == "solve") {
    cmd_solve(rc, run, out);
  } else if (command == "tournament") {
    cmd_tournament(rc, run, out);
  } else if (command == "converge") {
    cmd_converge(rc, run, out);
  } else if (command == "diag") {
    cmd_diag(rc, run, out);
  }
  run.write_manifest(config_file);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-criterion preference game solver"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  struct Common {
    std::string config;
    std::string seed;
    std::string out;
    std::string threads;
    bool oracle = false;
    bool fresh = false;
    bool same_pairs = false;
    bool no_reference = false;
    Overrides ov;
  };
  std::map<std::string, Common> commons;
  const char* commands[][2] = {{"gen", "generate a game set"},
                               {"audit", "intransitivity audit"},
                               {"solve", "train a policy"},
                               {"tournament", "pairwise win-rate tournament"},
                               {"converge", "convergence-rate study"},
                               {"diag", "value, coverage and Blackwell diagnostics for a policy"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    auto& c = commons[name];
    sub->add_option("--config", c.config, "JSON run configuration");
    sub->add_option("--seed", c.seed, "base seed");
    sub->add_option("--out", c.out, "output directory");
    sub->add_option("--threads", c.threads, "worker threads");
    for (const auto& f : kScalarFlags) {
      c.ov.options[f.path] = sub->add_option(f.flag, c.ov.scalars[f.path], f.help);
    }
    for (const auto& f : kListFlags) {
      c.ov.options[f.path] = sub->add_option(f.flag, c.ov.lists[f.path], f.help)->delimiter(',');
    }
    sub->add_option("--policy", c.ov.policies, "tournament entry label=path (repeatable)");
    sub->add_flag("--oracle", c.oracle, "also run the exact mirror-ascent oracle");
    sub->add_flag("--fresh-samples", c.fresh, "separate samples for gradient weights");
    sub->add_flag("--same-policy-pairs", c.same_pairs, "also regress on same-policy rollout pairs");
    sub->add_flag("--no-reference", c.no_reference, "leave the reference policy out of tournaments");
  }

  std::vector<std::string> rev(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(rev.begin(), rev.end());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << to_string(ErrorCategory::kInvalidArgument) << ": " << one_line(e.what()) << "\n";
    return exit_code(ErrorCategory::kInvalidArgument);
  }

  try {
    std::string command;
    for (const auto* sub : app.get_subcommands()) command = sub->get_name();
    auto& c = commons[command];
    Json doc = Json::object();
    std::optional<std::filesystem::path> config_file;
    std::filesystem::path base_dir = std::filesystem::current_path();
    if (!c.config.empty()) {
      config_file = std::filesystem::absolute(c.config);
      doc = read_json_file(*config_file);
      if (!doc.is_object()) throw Error(ErrorCategory::kParse, "config: top level must be an object");
      base_dir = config_file->parent_path();
    }
    auto absolute = [](const std::string& p) { return std::filesystem::absolute(p).lexically_normal().string(); };
    if (!c.seed.empty()) doc["seed"] = parse_scalar(c.seed, true, "--seed");
    if (!c.threads.empty()) doc["threads"] = parse_scalar(c.threads, true, "--threads");
    if (!c.out.empty()) doc["out"] = absolute(c.out);
    for (const auto& f : kScalarFlags) {
      if (c.ov.options[f.path]->count() == 0) continue;
      const std::string& v = c.ov.scalars[f.path];
      set_path(doc, f.path, f.is_path ? Json(absolute(v)) : parse_scalar(v, f.numeric, f.flag));
    }
    for (const auto& f : kListFlags) {
      if (c.ov.options[f.path]->count() == 0) continue;
      Json list = Json::array();
      for (const auto& v : c.ov.lists[f.path]) list.push_back(parse_scalar(v, true, f.flag));
      set_path(doc, f.path, std::move(list));
    }
    if (!c.ov.policies.empty()) {
      Json list = Json::array();
      for (const auto& entry : c.ov.policies) {
        const auto eq = entry.find('=');
        require(eq != std::string::npos && eq > 0, "--policy expects label=path, got '" + entry + "'");
        list.push_back({{"label", entry.substr(0, eq)}, {"path", absolute(entry.substr(eq + 1))}});
      }
      set_path(doc, "eval.policies", std::move(list));
    }
    if (c.oracle) set_path(doc, "solver.oracle", true);
    if (c.fresh) set_path(doc, "solver.fresh_samples", true);
    if (c.same_pairs) set_path(doc, "solver.include_same_policy_pairs", true);
    if (c.no_reference) set_path(doc, "eval.include_reference", false);
    return dispatch(command, config_file, std::move(doc), base_dir, out);
  } catch (const Error& e) {
    err << "error: " << to_string(e.category()) << ": " << one_line(e.what()) << "\n";
    return exit_code(e.category());
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << to_string(ErrorCategory::kParse) << ": " << one_line(e.what()) << "\n";
    return exit_code(ErrorCategory::kParse);
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << to_string(ErrorCategory::kIo) << ": " << one_line(e.what()) << "\n";
    return exit_code(ErrorCategory::kIo);
  } catch (const std::exception& e) {
    err << "error: " << to_string(ErrorCategory::kInvalidArgument) << ": " << one_line(e.what()) << "\n";
    return exit_code(ErrorCategory::kInvalidArgument);
  }
}

}  // namespace prosper::cli
