#include <string>

#include "prosper/cli.hpp"
#include "prosper/error.hpp"
#include "prosper/rng.hpp"

namespace prosper::cli {

namespace {

const Json& section(const Json& doc, const char* key) {
  static const Json empty = Json::object();
  if (!doc.contains(key)) return empty;
  const Json& s = doc.at(key);
  if (!s.is_object()) throw Error(ErrorCategory::kParse, std::string("config: '") + key + "' must be an object");
  return s;
}

template <class T>
T get_or(const Json& obj, const char* key, T fallback, const std::string& where) {
  if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCategory::kParse, "config: " + where + "." + key + ": " + e.what());
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  if (p.empty()) return {};
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::vector<EpochSpec> parse_schedule(const Json& s, std::size_t default_T) {
  if (!s.contains("schedule") || s.at("schedule").is_null()) return default_schedule(default_T);
  const Json& list = s.at("schedule");
  if (!list.is_array() || list.empty()) throw Error(ErrorCategory::kParse, "config: solver.schedule must be a nonempty array");
  std::vector<EpochSpec> out;
  for (const auto& e : list) {
    if (!e.is_object()) throw Error(ErrorCategory::kParse, "config: solver.schedule entries must be objects");
    EpochSpec spec;
    spec.T = get_or<std::size_t>(e, "T", default_T, "solver.schedule");
    spec.rho = get_or<double>(e, "rho", 0.15, "solver.schedule");
    require(spec.T >= 1, "schedule epoch T must be at least 1");
    require(spec.rho > 0.0 && spec.rho <= 1.0, "schedule epoch rho must lie in (0, 1]");
    out.push_back(spec);
  }
  return out;
}

}  // namespace

RunConfig parse_run_config(const std::string& command, const Json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw Error(ErrorCategory::kParse, "config: top level must be an object");
  RunConfig rc;
  rc.command = command;
  rc.effective = doc;
  rc.seed = get_or<std::uint64_t>(doc, "seed", 0, "config");
  rc.threads = get_or<std::size_t>(doc, "threads", 1, "config");
  require(rc.threads >= 1, "threads must be at least 1");
  rc.out = resolve(base_dir, get_or<std::string>(doc, "out", "out", "config"));
  rc.games = resolve(base_dir, get_or<std::string>(doc, "games", "", "config"));

  const Json& g = section(doc, "generator");
  auto& gen = rc.generator;
  gen.kind = get_or<std::string>(g, "kind", gen.kind, "generator");
  gen.n_prompts = get_or<std::size_t>(g, "n_prompts", gen.n_prompts, "generator");
  gen.N = get_or<std::size_t>(g, "N", gen.N, "generator");
  gen.m = get_or<std::size_t>(g, "m", gen.m, "generator");
  gen.seed = get_or<std::uint64_t>(g, "seed", rc.seed, "generator");
  gen.strength = get_or<double>(g, "strength", gen.strength, "generator");
  gen.tau = get_or<double>(g, "tau", gen.tau, "generator");
  gen.log = resolve(base_dir, get_or<std::string>(g, "log", "", "generator"));
  if (g.contains("likert") && !g.at("likert").is_null()) {
    const Json& l = g.at("likert");
    LikertConfig lk;
    lk.levels = get_or<int>(l, "levels", lk.levels, "generator.likert");
    lk.n_queries = get_or<int>(l, "n_queries", lk.n_queries, "generator.likert");
    lk.noise_sd = get_or<double>(l, "noise_sd", lk.noise_sd, "generator.likert");
    lk.swap_average = get_or<bool>(l, "swap_average", lk.swap_average, "generator.likert");
    lk.validate();
    gen.likert = lk;
  }
  require(gen.kind == "cyclic" || gen.kind == "random_utility" || gen.kind == "uniform" || gen.kind == "log",
          "generator.kind must be one of cyclic, random_utility, uniform, log");
  require(gen.n_prompts >= 1, "generator.n_prompts must be at least 1");

  const Json& s = section(doc, "solver");
  auto& sv = rc.solver;
  auto& c = sv.config;
  c.beta = get_or<double>(s, "beta", c.beta, "solver");
  if (s.contains("eta") && !s.at("eta").is_null()) c.eta = get_or<double>(s, "eta", 0.0, "solver");
  c.T = get_or<std::size_t>(s, "T", c.T, "solver");
  c.M = get_or<std::size_t>(s, "M", c.M, "solver");
  c.K = get_or<std::size_t>(s, "K", c.K, "solver");
  c.rho = get_or<double>(s, "rho", c.rho, "solver");
  c.p = get_or<double>(s, "p", c.p, "solver");
  c.variant = parse_variant(get_or<std::string>(s, "variant", std::string(to_string(c.variant)), "solver"));
  c.estimator = parse_estimator(get_or<std::string>(s, "estimator", std::string(to_string(c.estimator)), "solver"));
  c.seed = get_or<std::uint64_t>(s, "seed", rc.seed, "solver");
  c.ridge = get_or<double>(s, "ridge", c.ridge, "solver");
  c.fresh_samples = get_or<bool>(s, "fresh_samples", c.fresh_samples, "solver");
  c.include_same_policy_pairs = get_or<bool>(s, "include_same_policy_pairs", c.include_same_policy_pairs, "solver");
  c.validate();
  sv.policy_class =
      parse_policy_class(get_or<std::string>(s, "policy_class", std::string(to_string(sv.policy_class)), "solver"));
  sv.features = resolve(base_dir, get_or<std::string>(s, "features", "", "solver"));
  sv.reference = resolve(base_dir, get_or<std::string>(s, "reference", "", "solver"));
  sv.schedule = parse_schedule(s, c.T);
  sv.oracle = get_or<bool>(s, "oracle", false, "solver");

  const Json& a = section(doc, "audit");
  rc.audit.explicit_sizes = a.contains("subset_sizes");
  rc.audit.subset_sizes = get_or<std::vector<std::size_t>>(a, "subset_sizes", rc.audit.subset_sizes, "audit");
  require(!rc.audit.subset_sizes.empty(), "audit.subset_sizes must be nonempty");
  if (a.contains("modes") || a.contains("mode")) {
    std::vector<std::string> names;
    if (a.contains("modes")) {
      names = get_or<std::vector<std::string>>(a, "modes", {}, "audit");
    } else {
      names.push_back(get_or<std::string>(a, "mode", "per_criterion", "audit"));
    }
    rc.audit.modes.clear();
    for (const auto& n : names) {
      if (n == "both") {
        rc.audit.modes = {AuditMode::kPerCriterion, AuditMode::kAggregate};
      } else {
        rc.audit.modes.push_back(parse_audit_mode(n));
      }
    }
    require(!rc.audit.modes.empty(), "audit.modes must be nonempty");
  }
  rc.audit.shuffle = get_or<bool>(a, "shuffle", rc.audit.shuffle, "audit");

  const Json& e = section(doc, "eval");
  if (e.contains("policies")) {
    const Json& list = e.at("policies");
    if (!list.is_array()) throw Error(ErrorCategory::kParse, "config: eval.policies must be an array");
    for (const auto& item : list) {
      PolicyRef ref;
      ref.label = get_or<std::string>(item, "label", "", "eval.policies");
      ref.path = resolve(base_dir, get_or<std::string>(item, "path", "", "eval.policies"));
      require(!ref.label.empty() && !ref.path.empty(), "eval.policies entries need a label and a path");
      rc.eval.policies.push_back(ref);
    }
  }
  rc.eval.include_reference = get_or<bool>(e, "include_reference", rc.eval.include_reference, "eval");
  rc.eval.mode.kind = parse_tournament_kind(get_or<std::string>(e, "mode", "expected", "eval"));
  rc.eval.mode.n = get_or<std::size_t>(e, "n", rc.eval.mode.n, "eval");
  rc.eval.mode.seed = get_or<std::uint64_t>(e, "seed", rc.seed, "eval");

  const Json& cv = section(doc, "converge");
  rc.converge.betas = get_or<std::vector<double>>(cv, "betas", rc.converge.betas, "converge");
  rc.converge.Ts = get_or<std::vector<std::size_t>>(cv, "Ts", rc.converge.Ts, "converge");
  rc.converge.seeds = get_or<std::vector<std::uint64_t>>(cv, "seeds", rc.converge.seeds, "converge");
  rc.converge.oracle_T = get_or<std::size_t>(cv, "oracle_T", rc.converge.oracle_T, "converge");
  for (double b : rc.converge.betas) require(b > 0.0, "converge.betas must be positive");
  require(rc.converge.oracle_T >= 1, "converge.oracle_T must be at least 1");

  const Json& d = section(doc, "diag");
  rc.diag.policy = resolve(base_dir, get_or<std::string>(d, "policy", "", "diag"));
  rc.diag.p = get_or<double>(d, "p", c.p, "diag");
  require(rc.diag.p >= 0.5 && rc.diag.p <= 1.0, "diag.p must lie in [1/2, 1]");
  return rc;
}

GameSet generate_games(const GeneratorSpec& spec) {
  if (spec.kind == "log") {
    require(!spec.log.empty(), "generator.log is required for kind 'log'");
    return ingest_log(spec.log);
  }
  std::vector<PromptGame> games;
  games.reserve(spec.n_prompts);
  for (std::size_t x = 0; x < spec.n_prompts; ++x) {
    const std::uint64_t seed = spec.n_prompts == 1 ? spec.seed : derive_seed(spec.seed, {x});
    const std::string id = "p" + std::to_string(x);
    auto game = [&] {
      if (spec.kind == "cyclic") return gen_cyclic_game(seed, spec.N, spec.m, spec.strength, id);
      if (spec.kind == "random_utility") return gen_random_utility_game(seed, spec.N, spec.m, spec.tau, id);
      return gen_uniform_game(seed, spec.N, spec.m, id);
    }();
    if (spec.likert) game = apply_likert_protocol(game, *spec.likert, derive_seed(seed, {0x6c696b65}));
    games.push_back(std::move(game));
  }
  return GameSet(std::move(games));
}

}  // namespace prosper::cli
