#include "prosper/report_io.hpp"

#include <cmath>

#include <fmt/format.h>

namespace prosper {

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

Json num_json(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

std::string audit_csv(const AuditReport& report) {
  std::string out = "N,mode,fraction_no_condorcet,fraction_intransitive,n_prompts\n";
  for (const auto& r : report.rows) {
    out += fmt::format("{},{},{},{},{}\n", r.subset_size, to_string(r.mode), num(r.fraction_no_condorcet),
                       num(r.fraction_intransitive), r.n_prompts);
  }
  return out;
}

Json to_json(const AuditReport& report) {
  Json rows = Json::array();
  for (const auto& r : report.rows) {
    Json row;
    row["N"] = r.subset_size;
    row["mode"] = std::string(to_string(r.mode));
    row["fraction_no_condorcet"] = r.fraction_no_condorcet;
    row["fraction_intransitive"] = r.fraction_intransitive;
    row["n_prompts"] = r.n_prompts;
    if (!r.criterion_no_condorcet.empty()) {
      row["criterion_no_condorcet"] = r.criterion_no_condorcet;
      row["criterion_intransitive"] = r.criterion_intransitive;
    }
    rows.push_back(std::move(row));
  }
  Json doc;
  doc["rows"] = std::move(rows);
  return doc;
}

std::string value_report_csv(const ValueReport& report) {
  std::string out = "prompt_id,k_star,value\n";
  for (const auto& p : report.prompts) out += fmt::format("{},{},{}\n", p.prompt_id, p.k_star, num(p.value));
  out += fmt::format("total,,{}\n", num(report.total));
  return out;
}

Json to_json(const ValueReport& report) {
  Json prompts = Json::array();
  for (const auto& p : report.prompts) {
    Json j;
    j["prompt_id"] = p.prompt_id;
    j["values"] = p.values;
    j["k_star"] = p.k_star;
    j["value"] = p.value;
    prompts.push_back(std::move(j));
  }
  Json doc;
  doc["prompts"] = std::move(prompts);
  doc["total"] = report.total;
  return doc;
}

std::string solve_trace_csv(const ExactSolveResult& result, std::size_t n_criteria) {
  const bool with_k = !result.k_star.empty();
  std::string out = "iteration,V";
  if (with_k) {
    for (std::size_t k = 0; k < n_criteria; ++k) out += fmt::format(",k{}", k);
  }
  out += "\n";
  for (std::size_t t = 0; t < result.values.size(); ++t) {
    out += fmt::format("{},{}", t, num(result.values[t]));
    if (with_k && t < result.k_star.size()) {
      std::vector<std::size_t> hist(n_criteria, 0);
      for (std::size_t k : result.k_star[t]) {
        if (k < n_criteria) ++hist[k];
      }
      for (std::size_t c : hist) out += fmt::format(",{}", c);
    }
    out += "\n";
  }
  return out;
}

Json solve_trace_json(const ExactSolveResult& result) {
  Json doc;
  doc["eta"] = result.eta;
  doc["values"] = result.values;
  if (!result.k_star.empty()) doc["k_star"] = result.k_star;
  doc["best_iteration"] = result.best_iteration;
  doc["best_value"] = result.best_value;
  return doc;
}

std::string diagnostics_csv(const TrainDiagnostics& diag) {
  std::string out = "iteration,V,epsilon,concentrability,khat_mode\n";
  for (const auto& r : diag.rows) {
    out += fmt::format("{},{},{},{},{}\n", r.iteration, num(r.value), num(r.epsilon), num(r.concentrability),
                       r.khat_mode);
  }
  return out;
}

Json to_json(const TrainDiagnostics& diag) {
  Json rows = Json::array();
  for (const auto& r : diag.rows) {
    Json j;
    j["iteration"] = r.iteration;
    j["V"] = num_json(r.value);
    j["epsilon"] = num_json(r.epsilon);
    j["concentrability"] = num_json(r.concentrability);
    j["khat_histogram"] = r.khat_histogram;
    j["khat_mode"] = r.khat_mode;
    j["pairs_kept"] = r.pairs_kept;
    rows.push_back(std::move(j));
  }
  Json doc;
  doc["rows"] = std::move(rows);
  doc["values"] = diag.values;
  return doc;
}

std::string winrate_csv(const WinRateMatrix& w) {
  std::string out = "row,col,winrate\n";
  for (std::size_t i = 0; i < w.W.size(); ++i) {
    for (std::size_t j = 0; j < w.W[i].size(); ++j) {
      out += fmt::format("{},{},{}\n", w.labels[i], w.labels[j], num(w.W[i][j]));
    }
  }
  return out;
}

Json to_json(const WinRateMatrix& w) {
  Json doc;
  doc["labels"] = w.labels;
  doc["W"] = w.W;
  return doc;
}

std::string convergence_csv(const ConvergenceStudy& study) {
  std::string out = "beta,T,seed,gap,best_iteration\n";
  for (const auto& c : study.cells) {
    out += fmt::format("{},{},{},{},{}\n", num(c.beta), c.T, c.seed, num(c.gap), c.best_iteration);
  }
  return out;
}

std::string convergence_slopes_csv(const ConvergenceStudy& study) {
  std::string out = "beta,slope_of_mean_gap,mean_seed_slope\n";
  for (const auto& s : study.slopes) {
    out += fmt::format("{},{},{}\n", num(s.beta), num(s.slope_of_mean_gap), num(s.mean_seed_slope));
  }
  return out;
}

Json to_json(const ConvergenceStudy& study) {
  Json cells = Json::array();
  for (const auto& c : study.cells) {
    Json j;
    j["beta"] = c.beta;
    j["T"] = c.T;
    j["seed"] = c.seed;
    j["gap"] = c.gap;
    j["initial_gap"] = c.initial_gap;
    j["best_value"] = c.best_value;
    j["oracle_value"] = c.oracle_value;
    j["best_iteration"] = c.best_iteration;
    cells.push_back(std::move(j));
  }
  Json slopes = Json::array();
  for (const auto& s : study.slopes) {
    Json j;
    j["beta"] = s.beta;
    j["slope_of_mean_gap"] = num_json(s.slope_of_mean_gap);
    j["mean_seed_slope"] = num_json(s.mean_seed_slope);
    Json per_seed = Json::array();
    for (double v : s.seed_slopes) per_seed.push_back(num_json(v));
    j["seed_slopes"] = std::move(per_seed);
    slopes.push_back(std::move(j));
  }
  Json doc;
  doc["cells"] = std::move(cells);
  doc["slopes"] = std::move(slopes);
  return doc;
}

Json to_json(const BlackwellSummary& summary, const GameSet& games) {
  Json per_prompt = Json::object();
  for (std::size_t x = 0; x < games.size(); ++x) per_prompt[games[x].prompt_id()] = summary.per_prompt[x];
  Json doc;
  doc["per_prompt"] = std::move(per_prompt);
  doc["mean"] = summary.mean;
  return doc;
}

}  // namespace prosper
