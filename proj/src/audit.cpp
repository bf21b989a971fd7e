#include "prosper/audit.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "prosper/error.hpp"
#include "prosper/judge.hpp"
#include "prosper/rng.hpp"

namespace prosper {

bool StrictTournament::has_edge(std::size_t i, std::size_t j) const {
  return std::binary_search(out[i].begin(), out[i].end(), j);
}

std::size_t StrictTournament::edge_count() const {
  std::size_t c = 0;
  for (const auto& o : out) c += o.size();
  return c;
}

StrictTournament strict_tournament(std::span<const double> matrix, std::size_t n, double threshold) {
  require(matrix.size() == n * n, "strict_tournament: matrix is not N x N");
  StrictTournament t;
  t.n = n;
  t.out.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double v = matrix[i * n + j];
      if (v > threshold) {
        t.out[i].push_back(j);
      } else if (v == threshold && i < j) {
        t.ties.emplace_back(i, j);
      }
    }
  }
  return t;
}

StrictTournament strict_tournament(const PromptGame& game, std::size_t k, double threshold) {
  return strict_tournament(game.matrix(k), game.n_responses(), threshold);
}

std::optional<std::size_t> condorcet_winner(const StrictTournament& t) {
  for (std::size_t i = 0; i < t.n; ++i) {
    if (t.out[i].size() + 1 == t.n) return i;
  }
  return std::nullopt;
}

namespace {

struct Tarjan {
  const StrictTournament& t;
  std::vector<int> index, low;
  std::vector<bool> on_stack;
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> components;
  int counter = 0;

  explicit Tarjan(const StrictTournament& tour)
      : t(tour), index(tour.n, -1), low(tour.n, -1), on_stack(tour.n, false) {}

  void visit(std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t w : t.out[v]) {
      if (index[w] == -1) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::size_t> comp;
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp.push_back(w);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      components.push_back(std::move(comp));
    }
  }
};

}  // namespace

std::vector<std::vector<std::size_t>> strongly_connected_components(const StrictTournament& t) {
  Tarjan tarjan(t);
  for (std::size_t v = 0; v < t.n; ++v) {
    if (tarjan.index[v] == -1) tarjan.visit(v);
  }
  return std::move(tarjan.components);
}

bool has_cycle(const StrictTournament& t) {
  // No self-loops and no 2-cycles, so a cycle exists iff some component has
  // two or more nodes.
  for (const auto& comp : strongly_connected_components(t)) {
    if (comp.size() >= 2) return true;
  }
  return false;
}

std::string_view to_string(AuditMode mode) {
  return mode == AuditMode::kPerCriterion ? "per_criterion" : "aggregate";
}

AuditMode parse_audit_mode(std::string_view s) {
  if (s == "per_criterion" || s == "PER_CRITERION" || s == "sc") return AuditMode::kPerCriterion;
  if (s == "aggregate" || s == "AGGREGATE" || s == "jc") return AuditMode::kAggregate;
  throw Error(ErrorCategory::kInvalidArgument, "unknown audit mode '" + std::string(s) + "'");
}

std::vector<std::size_t> audit_order(const PromptGame& game, std::size_t prompt_index,
                                     const AuditOptions& options) {
  std::vector<std::size_t> order(game.n_responses());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (!options.shuffle) return order;
  Rng rng(derive_seed(options.seed, {0x61756474ULL, prompt_index}));
  for (std::size_t i = order.size(); i > 1; --i) {
    const auto j = std::min(static_cast<std::size_t>(rng.uniform() * static_cast<double>(i)), i - 1);
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

AuditReport audit(const GameSet& games, const AuditOptions& options) {
  require(!options.subset_sizes.empty(), "audit: no subset sizes");
  require(options.jc_weights.empty() || options.jc_weights.size() == games.size(),
          "audit: aggregate weights must be given per prompt");
  for (std::size_t n : options.subset_sizes) {
    require(n >= 1, "audit: subset size must be positive");
    for (const auto& g : games.games()) {
      require(n <= g.n_responses(), "audit: subset size " + std::to_string(n) + " exceeds the " +
                                        std::to_string(g.n_responses()) + " responses of prompt '" +
                                        g.prompt_id() + "'");
    }
  }
  std::vector<std::vector<std::size_t>> orders;
  for (std::size_t x = 0; x < games.size(); ++x) orders.push_back(audit_order(games[x], x, options));

  const std::size_t max_m = games.max_criteria();
  AuditReport report;
  for (std::size_t n : options.subset_sizes) {
    AuditRow row;
    row.subset_size = n;
    row.mode = options.mode;
    row.n_prompts = games.size();
    std::vector<double> crit_nc(max_m, 0.0), crit_ic(max_m, 0.0), crit_w(max_m, 0.0);
    for (std::size_t x = 0; x < games.size(); ++x) {
      const std::span<const std::size_t> subset(orders[x].data(), n);
      PromptGame sub = games[x].restricted(subset);
      if (options.mode == AuditMode::kAggregate) {
        sub = options.jc_weights.empty() ? scalarize_to_jc(sub) : scalarize_to_jc(sub, options.jc_weights[x]);
      }
      double nc = 0.0, ic = 0.0;
      for (std::size_t k = 0; k < sub.n_criteria(); ++k) {
        const auto t = strict_tournament(sub, k);
        const double no_winner = condorcet_winner(t) ? 0.0 : 1.0;
        const double cyclic = has_cycle(t) ? 1.0 : 0.0;
        nc += no_winner;
        ic += cyclic;
        if (options.mode == AuditMode::kPerCriterion) {
          crit_nc[k] += games.weight(x) * no_winner;
          crit_ic[k] += games.weight(x) * cyclic;
          crit_w[k] += games.weight(x);
        }
      }
      const auto m = static_cast<double>(sub.n_criteria());
      row.fraction_no_condorcet += games.weight(x) * nc / m;
      row.fraction_intransitive += games.weight(x) * ic / m;
    }
    if (options.mode == AuditMode::kPerCriterion) {
      for (std::size_t k = 0; k < max_m; ++k) {
        row.criterion_no_condorcet.push_back(crit_w[k] > 0.0 ? crit_nc[k] / crit_w[k] : 0.0);
        row.criterion_intransitive.push_back(crit_w[k] > 0.0 ? crit_ic[k] / crit_w[k] : 0.0);
      }
    }
    row.fraction_no_condorcet = std::clamp(row.fraction_no_condorcet, 0.0, 1.0);
    row.fraction_intransitive = std::clamp(row.fraction_intransitive, 0.0, 1.0);
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace prosper
