#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "prosper/game.hpp"

namespace prosper {

// Strict-preference digraph of one criterion: i -> j iff P[i][j] > threshold.
struct StrictTournament {
  std::size_t n = 0;
  std::vector<std::vector<std::size_t>> out;         // successors per node, ascending
  std::vector<std::pair<std::size_t, std::size_t>> ties;  // i < j with P[i][j] == threshold

  bool has_edge(std::size_t i, std::size_t j) const;
  std::size_t edge_count() const;
};

// `matrix` is N*N row-major.
StrictTournament strict_tournament(std::span<const double> matrix, std::size_t n, double threshold = 0.5);
StrictTournament strict_tournament(const PromptGame& game, std::size_t k, double threshold = 0.5);

// The node that strictly beats every other node, if any.
std::optional<std::size_t> condorcet_winner(const StrictTournament& t);

// Strongly connected components (Tarjan), each listed once.
std::vector<std::vector<std::size_t>> strongly_connected_components(const StrictTournament& t);

// True iff the strict digraph contains a directed cycle.
bool has_cycle(const StrictTournament& t);

enum class AuditMode { kPerCriterion, kAggregate };

std::string_view to_string(AuditMode mode);
AuditMode parse_audit_mode(std::string_view s);

struct AuditOptions {
  std::vector<std::size_t> subset_sizes{2, 4, 8, 16};
  AuditMode mode = AuditMode::kPerCriterion;
  std::uint64_t seed = 0;
  // Prefixes of one seeded permutation per prompt; false uses 0..N-1.
  bool shuffle = true;
  // Aggregate-mode weights per prompt; empty means uniform over criteria.
  std::vector<std::vector<double>> jc_weights;
};

struct AuditRow {
  std::size_t subset_size = 0;
  AuditMode mode = AuditMode::kPerCriterion;
  double fraction_no_condorcet = 0.0;
  double fraction_intransitive = 0.0;
  std::size_t n_prompts = 0;
  // Per-criterion-position averages over prompts that have that criterion
  // (per-criterion mode only).
  std::vector<double> criterion_no_condorcet;
  std::vector<double> criterion_intransitive;
};

struct AuditReport {
  std::vector<AuditRow> rows;
};

// Per-criterion mode scores each (prompt, criterion), averages over criteria
// and then over prompts with the game-set weights. Aggregate mode scalarizes
// each prompt first.
AuditReport audit(const GameSet& games, const AuditOptions& options);

// Responses used at each prompt: prefix of this order.
std::vector<std::size_t> audit_order(const PromptGame& game, std::size_t prompt_index,
                                     const AuditOptions& options);

}  // namespace prosper
