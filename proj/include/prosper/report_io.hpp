#pragma once

#include <string>

#include "prosper/audit.hpp"
#include "prosper/eval.hpp"
#include "prosper/game_io.hpp"
#include "prosper/solver.hpp"
#include "prosper/train.hpp"

namespace prosper {

// CSV writers use full round-trip precision so that identical runs produce
// identical bytes.

std::string audit_csv(const AuditReport& report);
Json to_json(const AuditReport& report);

std::string value_report_csv(const ValueReport& report);
Json to_json(const ValueReport& report);

// iteration, V, then one count column per criterion index when k* was
// recorded.
std::string solve_trace_csv(const ExactSolveResult& result, std::size_t n_criteria);
Json solve_trace_json(const ExactSolveResult& result);

// iteration, V, epsilon, concentrability, khat_mode.
std::string diagnostics_csv(const TrainDiagnostics& diag);
Json to_json(const TrainDiagnostics& diag);

std::string winrate_csv(const WinRateMatrix& w);
Json to_json(const WinRateMatrix& w);

// beta, T, seed, gap, best_iteration. Wall-clock runtimes are kept out of
// report files so reruns stay byte-identical.
std::string convergence_csv(const ConvergenceStudy& study);
std::string convergence_slopes_csv(const ConvergenceStudy& study);
Json to_json(const ConvergenceStudy& study);

Json to_json(const BlackwellSummary& summary, const GameSet& games);

}  // namespace prosper
