#include <algorithm>
#include <cmath>
#include <vector>

#include "prosper/error.hpp"
#include "prosper/solver.hpp"

namespace prosper {

namespace {

constexpr double kPivotEps = 1e-12;

// Dense tableau simplex with Bland's rule for
//   maximize 1^T v  s.t.  B v <= 1, v >= 0,
// with B > 0 entrywise (so the slack basis is feasible and the optimum is
// finite). Returns the optimum and the dual solution u (one entry per row of
// B), read from the objective-row coefficients of the slack columns.
struct LpSolution {
  double optimum = 0.0;
  std::vector<double> dual;
};

LpSolution solve_packing_lp(const std::vector<std::vector<double>>& B) {
  const std::size_t rows = B.size();
  const std::size_t cols = B.front().size();
  const std::size_t width = cols + rows + 1;
  std::vector<std::vector<double>> tab(rows + 1, std::vector<double>(width, 0.0));
  std::vector<std::size_t> basis(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) tab[r][c] = B[r][c];
    tab[r][cols + r] = 1.0;
    tab[r][width - 1] = 1.0;
    basis[r] = cols + r;
  }
  auto& obj = tab[rows];
  for (std::size_t c = 0; c < cols; ++c) obj[c] = -1.0;

  const std::size_t max_pivots = 50 * (rows + cols) + 1000;
  for (std::size_t pivots = 0;; ++pivots) {
    if (pivots > max_pivots) throw Error(ErrorCategory::kInvalidArgument, "von Neumann LP failed to terminate");
    std::size_t enter = width;
    for (std::size_t c = 0; c + 1 < width; ++c) {
      if (obj[c] < -kPivotEps) {
        enter = c;
        break;
      }
    }
    if (enter == width) break;
    std::size_t leave = rows;
    double best_ratio = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
      if (tab[r][enter] <= kPivotEps) continue;
      const double ratio = tab[r][width - 1] / tab[r][enter];
      if (leave == rows || ratio < best_ratio - kPivotEps ||
          (std::abs(ratio - best_ratio) <= kPivotEps && basis[r] < basis[leave])) {
        leave = r;
        best_ratio = ratio;
      }
    }
    if (leave == rows) throw Error(ErrorCategory::kInvalidArgument, "von Neumann LP unbounded");
    const double pivot = tab[leave][enter];
    for (double& v : tab[leave]) v /= pivot;
    for (std::size_t r = 0; r <= rows; ++r) {
      if (r == leave) continue;
      const double factor = tab[r][enter];
      if (factor == 0.0) continue;
      for (std::size_t c = 0; c < width; ++c) tab[r][c] -= factor * tab[leave][c];
    }
    basis[leave] = enter;
  }
  LpSolution sol;
  sol.optimum = obj[width - 1];
  sol.dual.resize(rows);
  for (std::size_t r = 0; r < rows; ++r) sol.dual[r] = std::max(0.0, obj[cols + r]);
  return sol;
}

}  // namespace

VonNeumannResult von_neumann_value(const PromptGame& game, std::span<const std::size_t> support) {
  require(game.n_criteria() == 1, "von_neumann_value: single-criterion game required");
  require(!support.empty(), "von_neumann_value: empty comparator support");
  const std::size_t n = game.n_responses();
  // Shift payoffs by +1 so that every entry is positive.
  std::vector<std::vector<double>> B(n, std::vector<double>(support.size()));
  for (std::size_t y = 0; y < n; ++y) {
    for (std::size_t c = 0; c < support.size(); ++c) {
      require(support[c] < n, "von_neumann_value: support index out of range");
      B[y][c] = game.pref(0, y, support[c]) + 1.0;
    }
  }
  const auto sol = solve_packing_lp(B);
  VonNeumannResult out;
  double mass = 0.0;
  for (double u : sol.dual) mass += u;
  out.policy.resize(n);
  for (std::size_t y = 0; y < n; ++y) out.policy[y] = sol.dual[y] / mass;
  // Report the value achieved by the recovered strategy so that value and
  // policy agree exactly.
  double worst = 2.0;
  for (std::size_t c = 0; c < support.size(); ++c) {
    double acc = 0.0;
    for (std::size_t y = 0; y < n; ++y) acc += out.policy[y] * game.pref(0, y, support[c]);
    worst = std::min(worst, acc);
  }
  out.value = worst;
  return out;
}

VonNeumannResult von_neumann_value(const PromptGame& game, std::span<const double> pi_ref) {
  validate_simplex(pi_ref, game.n_responses(), "reference policy");
  std::vector<std::size_t> support;
  for (std::size_t y = 0; y < pi_ref.size(); ++y) {
    if (pi_ref[y] > 0.0) support.push_back(y);
  }
  return von_neumann_value(game, support);
}

}  // namespace prosper
