#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace prosper {

// Probability vector over a finite response set.
using Distribution = std::vector<double>;

inline constexpr double kSimplexTolerance = 1e-10;

// log(sum_i exp(x_i)) with max shift; -inf entries are skipped, an all -inf
// input returns -inf.
double log_sum_exp(std::span<const double> x);

// Normalized exp(logits) computed in the log domain.
Distribution softmax(std::span<const double> logits);

// Throws invalid-argument unless p has size n, nonnegative entries and unit
// mass within kSimplexTolerance.
void validate_simplex(std::span<const double> p, std::size_t n, const char* what);

Distribution uniform_distribution(std::size_t n);
Distribution point_mass(std::size_t n, std::size_t index);

double total_variation(std::span<const double> a, std::span<const double> b);

// KL(a || b); +inf when a puts mass where b has none.
double kl_divergence(std::span<const double> a, std::span<const double> b);

// Lowest index among minimizers.
std::size_t argmin_lowest(std::span<const double> x);

// Index drawn from a categorical distribution by inverse CDF on u in [0, 1).
std::size_t sample_categorical(std::span<const double> p, double u);

// Least-squares slope of y on x.
double fit_slope(std::span<const double> x, std::span<const double> y);

}  // namespace prosper
