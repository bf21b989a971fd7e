#include "prosper/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "prosper/error.hpp"

namespace prosper {

double log_sum_exp(std::span<const double> x) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double v : x) hi = std::max(hi, v);
  if (!std::isfinite(hi)) return hi;
  double sum = 0.0;
  for (double v : x) sum += std::exp(v - hi);
  return hi + std::log(sum);
}

Distribution softmax(std::span<const double> logits) {
  const double lse = log_sum_exp(logits);
  Distribution out(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) out[i] = std::exp(logits[i] - lse);
  return out;
}

void validate_simplex(std::span<const double> p, std::size_t n, const char* what) {
  if (p.size() != n) {
    throw Error(ErrorCategory::kInvalidArgument,
                std::string(what) + ": expected " + std::to_string(n) + " entries, got " +
                    std::to_string(p.size()));
  }
  double mass = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCategory::kInvalidArgument, std::string(what) + ": negative or non-finite probability");
    }
    mass += v;
  }
  if (std::abs(mass - 1.0) > kSimplexTolerance) {
    throw Error(ErrorCategory::kInvalidArgument,
                std::string(what) + ": probabilities sum to " + std::to_string(mass));
  }
}

Distribution uniform_distribution(std::size_t n) {
  return Distribution(n, 1.0 / static_cast<double>(n));
}

Distribution point_mass(std::size_t n, std::size_t index) {
  Distribution out(n, 0.0);
  out.at(index) = 1.0;
  return out;
}

double total_variation(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
  return 0.5 * acc;
}

double kl_divergence(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] <= 0.0) continue;
    if (b[i] <= 0.0) return std::numeric_limits<double>::infinity();
    acc += a[i] * (std::log(a[i]) - std::log(b[i]));
  }
  return acc;
}

std::size_t argmin_lowest(std::span<const double> x) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (x[i] < x[best]) best = i;
  }
  return best;
}

std::size_t sample_categorical(std::span<const double> p, double u) {
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    last_positive = i;
    cumulative += p[i];
    if (u < cumulative) return i;
  }
  // u landed in the rounding slack above the accumulated mass.
  return last_positive;
}

double fit_slope(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace prosper
