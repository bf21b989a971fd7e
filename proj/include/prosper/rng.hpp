#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>

#include "prosper/numeric.hpp"

namespace prosper {

// Mixes a base seed with stream coordinates (iteration, prompt index, role,
// ...) so that every stream is a pure function of its coordinates.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> coords) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(seed);
  for (std::uint64_t c : coords) h = mix(h ^ mix(c));
  return h;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double normal(double mean, double sd) { return std::normal_distribution<double>(mean, sd)(engine_); }
  std::size_t categorical(std::span<const double> p) { return sample_categorical(p, uniform()); }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace prosper
