#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "bneck/geometry.hpp"

namespace bneck {

/// Reproducible randomness. The engine is std::mt19937_64, whose output
/// sequence is fixed by the standard; all conversions to doubles and ranges
/// are done here rather than through <random> distributions, whose results
/// differ between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Log-uniform in [lo, hi), lo > 0.
  double log_uniform(double lo, double hi);
  /// Uniform in [0, n).
  std::size_t below(std::size_t n);
  /// Uniform in [lo, hi].
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }

  Point point() { return {uniform(), uniform()}; }
  PointSet point_set(std::string id, std::size_t n);
  /// Shifts every coordinate by up to eps in either direction and clamps to
  /// the unit box.
  PointSet perturb(const PointSet& set, double eps, std::string id);

 private:
  std::mt19937_64 engine_;
};

}  // namespace bneck
