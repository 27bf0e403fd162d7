#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "locc/spectrum.hpp"

namespace locc {

/// SplitMix64, the fixed 64-bit generator behind every seeded routine in this
/// library. The algorithm is fully specified by the three mixing constants
/// below, so any implementation reproduces identical streams; reference
/// outputs for seed 42 live in fixtures/splitmix64_reference.json.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1), using the top 53 bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform in (0, 1); zero draws are skipped.
  double next_open() {
    double u = next_double();
    while (u <= 0.0) u = next_double();
    return u;
  }

  /// Uniform integer in [0, bound).
  std::uint64_t next_below(std::uint64_t bound) { return next() % bound; }

 private:
  std::uint64_t state_;
};

/// Request for a comparable pair whose equality set matches `delta` exactly.
struct PatternSpec {
  std::size_t n = 4;
  std::vector<int> delta;          // target prefix lengths, subset of {1..n-1}
  double strictness_margin = 0.01; // minimum prefix gap at non-delta indices
  std::uint64_t seed = 1;
};

/// Random interior point of the ordered probability simplex: strictly positive
/// entries, no ties (tie/zero draws are rejected and resampled). Deterministic
/// per seed.
SchmidtVector random_descending(std::size_t n, std::uint64_t seed);

/// psi = (1-t) phi + t uniform. For non-uniform phi every nontrivial prefix
/// inequality of psi ≺ phi is strict. Throws Errc::UniformInput.
SchmidtVector mix_toward_uniform(const SchmidtVector& phi, double t);

/// Builds (psi, phi) with majorize(psi, phi).holds and equality set exactly
/// spec.delta. Construction anchors psi's prefix sums to phi's on delta and
/// pulls them down by at least the margin elsewhere; draws that cannot be
/// repaired are rejected. Throws Errc::PatternInfeasible when the retry
/// budget runs out (e.g. delta = {1..n-1}, which forces psi == phi).
std::pair<SchmidtVector, SchmidtVector> pair_with_pattern(const PatternSpec& spec);

/// Elementary transfer from entry i to entry j (0-based, i < j, so v[i] >=
/// v[j]): the result is majorized by the input and its entropy does not
/// decrease. `amount` must not exceed half the gap, where the two entries
/// equalize. Throws Errc::InvalidTransfer.
SchmidtVector robin_hood(const SchmidtVector& v, std::size_t i, std::size_t j, double amount);

}  // namespace locc
