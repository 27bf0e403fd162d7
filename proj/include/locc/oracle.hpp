#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "locc/recovery.hpp"
#include "locc/spectrum.hpp"

namespace locc {

/// Budget and resolution of a brute-force scan. Identical specs (including
/// the seed) always produce identical results.
struct GridSpec {
  double resolution = 1e-3;              // step of the p/q grids
  std::uint64_t max_points = 10'000'000; // hard cap on evaluations
  std::uint64_t samples = 100'000;       // draw count for random scans
  std::uint64_t seed = 1;
};

struct FeasiblePoint {
  SchmidtVector chi;
  SchmidtVector omega;
  double recovered = 0.0;  // nats
};

struct PerKRow {
  int k = 0;
  double best_recovered = 0.0;
  std::uint64_t feasible_count = 0;
  std::uint64_t points_tested = 0;
};

/// Scan outcome. Grid evidence is corroboration, never proof: an impossibility
/// result reads "0 feasible on N points", nothing stronger.
struct ScanResult {
  std::optional<FeasiblePoint> best;  // present iff feasible_count > 0
  std::uint64_t feasible_count = 0;
  std::uint64_t points_tested = 0;
  std::vector<PerKRow> per_k;  // filled by max_recovery_scan
  bool not_convertible = false;
};

/// Exhaustive scan over chi = (p, 1-p), omega = (q, 1-q) with
/// 1/2 < q < p < 1 on the grid. Keeps points where the product majorization
/// holds and the entropy gain is positive; best by recovered entropy, ties to
/// the lexicographically smaller (p, q). Throws Errc::BudgetExceeded when the
/// grid is larger than max_points.
ScanResult grid_search_2x2(const SchmidtVector& psi, const SchmidtVector& phi,
                           const GridSpec& grid, Tolerance tol = {});

/// Seeded sampling of k x k pairs: chi from the interior of the ordered
/// simplex, omega from chi by random mass transfers toward smaller entries
/// (so the entropy never drops by construction). Every kept point re-verifies
/// through verify_recovery.
ScanResult random_search_kxk(const SchmidtVector& psi, const SchmidtVector& phi, std::size_t k,
                             const GridSpec& grid, Tolerance tol = {});

/// Best recovered entropy per auxiliary dimension k in 2..k_max. The per-k
/// column is made monotone afterwards: a k-dimensional recovery embeds into
/// k+1 by zero-padding both states. Exploratory only; no optimality claim.
ScanResult max_recovery_scan(const SchmidtVector& psi, const SchmidtVector& phi,
                             std::size_t k_max, const GridSpec& grid, Tolerance tol = {});

}  // namespace locc
