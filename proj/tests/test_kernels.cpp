#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <string>
#include <vector>

#include "locc/genpairs.hpp"
#include "locc/kernels.hpp"
#include "locc/oracle.hpp"
#include "locc/spectrum.hpp"

using namespace locc;

namespace {

struct Batch {
  std::vector<double> thresholds;
  std::vector<double> table;  // rows x stride, candidates contiguous per row
  std::size_t rows = 0;
  std::size_t stride = 0;
  std::size_t count = 0;
};

// Random batch with deliberate exact ties between thresholds and table cells
// so the >= edge is exercised.
Batch random_batch(std::uint64_t seed) {
  SplitMix64 rng(seed);
  Batch b;
  b.rows = 1 + rng.next_below(12);
  b.count = 1 + rng.next_below(40);
  b.stride = b.count + rng.next_below(8);
  b.thresholds.resize(b.rows);
  for (double& t : b.thresholds) t = rng.next_double();
  b.table.resize(b.rows * b.stride);
  for (double& x : b.table) x = rng.next_double();
  for (std::size_t m = 0; m < b.rows; ++m)
    for (std::size_t c = 0; c < b.count; ++c) {
      const std::uint64_t r = rng.next_below(10);
      if (r == 0) b.table[m * b.stride + c] = b.thresholds[m];  // exact tie
      if (r == 1) b.table[m * b.stride + c] = b.thresholds[m] + 1.0;
    }
  return b;
}

}  // namespace

TEST_CASE("scalar kernel brute-force check") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Batch b = random_batch(seed);
    std::vector<std::uint8_t> out(b.count, 2);
    kernels::dominate_scalar(b.thresholds.data(), b.rows, b.table.data(), b.stride, b.count,
                             out.data());
    for (std::size_t c = 0; c < b.count; ++c) {
      bool expect = true;
      for (std::size_t m = 0; m < b.rows; ++m)
        expect = expect && b.table[m * b.stride + c] >= b.thresholds[m];
      CHECK(out[c] == (expect ? 1 : 0));
    }
  }
}

#if defined(__x86_64__)
TEST_CASE("avx2 kernel is bit-identical to the scalar reference") {
  if (!kernels::avx2_supported()) {
    MESSAGE("avx2 not available on this host; dispatch stays scalar");
    return;
  }
  for (std::uint64_t seed = 1; seed <= 500; ++seed) {
    const Batch b = random_batch(seed);
    std::vector<std::uint8_t> ref(b.count, 7);
    std::vector<std::uint8_t> simd(b.count, 9);
    kernels::dominate_scalar(b.thresholds.data(), b.rows, b.table.data(), b.stride, b.count,
                             ref.data());
    kernels::dominate_avx2(b.thresholds.data(), b.rows, b.table.data(), b.stride, b.count,
                           simd.data());
    CHECK(std::memcmp(ref.data(), simd.data(), b.count) == 0);
  }
}
#endif

TEST_CASE("dispatch honors the force flag") {
  kernels::force_scalar(true);
  CHECK(std::string(kernels::active_name()) == "scalar");
  kernels::force_scalar(false);
#if defined(__x86_64__)
  if (kernels::avx2_supported()) CHECK(std::string(kernels::active_name()) == "avx2");
#endif
}

TEST_CASE("grid search results do not depend on the selected kernel") {
  const SchmidtVector psi = make_schmidt({0.4, 0.3, 0.2, 0.1});
  const SchmidtVector phi = make_schmidt({0.5, 0.3, 0.2, 0.0});
  GridSpec grid;
  grid.resolution = 5e-3;
  const ScanResult fast = grid_search_2x2(psi, phi, grid);
  kernels::force_scalar(true);
  const ScanResult slow = grid_search_2x2(psi, phi, grid);
  kernels::force_scalar(false);
  CHECK(fast.feasible_count == slow.feasible_count);
  CHECK(fast.points_tested == slow.points_tested);
  REQUIRE(fast.best.has_value());
  REQUIRE(slow.best.has_value());
  CHECK(fast.best->recovered == slow.best->recovered);
  CHECK(fast.best->chi == slow.best->chi);
  CHECK(fast.best->omega == slow.best->omega);
}
