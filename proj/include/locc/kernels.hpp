#pragma once

#include <cstddef>
#include <cstdint>

namespace locc::kernels {

/// Batch prefix-sum domination check, the inner loop of the grid oracles.
///
/// out[c] = 1 iff table[m * stride + c] >= thresholds[m] for every m < rows.
/// `thresholds` is the left-hand prefix vector with the comparison tolerance
/// already folded in; `table` holds the right-hand prefix sums transposed
/// (one row per prefix position, candidate index contiguous within a row).
///
/// All variants evaluate the same exact predicate, so their outputs are
/// bit-identical; the dispatcher only changes throughput.
using DominateFn = void (*)(const double* thresholds, std::size_t rows,
                            const double* table, std::size_t stride,
                            std::size_t count, std::uint8_t* out);

/// Portable reference implementation.
void dominate_scalar(const double* thresholds, std::size_t rows, const double* table,
                     std::size_t stride, std::size_t count, std::uint8_t* out);

#if defined(__x86_64__)
/// AVX2 variant, 4 candidates per step. Only call when avx2_supported().
void dominate_avx2(const double* thresholds, std::size_t rows, const double* table,
                   std::size_t stride, std::size_t count, std::uint8_t* out);
bool avx2_supported();
#endif

/// Implementation picked at runtime from the host CPU (or the force flag).
DominateFn active();
const char* active_name();

/// Test hook: pin dispatch to the scalar kernel.
void force_scalar(bool on);

}  // namespace locc::kernels
