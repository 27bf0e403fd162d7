#include "locc/kernels.hpp"

#include <atomic>

#if defined(__x86_64__)
#include <immintrin.h>
#endif

namespace locc::kernels {

void dominate_scalar(const double* thresholds, std::size_t rows, const double* table,
                     std::size_t stride, std::size_t count, std::uint8_t* out) {
  for (std::size_t c = 0; c < count; ++c) {
    std::uint8_t ok = 1;
    for (std::size_t m = 0; m < rows; ++m) {
      if (!(table[m * stride + c] >= thresholds[m])) {
        ok = 0;
        break;
      }
    }
    out[c] = ok;
  }
}

#if defined(__x86_64__)

__attribute__((target("avx2"))) void dominate_avx2(const double* thresholds, std::size_t rows,
                                                   const double* table, std::size_t stride,
                                                   std::size_t count, std::uint8_t* out) {
  std::size_t c = 0;
  for (; c + 4 <= count; c += 4) {
    __m256d acc = _mm256_castsi256_pd(_mm256_set1_epi64x(-1));
    for (std::size_t m = 0; m < rows; ++m) {
      const __m256d rhs = _mm256_loadu_pd(table + m * stride + c);
      const __m256d thr = _mm256_set1_pd(thresholds[m]);
      acc = _mm256_and_pd(acc, _mm256_cmp_pd(rhs, thr, _CMP_GE_OQ));
      if (_mm256_movemask_pd(acc) == 0) break;
    }
    const int bits = _mm256_movemask_pd(acc);
    out[c + 0] = static_cast<std::uint8_t>(bits & 1);
    out[c + 1] = static_cast<std::uint8_t>((bits >> 1) & 1);
    out[c + 2] = static_cast<std::uint8_t>((bits >> 2) & 1);
    out[c + 3] = static_cast<std::uint8_t>((bits >> 3) & 1);
  }
  if (c < count) dominate_scalar(thresholds, rows, table + c, stride, count - c, out + c);
}

bool avx2_supported() { return __builtin_cpu_supports("avx2"); }

#endif  // __x86_64__

namespace {
std::atomic<bool> g_force_scalar{false};
}

DominateFn active() {
  if (g_force_scalar.load(std::memory_order_relaxed)) return dominate_scalar;
#if defined(__x86_64__)
  static const bool has_avx2 = avx2_supported();
  if (has_avx2) return dominate_avx2;
#endif
  return dominate_scalar;
}

const char* active_name() { return active() == dominate_scalar ? "scalar" : "avx2"; }

void force_scalar(bool on) { g_force_scalar.store(on, std::memory_order_relaxed); }

}  // namespace locc::kernels
