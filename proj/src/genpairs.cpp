#include "locc/genpairs.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "locc/errors.hpp"
#include "locc/majorization.hpp"

namespace locc {
namespace {

constexpr int kRetryBudget = 400;

bool distinct_and_positive(const std::vector<double>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] <= 1e-9) return false;
    if (i + 1 < v.size() && v[i] - v[i + 1] <= 1e-9) return false;
  }
  return true;
}

// Strictly decreasing positive vector with healthy relative gaps, used as the
// target spectrum of a pattern draw. Gap ratios stay in [0.35, 0.92] so prefix
// curvature does not collapse.
std::vector<double> ratio_decay_sample(std::size_t n, SplitMix64& rng) {
  std::vector<double> v(n);
  v[0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) v[i] = v[i - 1] * (0.35 + 0.57 * rng.next_double());
  double sum = 0.0;
  for (double x : v) sum += x;
  for (double& x : v) x /= sum;
  return v;
}

std::pair<SchmidtVector, SchmidtVector> strict_pair(std::size_t n, double margin, SplitMix64& rng) {
  for (int attempt = 0; attempt < kRetryBudget; ++attempt) {
    const SchmidtVector phi = random_descending(n, rng.next());
    const std::vector<double> s = prefix_sums(phi);
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t m = 1; m < n; ++m)
      min_gap = std::min(min_gap, s[m - 1] - static_cast<double>(m) / static_cast<double>(n));
    const double t_min = margin / min_gap;
    if (!(t_min < 0.85)) continue;
    const double t = t_min + (0.9 - t_min) * rng.next_double();
    const SchmidtVector psi = mix_toward_uniform(phi, t);
    if (majorize(psi, phi).strict_all) return {psi, phi};
  }
  throw_error(Errc::PatternInfeasible, "could not realize a strict pattern");
}

}  // namespace

SchmidtVector random_descending(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("dimension must be positive");
  if (n == 1) return from_sorted_unchecked({1.0});
  SplitMix64 rng(seed);
  for (int attempt = 0; attempt < 256; ++attempt) {
    std::vector<double> v(n);
    double sum = 0.0;
    for (double& x : v) {
      x = -std::log(rng.next_open());
      sum += x;
    }
    for (double& x : v) x /= sum;
    std::sort(v.begin(), v.end(), std::greater<>());
    if (distinct_and_positive(v)) return make_schmidt(std::move(v));
  }
  throw std::logic_error("random_descending: rejection loop exhausted");
}

SchmidtVector mix_toward_uniform(const SchmidtVector& phi, double t) {
  if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("mixing weight must lie in (0,1)");
  const std::size_t n = phi.dim();
  const double u = 1.0 / static_cast<double>(n);
  bool uniform = true;
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(phi[i] - u) > phi.tol().eq_tol) {
      uniform = false;
      break;
    }
  if (uniform) throw_error(Errc::UniformInput, "uniform spectrum has nothing to mix toward");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = (1.0 - t) * phi[i] + t * u;
  return from_sorted_unchecked(std::move(out), phi.tol());
}

SchmidtVector robin_hood(const SchmidtVector& v, std::size_t i, std::size_t j, double amount) {
  if (i >= j || j >= v.dim())
    throw_error(Errc::InvalidTransfer, "transfer needs entry indices i < j within range");
  const double gap = v[i] - v[j];
  if (!(amount >= 0.0)) throw_error(Errc::InvalidTransfer, "amount must be nonnegative");
  if (amount > gap / 2.0 + v.tol().eq_tol)
    throw_error(Errc::InvalidTransfer, "amount exceeds half the donor/receiver gap");
  std::vector<double> w = v.values();
  w[i] -= amount;
  w[j] += amount;
  std::stable_sort(w.begin(), w.end(), std::greater<>());
  return from_sorted_unchecked(std::move(w), v.tol());
}

std::pair<SchmidtVector, SchmidtVector> pair_with_pattern(const PatternSpec& spec) {
  const std::size_t n = spec.n;
  if (n < 2) throw std::invalid_argument("pattern generation needs n >= 2");
  if (!(spec.strictness_margin > 0.0) ||
      spec.strictness_margin * static_cast<double>(n) >= 1.0)
    throw std::invalid_argument("margin must satisfy 0 < margin and n*margin < 1");

  std::vector<int> delta = spec.delta;
  std::sort(delta.begin(), delta.end());
  delta.erase(std::unique(delta.begin(), delta.end()), delta.end());
  if (!delta.empty() && (delta.front() < 1 || delta.back() > static_cast<int>(n) - 1))
    throw std::invalid_argument("delta members must lie in {1..n-1}");

  SplitMix64 rng(spec.seed);
  if (delta.empty()) return strict_pair(n, spec.strictness_margin, rng);
  if (delta.size() == n - 1)
    throw_error(Errc::PatternInfeasible, "delta = {1..n-1} forces psi == phi");

  // Anchor positions (prefix lengths) delimiting the segments of psi.
  std::vector<int> anchors;
  anchors.push_back(0);
  anchors.insert(anchors.end(), delta.begin(), delta.end());
  anchors.push_back(static_cast<int>(n));

  const double margin = spec.strictness_margin;
  for (int attempt = 0; attempt < kRetryBudget; ++attempt) {
    const std::vector<double> phi_vals = ratio_decay_sample(n, rng);
    const SchmidtVector phi = make_schmidt(phi_vals);
    const std::vector<double> s = prefix_sums(phi);
    const auto prefix_at = [&](int m) { return m == 0 ? 0.0 : s[m - 1]; };

    const std::size_t segs = anchors.size() - 1;
    std::vector<double> mean(segs);
    std::vector<double> tau_interior(segs, std::numeric_limits<double>::infinity());
    bool ok = true;
    for (std::size_t sidx = 0; sidx < segs && ok; ++sidx) {
      const int a = anchors[sidx];
      const int b = anchors[sidx + 1];
      const int len = b - a;
      mean[sidx] = (prefix_at(b) - prefix_at(a)) / len;
      // Interior prefixes must clear phi's by at least the margin. A flat
      // segment sits exactly on the chord, which is the lowest prefix any
      // non-increasing segment can reach, so margin-tight draws stay usable.
      for (int m = a + 1; m < b; ++m) {
        const double gap = prefix_at(m) - (prefix_at(a) + mean[sidx] * (m - a));
        if (gap < margin) {
          ok = false;
          break;
        }
        const double ramp = 0.5 * static_cast<double>(m - a) * static_cast<double>(b - m);
        tau_interior[sidx] = std::min(tau_interior[sidx], (gap - margin) / ramp);
      }
    }
    if (!ok) continue;

    // De-tie each flat segment with a zero-sum linear ramp small enough to
    // keep the margins and the cross-segment ordering.
    std::vector<double> psi_raw;
    psi_raw.reserve(n);
    for (std::size_t sidx = 0; sidx < segs; ++sidx) {
      const int len = anchors[sidx + 1] - anchors[sidx];
      double tau = 0.0;
      if (len >= 2) {
        const double left_gap =
            sidx == 0 ? std::numeric_limits<double>::infinity() : mean[sidx - 1] - mean[sidx];
        const double right_gap =
            sidx + 1 == segs ? 1.5 * mean[sidx] : mean[sidx] - mean[sidx + 1];
        tau = std::min({tau_interior[sidx],
                        2.0 * std::min(left_gap, right_gap) / (3.0 * (len - 1)),
                        1.5 * mean[sidx] / (len - 1)});
        tau *= 0.25 + 0.5 * rng.next_double();
        tau = std::max(tau, 0.0);
      }
      for (int t = 1; t <= len; ++t)
        psi_raw.push_back(mean[sidx] + tau * 0.5 * (len + 1 - 2 * t));
    }

    SchmidtVector psi = make_schmidt(std::move(psi_raw));
    const MajorizationReport rep = majorize(psi, phi);
    if (rep.holds && rep.equality_indices == delta) return {std::move(psi), phi};
  }
  throw_error(Errc::PatternInfeasible, "retry budget exhausted for the requested pattern");
}

}  // namespace locc
