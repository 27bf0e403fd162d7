#include "locc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "locc/errors.hpp"
#include "locc/genpairs.hpp"
#include "locc/kernels.hpp"
#include "locc/majorization.hpp"

namespace locc {
namespace {

/// Grid values 0.5 + i*res strictly inside (1/2, 1).
std::vector<double> grid_values(double res) {
  std::vector<double> v;
  for (std::size_t i = 1;; ++i) {
    const double x = 0.5 + static_cast<double>(i) * res;
    if (!(x < 1.0 - res / 2.0)) break;
    v.push_back(x);
  }
  return v;
}

/// Prefix sums of the sorted product spectrum of `base` with (p, 1-p).
/// Both scaled copies of a sorted spectrum are sorted, so a two-way merge
/// reproduces the sorted order (ties do not affect prefix sums).
void scaled_merge_prefixes(const std::vector<double>& base, double p, double* out) {
  const double q = 1.0 - p;
  const std::size_t n = base.size();
  std::size_t i = 0;
  std::size_t j = 0;
  double run = 0.0;
  for (std::size_t t = 0; t < 2 * n; ++t) {
    double next;
    if (j >= n || (i < n && p * base[i] >= q * base[j]))
      next = p * base[i++];
    else
      next = q * base[j++];
    run += next;
    out[t] = run;
  }
}

double binary_entropy(double p) {
  double h = 0.0;
  h -= p * std::log(p);
  h -= (1.0 - p) * std::log(1.0 - p);
  return h;
}

/// Reusable buffers for the sampled k x k feasibility test. Mirrors
/// verify_recovery exactly: same products, same sorted prefix comparison,
/// same entropy-gain threshold.
class PairTester {
 public:
  PairTester(const SchmidtVector& psi, const SchmidtVector& phi, Tolerance tol)
      : psi_(psi.values()), phi_(phi.values()), tol_(tol.eq_tol) {}

  std::optional<double> gain_if_feasible(const std::vector<double>& chi,
                                         const std::vector<double>& omega) {
    fill_products(psi_, chi, lhs_);
    fill_products(phi_, omega, rhs_);
    double lrun = 0.0;
    double rrun = 0.0;
    for (std::size_t t = 0; t + 1 < lhs_.size(); ++t) {
      lrun += lhs_[t];
      rrun += rhs_[t];
      if (lrun > rrun + tol_) return std::nullopt;
    }
    const double gain = entropy_of(omega) - entropy_of(chi);
    if (!(gain > tol_)) return std::nullopt;
    return gain;
  }

 private:
  static void fill_products(const std::vector<double>& a, const std::vector<double>& b,
                            std::vector<double>& out) {
    out.clear();
    for (double x : a)
      for (double y : b) out.push_back(x * y);
    std::sort(out.begin(), out.end(), std::greater<>());
  }

  static double entropy_of(const std::vector<double>& v) {
    double h = 0.0;
    for (double x : v)
      if (x > 0.0) h -= x * std::log(x);
    return h > 0.0 ? h : 0.0;
  }

  const std::vector<double>& psi_;
  const std::vector<double>& phi_;
  double tol_;
  std::vector<double> lhs_;
  std::vector<double> rhs_;
};

std::vector<double> sorted_simplex_sample(std::size_t k, SplitMix64& rng) {
  std::vector<double> v(k);
  double sum = 0.0;
  for (double& x : v) {
    x = -std::log(rng.next_open());
    sum += x;
  }
  for (double& x : v) x /= sum;
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

}  // namespace

ScanResult grid_search_2x2(const SchmidtVector& psi, const SchmidtVector& phi,
                           const GridSpec& grid, Tolerance tol) {
  if (!(grid.resolution > 0.0)) throw std::invalid_argument("grid resolution must be positive");
  ScanResult result;
  if (!majorize(psi, phi, tol).holds) {
    result.not_convertible = true;
    return result;
  }
  const std::vector<double> vals = grid_values(grid.resolution);
  const std::size_t m = vals.size();
  const std::uint64_t pairs = static_cast<std::uint64_t>(m) * (m - 1) / 2;
  if (pairs > grid.max_points)
    throw_error(Errc::BudgetExceeded, "p/q grid exceeds the evaluation budget");

  const std::size_t rows = 2 * psi.dim();  // prefix positions per side
  // Left prefixes per p; right prefixes transposed (row per prefix position).
  std::vector<double> left(m * rows);
  std::vector<double> right_t(rows * m);
  std::vector<double> scratch(rows);
  std::vector<double> gains(m);
  for (std::size_t j = 0; j < m; ++j) {
    scaled_merge_prefixes(psi.values(), vals[j], left.data() + j * rows);
    scaled_merge_prefixes(phi.values(), vals[j], scratch.data());
    for (std::size_t r = 0; r < rows; ++r) right_t[r * m + j] = scratch[r];
    gains[j] = binary_entropy(vals[j]);
  }

  const kernels::DominateFn dominate = kernels::active();
  std::vector<double> thresholds(rows);
  std::vector<std::uint8_t> mask(m);
  double best_rec = 0.0;
  std::size_t best_p = 0;
  std::size_t best_q = 0;
  bool have_best = false;
  for (std::size_t ip = 1; ip < m; ++ip) {
    const double* lp = left.data() + ip * rows;
    // Compare prefix positions 1..2n-1; the full sum is one on both sides.
    for (std::size_t r = 0; r + 1 < rows; ++r) thresholds[r] = lp[r] - tol.eq_tol;
    dominate(thresholds.data(), rows - 1, right_t.data(), m, ip, mask.data());
    result.points_tested += ip;
    for (std::size_t jq = 0; jq < ip; ++jq) {
      if (!mask[jq]) continue;
      ++result.feasible_count;
      const double rec = gains[jq] - gains[ip];
      if (!have_best || rec > best_rec) {
        best_rec = rec;
        best_p = ip;
        best_q = jq;
        have_best = true;
      }
    }
  }
  if (have_best) {
    result.best = FeasiblePoint{from_sorted_unchecked({vals[best_p], 1.0 - vals[best_p]}, tol),
                                from_sorted_unchecked({vals[best_q], 1.0 - vals[best_q]}, tol),
                                best_rec};
  }
  return result;
}

ScanResult random_search_kxk(const SchmidtVector& psi, const SchmidtVector& phi, std::size_t k,
                             const GridSpec& grid, Tolerance tol) {
  if (k < 2) throw std::invalid_argument("random search needs k >= 2");
  ScanResult result;
  if (!majorize(psi, phi, tol).holds) {
    result.not_convertible = true;
    return result;
  }
  const std::uint64_t samples = std::min<std::uint64_t>(grid.samples, grid.max_points);
  SplitMix64 rng(grid.seed);
  PairTester tester(psi, phi, tol);
  std::optional<FeasiblePoint> best;
  for (std::uint64_t s = 0; s < samples; ++s) {
    std::vector<double> chi = sorted_simplex_sample(k, rng);
    std::vector<double> omega = chi;
    const int transfers = 1 + static_cast<int>(rng.next_below(2));
    for (int t = 0; t < transfers; ++t) {
      const std::size_t i = static_cast<std::size_t>(rng.next_below(k - 1));
      const std::size_t j = i + 1 + static_cast<std::size_t>(rng.next_below(k - 1 - i));
      const double amount = rng.next_double() * (omega[i] - omega[j]) / 2.0;
      omega[i] -= amount;
      omega[j] += amount;
      std::sort(omega.begin(), omega.end(), std::greater<>());
    }
    if (const auto gain = tester.gain_if_feasible(chi, omega)) {
      ++result.feasible_count;
      if (!best || *gain > best->recovered)
        best = FeasiblePoint{from_sorted_unchecked(std::move(chi), tol),
                             from_sorted_unchecked(std::move(omega), tol), *gain};
    }
  }
  result.points_tested = samples;
  result.best = std::move(best);
  return result;
}

ScanResult max_recovery_scan(const SchmidtVector& psi, const SchmidtVector& phi,
                             std::size_t k_max, const GridSpec& grid, Tolerance tol) {
  if (k_max < 2) throw std::invalid_argument("scan needs k_max >= 2");
  ScanResult result;
  if (!majorize(psi, phi, tol).holds) {
    result.not_convertible = true;
    for (std::size_t k = 2; k <= k_max; ++k)
      result.per_k.push_back(PerKRow{static_cast<int>(k), 0.0, 0, 0});
    return result;
  }
  for (std::size_t k = 2; k <= k_max; ++k) {
    GridSpec sub = grid;
    sub.seed = grid.seed + 1000003ULL * k;
    const ScanResult part = k == 2 ? grid_search_2x2(psi, phi, sub, tol)
                                   : random_search_kxk(psi, phi, k, sub, tol);
    PerKRow row;
    row.k = static_cast<int>(k);
    row.best_recovered = part.best ? part.best->recovered : 0.0;
    row.feasible_count = part.feasible_count;
    row.points_tested = part.points_tested;
    result.per_k.push_back(row);
    result.feasible_count += part.feasible_count;
    result.points_tested += part.points_tested;
    if (part.best && (!result.best || part.best->recovered > result.best->recovered))
      result.best = part.best;
  }
  // Zero-padding embedding: any k-dimensional recovery is also a (k+1)-
  // dimensional one, so the reported column is monotone.
  for (std::size_t i = 1; i < result.per_k.size(); ++i)
    result.per_k[i].best_recovered =
        std::max(result.per_k[i].best_recovered, result.per_k[i - 1].best_recovered);
  return result;
}

}  // namespace locc
