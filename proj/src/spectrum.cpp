#include "locc/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "locc/errors.hpp"

namespace locc {

Tolerance::Tolerance(double t) : eq_tol(t) {
  if (!(t >= 0.0)) throw std::invalid_argument("tolerance must be nonnegative");
}

SchmidtVector SchmidtVector::padded(std::size_t n) const {
  if (n < dim()) throw_error(Errc::DimensionMismatch, "padded() cannot shrink a spectrum");
  std::vector<double> v = values_;
  v.resize(n, 0.0);
  return SchmidtVector(Trusted{}, std::move(v), tol_);
}

SchmidtVector make_schmidt(std::vector<double> raw, Tolerance tol) {
  if (raw.empty()) throw_error(Errc::Empty, "spectrum needs at least one entry");
  double sum = 0.0;
  for (double x : raw) {
    if (!std::isfinite(x)) throw std::invalid_argument("spectrum entries must be finite");
    if (x < -tol.eq_tol) throw_error(Errc::NegativeEntry, "entry below -tol");
    sum += x;
  }
  if (std::abs(sum - 1.0) > tol.eq_tol) throw_error(Errc::NotNormalized, "entries must sum to 1");
  std::stable_sort(raw.begin(), raw.end(), std::greater<>());
  for (double& x : raw)
    if (x < 0.0) x = 0.0;
  return SchmidtVector(SchmidtVector::Trusted{}, std::move(raw), tol);
}

double entropy(const SchmidtVector& v) noexcept {
  double h = 0.0;
  for (double x : v.values())
    if (x > 0.0) h -= x * std::log(x);
  return h > 0.0 ? h : 0.0;
}

SchmidtVector tensor_spectrum(const SchmidtVector& a, const SchmidtVector& b) {
  std::vector<double> prod;
  prod.reserve(a.dim() * b.dim());
  for (double x : a.values())
    for (double y : b.values()) prod.push_back(x * y);
  std::stable_sort(prod.begin(), prod.end(), std::greater<>());
  const Tolerance combined(std::max(a.tol().eq_tol, b.tol().eq_tol));
  return SchmidtVector(SchmidtVector::Trusted{}, std::move(prod), combined);
}

SchmidtVector uniform_spectrum(std::size_t n) {
  if (n == 0) throw_error(Errc::Empty, "spectrum needs at least one entry");
  return SchmidtVector(SchmidtVector::Trusted{},
                       std::vector<double>(n, 1.0 / static_cast<double>(n)), Tolerance{});
}

SchmidtVector from_sorted_unchecked(std::vector<double> sorted, Tolerance tol) {
  return SchmidtVector(SchmidtVector::Trusted{}, std::move(sorted), tol);
}

}  // namespace locc
