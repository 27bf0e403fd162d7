#pragma once

#include <cstddef>
#include <vector>

namespace locc {

/// Absolute tolerance for equality decisions on prefix sums and entries.
/// Keep it well below the smallest spectral gap you intend to resolve;
/// that requirement is documented, not enforced.
struct Tolerance {
  double eq_tol = 1e-12;

  Tolerance() = default;
  Tolerance(double t);  // NOLINT: implicit by design, throws if t < 0
};

/// Sorted (non-increasing) probability vector of squared Schmidt coefficients.
/// Immutable after construction; every operation on it is a pure function, so
/// instances can be shared freely across threads.
class SchmidtVector {
 public:
  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t dim() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  Tolerance tol() const noexcept { return tol_; }

  /// Same spectrum with zeros appended up to `n` entries. Padding changes
  /// equality-set membership at the tail, so it is always an explicit call.
  SchmidtVector padded(std::size_t n) const;

  bool operator==(const SchmidtVector& other) const noexcept {
    return values_ == other.values_;
  }

 private:
  friend SchmidtVector make_schmidt(std::vector<double> raw, Tolerance tol);
  friend SchmidtVector tensor_spectrum(const SchmidtVector& a, const SchmidtVector& b);
  friend SchmidtVector uniform_spectrum(std::size_t n);
  friend SchmidtVector from_sorted_unchecked(std::vector<double> sorted, Tolerance tol);

  struct Trusted {};
  SchmidtVector(Trusted, std::vector<double> sorted, Tolerance tol)
      : values_(std::move(sorted)), tol_(tol) {}

  std::vector<double> values_;
  Tolerance tol_;
};

/// Validates, sorts (stable, non-increasing) and clamps negative dust to zero.
/// Throws Errc::Empty, Errc::NegativeEntry or Errc::NotNormalized.
SchmidtVector make_schmidt(std::vector<double> raw, Tolerance tol = {});

/// Shannon entropy in nats, with the 0 ln 0 = 0 convention. Range [0, ln n].
double entropy(const SchmidtVector& v) noexcept;

/// All pairwise products a_i * b_j, sorted non-increasing. Entropy is additive
/// and majorization is monotone under this product.
SchmidtVector tensor_spectrum(const SchmidtVector& a, const SchmidtVector& b);

/// The flat spectrum (1/n, ..., 1/n); bottom element of the majorization order.
SchmidtVector uniform_spectrum(std::size_t n);

/// Internal fast path for values that are sorted and normalized by
/// construction. Callers are responsible for both properties.
SchmidtVector from_sorted_unchecked(std::vector<double> sorted, Tolerance tol = {});

}  // namespace locc
