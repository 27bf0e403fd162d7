#include "locc/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "locc/errors.hpp"
#include "locc/genpairs.hpp"

namespace locc {
namespace {

constexpr double kBisectTol = 1e-9;
constexpr int kBisectMaxIter = 200;

std::vector<double> tensor_prefixes(const SchmidtVector& a, const SchmidtVector& b) {
  return prefix_sums(tensor_spectrum(a, b));
}

bool dominated(const std::vector<double>& lhs, const std::vector<double>& rhs, double tol) {
  for (std::size_t i = 0; i + 1 < lhs.size(); ++i)
    if (lhs[i] > rhs[i] + tol) return false;
  return true;
}

SchmidtVector chi_2x2(double p, Tolerance tol) {
  return from_sorted_unchecked({p, 1.0 - p}, tol);
}

/// Certificate assembly shared by the verifier, the constructions and the
/// oracles. Returns the failure code instead of throwing so searches can use
/// it as a predicate.
struct VerifyResult {
  std::optional<RecoveryCertificate> certificate;
  Errc failure = Errc::MajorizationFailed;
};

VerifyResult try_verify(const SchmidtVector& psi, const SchmidtVector& phi,
                        const SchmidtVector& chi, const SchmidtVector& omega, Tolerance tol) {
  VerifyResult out;
  const MajorizationReport rep = majorize(tensor_spectrum(psi, chi), tensor_spectrum(phi, omega), tol);
  if (!rep.holds) {
    out.failure = Errc::MajorizationFailed;
    return out;
  }
  const double gain = entropy(omega) - entropy(chi);
  if (!(gain > tol.eq_tol)) {
    out.failure = Errc::NoEntropyGain;
    return out;
  }
  out.certificate = RecoveryCertificate{RecoveryPair{chi, omega, chi.dim(), std::nullopt},
                                        rep,
                                        gain,
                                        entropy(psi) - entropy(phi),
                                        chi.dim() < psi.dim(),
                                        dimension_lower_bound(psi, phi, tol)};
  return out;
}

/// A candidate chi is kept only if the product majorization holds at eps = 0
/// and still holds after a small probe transfer toward the receiver. Any
/// equality that would break under the perturbation fails the probe, so the
/// surviving equalities are exactly the benign ones.
bool feasible_with_probe(const SchmidtVector& psi, const SchmidtVector& phi,
                         const SchmidtVector& chi, std::size_t donor, std::size_t receiver,
                         Tolerance tol) {
  const double headroom = (chi[donor] - chi[receiver]) / 2.0;
  if (!(headroom > 0.0)) return false;
  const std::vector<double> lhs = tensor_prefixes(psi, chi);
  if (!dominated(lhs, tensor_prefixes(phi, chi), tol.eq_tol)) return false;
  const double probe = std::min(tol.eq_tol * 1e3, headroom) / 2.0;
  const SchmidtVector nudged = robin_hood(chi, donor, receiver, probe);
  return dominated(lhs, tensor_prefixes(phi, nudged), tol.eq_tol);
}

/// Maximizes the perturbation, builds omega and certifies the result.
std::optional<RecoveryCertificate> finish_candidate(const SchmidtVector& psi,
                                                    const SchmidtVector& phi,
                                                    const SchmidtVector& chi, std::size_t donor,
                                                    std::size_t receiver,
                                                    const RecoverOptions& opts) {
  const double eps_star = epsilon_max(psi, phi, chi, donor, receiver, opts.tol);
  const double eps = opts.epsilon_fraction * eps_star;
  if (!(eps > 0.0)) return std::nullopt;
  const SchmidtVector omega = robin_hood(chi, donor, receiver, eps);
  VerifyResult res = try_verify(psi, phi, chi, omega, opts.tol);
  if (!res.certificate) return std::nullopt;
  res.certificate->pair.perturbation = Perturbation{donor, eps};
  return res.certificate;
}

std::vector<int> delta_of(const SchmidtVector& psi, const SchmidtVector& phi, Tolerance tol) {
  return majorize(psi, phi, tol).equality_indices;
}

/// Strictly decreasing geometric profile (1, g, g^2, ...), normalized.
std::vector<double> geometric_profile(std::size_t k, double g) {
  std::vector<double> v(k);
  double x = 1.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    v[i] = x;
    sum += x;
    x *= g;
  }
  for (double& e : v) e /= sum;
  return v;
}

/// Unguaranteed randomized scan used for the open-problem classes when the
/// caller opts in. Any hit is still a fully certified recovery.
std::optional<RecoveryCertificate> heuristic_scan(const SchmidtVector& psi,
                                                  const SchmidtVector& phi,
                                                  const RecoverOptions& opts) {
  const std::size_t n = psi.dim();
  const int bound = dimension_lower_bound(psi, phi, opts.tol);
  SplitMix64 rng(opts.seed);
  for (std::size_t k = std::max<std::size_t>(2, static_cast<std::size_t>(bound)); k < n; ++k) {
    for (int s = 0; s < opts.samples; ++s) {
      std::vector<double> raw(k);
      double sum = 0.0;
      for (double& x : raw) {
        x = -std::log(rng.next_open());
        sum += x;
      }
      for (double& x : raw) x /= sum;
      std::sort(raw.begin(), raw.end(), std::greater<>());
      SchmidtVector chi = from_sorted_unchecked(std::move(raw), opts.tol);
      SchmidtVector omega = chi;
      const int transfers = 1 + static_cast<int>(rng.next_below(2));
      for (int t = 0; t < transfers; ++t) {
        const std::size_t i = static_cast<std::size_t>(rng.next_below(k - 1));
        const std::size_t j = i + 1 + static_cast<std::size_t>(rng.next_below(k - 1 - i));
        const double amount = rng.next_double() * (omega[i] - omega[j]) / 2.0;
        if (amount > 0.0) omega = robin_hood(omega, i, j, amount);
      }
      VerifyResult res = try_verify(psi, phi, chi, omega, opts.tol);
      if (res.certificate) return res.certificate;
    }
  }
  return std::nullopt;
}

}  // namespace

RecoveryCertificate verify_recovery(const SchmidtVector& psi, const SchmidtVector& phi,
                                    const SchmidtVector& chi, const SchmidtVector& omega,
                                    Tolerance tol) {
  if (chi.dim() != omega.dim())
    throw_error(Errc::DimensionMismatch, "chi and omega must share a dimension");
  if (!majorize(psi, phi, tol).holds)
    throw_error(Errc::MajorizationFailed, "parent pair is not convertible");
  VerifyResult res = try_verify(psi, phi, chi, omega, tol);
  if (!res.certificate)
    throw_error(res.failure, res.failure == Errc::MajorizationFailed
                                 ? "product spectra violate the prefix comparison"
                                 : "omega does not gain entropy over chi");
  return *std::move(res.certificate);
}

int dimension_lower_bound(const SchmidtVector& psi, const SchmidtVector& phi, Tolerance tol) {
  if (psi.dim() != phi.dim())
    throw_error(Errc::DimensionMismatch, "lower bound needs equal dimensions");
  const std::size_t n = psi.dim();
  const bool top_equal = std::abs(psi[0] - phi[0]) <= tol.eq_tol;
  const bool bottom_equal = std::abs(psi[n - 1] - phi[n - 1]) <= tol.eq_tol;
  return 2 + (top_equal ? 1 : 0) + (bottom_equal ? 1 : 0);
}

std::vector<double> critical_points_2x2(const SchmidtVector& psi, const SchmidtVector& phi,
                                        Tolerance tol) {
  std::vector<double> pool = psi.values();
  pool.insert(pool.end(), phi.values().begin(), phi.values().end());
  std::vector<double> pts;
  for (double u : pool)
    for (double v : pool) {
      if (!(u > 0.0) || !(v > u)) continue;
      const double p = v / (u + v);
      if (p > 0.5 + tol.eq_tol && p < 1.0 - tol.eq_tol) pts.push_back(p);
    }
  std::sort(pts.begin(), pts.end());
  std::vector<double> out;
  for (double p : pts)
    if (out.empty() || p - out.back() > tol.eq_tol) out.push_back(p);
  return out;
}

double interval_upper_bound_a(const SchmidtVector& psi, const SchmidtVector& phi,
                              const std::vector<int>& delta, Tolerance tol) {
  if (delta.empty()) return 1.0;
  const PairClass cls = classify_pair(psi, phi, tol);
  if (cls.kind != PairKind::IsolatedInterior || cls.delta != delta)
    throw_error(Errc::NotApplicable,
                "interval bound is defined for isolated interior equality sets");
  const int n = static_cast<int>(psi.dim());
  // Ratio u/(u+v) across each gap between consecutive equality anchors
  // (leading edge to first anchor, anchor to anchor, last anchor to the
  // tail). An equal pair contributes 1 and never determines the bound.
  const auto term = [&](double u, double v) {
    if (std::abs(u - v) <= tol.eq_tol) return 1.0;
    return u / (u + v);
  };
  double a = 1.0;
  int prev = 0;
  for (std::size_t j = 0; j <= delta.size(); ++j) {
    const int upper = j < delta.size() ? delta[j] : n;
    a = std::min(a, term(psi[prev], psi[upper - 1]));
    a = std::min(a, term(phi[prev], phi[upper - 1]));
    prev = upper;
  }
  return a;
}

double epsilon_max(const SchmidtVector& psi, const SchmidtVector& phi, const SchmidtVector& chi,
                   std::size_t donor, std::size_t receiver, Tolerance tol) {
  if (donor >= receiver || receiver >= chi.dim())
    throw_error(Errc::InvalidTransfer, "donor must precede receiver within chi");
  const std::vector<double> lhs = tensor_prefixes(psi, chi);
  const auto feasible = [&](double eps) {
    return dominated(lhs, tensor_prefixes(phi, robin_hood(chi, donor, receiver, eps)),
                     tol.eq_tol);
  };
  if (!feasible(0.0))
    throw_error(Errc::NotFeasibleAtZero, "product majorization fails before any transfer");
  const double cap = (chi[donor] - chi[receiver]) / 2.0;
  if (!(cap > 0.0)) return 0.0;
  if (feasible(cap)) return cap;
  double lo = 0.0;
  double hi = cap;
  for (int it = 0; it < kBisectMaxIter && hi - lo > kBisectTol; ++it) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  return lo;
}

RecoveryOutcome recover_2x2(const SchmidtVector& psi, const SchmidtVector& phi,
                            const RecoverOptions& opts) {
  const PairClass cls = classify_pair(psi, phi, opts.tol);
  if (cls.kind != PairKind::StrictAll && cls.kind != PairKind::IsolatedInterior)
    throw_error(Errc::NotApplicable, "2x2 recovery needs a strict or isolated-interior pair");
  const double a = cls.kind == PairKind::IsolatedInterior
                       ? interval_upper_bound_a(psi, phi, cls.delta, opts.tol)
                       : 1.0;

  std::vector<double> candidates;
  if (opts.force_p) {
    if (!(*opts.force_p > 0.5 && *opts.force_p < 1.0))
      throw std::invalid_argument("forced p must lie in (1/2, 1)");
    candidates.push_back(*opts.force_p);
  } else {
    std::vector<double> bounds{0.5};
    for (double p : critical_points_2x2(psi, phi, opts.tol))
      if (p < a - opts.tol.eq_tol) bounds.push_back(p);
    bounds.push_back(a);
    for (int round = 0; round < 2; ++round)
      for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
        const double w = bounds[i + 1] - bounds[i];
        if (!(w > 4.0 * opts.tol.eq_tol)) continue;
        if (round == 0) {
          candidates.push_back(bounds[i] + 0.5 * w);
        } else {
          candidates.push_back(bounds[i] + 0.25 * w);
          candidates.push_back(bounds[i] + 0.75 * w);
        }
      }
  }

  for (double p : candidates) {
    const SchmidtVector chi = chi_2x2(p, opts.tol);
    if (!feasible_with_probe(psi, phi, chi, 0, 1, opts.tol)) continue;
    if (auto cert = finish_candidate(psi, phi, chi, 0, 1, opts)) return Found{*std::move(cert)};
  }
  std::ostringstream msg;
  msg << "no feasible p among " << candidates.size() << " candidates in (0.5, " << a << ")";
  throw_error(Errc::SearchExhausted, msg.str());
}

RecoveryOutcome recover_3x3_delta1(const SchmidtVector& psi, const SchmidtVector& phi,
                                   const RecoverOptions& opts) {
  const std::size_t n = psi.dim();
  if (n < 3) throw_error(Errc::NotApplicable, "3x3 recovery needs parents of dimension >= 3");
  if (delta_of(psi, phi, opts.tol) != std::vector<int>{1})
    throw_error(Errc::NotApplicable, "3x3 recovery targets pairs whose only equality is m = 1");

  const auto& alpha = psi.values();
  const auto& beta = phi.values();
  const double c1 = alpha[1] / alpha[0];
  // Feasible triangle in the (p, q)-plane: q >= (1-p)/2 together with
  // q < c1 * p and q < 1 - c2 * p. The c2 slope comes from the alpha tail
  // when alpha_2 > alpha_n, and from the beta tail otherwise; if the alpha
  // form degenerates (possible when alpha_2^2 <= alpha_1 * alpha_n) the beta
  // form is used as fallback, which is non-degenerate for this class.
  std::vector<double> slopes;
  if (alpha[1] - alpha[n - 1] > opts.tol.eq_tol)
    slopes.push_back((alpha[1] + alpha[n - 1]) / alpha[1]);
  slopes.push_back((beta[0] + beta[n - 1]) / beta[0]);

  constexpr double kInteriorSlack = 1e-10;
  const double weights[][3] = {{1, 1, 1}, {2, 1, 1}, {1, 2, 1}, {1, 1, 2}, {4, 1, 1},
                               {1, 4, 1}, {1, 1, 4}, {6, 1, 1}, {1, 6, 1}, {1, 1, 6}};
  bool any_region = false;
  std::size_t tried = 0;
  for (double c2 : slopes) {
    const double v1[2] = {1.0 / (1.0 + 2.0 * c1), c1 / (1.0 + 2.0 * c1)};
    const double v2[2] = {1.0 / (2.0 * c2 - 1.0), (c2 - 1.0) / (2.0 * c2 - 1.0)};
    const double v3[2] = {1.0 / (c1 + c2), c1 / (c1 + c2)};
    const auto inside = [&](double p, double q) {
      return p + 2.0 * q - 1.0 > kInteriorSlack && c1 * p - q > kInteriorSlack &&
             1.0 - c2 * p - q > kInteriorSlack;
    };
    const double pc = (v1[0] + v2[0] + v3[0]) / 3.0;
    const double qc = (v1[1] + v2[1] + v3[1]) / 3.0;
    if (!inside(pc, qc)) continue;  // degenerate or empty triangle
    any_region = true;
    for (const auto& w : weights) {
      const double ws = w[0] + w[1] + w[2];
      const double p = (w[0] * v1[0] + w[1] * v2[0] + w[2] * v3[0]) / ws;
      const double q = (w[0] * v1[1] + w[1] * v2[1] + w[2] * v3[1]) / ws;
      if (!inside(p, q)) continue;
      const double r = 1.0 - p - q;
      if (!(p >= q && q >= r && r >= 0.0)) continue;
      ++tried;
      const SchmidtVector chi = from_sorted_unchecked({p, q, r}, opts.tol);
      if (!feasible_with_probe(psi, phi, chi, 1, 2, opts.tol)) continue;
      if (auto cert = finish_candidate(psi, phi, chi, 1, 2, opts)) return Found{*std::move(cert)};
    }
  }
  if (!any_region)
    throw_error(Errc::EmptyRegion, "feasible triangle degenerated for both slope forms");
  std::ostringstream msg;
  msg << "no feasible (p, q) among " << tried << " interior points";
  throw_error(Errc::SearchExhausted, msg.str());
}

RecoveryOutcome recover_kxk(const SchmidtVector& psi, const SchmidtVector& phi, std::size_t k,
                            const RecoverOptions& opts) {
  if (k < 2)
    throw_error(Errc::SearchExhausted, "a 1-dimensional auxiliary state cannot gain entropy");
  const MajorizationReport rep = majorize(psi, phi, opts.tol);
  if (!rep.holds) throw_error(Errc::NotApplicable, "parent pair is not convertible");
  const std::size_t n = psi.dim();
  if (std::binary_search(rep.equality_indices.begin(), rep.equality_indices.end(),
                         static_cast<int>(n) - 1))
    throw_error(Errc::NotApplicable, "trailing equality has no known construction");
  const int bound = dimension_lower_bound(psi, phi, opts.tol);
  if (static_cast<int>(k) < bound) {
    std::ostringstream msg;
    msg << "end-point equalities exclude auxiliary dimension " << k << " (bound " << bound << ")";
    return ImpossibleAtDim{static_cast<int>(k), msg.str()};
  }

  std::vector<std::vector<double>> candidates;
  // Near-uniform profiles keyed to the equality-set gap ratios: p_k/p_1 must
  // clear the largest ratio across any equality anchor so the aligned cuts
  // appear as full prefixes in the sorted product order.
  double rho = 0.0;
  for (int m : rep.equality_indices) {
    if (psi[m - 1] > 0.0) rho = std::max(rho, psi[m] / psi[m - 1]);
    if (phi[m - 1] > 0.0) rho = std::max(rho, phi[m] / phi[m - 1]);
  }
  if (rho > 0.0 && rho < 1.0) {
    const double base = std::pow(rho, 1.0 / static_cast<double>(k - 1));
    for (double f : {0.02, 0.1, 0.25, 0.5, 0.75})
      candidates.push_back(geometric_profile(k, base + f * (1.0 - base)));
  }
  for (double g : {0.995, 0.99, 0.98, 0.96, 0.92, 0.88, 0.82, 0.75, 0.65, 0.55, 0.45, 0.35, 0.25})
    candidates.push_back(geometric_profile(k, g));
  // Two-tier profiles (large entries, then a drop), mildly de-tied.
  for (std::size_t split = 1; split < k; ++split)
    for (double c : {0.85, 0.7, 0.55, 0.4, 0.25}) {
      std::vector<double> v(k);
      double sum = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        v[i] = (i < split ? 1.0 : c) * (1.0 - 0.01 * static_cast<double>(i));
        sum += v[i];
      }
      for (double& e : v) e /= sum;
      candidates.push_back(std::move(v));
    }

  const std::size_t donor = k - 2;
  const std::size_t receiver = k - 1;
  std::size_t tried = 0;
  const auto attempt = [&](const std::vector<double>& vals) -> std::optional<RecoveryCertificate> {
    ++tried;
    const SchmidtVector chi = from_sorted_unchecked(vals, opts.tol);
    if (!feasible_with_probe(psi, phi, chi, donor, receiver, opts.tol)) return std::nullopt;
    return finish_candidate(psi, phi, chi, donor, receiver, opts);
  };
  for (const auto& vals : candidates)
    if (auto cert = attempt(vals)) return Found{*std::move(cert)};

  if (opts.fallback_random) {
    SplitMix64 rng(opts.seed);
    for (int s = 0; s < opts.samples; ++s) {
      std::vector<double> v(k);
      double sum = 0.0;
      for (double& x : v) {
        x = -std::log(rng.next_open());
        sum += x;
      }
      for (double& x : v) x /= sum;
      std::sort(v.begin(), v.end(), std::greater<>());
      if (v[donor] - v[receiver] <= opts.tol.eq_tol) continue;
      if (auto cert = attempt(v)) return Found{*std::move(cert)};
    }
  }
  std::ostringstream msg;
  msg << "no feasible ordered-simplex point at k = " << k << " after " << tried << " candidates";
  throw_error(Errc::SearchExhausted, msg.str());
}

RecoveryOutcome recover_general(const SchmidtVector& psi, const SchmidtVector& phi,
                                const RecoverOptions& opts) {
  const PairClass cls = classify_pair(psi, phi, opts.tol);
  switch (cls.kind) {
    case PairKind::Incomparable:
      return NotConvertible{};
    case PairKind::Identical:
      // Zero loss, so dissipativity forces zero recovery.
      return NotConvertible{};
    case PairKind::StrictAll:
    case PairKind::IsolatedInterior:
      return recover_2x2(psi, phi, opts);
    case PairKind::TrailingEquality: {
      if (opts.heuristic)
        if (auto cert = heuristic_scan(psi, phi, opts)) return Found{*std::move(cert)};
      return OpenProblem{
          "matching smallest entries (trailing equality) have no known construction"};
    }
    case PairKind::GeneralBlocks: {
      const std::size_t n = psi.dim();
      const std::size_t k = static_cast<std::size_t>(cls.eta) + 2;
      if (k >= n) {
        if (opts.heuristic)
          if (auto cert = heuristic_scan(psi, phi, opts)) return Found{*std::move(cert)};
        return OpenProblem{
            "equality block spans the whole spectrum; the block construction would need k = n"};
      }
      if (cls.delta == std::vector<int>{1}) return recover_3x3_delta1(psi, phi, opts);
      return recover_kxk(psi, phi, k, opts);
    }
  }
  return NotConvertible{};
}

}  // namespace locc
