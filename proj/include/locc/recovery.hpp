#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "locc/majorization.hpp"
#include "locc/spectrum.hpp"

namespace locc {

/// How omega was derived from chi: mass `epsilon` moved from entry `donor`
/// (0-based) to entry donor + 1. Present only for constructed pairs.
struct Perturbation {
  std::size_t donor = 0;
  double epsilon = 0.0;
};

/// Equal-dimension auxiliary pair with entropy(omega) > entropy(chi).
struct RecoveryPair {
  SchmidtVector chi;
  SchmidtVector omega;
  std::size_t k = 0;
  std::optional<Perturbation> perturbation;
};

/// Independently checkable evidence that psi ⊗ chi converts to phi ⊗ omega
/// deterministically while the auxiliary pair gains entropy.
struct RecoveryCertificate {
  RecoveryPair pair;
  MajorizationReport report;  // tensor(psi,chi) ≺ tensor(phi,omega)
  double recovered = 0.0;     // entropy(omega) - entropy(chi), nats
  double loss = 0.0;          // entropy(psi) - entropy(phi), nats
  bool genuine = false;       // k < dim(psi)
  int efficient_bound = 2;    // proven lower bound on any feasible k
};

struct Found {
  RecoveryCertificate certificate;
};
struct ImpossibleAtDim {
  int k = 0;
  std::string reason;
};
struct OpenProblem {
  std::string reason;
};
struct NotConvertible {};

using RecoveryOutcome = std::variant<Found, ImpossibleAtDim, OpenProblem, NotConvertible>;

struct RecoverOptions {
  Tolerance tol{};
  /// Fraction of the maximal feasible perturbation used for omega. The
  /// default returns the boundary point itself; verification is non-strict,
  /// so it is valid and maximizes the recovered entropy.
  double epsilon_fraction = 1.0;
  /// Attempt an unguaranteed randomized scan on open-problem classes.
  bool heuristic = false;
  /// Seeded random fallback when the deterministic candidate families of
  /// recover_kxk all fail.
  bool fallback_random = true;
  int samples = 4096;
  std::uint64_t seed = 1;
  /// Pin the 2x2 auxiliary parameter p instead of searching for it.
  std::optional<double> force_p;
};

/// Checks the product-spectrum majorization and the entropy gain, and
/// assembles the certificate. Throws Errc::MajorizationFailed /
/// Errc::NoEntropyGain (wrapped reason) when the pair is not a recovery, and
/// Errc::DimensionMismatch when dim(chi) != dim(omega).
RecoveryCertificate verify_recovery(const SchmidtVector& psi, const SchmidtVector& phi,
                                    const SchmidtVector& chi, const SchmidtVector& omega,
                                    Tolerance tol = {});

/// Smallest auxiliary dimension not excluded by the end-point equalities:
/// 2 when both ends differ, 3 when exactly one coincides, 4 when both do.
int dimension_lower_bound(const SchmidtVector& psi, const SchmidtVector& phi, Tolerance tol = {});

/// Every p in (1/2, 1) where two scaled spectrum entries cross, i.e.
/// p*u = (1-p)*v for u, v drawn from the union of both parent spectra.
/// Between consecutive points the sorted order of both product spectra is
/// constant. Sorted, deduplicated within tol.
std::vector<double> critical_points_2x2(const SchmidtVector& psi, const SchmidtVector& phi,
                                        Tolerance tol = {});

/// Right endpoint of the search interval (1/2, a) for pairs whose equality
/// set is interior and isolated: the minimum of the cross-block entry ratios
/// u/(u+v), where a ratio equal to 1/2 is neutralized to 1 and never
/// determines a. Convention: a = 1 for an empty delta. Throws
/// Errc::NotApplicable for any other pair class.
double interval_upper_bound_a(const SchmidtVector& psi, const SchmidtVector& phi,
                              const std::vector<int>& delta, Tolerance tol = {});

/// Supremum epsilon such that moving eps from chi[donor] to chi[receiver]
/// keeps tensor(psi,chi) ≺ tensor(phi,omega(eps)), capped at half the
/// donor/receiver gap. Feasibility is monotone in eps (the transfer only
/// lowers the right-hand prefix sums), so the boundary is found by bisection
/// to 1e-9 absolute. Throws Errc::NotFeasibleAtZero.
double epsilon_max(const SchmidtVector& psi, const SchmidtVector& phi, const SchmidtVector& chi,
                   std::size_t donor, std::size_t receiver, Tolerance tol = {});

/// 2x2 recovery for strict or isolated-interior pairs: scans interval
/// midpoints between critical points inside (1/2, a), takes the first p
/// whose product majorization survives a small right-side perturbation, and
/// maximizes epsilon by bisection. Throws Errc::NotApplicable for other
/// classes and Errc::SearchExhausted if no midpoint works (the existence
/// guarantees make that an implementation or tolerance failure).
RecoveryOutcome recover_2x2(const SchmidtVector& psi, const SchmidtVector& phi,
                            const RecoverOptions& opts = {});

/// 3x3 recovery for pairs whose only equality is the leading one: picks an
/// interior point (centroid first) of the feasible triangle in the
/// (p, q)-plane and perturbs the middle entry. Throws Errc::NotApplicable,
/// Errc::EmptyRegion, Errc::SearchExhausted.
RecoveryOutcome recover_3x3_delta1(const SchmidtVector& psi, const SchmidtVector& phi,
                                   const RecoverOptions& opts = {});

/// k x k recovery search over the ordered simplex: deterministic ratio
/// families (near-uniform profiles keyed to the equality-set gap ratios,
/// geometric and two-tier profiles) followed by a seeded random fallback.
/// Every success is certified before being returned. Returns ImpossibleAtDim
/// when k is below the proven lower bound.
RecoveryOutcome recover_kxk(const SchmidtVector& psi, const SchmidtVector& phi, std::size_t k,
                            const RecoverOptions& opts = {});

/// Dispatcher over the pair classification: 2x2 for strict/isolated pairs,
/// 3x3 for a lone leading equality, k = eta + 2 for general blocks, and
/// OpenProblem for the classes with no known construction (trailing
/// equality; blocks that would need k >= n).
RecoveryOutcome recover_general(const SchmidtVector& psi, const SchmidtVector& phi,
                                const RecoverOptions& opts = {});

}  // namespace locc
