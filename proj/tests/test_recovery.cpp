#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "locc/errors.hpp"
#include "locc/genpairs.hpp"
#include "locc/majorization.hpp"
#include "locc/recovery.hpp"

using namespace locc;

namespace {

const SchmidtVector kPsi = make_schmidt({0.4, 0.3, 0.2, 0.1});
const SchmidtVector kPhi = make_schmidt({0.5, 0.3, 0.2, 0.0});
const SchmidtVector kPsiDelta1 = make_schmidt({0.4, 0.25, 0.2, 0.15});
const SchmidtVector kPhiDelta1 = make_schmidt({0.4, 0.3, 0.2, 0.1});
const SchmidtVector kPsiTrail = make_schmidt({0.4, 0.35, 0.15, 0.1});
const SchmidtVector kPhiTrail = make_schmidt({0.4, 0.4, 0.1, 0.1});
const SchmidtVector kPsiBlocks = make_schmidt({0.28, 0.22, 0.15, 0.12, 0.11, 0.06, 0.06});
const SchmidtVector kPhiBlocks = make_schmidt({0.3, 0.2, 0.15, 0.13, 0.1, 0.07, 0.05});

bool product_feasible(const SchmidtVector& psi, const SchmidtVector& phi,
                      const SchmidtVector& chi, const SchmidtVector& omega) {
  return majorize(tensor_spectrum(psi, chi), tensor_spectrum(phi, omega)).holds;
}

// Independent grid oracle for the feasibility boundary in epsilon.
double grid_epsilon_boundary(const SchmidtVector& psi, const SchmidtVector& phi,
                             const SchmidtVector& chi, std::size_t donor, std::size_t receiver,
                             int steps) {
  const double cap = (chi[donor] - chi[receiver]) / 2.0;
  double last_good = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double eps = cap * static_cast<double>(i) / static_cast<double>(steps);
    if (product_feasible(psi, phi, chi, robin_hood(chi, donor, receiver, eps)))
      last_good = eps;
    else
      break;
  }
  return last_good;
}

const RecoveryCertificate& expect_found(const RecoveryOutcome& outcome) {
  REQUIRE(std::holds_alternative<Found>(outcome));
  return std::get<Found>(outcome).certificate;
}

void check_certificate_reverifies(const SchmidtVector& psi, const SchmidtVector& phi,
                                  const RecoveryCertificate& cert) {
  const RecoveryCertificate again =
      verify_recovery(psi, phi, cert.pair.chi, cert.pair.omega, Tolerance{});
  CHECK(again.recovered == doctest::Approx(cert.recovered).epsilon(1e-12));
  CHECK(again.loss == doctest::Approx(cert.loss).epsilon(1e-12));
  CHECK(cert.recovered <= cert.loss + 1e-10);
  CHECK(cert.recovered > 0.0);
}

}  // namespace

TEST_CASE("verify_recovery accepts the worked example pair") {
  const RecoveryCertificate cert =
      verify_recovery(kPsi, kPhi, make_schmidt({0.8, 0.2}), make_schmidt({0.73, 0.27}));
  CHECK(cert.recovered == doctest::Approx(0.08286).epsilon(2e-4));
  CHECK(cert.loss == doctest::Approx(0.25020).epsilon(2e-4));
  CHECK(cert.recovered == doctest::Approx(0.082856286957939).epsilon(1e-12));
  CHECK(cert.loss == doctest::Approx(0.250201211769094).epsilon(1e-12));
  CHECK(cert.genuine);
  CHECK(cert.pair.k == 2);
  CHECK(cert.efficient_bound == 2);
  CHECK(cert.report.holds);
}

TEST_CASE("verify_recovery rejects non-recoveries") {
  const SchmidtVector chi = make_schmidt({0.8, 0.2});
  CHECK_THROWS_WITH_AS(verify_recovery(kPsi, kPhi, chi, chi),
                       doctest::Contains("NoEntropyGain"), Error);
  CHECK_THROWS_WITH_AS(verify_recovery(kPsi, kPhi, chi, make_schmidt({0.70, 0.30})),
                       doctest::Contains("MajorizationFailed"), Error);
  CHECK_THROWS_AS(verify_recovery(kPsi, kPhi, chi, make_schmidt({0.5, 0.3, 0.2})), Error);
}

TEST_CASE("dimension lower bound from end-point equalities") {
  CHECK(dimension_lower_bound(kPsi, kPhi) == 2);
  CHECK(dimension_lower_bound(kPsiDelta1, kPhiDelta1) == 3);
  CHECK(dimension_lower_bound(kPsiTrail, kPhiTrail) == 4);
}

TEST_CASE("critical points of the worked example") {
  const std::vector<double> pts = critical_points_2x2(kPsi, kPhi);
  REQUIRE(!pts.empty());
  CHECK(std::is_sorted(pts.begin(), pts.end()));
  const auto contains = [&](double x) {
    return std::any_of(pts.begin(), pts.end(),
                       [&](double p) { return std::abs(p - x) < 1e-12; });
  };
  CHECK(contains(5.0 / 7.0));        // 0.2 p = 0.5 (1-p)
  CHECK(contains(0.5 / 0.9));        // 0.4 p = 0.5 (1-p)
  CHECK(pts.size() <= 28);           // (2n choose 2) for n = 4
  for (double p : pts) CHECK((p > 0.5 && p < 1.0));
}

TEST_CASE("critical points vanish for a fully degenerate pair") {
  const SchmidtVector half = make_schmidt({0.5, 0.5});
  CHECK(critical_points_2x2(half, half).empty());
}

TEST_CASE("interval upper bound a") {
  CHECK(interval_upper_bound_a(kPsi, kPhi, {}) == 1.0);

  // delta = {2}: terms 0.3/0.6 (neutralized to 1 since alpha_1 = alpha_2),
  // 0.34/0.60, 0.25/0.45, 0.26/0.40; the minimum is 17/30.
  const SchmidtVector psi_a = make_schmidt({0.3, 0.3, 0.25, 0.15});
  const SchmidtVector phi_a = make_schmidt({0.34, 0.26, 0.26, 0.14});
  CHECK(interval_upper_bound_a(psi_a, phi_a, {2}) == doctest::Approx(17.0 / 30.0).epsilon(1e-12));

  // delta = {2}: minimum is alpha_1/(alpha_1 + alpha_2) = 4/7.
  const SchmidtVector psi_b = make_schmidt({0.4, 0.3, 0.2, 0.1});
  const SchmidtVector phi_b = make_schmidt({0.45, 0.25, 0.22, 0.08});
  CHECK(interval_upper_bound_a(psi_b, phi_b, {2}) == doctest::Approx(4.0 / 7.0).epsilon(1e-12));

  // delta = {2}: minimum is the tail term alpha_3/(alpha_3 + alpha_4) = 4/7.
  const SchmidtVector psi_c = make_schmidt({0.38, 0.27, 0.2, 0.15});
  const SchmidtVector phi_c = make_schmidt({0.42, 0.23, 0.21, 0.14});
  CHECK(interval_upper_bound_a(psi_c, phi_c, {2}) == doctest::Approx(4.0 / 7.0).epsilon(1e-12));

  CHECK_THROWS_WITH_AS(interval_upper_bound_a(kPsiDelta1, kPhiDelta1, {1}),
                       doctest::Contains("NotApplicable"), Error);
}

TEST_CASE("epsilon_max on the worked example") {
  const SchmidtVector chi = make_schmidt({0.8, 0.2});
  const double eps = epsilon_max(kPsi, kPhi, chi, 0, 1);
  CHECK(eps == doctest::Approx(0.08).epsilon(1e-6));
  // Boundary feasibility: passes at 0.08, fails just above.
  CHECK_NOTHROW(verify_recovery(kPsi, kPhi, chi, make_schmidt({0.72, 0.28})));
  CHECK_THROWS_AS(verify_recovery(kPsi, kPhi, chi, make_schmidt({0.7199, 0.2801})), Error);
}

TEST_CASE("epsilon_max degenerate and shifted cases") {
  CHECK(epsilon_max(kPsi, kPhi, make_schmidt({0.5, 0.5}), 0, 1) == 0.0);
  // At p = 0.72 the binding constraint is the second prefix: 0.8 q >= 0.504,
  // so eps* = 0.72 - 0.63 = 0.09.
  const double eps = epsilon_max(kPsi, kPhi, make_schmidt({0.72, 0.28}), 0, 1);
  CHECK(eps == doctest::Approx(0.09).epsilon(1e-6));
}

TEST_CASE("epsilon_max agrees with the grid oracle") {
  for (double p : {0.8, 0.72, 0.99, 0.77, 0.9}) {
    const SchmidtVector chi = make_schmidt({p, 1.0 - p});
    const double eps = epsilon_max(kPsi, kPhi, chi, 0, 1);
    const double cap = (chi[0] - chi[1]) / 2.0;
    const int steps = 10000;
    const double grid = grid_epsilon_boundary(kPsi, kPhi, chi, 0, 1, steps);
    CHECK(std::abs(grid - eps) <= 2.0 * cap / steps);
    if (p == 0.99) CHECK(eps > 0.0);
  }
}

TEST_CASE("epsilon_max throws when infeasible at zero") {
  // chi = (0.99, 0.01): the first prefix already fails (0.4*0.99 > 0.5*0.99
  // is false) but deeper prefixes do: 0.99 vs 0.5*0.99 + 0.5*0.01... use the
  // reversed pair, which cannot hold at eps = 0.
  CHECK_THROWS_WITH_AS(epsilon_max(kPhi, kPsi, make_schmidt({0.8, 0.2}), 0, 1),
                       doctest::Contains("NotFeasibleAtZero"), Error);
}

TEST_CASE("epsilon feasibility is an interval") {
  const SchmidtVector chi = make_schmidt({0.8, 0.2});
  const double eps = epsilon_max(kPsi, kPhi, chi, 0, 1);
  for (double f : {0.5, 1.0})
    CHECK_NOTHROW(verify_recovery(kPsi, kPhi, chi, robin_hood(chi, 0, 1, f * eps)));
  CHECK_THROWS_WITH_AS(verify_recovery(kPsi, kPhi, chi, chi), doctest::Contains("NoEntropyGain"),
                       Error);
}

TEST_CASE("right-hand prefix sums decrease monotonically in epsilon") {
  const SchmidtVector chi = make_schmidt({0.8, 0.2});
  const double eps = epsilon_max(kPsi, kPhi, chi, 0, 1);
  std::vector<double> prev;
  for (int i = 0; i <= 8; ++i) {
    const double e = eps * i / 8.0;
    const auto pfx = prefix_sums(tensor_spectrum(kPhi, robin_hood(chi, 0, 1, e)));
    if (!prev.empty())
      for (std::size_t m = 0; m < pfx.size(); ++m) CHECK(pfx[m] <= prev[m] + 1e-12);
    prev = pfx;
  }
}

TEST_CASE("recover_2x2 reproduces the worked choice when forced") {
  RecoverOptions opts;
  opts.force_p = 0.8;
  opts.epsilon_fraction = 0.875;  // eps = 0.07 out of eps* = 0.08
  const RecoveryCertificate& cert = expect_found(recover_2x2(kPsi, kPhi, opts));
  CHECK(cert.pair.chi[0] == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(cert.pair.omega[0] == doctest::Approx(0.73).epsilon(1e-7));
  CHECK(cert.pair.omega[1] == doctest::Approx(0.27).epsilon(1e-7));
  check_certificate_reverifies(kPsi, kPhi, cert);
  REQUIRE(cert.pair.perturbation.has_value());
  CHECK(cert.pair.perturbation->donor == 0);
  CHECK(cert.pair.perturbation->epsilon == doctest::Approx(0.07).epsilon(1e-7));
}

TEST_CASE("recover_2x2 free search on the strict example") {
  const RecoveryCertificate& cert = expect_found(recover_2x2(kPsi, kPhi));
  CHECK(cert.pair.k == 2);
  CHECK(cert.genuine);
  check_certificate_reverifies(kPsi, kPhi, cert);
}

TEST_CASE("recover_2x2 rejects pairs with a leading equality") {
  CHECK_THROWS_WITH_AS(recover_2x2(kPsiDelta1, kPhiDelta1), doctest::Contains("NotApplicable"),
                       Error);
}

TEST_CASE("recover_2x2 on an isolated interior pair stays inside (1/2, a)") {
  const SchmidtVector psi = make_schmidt({0.3, 0.3, 0.25, 0.15});
  const SchmidtVector phi = make_schmidt({0.34, 0.26, 0.26, 0.14});
  const double a = interval_upper_bound_a(psi, phi, {2});
  const RecoveryCertificate& cert = expect_found(recover_2x2(psi, phi));
  CHECK(cert.pair.chi[0] > 0.5);
  CHECK(cert.pair.chi[0] < a);
  check_certificate_reverifies(psi, phi, cert);
}

TEST_CASE("recover_3x3_delta1 on the leading-equality fixture") {
  const RecoveryCertificate& cert = expect_found(recover_3x3_delta1(kPsiDelta1, kPhiDelta1));
  CHECK(cert.pair.k == 3);
  CHECK(cert.genuine);
  CHECK(cert.efficient_bound == 3);  // k = 3 is minimal here
  check_certificate_reverifies(kPsiDelta1, kPhiDelta1, cert);
  // Region sanity: the chosen point satisfies q alpha_1 < p alpha_2.
  const double p = cert.pair.chi[0];
  const double q = cert.pair.chi[1];
  CHECK(q * kPsiDelta1[0] < p * kPsiDelta1[1]);
}

TEST_CASE("recover_3x3_delta1 rejects other classes") {
  CHECK_THROWS_WITH_AS(recover_3x3_delta1(kPsi, kPhi), doctest::Contains("NotApplicable"), Error);
}

TEST_CASE("recover_kxk finds the block fixture at k = 4") {
  const RecoveryCertificate& cert = expect_found(recover_kxk(kPsiBlocks, kPhiBlocks, 4));
  CHECK(cert.pair.k == 4);
  CHECK(cert.genuine);
  check_certificate_reverifies(kPsiBlocks, kPhiBlocks, cert);
  REQUIRE(cert.pair.perturbation.has_value());
  CHECK(cert.pair.perturbation->donor == 2);
}

TEST_CASE("recover_kxk agrees with recover_2x2 on strict pairs") {
  const RecoveryCertificate& a = expect_found(recover_kxk(kPsi, kPhi, 2));
  const RecoveryCertificate& b = expect_found(recover_2x2(kPsi, kPhi));
  CHECK(a.pair.k == b.pair.k);
  check_certificate_reverifies(kPsi, kPhi, a);
}

TEST_CASE("recover_kxk dimension edge cases") {
  CHECK_THROWS_WITH_AS(recover_kxk(kPsi, kPhi, 1), doctest::Contains("SearchExhausted"), Error);
  const RecoveryOutcome blocked = recover_kxk(kPsiDelta1, kPhiDelta1, 2);
  REQUIRE(std::holds_alternative<ImpossibleAtDim>(blocked));
  CHECK(std::get<ImpossibleAtDim>(blocked).k == 2);
}

TEST_CASE("recover_general dispatch") {
  CHECK(std::get<Found>(recover_general(kPsi, kPhi)).certificate.pair.k == 2);
  CHECK(std::get<Found>(recover_general(kPsiDelta1, kPhiDelta1)).certificate.pair.k == 3);
  const RecoveryCertificate& blocks =
      expect_found(recover_general(kPsiBlocks, kPhiBlocks));
  CHECK(blocks.pair.k == 4);  // eta + 2 = 4 < n = 7
  CHECK(blocks.genuine);

  CHECK(std::holds_alternative<OpenProblem>(recover_general(kPsiTrail, kPhiTrail)));
  CHECK(std::holds_alternative<NotConvertible>(recover_general(kPhi, kPsi)));
  CHECK(std::holds_alternative<NotConvertible>(recover_general(kPsi, kPsi)));
}

TEST_CASE("recover_general refuses non-genuine block constructions") {
  // delta = {1} at n = 3 would need k = eta + 2 = 3 = n.
  const SchmidtVector psi = make_schmidt({0.5, 0.3, 0.2});
  const SchmidtVector phi = make_schmidt({0.5, 0.35, 0.15});
  REQUIRE(classify_pair(psi, phi).delta == std::vector<int>{1});
  CHECK(std::holds_alternative<OpenProblem>(recover_general(psi, phi)));

  // delta = {1, 2} at n = 4: eta = 2, k = 4 = n.
  const SchmidtVector psi2 = make_schmidt({0.4, 0.3, 0.17, 0.13});
  const SchmidtVector phi2 = make_schmidt({0.4, 0.3, 0.2, 0.1});
  REQUIRE(classify_pair(psi2, phi2).delta == std::vector<int>{1, 2});
  CHECK(std::holds_alternative<OpenProblem>(recover_general(psi2, phi2)));
}

TEST_CASE("heuristic scan cannot help a both-ends pair below n") {
  RecoverOptions opts;
  opts.heuristic = true;
  opts.samples = 200;
  CHECK(std::holds_alternative<OpenProblem>(recover_general(kPsiTrail, kPhiTrail, opts)));
}

TEST_CASE("recover_general over patterned pairs keeps every invariant") {
  int found = 0;
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const std::size_t n = 4 + (seed / 5) % 5;
    PatternSpec spec;
    spec.n = n;
    spec.seed = seed;
    switch (seed % 5) {
      case 0: spec.delta = {}; break;
      case 1: spec.delta = {1}; break;
      case 2: spec.delta = {2}; break;
      case 3: spec.delta = n >= 5 ? std::vector<int>{1, 3} : std::vector<int>{1}; break;
      case 4: spec.delta = n >= 5 ? std::vector<int>{2, 3} : std::vector<int>{2}; break;
    }
    const auto [psi, phi] = pair_with_pattern(spec);
    const PairClass cls = classify_pair(psi, phi);
    const RecoveryOutcome outcome = recover_general(psi, phi);
    if (const auto* f = std::get_if<Found>(&outcome)) {
      ++found;
      const RecoveryCertificate& cert = f->certificate;
      check_certificate_reverifies(psi, phi, cert);
      CHECK(static_cast<int>(cert.pair.k) >= dimension_lower_bound(psi, phi));
      if (!std::binary_search(cls.delta.begin(), cls.delta.end(), static_cast<int>(n) - 1))
        CHECK(cert.pair.k < n);
    }
  }
  CHECK(found == 60);  // every class exercised here has a construction
}
