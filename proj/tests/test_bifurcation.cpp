#include "bioeco/bifurcation.hpp"

#include <cmath>

#include "catch_amalgamated.hpp"

#include "bioeco/check.hpp"
#include "bioeco/equilibria.hpp"
#include "bioeco/finite_difference.hpp"
#include "test_params.hpp"

using namespace bioeco;
using bioeco::testing::p_family;
using bioeco::testing::p_triv;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double interior_trace(const ModelParams& base, double m, std::optional<State> seed = {}) {
  ModelParams P = base;
  P.m = m;
  return jacobian(P, interior_equilibrium(P, seed).point).trace();
}

}  // namespace

TEST_CASE("transcritical quantities at the critical growth rate") {
  const ModelParams P = p_triv();  // q1 = 0.4, E1 = 3, k = 200
  const TranscriticalReport rep = transcritical_check(P);
  CHECK_THAT(rep.r_tc, WithinRel(1.2, 1e-14));
  CHECK(rep.s1 == 0.0);
  CHECK(rep.s2 == 1.0);
  CHECK_THAT(rep.s3, WithinRel(-0.012, 1e-12));
  CHECK(rep.confirmed);
  CHECK(rep.v[0] == 1.0);
  CHECK(rep.v[1] == 0.0);
  CHECK(rep.w[0] == 1.0);
  CHECK(rep.w[1] == 0.0);
}

TEST_CASE("transcritical s1 vanishes across random draws") {
  const CheckResult r = check_transcritical_s1();
  INFO(r.detail);
  CHECK(r.passed);
}

TEST_CASE("transcritical check needs a simple zero eigenvalue") {
  ModelParams P = p_family(0.1);
  P.d = 1e-13;  // second axial eigenvalue collapses to zero as well
  P.E2 = 0.0;
  CHECK_THROWS_AS(transcritical_check(P), DoubleZeroEigenvalue);
}

TEST_CASE("hopf scan finds the single threshold of the reference family") {
  const HopfScanResult scan = hopf_scan(p_family(0.0), 0.001, 0.02, 40);
  REQUIRE(scan.roots.size() == 1);
  const HopfResult& h = scan.roots.front();
  CHECK_THAT(h.m_h, WithinAbs(0.010695, 1e-4));
  CHECK(h.det_at_mh > 0.0);
  CHECK(h.verdict == HopfVerdict::Supercritical);
  CHECK(h.sigma < 0.0);
  // trace invariant at the returned root
  CHECK(std::abs(interior_trace(p_family(0.0), h.m_h)) <= 1e-10);
}

TEST_CASE("hopf scan is empty where the branch trace stays negative") {
  const HopfScanResult scan = hopf_scan(p_family(0.0), 0.012, 0.02, 30);
  CHECK(scan.roots.empty());
  CHECK(scan.discarded.empty());
}

TEST_CASE("hopf scan reports a missing interior branch") {
  CHECK_THROWS_AS(hopf_scan(p_triv(), 0.1, 0.9, 10), NoInteriorBranch);
}

TEST_CASE("hopf scan result is grid independent") {
  const HopfScanResult a = hopf_scan(p_family(0.0), 0.001, 0.02, 20);
  const HopfScanResult b = hopf_scan(p_family(0.0), 0.001, 0.02, 41);
  REQUIRE(a.roots.size() == 1);
  REQUIRE(b.roots.size() == 1);
  CHECK(std::abs(a.roots[0].m_h - b.roots[0].m_h) <= 1e-8);
}

TEST_CASE("hopf scan range validation") {
  CHECK_THROWS_AS(hopf_scan(p_family(0.0), 0.02, 0.01, 10), InvalidParams);
  CHECK_THROWS_AS(hopf_scan(p_family(0.0), 0.001, 0.02, 1), InvalidParams);
}

TEST_CASE("transversality at the threshold is negative") {
  const double m_h = 0.0106953949388;
  const double dtr = transversality(p_family(0.0), m_h);
  CHECK(dtr != 0.0);
  CHECK(dtr < 0.0);  // stability is gained as the refuge grows
  CHECK_THAT(dtr, WithinRel(-55.8169, 1e-3));
}

TEST_CASE("transversality agrees with a forward-difference estimate") {
  const double m_h = 0.0106953949388;
  const double central = transversality(p_family(0.0), m_h);
  const double h = 1e-6;
  const double forward =
      (interior_trace(p_family(0.0), m_h + h) - interior_trace(p_family(0.0), m_h)) / h;
  CHECK_THAT(forward, WithinRel(central, 1e-4));
}

TEST_CASE("printed trace-derivative form is nonzero at the threshold") {
  // Cross-check only: the closed form holds the equilibrium fixed, so it is
  // not the branch derivative that transversality computes.
  ModelParams P = p_family(0.0106953949388);
  const Equilibrium eq = interior_equilibrium(P);
  CHECK(trace_derivative_partial_form(P, eq.point, P.m) != 0.0);
}

TEST_CASE("first Lyapunov coefficient is negative at the threshold") {
  const HopfResult h = lyapunov_number(p_family(0.0), 0.0106953949388);
  CHECK(h.sigma < 0.0);
  CHECK(h.verdict == HopfVerdict::Supercritical);
  CHECK_THAT(h.sigma, WithinRel(-0.00122538093, 1e-6));
  CHECK_THAT(h.det_at_mh, WithinRel(1.38478281, 1e-6));
  CHECK_THAT(h.equilibrium_at_mh.x, WithinRel(78.8690179834, 1e-6));
  CHECK_THAT(h.equilibrium_at_mh.y, WithinRel(20.2908283997, 1e-6));
}

TEST_CASE("lyapunov number refuses an off-threshold refuge value") {
  CHECK_THROWS_AS(lyapunov_number(p_family(0.0), 0.015), NotAtHopfPoint);
}

TEST_CASE("normal form rejects a nonpositive determinant jet") {
  TaylorCoefficients c{};
  c.a10 = 1e-12;
  c.b01 = -1e-12;
  c.a01 = 1.0;
  c.b10 = 1.0;  // delta = -1
  c.delta = c.a10 * c.b01 - c.a01 * c.b10;
  CHECK_THROWS_AS(first_lyapunov_from_jet(c), NegativeDelta);
}

TEST_CASE("sigma from the analytic jet matches sigma from the stencil jet") {
  ModelParams P = p_family(0.0106953949388);
  const Equilibrium eq = interior_equilibrium(P);
  const auto [sig_an, v_an] = first_lyapunov_from_jet(taylor_coefficients(P, eq.point));
  TaylorCoefficients numeric = fd::taylor(P, eq.point);
  // The stencil linear part carries O(h^4) noise; reuse the analytic linear
  // part so the jet satisfies the exact trace-zero precondition.
  const TaylorCoefficients an = taylor_coefficients(P, eq.point);
  numeric.a10 = an.a10;
  numeric.a01 = an.a01;
  numeric.b10 = an.b10;
  numeric.b01 = an.b01;
  numeric.delta = an.delta;
  const auto [sig_fd, v_fd] = first_lyapunov_from_jet(numeric);
  CHECK_THAT(sig_fd, WithinRel(sig_an, 1e-3));
  CHECK(v_an == v_fd);
}
