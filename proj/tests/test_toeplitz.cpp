#include <doctest.h>

#include <cmath>
#include <random>

#include <json.hpp>

#include "support.hpp"
#include "tw/linalg.hpp"
#include "tw/specialfn.hpp"
#include "tw/toeplitz.hpp"

using namespace tw;
using namespace tw::toeplitz;
using namespace tw::testing;

namespace {

std::vector<Real> bessel(int max_j, double t) {
  return specialfn::bessel_i_row(max_j, Real(2.0 * t, 512), PrecisionContext(512, 1e-60));
}

const Ledger& ledger50() {
  static const Ledger l = determinant_ledger(Kind::plain, 50.0, 92, ctx(), true);
  return l;
}

}  // namespace

TEST_CASE("small determinants against cofactor arithmetic") {
  const auto i = bessel(4, 1.0);
  CHECK(dif(toeplitz_log_det({1.0, 1, Kind::plain}, ctx()), log(i[0])) < 1e-28);
  CHECK(dif(toeplitz_log_det({1.0, 2, Kind::plain}, ctx()), log(i[0] * i[0] - i[1] * i[1])) < 1e-28);
  const Real a = i[0] - i[2], b = i[1] - i[3], d = i[0] - i[4];
  CHECK(dif(toeplitz_log_det({1.0, 2, Kind::plus_plus}, ctx()), log(a * d - b * b)) < 1e-28);
  CHECK(dif(d_pm_log(Kind::plus_plus, 1, 1.0, ctx()), log(i[0] - i[2])) < 1e-28);
  CHECK(dif(d_pm_log(Kind::minus_plus, 1, 1.0, ctx()), log(i[0] + i[1])) < 1e-28);
}

TEST_CASE("strong Szego limit") {
  const Real ld = toeplitz_log_det({1.0, 40, Kind::plain}, ctx());
  CHECK(std::fabs(exp(ld - 1.0).to_double() - 1.0) < 1e-20);
}

TEST_CASE("Toeplitz+Hankel determinants saturate at e^{t^2/2} and e^{t^2/2 + t}") {
  for (double t : {2.0, 5.5}) {
    const int n = static_cast<int>(2 * t) + 40;
    const Real pp = d_pm_log(Kind::plus_plus, n, t, ctx());
    const Real mp = d_pm_log(Kind::minus_plus, n, t, ctx());
    CHECK(std::fabs(pp.to_double() - t * t / 2) < 1e-25);
    CHECK(std::fabs(mp.to_double() - t * t / 2 - t) < 1e-25);
  }
}

TEST_CASE("argument checks") {
  CHECK_THROWS_AS(toeplitz_log_det({1.0, 0, Kind::plain}, ctx()), DomainError);
  CHECK_THROWS_AS(toeplitz_log_det({-1.0, 3, Kind::plain}, ctx()), DomainError);
  CHECK_THROWS_AS(toeplitz_log_det({1.0, kMaxDimension + 1, Kind::plain}, ctx()), DomainError);
  CHECK_THROWS_AS(kappa_sq(-1, 1.0, ctx()), DomainError);
  CHECK_THROWS_AS(pi_zero(0, 1.0, ctx()), DomainError);
  CHECK_THROWS_AS(d_pm_log(Kind::plain, 2, 1.0, ctx()), DomainError);
  CHECK_THROWS_AS(d_pm_log(Kind::plus_plus, 0, 1.0, ctx()), DomainError);
  CHECK_THROWS_AS(determinant_ledger(Kind::minus_plus, 1.0, 3, ctx(), true), DomainError);
}

TEST_CASE("adaptive precision: the result is stable under a tighter context") {
  const Real a = toeplitz_log_det({7.3, 30, Kind::plain}, ctx());
  const Real b = toeplitz_log_det({7.3, 30, Kind::plain}, PrecisionContext(512, 1e-60));
  CHECK(dif(a, b) < 1e-28);
  const Ledger l = determinant_ledger(Kind::plain, 7.3, 30, ctx());
  CHECK(l.precision_bits_used >= 2 * (256 + guard_bits(7.3, 30)));
}

TEST_CASE("kappa_0 and the range of kappa_q") {
  const auto i = bessel(0, 2.5);
  CHECK(dif(kappa_sq(0, 2.5, ctx()), -log(i[0])) < 1e-28);
  const Ledger l = determinant_ledger(Kind::plain, 6.0, 40, ctx(), true);
  for (int q = 0; q < 40; ++q) {
    INFO("q = " << q);
    CHECK(l.log_kappa_sq(q) < 0.0);
    if (q > 0) CHECK(abs(l.pi0[static_cast<std::size_t>(q)]) < 1.0);
  }
  CHECK(l.pi0[0] == 1.0);
}

TEST_CASE("pi_1(0) = -I_1/I_0") {
  const auto i = bessel(1, 3.0);
  CHECK(dif(pi_zero(1, 3.0, ctx()), -i[1] / i[0]) < 1e-28);
}

TEST_CASE("Verblunsky identity at t = 3 by both routes to pi_q(0)") {
  const Ledger l = determinant_ledger(Kind::plain, 3.0, 21, ctx(), true);
  for (int q = 2; q <= 20; ++q) {
    const Real rhs = exp(l.log_kappa_sq(q - 1) - l.log_kappa_sq(q));
    const Real solved = pi_zero(q, 3.0, ctx());
    INFO("q = " << q);
    CHECK(dif(1.0 - solved * solved, rhs) < 1e-28);
    CHECK(dif(solved, l.pi0[static_cast<std::size_t>(q)]) < 1e-28);
  }
}

TEST_CASE("sign pattern of pi_q(0) in the Airy regime") {
  const Ledger& l = ledger50();
  for (int q = 10; q <= 90; ++q) {
    INFO("q = " << q);
    CHECK((l.pi0[static_cast<std::size_t>(q)] < 0.0) == (q % 2 == 1));
  }
  const Real p = pi_zero(40, 50.0, ctx());
  CHECK(rel(p, airy_pi_prediction(40, 50.0)) < 1e-3);
}

TEST_CASE("Airy-regime prediction of log kappa_{q-1}^{-2} at t = 50") {
  const Ledger& l = ledger50();
  for (int q = 20; q <= 80; ++q) {
    const Real exact = l.log_kappa_inv_sq(q - 1);
    const double corrected = dif(exact, airy_log_kappa_prediction(q, 50.0));
    const double leading = dif(exact, airy_log_kappa_leading(q, 50.0));
    INFO("q = " << q);
    CHECK(corrected < leading);
    CHECK(corrected <= 10.0 * airy_error_envelope(q, 50.0));
  }
  // far from the edge the exponential term dominates
  const Real e4 = l.log_kappa_inv_sq(3);
  const Real lead4 = airy_log_kappa_leading(4, 50.0);
  CHECK(lead4 > 0.0);
  CHECK(rel(e4, lead4) < 1e-3);
  CHECK(rel(e4, airy_log_kappa_prediction(4, 50.0)) < rel(e4, lead4));
}

TEST_CASE("Airy prediction domain") {
  CHECK_THROWS_AS(airy_log_kappa_prediction(10, 5.0), DomainError);
  CHECK_THROWS_AS(airy_log_kappa_prediction(10, 5.05), DomainError);
  CHECK_NOTHROW(airy_log_kappa_leading(10, 5.05));
  CHECK_THROWS_AS(airy_pi_prediction(0, 5.0), DomainError);
  CHECK(AiryPrediction::correction(30, 50.0) < 0.0);
  CHECK(AiryPrediction::c1 == doctest::Approx(5.0 / 72.0));
  CHECK(AiryPrediction::d1 == doctest::Approx(-7.0 / 72.0));
}

TEST_CASE("kappa_q^2 near q = 2t approaches 1 - R(0)/t^(1/3)") {
  const Real r0 = painleve2::r_of(hm(), R(0));
  double prev = 1.0;
  for (double t : {10.0, 20.0, 40.0}) {
    const Real k = exp(kappa_sq(static_cast<int>(2 * t), t, ctx()));
    const double gap = dif(k, 1.0 - r0 / std::cbrt(t));
    INFO("t = " << t);
    CHECK(gap < prev);
    prev = gap;
  }
}

TEST_CASE("scan records") {
  const ToeplitzScan s = toeplitz_scan(3.0, 1, 20, ctx());
  REQUIRE(s.records.size() == 20);
  for (std::size_t k = 1; k < s.records.size(); ++k) {
    const auto& r = s.records[k];
    const auto& p = s.records[k - 1];
    CHECK(r.gamma == Real(6.0, s.precision_bits_used) / static_cast<long>(r.q));
    CHECK(dif(1.0 - r.pi0 * r.pi0, exp(p.log_kappa_sq - r.log_kappa_sq)) < 1e-28);
  }
  CHECK(s.records[0].pi0_airy_pred.has_value());
  CHECK(!s.records[10].pi0_airy_pred.has_value());
  CHECK(!s.records[5].log_kappa_sq_airy_pred.has_value());

  const std::string csv = scan_csv(s, 15);
  CHECK(csv.rfind("t,q,gamma,log_kappa_sq,pi0,log_kappa_sq_airy_pred,pi0_airy_pred,precision_bits_used\n", 0) == 0);
  const auto doc = nlohmann::json::parse(scan_json(s, 15));
  CHECK(doc["schema_version"] == kSchemaVersion);
  CHECK(doc["records"].size() == 20);
  CHECK(doc["records"][15]["pi0_airy_pred"].is_null());
  CHECK(scan_json(s, 15) == scan_json(toeplitz_scan(3.0, 1, 20, ctx()), 15));
  CHECK_THROWS_AS(toeplitz_scan(3.0, 0, 4, ctx()), DomainError);
}

TEST_CASE("telescoping is exact for any split point") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 4; ++trial) {
    const double t = std::uniform_real_distribution<double>(2.0, 30.0)(rng);
    const int n = std::uniform_int_distribution<int>(5, 80)(rng);
    const int L = std::uniform_int_distribution<int>(1, n)(rng);
    const Ledger l = determinant_ledger(Kind::plain, t, n, ctx());
    Real sum = l.log_d[static_cast<std::size_t>(L)];
    for (int q = L + 1; q <= n; ++q) sum += l.log_kappa_inv_sq(q - 1);
    const Real lu = toeplitz_log_det({t, n, Kind::plain}, ctx());
    INFO("t = " << t << ", n = " << n << ", L = " << L);
    CHECK(dif(sum, lu) < 1e-25);
  }
}

TEST_CASE("three-part sum equals the direct determinant") {
  for (int L : {4, 8}) {
    const SumPartsReport r = sum_parts_report(20.0, -1.0, L, 4, hm(), ctx());
    CHECK(r.n == 37);
    CHECK(dif(r.total, r.direct) <= 1e-20);
  }
  CHECK_THROWS_AS(sum_parts_report(20.0, -5.0, 4, 4, hm(), ctx()), DomainError);
  CHECK_THROWS_AS(sum_parts_report(20.0, -1.0, 30, 4, hm(), ctx()), DomainError);
}

TEST_CASE("Painleve part approaches int_{-M}^x R") {
  double prev = 1e9;
  for (double t : {10.0, 20.0, 40.0}) {
    const SumPartsReport r = sum_parts_report(t, -1.0, 6, 4, hm(), ctx());
    const double gap = dif(r.painleve_part, r.painleve_limit);
    INFO("t = " << t);
    CHECK(gap < prev);
    prev = gap;
  }
}

TEST_CASE("report JSON") {
  const SumPartsReport r = sum_parts_report(10.0, -1.0, 3, 4, hm(), ctx());
  const auto doc = nlohmann::json::parse(to_json(r, 20));
  CHECK(doc["schema_version"] == kSchemaVersion);
  CHECK(doc["parts"].contains("airy"));
  CHECK(doc["limits"].contains("painleve"));
}

TEST_CASE("Selberg closed form") {
  CHECK(dif(selberg_closed_form(1, 2.0, ctx()), sqrt(mp::pi(256) / 2.0)) < 1e-70);
  CHECK(rel(selberg_quadrature(1, 2.0, ctx()), selberg_closed_form(1, 2.0, ctx())) < 1e-8);
  for (double t : {0.5, 5.0}) {
    CHECK(rel(selberg_quadrature(2, t, ctx()), selberg_closed_form(2, t, ctx())) < 1e-8);
  }
  CHECK(rel(selberg_quadrature(3, 2.0, ctx()), selberg_closed_form(3, 2.0, ctx())) < 1e-8);
  CHECK_THROWS_AS(selberg_quadrature(4, 1.0, ctx()), DomainError);
}

TEST_CASE("exact part residual shrinks as t grows at L = 3") {
  double prev = 1e9;
  for (double t : {50.0, 100.0, 200.0}) {
    const ExactPartCheck c = exact_part_limit_check(3, t, ctx());
    const double r = std::fabs(c.residual.to_double());
    INFO("t = " << t);
    CHECK(r < prev);
    REQUIRE(c.selberg_closed.has_value());
    CHECK(rel(*c.selberg_quadrature, *c.selberg_closed) < 1e-8);
    prev = r;
  }
  CHECK_THROWS_AS(exact_part_limit_check(1, 10.0, ctx()), DomainError);
}

TEST_CASE("product formulas for D^{++} and D^{-+}") {
  const double t = 6.0;
  const int ell = 3;
  const Ledger pl = determinant_ledger(Kind::plain, t, 60, ctx(), true);
  const Real pp = d_pm_log(Kind::plus_plus, ell, t, ctx()) - t * t / 2;
  const Real mp = d_pm_log(Kind::minus_plus, ell, t, ctx()) - t * t / 2 - t;
  double prev_pp = 1e9, prev_mp = 1e9;
  for (int J : {6, 10, 16, 28}) {
    Real spp(256), smp(256);
    for (int j = ell; j <= J; ++j) {
      spp += pl.log_kappa_sq(2 * j + 1) - log1p(pl.pi0[static_cast<std::size_t>(2 * j + 2)]);
      smp += pl.log_kappa_sq(2 * j) - log1p(-pl.pi0[static_cast<std::size_t>(2 * j + 1)]);
    }
    const double gpp = dif(spp, pp), gmp = dif(smp, mp);
    INFO("J = " << J);
    CHECK(gpp < prev_pp);
    CHECK(gmp < prev_mp);
    prev_pp = gpp;
    prev_mp = gmp;
  }
  CHECK(prev_pp < 1e-25);
  CHECK(prev_mp < 1e-25);
}

TEST_CASE("exact-part combination at fixed L shrinks with t") {
  const double a = std::fabs(exact_combination_residual(3, 50.0, ctx()).to_double());
  const double b = std::fabs(exact_combination_residual(3, 100.0, ctx()).to_double());
  CHECK(b < a);
  CHECK_THROWS_AS(exact_combination_residual(1, 10.0, ctx()), DomainError);
}

TEST_CASE("E-side decomposition at t = 16, x = 0") {
  const EScalingReport r = e_double_scaling_check(16.0, 0.0, 3, 4, hm(), ctx());
  CHECK(r.ell == 16);
  CHECK(dif(r.total, r.direct) < 1e-25);
  for (std::size_t k = 1; k < r.caps.size(); ++k) {
    INFO("cap " << r.caps[k]);
    CHECK(abs(r.odd_residuals[k]) < abs(r.odd_residuals[k - 1]));
    CHECK(abs(r.even_residuals[k]) < abs(r.even_residuals[k - 1]));
  }
  const auto doc = nlohmann::json::parse(to_json(r, 20));
  CHECK(doc["pi_tails"].size() == r.caps.size());
  CHECK_THROWS_AS(e_double_scaling_check(16.0, 0.0, 1, 4, hm(), ctx()), DomainError);
  CHECK_THROWS_AS(e_double_scaling_check(16.0, -5.0, 3, 4, hm(), ctx()), DomainError);
}
