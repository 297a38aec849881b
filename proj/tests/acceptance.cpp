// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "tw/fredholm.hpp"
#include "tw/painleve2.hpp"
#include "tw/specialfn.hpp"
#include "tw/toeplitz.hpp"
#include "tw/twdist.hpp"

using namespace tw;

namespace {

const PrecisionContext kCtx(256, 1e-30);
const PrecisionContext kDist(256, 1e-15);

Real R(double x) { return Real(x, 256); }
double dif(const Real& a, const Real& b) { return abs(a - b).to_double(); }
double rel(const Real& a, const Real& b) { return (abs(a - b) / abs(b)).to_double(); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string ladder(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : ", ") + sci(x);
  return s;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

struct Env {
  painleve2::HMSolution hm;
  twdist::TailConstants consts;
};

Outcome oracle(const Env& e) {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int x = -8; x <= 4; ++x) {
    const Real p = twdist::tw_cdf(R(x), 2, e.hm, e.consts, kDist);
    worst = std::max(worst, dif(p, fredholm::f2_fredholm_at(R(x), 80, kCtx)));
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-10 && secs <= 60.0, "max dev " + sci(worst) + " (<= 1e-10), " + sci(secs) + " s (<= 60)"};
}

Outcome left_right(const Env& e) {
  double wf = 0.0, we = 0.0;
  for (double x = -9.0; x <= -1.0; x += 0.5) {
    const auto l = twdist::cdf_left(R(x), e.hm, e.consts, kDist);
    const auto r = twdist::cdf_right(R(x), e.hm, kDist);
    wf = std::max(wf, dif(l.F, r.F));
    we = std::max(we, dif(l.E, r.E));
  }
  return {wf <= 1e-8 && we <= 1e-8, "F " + sci(wf) + ", E " + sci(we) + " (<= 1e-8)"};
}

Outcome totals(const Env& e) {
  double worst = 0.0;
  for (double c : {-2.0, -4.0, -6.0}) {
    const auto t = twdist::total_integral_check(R(c), e.hm, e.consts, kDist);
    worst = std::max({worst, dif(t.lhs_r, t.rhs_r), dif(t.lhs_q, t.rhs_q)});
  }
  return {worst <= 1e-6, "max |lhs - rhs| " + sci(worst) + " (<= 1e-6)"};
}

Outcome tail_constants(const Env& e) {
  const Real x = R(-9);
  const Real a = R(9);
  const Real a3 = a * a * a;
  const Real a32 = pow_rational(a, 3, 2);
  const Real s = a32 / (3 * sqrt(R(2)));
  const Real f2 = twdist::tw_cdf(x, 2, e.hm, e.consts, kDist);
  const Real f1 = twdist::tw_cdf(x, 1, e.hm, e.consts, kDist);
  const Real f4 = twdist::tw_cdf(x, 4, e.hm, e.consts, kDist);
  const Real fit2 = f2 * exp(a3 / 12) * pow_rational(a, 1, 8) / (1 + 3 / (64 * a3));
  const Real fit1 = f1 * exp(a3 / 24 + s) * pow_rational(a, 1, 16);
  const Real fit4 = f4 * exp(a3 / 24 - s) * pow_rational(a, 1, 16);
  const double r2 = rel(fit2, e.consts.tau2), r1 = rel(fit1, e.consts.tau1), r4 = rel(fit4, e.consts.tau4);
  return {r2 <= 1e-3 && r1 <= 1e-2 && r4 <= 1e-2,
          "tau2 " + sci(r2) + " (<= 1e-3), tau1 " + sci(r1) + ", tau4 " + sci(r4) + " (<= 1e-2)"};
}

Outcome special_functions() {
  const PrecisionContext c = PrecisionContext::with_bits(256);
  double rec = 0.0;
  for (double z = 0.5; z <= 10.5; z += 1.0) {
    const Real zr = R(z);
    rec = std::max(rec, dif(specialfn::log_barnes_g(zr + 1.0, c),
                            specialfn::log_gamma(zr, c) + specialfn::log_barnes_g(zr, c)));
  }
  const Real zp = specialfn::zeta_prime_minus_one(c);
  const Real half = log(R(2)) / 24 - log(mp::pi(256)) / 4 + 1.5 * zp;
  const double gh = dif(specialfn::log_barnes_g(R(0.5), c), half);

  // log G(z+1) = log(1! 2! ... (z-1)!) minus the smooth part, fitted as
  // c0 + c2 z^-2 + c4 z^-4 through z = 40, 60, 80
  std::vector<Real> zs{R(40), R(60), R(80)}, res;
  for (const Real& z : zs) {
    Real log_g(256), log_fact(256);
    for (int k = 1; k < static_cast<int>(z.to_double()); ++k) {
      log_fact += log(R(k));
      log_g += log_fact;
    }
    res.push_back(log_g - (z * z / 2 * log(z) - 0.75 * z * z + z / 2 * log(2 * mp::pi(256)) - log(z) / 12));
  }
  // Lagrange extrapolation in u = z^-2 to u = 0
  std::vector<Real> u;
  for (const Real& z : zs) u.push_back(1 / (z * z));
  Real c0(256);
  for (std::size_t i = 0; i < 3; ++i) {
    Real w(1.0, 256);
    for (std::size_t j = 0; j < 3; ++j) {
      if (j != i) w *= u[j] / (u[j] - u[i]);
    }
    c0 += w * res[i];
  }
  const double fit = dif(c0, zp);
  return {rec <= 1e-20 && gh <= 1e-20 && fit <= 1e-8,
          "recurrence " + sci(rec) + ", G(1/2) " + sci(gh) + " (<= 1e-20), fit " + sci(fit) + " (<= 1e-8)"};
}

Outcome telescoping(const Env& e) {
  double worst = 0.0;
  for (int L : {4, 8}) {
    const auto r = toeplitz::sum_parts_report(20.0, -1.0, L, 4, e.hm, kCtx);
    worst = std::max(worst, dif(r.total, r.direct));
  }
  return {worst <= 1e-20, "max discrepancy " + sci(worst) + " (<= 1e-20)"};
}

Outcome double_scaling(const Env& e) {
  const auto t0 = std::chrono::steady_clock::now();
  const Real f2 = twdist::tw_cdf(R(-1), 2, e.hm, e.consts, kDist);
  std::vector<double> gaps;
  for (double t : {8.0, 16.0, 32.0}) {
    const int n = toeplitz::floor_n(t, -1.0);
    const Real ld = toeplitz::toeplitz_log_det({t, n, toeplitz::Kind::plain}, kCtx);
    gaps.push_back(dif(exp(ld - R(t * t)), f2));
  }
  const double secs = seconds_since(t0);
  return {strictly_decreasing(gaps) && secs <= 600.0, ladder(gaps) + ", " + sci(secs) + " s (<= 600)"};
}

Outcome airy_prediction() {
  const auto led = toeplitz::determinant_ledger(toeplitz::Kind::plain, 50.0, 81, kCtx);
  bool ok = true;
  double worst_ratio = 0.0;
  for (int q = 20; q <= 80; q += 10) {
    const Real exact = led.log_kappa_inv_sq(q - 1);
    const double corr = dif(exact, toeplitz::airy_log_kappa_prediction(q, 50.0));
    const double lead = dif(exact, toeplitz::airy_log_kappa_leading(q, 50.0));
    const double env = toeplitz::airy_error_envelope(q, 50.0);
    ok = ok && corr < lead && corr <= 10.0 * env;
    worst_ratio = std::max(worst_ratio, corr / env);
  }
  return {ok, "corrected beats leading at every q; max error/envelope " + sci(worst_ratio) + " (<= 10)"};
}

Outcome verblunsky() {
  const auto led = toeplitz::determinant_ledger(toeplitz::Kind::plain, 3.0, 21, kCtx, true);
  double worst = 0.0;
  for (int q = 1; q <= 20; ++q) {
    const Real p = toeplitz::pi_zero(q, 3.0, kCtx);
    worst = std::max({worst, dif(1.0 - p * p, exp(led.log_kappa_sq(q - 1) - led.log_kappa_sq(q))),
                      dif(p, led.pi0[static_cast<std::size_t>(q)])});
  }
  const auto big = toeplitz::determinant_ledger(toeplitz::Kind::plain, 50.0, 91, kCtx, true);
  int wrong = 0;
  for (int q = 10; q <= 90; ++q) {
    if ((big.pi0[static_cast<std::size_t>(q)] < 0.0) != (q % 2 == 1)) ++wrong;
  }
  return {worst <= 1e-28 && wrong == 0,
          "identity " + sci(worst) + " (<= 1e-28), sign violations " + std::to_string(wrong)};
}

Outcome e_side(const Env& e) {
  std::vector<double> a;
  for (auto [L, t] : {std::pair{3, 50.0}, std::pair{3, 100.0}, std::pair{5, 100.0}}) {
    a.push_back(std::fabs(toeplitz::exact_combination_residual(L, t, kCtx).to_double()));
  }
  const auto rep = toeplitz::e_double_scaling_check(16.0, 0.0, 3, 4, e.hm, kCtx);
  std::vector<double> b;
  for (const Real& r : rep.odd_residuals) b.push_back(std::fabs(r.to_double()));
  const auto fe = twdist::cdf_right(R(-1), e.hm, kDist);
  std::vector<double> c;
  for (double t : {8.0, 16.0, 32.0}) {
    const int ell = toeplitz::floor_ell(t, -1.0);
    const Real d = toeplitz::d_pm_log(toeplitz::Kind::plus_plus, ell - 1, t, kCtx);
    c.push_back(dif(exp(d - R(t * t / 2)), fe.F * fe.E));
  }
  const bool pa = strictly_decreasing(a), pb = strictly_decreasing(b), pc = strictly_decreasing(c);
  return {pa && pb && pc, std::string("(a) ") + (pa ? "pass " : "FAIL ") + ladder(a) + "; (b) " +
                              (pb ? "pass " : "FAIL ") + ladder(b) + "; (c) " + (pc ? "pass " : "FAIL ") + ladder(c)};
}

Outcome selberg() {
  const double r2 = rel(toeplitz::selberg_quadrature(2, 5.0, kCtx), toeplitz::selberg_closed_form(2, 5.0, kCtx));
  const double r1 = rel(toeplitz::selberg_closed_form(1, 5.0, kCtx), sqrt(mp::pi(256) / 5));
  return {r2 <= 1e-8 && r1 <= 1e-70, "L=2 rel " + sci(r2) + " (<= 1e-8), L=1 rel " + sci(r1)};
}

}  // namespace

int main() {
  std::setvbuf(stdout, nullptr, _IOLBF, 0);
  const Env env{painleve2::solve_hastings_mcleod(-12.0, 8.0, 2000, kCtx), twdist::tail_constants(kCtx)};
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 oracle equivalence", [&] { return oracle(env); }},
      {"2 left/right representations", [&] { return left_right(env); }},
      {"3 total integrals", [&] { return totals(env); }},
      {"4 tail constants", [&] { return tail_constants(env); }},
      {"5 special functions", [] { return special_functions(); }},
      {"6 telescoping", [&] { return telescoping(env); }},
      {"7 double-scaling ladder", [&] { return double_scaling(env); }},
      {"8 Airy-regime prediction", [] { return airy_prediction(); }},
      {"9 Verblunsky and sign pattern", [] { return verblunsky(); }},
      {"10 E-side scaffolding", [&] { return e_side(env); }},
      {"11 Selberg", [] { return selberg(); }},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& ex) {
      o = {false, std::string("error: ") + ex.what()};
    }
    if (!o.pass) ++failed;
    std::printf("criterion %s: %s  %s\n", name.c_str(), o.pass ? "PASS" : "FAIL", o.detail.c_str());
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
