#include "tw/twdist.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "tw/quadrature.hpp"
#include "tw/specialfn.hpp"

namespace tw::twdist {
namespace {

struct Integrals {
  Real r;  // R part
  Real q;  // q part
};

Real r_field(const Real& y, const Real& q, const Real& qp) {
  const Real q2 = q * q;
  return qp * qp - y * q2 - q2 * q2;
}

void require_in_grid(const Real& x, const HMSolution& sol, const char* who) {
  if (!x.is_finite() || !sol.contains(x)) throw DomainError(std::string(who) + ": x outside the solution grid");
}

// int_{x_r}^inf Ai, Gauss-Legendre on unit panels out to where Ai is below
// the working precision.
Real airy_integral_tail(const Real& xr, const PrecisionContext& ctx) {
  const long bits = ctx.precision_bits();
  const double x0 = xr.to_double();
  const double z0 = 2.0 / 3.0 * std::pow(x0, 1.5);
  const double u = std::pow(1.5 * (z0 + static_cast<double>(bits) * std::log(2.0) + 10.0), 2.0 / 3.0);
  const int panels = std::max(1, static_cast<int>(std::ceil((u - x0) / 1.0)));
  const Real upper = xr + Real(u - x0, bits);
  return quad::integrate([&](const Real& s) { return specialfn::airy_ai(s, ctx).ai; }, xr, upper, 24, panels);
}

Integrals right_integrals(const Real& x, const HMSolution& sol, const PrecisionContext& ctx) {
  const PrecisionContext wctx = ctx.with_precision(sol.precision_bits());
  const Real& xr = sol.x_right();
  const auto a = specialfn::airy_ai(xr, wctx);
  // int_{x_r}^inf R with R replaced by its Airy form int_s^inf Ai^2 = Ai'^2 - s Ai^2
  const Real tail_r =
      Real(2, 3, sol.precision_bits()) * (xr * xr * a.ai * a.ai - xr * a.ai_prime * a.ai_prime) -
      a.ai * a.ai_prime / 3;
  Integrals out;
  out.r = sol.integrate(r_field, x, xr) + tail_r;
  out.q = sol.integrate([](const Real&, const Real& q, const Real&) { return q; }, x, xr) +
          airy_integral_tail(xr, wctx);
  return out;
}

// Regularized integrals over (-inf, x]; the 1/(8y) term is integrated in
// closed form and the part beyond x_left comes from the asymptotic series.
Integrals left_integrals(const Real& x, const HMSolution& sol, const PrecisionContext& ctx) {
  const PrecisionContext wctx = ctx.with_precision(sol.precision_bits());
  const Real& xl = sol.x_left();
  const auto tails = painleve2::left_tail_integrals(xl, wctx);
  if (tails.error_bound > ctx.tolerance()) {
    throw PrecisionError("left tail series error " + std::to_string(tails.error_bound) +
                         " exceeds tolerance; solve on a wider window (more negative x_left)");
  }
  Integrals out;
  out.r = tails.r_regularized +
          sol.integrate([](const Real& y, const Real& q, const Real& qp) { return r_field(y, q, qp) - y * y / 4; },
                        xl, x) +
          (log(-x) - log(-xl)) / 8;
  out.q = tails.q_regularized +
          sol.integrate([](const Real& y, const Real& q, const Real&) { return q - sqrt(-y / 2); }, xl, x);
  return out;
}

bool agree(const Real& a, const Real& b, double rel) { return abs(a - b) <= abs(b) * rel; }

void check_beta(int beta) {
  if (beta != 1 && beta != 2 && beta != 4) throw DomainError("beta must be 1, 2 or 4");
}

}  // namespace

const char* to_string(Representation r) { return r == Representation::left ? "left" : "right"; }

TailConstants tail_constants(const PrecisionContext& ctx) {
  const long bits = ctx.precision_bits();
  TailConstants c;
  c.zeta_prime_minus_one = specialfn::zeta_prime_minus_one(ctx);
  const Real two(2.0, bits);
  const Real half_z = exp(c.zeta_prime_minus_one / 2);
  c.tau2 = pow(two, Real(1, 24, bits)) * exp(c.zeta_prime_minus_one);
  c.tau1 = pow(two, Real(-11, 48, bits)) * half_z;
  c.tau4 = pow(two, Real(-35, 48, bits)) * half_z;
  c.f_prefactor = pow(two, Real(1, 48, bits)) * half_z;
  c.e_prefactor = pow(two, Real(-1, 4, bits));
  return c;
}

FE cdf_right(const Real& x, const HMSolution& sol, const PrecisionContext& ctx) {
  require_in_grid(x, sol, "cdf_right");
  const Integrals in = right_integrals(x, sol, ctx);
  return {exp(-in.r / 2), exp(-in.q / 2)};
}

FE cdf_left(const Real& x, const HMSolution& sol, const TailConstants& consts, const PrecisionContext& ctx) {
  if (!(x < 0.0)) throw DomainError("cdf_left: x must be negative");
  require_in_grid(x, sol, "cdf_left");
  const Integrals in = left_integrals(x, sol, ctx);
  const Real ax = -x;
  const Real log_f = log(consts.f_prefactor) - ax * ax * ax / 24 - log(ax) / 16 + in.r / 2;
  const Real log_e = log(consts.e_prefactor) - pow_rational(ax, 3, 2) / (3 * sqrt(Real(2.0, ax.precision()))) +
                     in.q / 2;
  return {exp(log_f), exp(log_e)};
}

TWPoint make_point(const Real& x, const FE& fe, Representation rep) {
  TWPoint p;
  p.x = x;
  p.F = fe.F;
  p.E = fe.E;
  p.F1 = fe.F * fe.E;
  p.F2 = fe.F * fe.F;
  p.F4 = (fe.E + 1.0 / fe.E) * fe.F / 2;
  p.representation = rep;
  return p;
}

TWPoint tw_point(const Real& x, const HMSolution& sol, const TailConstants& consts, const PrecisionContext& ctx) {
  require_in_grid(x, sol, "tw_cdf");
  const FE right = cdf_right(x, sol, ctx);
  if (!(x < 0.0)) return make_point(x, right, Representation::right);
  const FE left = cdf_left(x, sol, consts, ctx);
  if (!agree(left.F, right.F, kRepresentationAgreement) || !agree(left.E, right.E, kRepresentationAgreement)) {
    throw ConsistencyError("left and right representations disagree at x = " + x.to_string(10));
  }
  if (x < -1.0) return make_point(x, left, Representation::left);
  return make_point(x, right, Representation::right);
}

Real tw_cdf(const Real& x, int beta, const HMSolution& sol, const TailConstants& consts,
            const PrecisionContext& ctx) {
  check_beta(beta);
  const TWPoint p = tw_point(x, sol, consts, ctx);
  if (beta == 1) return p.F1;
  if (beta == 2) return p.F2;
  return p.F4;
}

TotalIntegrals total_integral_check(const Real& c, const HMSolution& sol, const TailConstants& consts,
                                    const PrecisionContext& ctx) {
  if (!(c < 0.0)) throw DomainError("total_integral_check: c must be negative");
  require_in_grid(c, sol, "total_integral_check");
  const Integrals right = right_integrals(c, sol, ctx);
  const Integrals left = left_integrals(c, sol, ctx);
  const long bits = sol.precision_bits();
  const Real ac = -c;
  const Real l2 = mp::ln2(bits);
  TotalIntegrals t;
  t.lhs_r = right.r + left.r;
  t.rhs_r = -l2 / 24 - consts.zeta_prime_minus_one + ac * ac * ac / 12 + log(ac) / 8;
  t.lhs_q = right.q + left.q;
  t.rhs_q = l2 / 2 + sqrt(Real(2.0, bits)) / 3 * pow_rational(ac, 3, 2);
  return t;
}

Real tail_left(const Real& x, int beta, const TailConstants& consts) {
  check_beta(beta);
  if (!(x <= -3.0)) throw DomainError("tail_left: requires x <= -3");
  const long bits = std::max<long>(x.precision(), consts.tau2.precision());
  const Real ax = -x.at_precision(bits);
  const Real ax3 = ax * ax * ax;
  const Real ax32 = pow_rational(ax, 3, 2);
  const Real rt2 = sqrt(Real(2.0, bits));
  if (beta == 2) {
    return consts.tau2 * exp(-ax3 / 12) / pow_rational(ax, 1, 8) * (1.0 + 3.0 / (64.0 * ax3));
  }
  const double s = beta == 1 ? -1.0 : 1.0;
  const Real& tau = beta == 1 ? consts.tau1 : consts.tau4;
  return tau * exp(-ax3 / 24 + s * ax32 / (3 * rt2)) / pow_rational(ax, 1, 16) *
         (1.0 + s / (24.0 * rt2 * ax32));
}

RightTails tail_right(const Real& x) {
  if (!(x >= 3.0)) throw DomainError("tail_right: requires x >= 3");
  const long bits = x.precision();
  const Real x32 = pow_rational(x, 3, 2);
  const Real pi = mp::pi(bits);
  RightTails t;
  t.F = 1.0 - exp(-4.0 * x32 / 3) / (32.0 * pi * x32) * (1.0 - 35.0 / (24.0 * x32));
  // the prefactor power is x^(3/4): 1 - E ~ (1/2) int_x^inf Ai
  t.E = 1.0 - exp(-2.0 * x32 / 3) / (4.0 * sqrt(pi) * pow_rational(x, 3, 4)) * (1.0 - 41.0 / (48.0 * x32));
  return t;
}

std::string points_csv(const std::vector<TWPoint>& pts, int digits) {
  std::ostringstream os;
  os << "x,F,E,F1,F2,F4,representation\n";
  for (const auto& p : pts) {
    os << p.x.to_string(digits) << ',' << p.F.to_string(digits) << ',' << p.E.to_string(digits) << ','
       << p.F1.to_string(digits) << ',' << p.F2.to_string(digits) << ',' << p.F4.to_string(digits) << ','
       << to_string(p.representation) << '\n';
  }
  return os.str();
}

std::string points_json(const std::vector<TWPoint>& pts, int digits) {
  nlohmann::ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["kind"] = "tw_points";
  auto arr = nlohmann::ordered_json::array();
  for (const auto& p : pts) {
    nlohmann::ordered_json o;
    o["x"] = p.x.to_string(digits);
    o["F"] = p.F.to_string(digits);
    o["E"] = p.E.to_string(digits);
    o["F1"] = p.F1.to_string(digits);
    o["F2"] = p.F2.to_string(digits);
    o["F4"] = p.F4.to_string(digits);
    o["representation"] = to_string(p.representation);
    arr.push_back(std::move(o));
  }
  doc["points"] = std::move(arr);
  return doc.dump(2) + "\n";
}

}  // namespace tw::twdist
