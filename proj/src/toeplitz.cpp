#include "tw/toeplitz.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "tw/linalg.hpp"
#include "tw/quadrature.hpp"
#include "tw/specialfn.hpp"

namespace tw::toeplitz {
namespace {

constexpr double kLog2E = 1.4426950408889634;
constexpr long kPredictionBits = 128;

void check_t(double t, const char* who) {
  if (!std::isfinite(t) || !(t > 0.0)) throw DomainError(std::string(who) + ": t must be positive and finite");
}

void check_n(int n, const char* who) {
  if (n < 1 || n > kMaxDimension) {
    throw DomainError(std::string(who) + ": matrix size " + std::to_string(n) + " outside [1, " +
                      std::to_string(kMaxDimension) + "]");
  }
}

std::vector<Real> moments(int max_j, double t, long bits) {
  return specialfn::bessel_i_row(max_j, Real(2.0 * t, bits), PrecisionContext::with_bits(bits));
}

linalg::Matrix<Real> moment_matrix(Kind kind, int n, const std::vector<Real>& m, long bits) {
  linalg::Matrix<Real> a(n, n, Real(bits));
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      Real v = m[static_cast<std::size_t>(std::abs(j - k))];
      if (kind == Kind::plus_plus) v -= m[static_cast<std::size_t>(j + k + 2)];
      if (kind == Kind::minus_plus) v += m[static_cast<std::size_t>(j + k + 1)];
      a(j, k) = std::move(v);
    }
  }
  return a;
}

struct Factor {
  std::vector<Real> log_d;
  std::vector<Real> pi0;
};

Factor factor_at(Kind kind, double t, int n, bool with_pi, long bits) {
  auto a = moment_matrix(kind, n, moments(2 * n + 2, t, bits), bits);
  linalg::cholesky_in_place(a);
  Factor f;
  f.log_d.reserve(static_cast<std::size_t>(n) + 1);
  f.log_d.emplace_back(0.0, bits);
  for (int j = 0; j < n; ++j) f.log_d.push_back(f.log_d.back() + 2 * log(a(j, j)));
  if (with_pi) {
    // row q of L^{-1} holds the orthonormal polynomial; its constant term
    // times L_qq is the monic constant term
    std::vector<Real> e0(static_cast<std::size_t>(n), Real(bits));
    e0[0] = Real(1.0, bits);
    const auto y = linalg::forward_substitute(a, std::move(e0), static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) f.pi0.push_back(a(q, q) * y[static_cast<std::size_t>(q)]);
  }
  return f;
}

bool agrees(const Real& a, const Real& b, double tol) {
  Real scale = abs(b);
  if (scale < 1.0) scale = Real(1.0, b.precision());
  return abs(a - b) <= scale * tol;
}

bool agrees(const std::vector<Real>& a, const std::vector<Real>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!agrees(a[i], b[i], tol)) return false;
  }
  return true;
}

bool agrees(const Factor& a, const Factor& b, double tol) {
  return agrees(a.log_d, b.log_d, tol) && agrees(a.pi0, b.pi0, tol);
}

template <class Result>
struct Adapted {
  Result value;
  long bits;
};

// Runs fn at the guarded precision and keeps doubling until two consecutive
// results agree. A failed factorization below the last allowed precision
// just triggers another doubling.
template <class Fn>
auto adaptive(const PrecisionContext& ctx, double t, int n, Fn&& fn) {
  using Result = decltype(fn(0L));
  long bits = ctx.precision_bits() + guard_bits(t, n);
  std::optional<Result> prev;
  for (int i = 0; i <= ctx.max_refinements(); ++i, bits *= 2) {
    try {
      Result cur = fn(bits);
      if (prev && agrees(*prev, cur, ctx.tolerance())) return Adapted<Result>{std::move(cur), bits};
      prev = std::move(cur);
    } catch (const ConsistencyError&) {
      if (i == ctx.max_refinements()) throw;
      prev.reset();
    }
  }
  throw PrecisionError("toeplitz: no agreement between consecutive precisions up to " +
                       std::to_string(bits / 2) + " bits");
}

Real lu_log_det(Kind kind, double t, int n, long bits) {
  const auto a = moment_matrix(kind, n, moments(2 * n + 2, t, bits), bits);
  Real ld(bits);
  int sign = 1;
  linalg::lu_solve(a, std::vector<Real>{}, &ld, &sign);
  if (sign < 0) throw ConsistencyError("toeplitz: negative determinant");
  return ld;
}

bool airy_valid(int q, double t) {
  return q >= 1 && q < 2.0 * t && -AiryPrediction::correction(q, t) < 0.5;
}

std::string fmt(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string fmt(const Real& v, int digits) { return v.to_string(digits); }

Real log_f2(const Real& x, const painleve2::HMSolution& sol, const PrecisionContext& ctx) {
  const auto fe = twdist::cdf_right(x, sol, ctx);
  return 2 * log(fe.F);
}

Real log_e(const Real& x, const painleve2::HMSolution& sol, const PrecisionContext& ctx) {
  return log(twdist::cdf_right(x, sol, ctx).E);
}

}  // namespace

const char* to_string(Kind k) {
  switch (k) {
    case Kind::plain: return "plain";
    case Kind::plus_plus: return "plus_plus";
    case Kind::minus_plus: return "minus_plus";
  }
  return "?";
}

long guard_bits(double t, int n) {
  // D_n <= e^{t^2}, and for small n the Hadamard bound I_0^n <= e^{2tn} against
  // D_n >= e^{-2tn} caps the cancellation
  const double depth = std::min(2.0 * t * t, 4.0 * t * n);
  return static_cast<long>(std::ceil(depth * kLog2E)) + 64;
}

Real Ledger::log_kappa_sq(int q) const {
  if (q < 0 || q >= size()) throw DomainError("ledger: kappa index out of range");
  return log_d[static_cast<std::size_t>(q)] - log_d[static_cast<std::size_t>(q) + 1];
}

Real Ledger::log_kappa_inv_sq(int q) const { return -log_kappa_sq(q); }

Ledger determinant_ledger(Kind kind, double t, int n, const PrecisionContext& ctx, bool with_pi) {
  check_t(t, "determinant_ledger");
  check_n(n, "determinant_ledger");
  if (with_pi && kind != Kind::plain) throw DomainError("determinant_ledger: pi_q(0) needs the plain matrix");
  auto r = adaptive(ctx, t, n, [&](long bits) { return factor_at(kind, t, n, with_pi, bits); });
  Ledger l;
  l.kind = kind;
  l.t = t;
  l.log_d = std::move(r.value.log_d);
  l.pi0 = std::move(r.value.pi0);
  l.precision_bits_used = r.bits;
  return l;
}

Real toeplitz_log_det(const MomentMatrixSpec& spec, const PrecisionContext& ctx) {
  return determinant_ledger(spec.kind, spec.t, spec.n, ctx).log_d.back();
}

Real kappa_sq(int q, double t, const PrecisionContext& ctx) {
  if (q < 0) throw DomainError("kappa_sq: q must be >= 0");
  const Real v = determinant_ledger(Kind::plain, t, q + 1, ctx).log_kappa_sq(q);
  if (!(v < 0.0)) throw ConsistencyError("kappa_sq: kappa_q^2 >= 1 at q = " + std::to_string(q));
  return v;
}

Real pi_zero(int q, double t, const PrecisionContext& ctx) {
  check_t(t, "pi_zero");
  if (q < 1) throw DomainError("pi_zero: q must be >= 1");
  check_n(q, "pi_zero");
  return adaptive(ctx, t, q, [&](long bits) {
           const auto m = moments(2 * q + 2, t, bits);
           const auto a = moment_matrix(Kind::plain, q, m, bits);
           std::vector<Real> rhs;
           rhs.reserve(static_cast<std::size_t>(q));
           for (int k = 0; k < q; ++k) rhs.push_back(-m[static_cast<std::size_t>(q - k)]);
           return linalg::lu_solve(a, std::move(rhs))[0];
         })
      .value;
}

Real d_pm_log(Kind kind, int ell, double t, const PrecisionContext& ctx) {
  if (kind == Kind::plain) throw DomainError("d_pm_log: kind must be plus_plus or minus_plus");
  if (ell < 1) throw DomainError("d_pm_log: ell must be >= 1");
  return determinant_ledger(kind, t, ell, ctx).log_d.back();
}

double AiryPrediction::correction(int q, double t) { return -1.0 / (8.0 * (2.0 * t - q)) - 1.0 / (12.0 * q); }

Real airy_log_kappa_leading(int q, double t) {
  check_t(t, "airy_log_kappa_leading");
  if (q < 1 || !(q < 2.0 * t)) throw DomainError("airy prediction: requires 1 <= q < 2t");
  const Real g = Real(2.0 * t, kPredictionBits) / static_cast<long>(q);
  return -static_cast<long>(q) * (1.0 - g + log(g)) + log(g) / 2;
}

Real airy_log_kappa_prediction(int q, double t) {
  if (!airy_valid(q, t)) throw DomainError("airy prediction: q too close to 0 or 2t for the correction");
  return airy_log_kappa_leading(q, t) - log1p(Real(AiryPrediction::correction(q, t), kPredictionBits));
}

Real airy_pi_prediction(int q, double t) {
  check_t(t, "airy_pi_prediction");
  if (q < 1 || !(q < 2.0 * t)) throw DomainError("airy_pi_prediction: requires 1 <= q < 2t");
  const Real mag = sqrt(Real(2.0 * t - q, kPredictionBits) / Real(2.0 * t, kPredictionBits));
  return q % 2 == 0 ? mag : -mag;
}

double airy_error_envelope(int q, double t) {
  const double tt = 2.0 * t;
  const double d = tt - q;
  if (q < 1 || !(d > 0.0)) throw DomainError("airy_error_envelope: requires 1 <= q < 2t");
  return tt * tt / (std::pow(q, 1.5) * std::pow(d, 2.5)) + tt * tt / (double(q) * q * d * d);
}

ToeplitzScan toeplitz_scan(double t, int q_min, int q_max, const PrecisionContext& ctx) {
  if (q_min < 1 || q_max < q_min) throw DomainError("toeplitz_scan: need 1 <= q_min <= q_max");
  const Ledger led = determinant_ledger(Kind::plain, t, q_max + 1, ctx, true);
  ToeplitzScan s;
  s.t = t;
  s.precision_bits_used = led.precision_bits_used;
  for (int q = q_min; q <= q_max; ++q) {
    ScanRecord r;
    r.q = q;
    r.gamma = Real(2.0 * t, led.precision_bits_used) / static_cast<long>(q);
    r.log_kappa_sq = led.log_kappa_sq(q);
    r.pi0 = led.pi0[static_cast<std::size_t>(q)];
    if (airy_valid(q + 1, t)) r.log_kappa_sq_airy_pred = -airy_log_kappa_prediction(q + 1, t);
    if (q < 2.0 * t) r.pi0_airy_pred = airy_pi_prediction(q, t);
    s.records.push_back(std::move(r));
  }
  return s;
}

std::string scan_csv(const ToeplitzScan& scan, int digits) {
  std::ostringstream os;
  os << "t,q,gamma,log_kappa_sq,pi0,log_kappa_sq_airy_pred,pi0_airy_pred,precision_bits_used\n";
  for (const auto& r : scan.records) {
    os << fmt(scan.t) << ',' << r.q << ',' << fmt(r.gamma, digits) << ',' << fmt(r.log_kappa_sq, digits) << ','
       << fmt(r.pi0, digits) << ',';
    if (r.log_kappa_sq_airy_pred) os << fmt(*r.log_kappa_sq_airy_pred, digits);
    os << ',';
    if (r.pi0_airy_pred) os << fmt(*r.pi0_airy_pred, digits);
    os << ',' << scan.precision_bits_used << '\n';
  }
  return os.str();
}

std::string scan_json(const ToeplitzScan& scan, int digits) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["kind"] = "toeplitz_scan";
  doc["t"] = scan.t;
  doc["precision_bits_used"] = scan.precision_bits_used;
  auto arr = ordered_json::array();
  for (const auto& r : scan.records) {
    ordered_json o;
    o["q"] = r.q;
    o["gamma"] = fmt(r.gamma, digits);
    o["log_kappa_sq"] = fmt(r.log_kappa_sq, digits);
    o["pi0"] = fmt(r.pi0, digits);
    o["log_kappa_sq_airy_pred"] = r.log_kappa_sq_airy_pred ? ordered_json(fmt(*r.log_kappa_sq_airy_pred, digits))
                                                           : ordered_json(nullptr);
    o["pi0_airy_pred"] = r.pi0_airy_pred ? ordered_json(fmt(*r.pi0_airy_pred, digits)) : ordered_json(nullptr);
    arr.push_back(std::move(o));
  }
  doc["records"] = std::move(arr);
  return doc.dump(2) + "\n";
}

int floor_n(double t, double x) { return static_cast<int>(std::floor(2.0 * t + x * std::cbrt(t))); }
int floor_ell(double t, double x) { return static_cast<int>(std::floor(t + 0.5 * x * std::cbrt(t))); }

SumPartsReport sum_parts_report(double t, double x, int L, int M, const painleve2::HMSolution& sol,
                                const PrecisionContext& ctx) {
  check_t(t, "sum_parts_report");
  if (L < 1 || M < 1) throw DomainError("sum_parts_report: L and M must be positive");
  if (!(x > -M)) throw DomainError("sum_parts_report: requires x > -M");
  if (!(L < 2.0 * t - M * std::cbrt(t) - 1.0)) throw DomainError("sum_parts_report: requires L < 2t - M t^(1/3) - 1");
  SumPartsReport r;
  r.t = t;
  r.x = x;
  r.L = L;
  r.M = M;
  r.n = floor_n(t, x);
  r.q_split = static_cast<int>(std::floor(2.0 * t - M * std::cbrt(t)));
  const Ledger led = determinant_ledger(Kind::plain, t, r.n, ctx);
  const long bits = led.precision_bits_used;
  r.precision_bits_used = bits;
  const Real tt = Real(t, bits) * Real(t, bits);
  r.exact_part = led.log_d[static_cast<std::size_t>(L)];
  r.airy_part = Real(bits);
  for (int q = L + 1; q <= r.q_split - 1; ++q) r.airy_part += led.log_kappa_inv_sq(q - 1);
  r.painleve_part = Real(bits);
  for (int q = r.q_split; q <= r.n; ++q) r.painleve_part += led.log_kappa_inv_sq(q - 1);
  r.total = -tt + r.exact_part + r.airy_part + r.painleve_part;
  r.direct = -tt + adaptive(ctx, t, r.n, [&](long b) { return lu_log_det(Kind::plain, t, r.n, b); }).value;

  const long pb = ctx.precision_bits();
  const Real Lr(static_cast<double>(L), pb);
  const Real Mr(static_cast<double>(M), pb);
  const Real tr(t, pb);
  const Real l2 = mp::ln2(pb);
  const Real zeta = specialfn::zeta_prime_minus_one(ctx);
  const Real log2t = log(2 * tr);
  r.exact_limit = 2 * Lr * tr - Lr * Lr / 2 * log2t + (Lr * Lr / 2 - Real(1, 12, pb)) * log(Lr) -
                  Real(3, 4, pb) * Lr * Lr + zeta;
  r.airy_limit = tr * tr - 2 * tr * Lr + Lr * Lr / 2 * log2t - (Lr * Lr / 2 - Real(1, 12, pb)) * log(Lr) +
                 Real(3, 4, pb) * Lr * Lr - Mr * Mr * Mr / 12 - log(Mr) / 8 + l2 / 24;
  const Real xs(x, sol.precision_bits());
  const Real lf2 = log_f2(xs, sol, ctx);
  // int_{-M}^x R, positive: kappa_q^2 ~ 1 - R / t^(1/3)
  r.painleve_limit = lf2 - log_f2(Real(-static_cast<double>(M), sol.precision_bits()), sol, ctx);
  r.f2_reference = exp(lf2);
  return r;
}

std::string to_json(const SumPartsReport& r, int digits) {
  nlohmann::ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["kind"] = "sum_parts_report";
  doc["t"] = r.t;
  doc["x"] = r.x;
  doc["L"] = r.L;
  doc["M"] = r.M;
  doc["n"] = r.n;
  doc["q_split"] = r.q_split;
  doc["precision_bits_used"] = r.precision_bits_used;
  doc["parts"] = {{"exact", fmt(r.exact_part, digits)},
                  {"airy", fmt(r.airy_part, digits)},
                  {"painleve", fmt(r.painleve_part, digits)}};
  doc["limits"] = {{"exact", fmt(r.exact_limit, digits)},
                   {"airy", fmt(r.airy_limit, digits)},
                   {"painleve", fmt(r.painleve_limit, digits)}};
  doc["total"] = fmt(r.total, digits);
  doc["direct"] = fmt(r.direct, digits);
  doc["log_f2_reference"] = fmt(log(r.f2_reference), digits);
  doc["f2_reference"] = fmt(r.f2_reference, digits);
  return doc.dump(2) + "\n";
}

Real selberg_closed_form(int L, double t, const PrecisionContext& ctx) {
  check_t(t, "selberg_closed_form");
  if (L < 1) throw DomainError("selberg_closed_form: L must be >= 1");
  const long bits = ctx.precision_bits();
  const Real Lr(static_cast<double>(L), bits);
  const Real log_v = Lr / 2 * log(mp::pi(bits)) - Lr * (Lr - 1) / 2 * mp::ln2(bits) -
                     Lr * Lr / 2 * log(Real(t, bits)) + specialfn::log_barnes_g(Lr + 1, ctx);
  return exp(log_v);
}

Real selberg_quadrature(int L, double t, const PrecisionContext& ctx) {
  check_t(t, "selberg_quadrature");
  if (L < 1 || L > 3) throw DomainError("selberg_quadrature: L must be 1, 2 or 3");
  const long bits = ctx.precision_bits();
  // e^{-t s^2} < e^{-80} beyond |s| = c
  const double c = std::sqrt(80.0 / t);
  constexpr int kPanels = 6;
  constexpr int kPoints = 12;
  std::vector<Real> s;
  std::vector<Real> w;
  const double h = 2.0 * c / kPanels;
  for (int p = 0; p < kPanels; ++p) {
    const auto g = quad::gauss_legendre(kPoints, Real(-c + p * h, bits), Real(-c + (p + 1) * h, bits));
    for (std::size_t i = 0; i < g.size(); ++i) {
      s.push_back(g.nodes[i]);
      w.push_back(g.weights[i] * exp(-t * g.nodes[i] * g.nodes[i]));
    }
  }
  const std::size_t m = s.size();
  Real sum(bits);
  if (L == 1) {
    for (std::size_t i = 0; i < m; ++i) sum += w[i];
    return sum;
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const Real dij = s[i] - s[j];
      const Real wij = w[i] * w[j] * dij * dij;
      if (L == 2) {
        sum += wij;
        continue;
      }
      for (std::size_t k = 0; k < m; ++k) {
        const Real a = s[i] - s[k];
        const Real b = s[j] - s[k];
        sum += wij * w[k] * a * a * b * b;
      }
    }
  }
  return L == 2 ? sum / 2 : sum / 6;
}

ExactPartCheck exact_part_limit_check(int L, double t, const PrecisionContext& ctx) {
  if (L < 2) throw DomainError("exact_part_limit_check: L must be >= 2");
  const Ledger led = determinant_ledger(Kind::plain, t, L, ctx);
  const long pb = ctx.precision_bits();
  const Real Lr(static_cast<double>(L), pb);
  const Real tr(t, pb);
  const Real form = 2 * Lr * tr - Lr * Lr / 2 * log(2 * tr) + (Lr * Lr / 2 - Real(1, 12, pb)) * log(Lr) -
                    Real(3, 4, pb) * Lr * Lr + specialfn::zeta_prime_minus_one(ctx);
  ExactPartCheck out;
  out.residual = led.log_d.back() - form;
  if (L <= 3) {
    out.selberg_closed = selberg_closed_form(L, t, ctx);
    out.selberg_quadrature = selberg_quadrature(L, t, ctx);
  }
  return out;
}

Real exact_combination_residual(int L, double t, const PrecisionContext& ctx) {
  if (L < 2) throw DomainError("exact_combination_residual: L must be >= 2");
  const Real pp = d_pm_log(Kind::plus_plus, L - 1, t, ctx);
  const Real mpl = d_pm_log(Kind::minus_plus, L, t, ctx);
  const Real d = determinant_ledger(Kind::plain, t, 2 * L - 1, ctx).log_d.back();
  return pp + mpl - d - (2 * L - 1) * mp::ln2(d.precision());
}

EScalingReport e_double_scaling_check(double t, double x, int L, int M, const painleve2::HMSolution& sol,
                                      const PrecisionContext& ctx, const std::vector<int>& caps) {
  check_t(t, "e_double_scaling_check");
  if (L < 2 || M < 1) throw DomainError("e_double_scaling_check: need L >= 2 and M >= 1");
  if (!(x > -M)) throw DomainError("e_double_scaling_check: requires x > -M");
  if (!(L < t - 0.5 * M * std::cbrt(t))) throw DomainError("e_double_scaling_check: requires L < t - (M/2) t^(1/3)");
  int kmax = 0;
  for (int k : caps) {
    if (k < 0) throw DomainError("e_double_scaling_check: caps must be >= 0");
    kmax = std::max(kmax, k);
  }
  EScalingReport r;
  r.t = t;
  r.x = x;
  r.L = L;
  r.M = M;
  r.ell = floor_ell(t, x);
  if (r.ell < 2) throw DomainError("e_double_scaling_check: ell = floor(t + (x/2) t^(1/3)) must be >= 2");
  r.caps = caps;
  const int j_split = static_cast<int>(std::floor(t - 0.5 * M * std::cbrt(t)));

  const Ledger plain =
      determinant_ledger(Kind::plain, t, std::max(2 * r.ell, 2 * (r.ell + kmax) + 3), ctx, true);
  const Ledger pp = determinant_ledger(Kind::plus_plus, t, std::max(r.ell - 1, L - 1), ctx);
  const Ledger mpl = determinant_ledger(Kind::minus_plus, t, std::max(r.ell, L), ctx);
  const long bits = plain.precision_bits_used;
  r.precision_bits_used = std::max({bits, pp.precision_bits_used, mpl.precision_bits_used});
  const Real tr(t, r.precision_bits_used);
  const Real half_t2 = tr * tr / 2;
  const auto pi = [&](int k) -> const Real& { return plain.pi0[static_cast<std::size_t>(k)]; };
  const auto pair_term = [&](int j) { return log1p(pi(2 * j)) + log1p(-pi(2 * j + 1)); };

  const Real& log_pp = pp.log_d[static_cast<std::size_t>(r.ell - 1)];
  const Real& log_mp = mpl.log_d[static_cast<std::size_t>(r.ell)];
  r.d_pp_scaled = exp(log_pp - half_t2);
  r.d_mp_scaled = exp(log_mp - half_t2 - tr);
  r.exact_part = pp.log_d[static_cast<std::size_t>(L - 1)] + mpl.log_d[static_cast<std::size_t>(L)] -
                 plain.log_d[static_cast<std::size_t>(2 * L - 1)];
  r.airy_part = Real(bits);
  for (int j = L; j <= j_split; ++j) r.airy_part += pair_term(j);
  r.painleve_part = Real(bits);
  for (int j = j_split + 1; j <= r.ell - 1; ++j) r.painleve_part += pair_term(j);
  r.total = -tr + r.exact_part + r.airy_part + r.painleve_part;
  r.direct = log_pp + log_mp - plain.log_d[static_cast<std::size_t>(2 * r.ell - 1)] - tr;

  const long sb = sol.precision_bits();
  const auto fe = twdist::cdf_right(Real(x, sb), sol, ctx);
  const Real le = log(fe.E);
  r.fe = fe.F * fe.E;
  r.two_log_e = 2 * le;

  const long pb = ctx.precision_bits();
  const Real l2 = mp::ln2(pb);
  const Real Mr(static_cast<double>(M), pb);
  r.exact_limit = (2 * L - 1) * l2;
  r.airy_limit = Real(t, pb) - sqrt(Real(2.0, pb)) / 3 * pow_rational(Mr, 3, 2) - (2.0 * L - 0.5) * l2;
  r.painleve_limit = r.two_log_e - 2 * log_e(Real(-static_cast<double>(M), sb), sol, ctx);

  for (int k : caps) {
    Real odd = le;
    Real even = le;
    for (int j = r.ell; j <= r.ell + k; ++j) {
      odd += log1p(-pi(2 * j + 1));
      even += log1p(pi(2 * j + 2));
    }
    r.odd_residuals.push_back(std::move(odd));
    r.even_residuals.push_back(std::move(even));
  }
  return r;
}

std::string to_json(const EScalingReport& r, int digits) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["kind"] = "e_double_scaling_check";
  doc["t"] = r.t;
  doc["x"] = r.x;
  doc["L"] = r.L;
  doc["M"] = r.M;
  doc["ell"] = r.ell;
  doc["precision_bits_used"] = r.precision_bits_used;
  doc["d_pp_scaled"] = fmt(r.d_pp_scaled, digits);
  doc["d_mp_scaled"] = fmt(r.d_mp_scaled, digits);
  doc["fe"] = fmt(r.fe, digits);
  doc["parts"] = {{"exact", fmt(r.exact_part, digits)},
                  {"airy", fmt(r.airy_part, digits)},
                  {"painleve", fmt(r.painleve_part, digits)}};
  doc["limits"] = {{"exact", fmt(r.exact_limit, digits)},
                   {"airy", fmt(r.airy_limit, digits)},
                   {"painleve", fmt(r.painleve_limit, digits)}};
  doc["total"] = fmt(r.total, digits);
  doc["direct"] = fmt(r.direct, digits);
  doc["two_log_e"] = fmt(r.two_log_e, digits);
  auto tails = ordered_json::array();
  for (std::size_t i = 0; i < r.caps.size(); ++i) {
    tails.push_back({{"cap", r.caps[i]},
                     {"odd_residual", fmt(r.odd_residuals[i], digits)},
                     {"even_residual", fmt(r.even_residuals[i], digits)}});
  }
  doc["pi_tails"] = std::move(tails);
  return doc.dump(2) + "\n";
}

}  // namespace tw::toeplitz
