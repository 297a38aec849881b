#include "tw/specialfn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tw::specialfn {

namespace {

constexpr double kLog2E = 1.4426950408889634;

long guard_bits(long bits) { return 32 + static_cast<long>(std::ceil(std::log2(static_cast<double>(bits)))); }

Real two_pow(long e, long bits) {
  Real r(1.0, bits);
  mpfr_mul_2si(r.get(), r.get(), e, MPFR_RNDN);
  return r;
}

void require_finite(const Real& x, const char* what) {
  if (!x.is_finite()) throw DomainError(std::string(what) + ": argument is not finite");
}

}  // namespace

std::vector<Real> bernoulli_even(int count, long bits) {
  // B_2k = (-1)^(k+1) 2 (2k)! zeta(2k) / (2 pi)^(2k)
  const long wb = bits + 32;
  std::vector<Real> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  const Real two_pi = 2 * mp::pi(wb);
  const Real inv_two_pi_sq = 1.0 / (two_pi * two_pi);
  Real factor(2.0, wb);  // 2 (2k)! / (2 pi)^(2k)
  for (int k = 1; k <= count; ++k) {
    factor *= static_cast<long>(2 * k - 1);
    factor *= static_cast<long>(2 * k);
    factor *= inv_two_pi_sq;
    Real b = factor * mp::zeta_ui(static_cast<unsigned long>(2 * k), wb);
    if (k % 2 == 0) b = -b;
    out.push_back(b.at_precision(bits));
  }
  return out;
}

double airy_crossover(const PrecisionContext& ctx) {
  // Smallest asymptotic term is about exp(-2 zeta), zeta = (2/3)|x|^(3/2).
  const double zeta_needed = 0.5 * std::log(1.0 / ctx.tolerance()) + 2.0;
  const double x = std::pow(1.5 * zeta_needed, 2.0 / 3.0);
  return std::max(7.0, x);
}

AiryPair airy_ai_series(const Real& x_in, const PrecisionContext& ctx) {
  require_finite(x_in, "airy_ai");
  const long bits = ctx.precision_bits();
  const double xd = std::fabs(x_in.to_double());
  const double growth = (2.0 / 3.0) * std::pow(xd, 1.5) * (x_in > 0.0 ? 2.0 : 1.0);
  const long wb = bits + guard_bits(bits) + static_cast<long>(std::ceil(growth * kLog2E));

  const Real x = x_in.at_precision(wb);
  const Real x3 = x * x * x;
  const Real third = Real(1, 3, wb);
  // Ai(0) = 3^(-2/3)/Gamma(2/3), -Ai'(0) = 3^(-1/3)/Gamma(1/3)
  Real g13(wb), g23(wb);
  mpfr_gamma(g13.get(), third.get(), MPFR_RNDN);
  mpfr_gamma(g23.get(), (2 * third).get(), MPFR_RNDN);
  const Real three(3.0, wb);
  const Real c1 = mp::pow(three, -2 * third) / g23;
  const Real c2 = mp::pow(three, -third) / g13;

  Real f(1.0, wb), g = x, fp(wb), gp(1.0, wb);
  Real tf(1.0, wb), tg = x, tfp = x * x / 2, tgp(1.0, wb);
  fp = tfp;
  const Real eps = two_pow(-wb, 53);
  const double k_turn = std::pow(xd, 1.5) / 3.0 + 2.0;
  for (long k = 1;; ++k) {
    tf *= x3;
    tf /= (3 * k - 1) * (3 * k);
    tg *= x3;
    tg /= (3 * k) * (3 * k + 1);
    tgp *= x3;
    tgp /= (3 * k - 2) * (3 * k);
    if (k >= 2) {
      tfp *= x3;
      tfp /= (3 * (k - 1)) * (3 * k - 1);
      fp += tfp;
    }
    f += tf;
    g += tg;
    gp += tgp;
    if (k > k_turn) {
      const Real scale = abs(f) + abs(g) + abs(fp) + abs(gp);
      const Real big = std::max({abs(tf), abs(tg), abs(tfp), abs(tgp)},
                                [](const Real& a, const Real& b) { return a < b; });
      if (big <= eps * scale) break;
    }
    if (k > 100000) throw PrecisionError("airy_ai: Maclaurin series failed to converge");
  }
  return {(c1 * f - c2 * g).at_precision(bits), (c1 * fp - c2 * gp).at_precision(bits)};
}

AiryPair airy_ai_asymptotic(const Real& x_in, const PrecisionContext& ctx) {
  require_finite(x_in, "airy_ai");
  const long bits = ctx.precision_bits();
  const long wb = bits + guard_bits(bits);
  const Real x = x_in.at_precision(wb);
  if (x.is_zero()) throw DomainError("airy_ai_asymptotic: x must be nonzero");
  const Real s = abs(x);
  const Real zeta = 2 * s * sqrt(s) / 3;
  const Real quarter = mp::pow_rational(s, 1, 4);
  const Real sqrt_pi = sqrt(mp::pi(wb));
  const Real eps = two_pow(-wb, 53);

  // u_k, v_k / zeta^k with optimal truncation at the smallest term.
  std::vector<Real> uz{Real(1.0, wb)}, vz{Real(1.0, wb)};
  Real u(1.0, wb);
  Real zk(1.0, wb);
  Real prev_mag(1.0, wb);
  for (long k = 1; k < 10000; ++k) {
    u *= (6 * k - 5) * (6 * k - 3);
    u *= (6 * k - 1);
    u /= (2 * k - 1) * 216 * k;
    zk *= zeta;
    Real uk = u / zk;
    Real vk = -uk * (6 * k + 1) / (6 * k - 1);
    Real mag = abs(vk);
    if (mag > prev_mag) break;
    uz.push_back(uk);
    vz.push_back(vk);
    prev_mag = mag;
    if (mag < eps) break;
  }

  if (x > 0.0) {
    Real su(0.0, wb), sv(0.0, wb);
    for (std::size_t k = 0; k < uz.size(); ++k) {
      if (k % 2 == 0) {
        su += uz[k];
        sv += vz[k];
      } else {
        su -= uz[k];
        sv -= vz[k];
      }
    }
    const Real pre = exp(-zeta) / (2 * sqrt_pi);
    return {(pre / quarter * su).at_precision(bits), (-pre * quarter * sv).at_precision(bits)};
  }
  Real ue(0.0, wb), uo(0.0, wb), ve(0.0, wb), vo(0.0, wb);
  for (std::size_t k = 0; k < uz.size(); ++k) {
    // (-1)^j on the j-th even / odd term
    const bool neg = (k / 2) % 2 == 1;
    Real& U = (k % 2 == 0) ? ue : uo;
    Real& V = (k % 2 == 0) ? ve : vo;
    if (neg) {
      U -= uz[k];
      V -= vz[k];
    } else {
      U += uz[k];
      V += vz[k];
    }
  }
  const Real phase = zeta + mp::pi(wb) / 4;
  const Real sn = sin(phase), cs = cos(phase);
  const Real ai = (sn * ue - cs * uo) / (sqrt_pi * quarter);
  const Real aip = -(quarter / sqrt_pi) * (cs * ve + sn * vo);
  return {ai.at_precision(bits), aip.at_precision(bits)};
}

AiryPair airy_ai(const Real& x, const PrecisionContext& ctx) {
  require_finite(x, "airy_ai");
  if (std::fabs(x.to_double()) >= airy_crossover(ctx)) return airy_ai_asymptotic(x, ctx);
  return airy_ai_series(x, ctx);
}

AiryPair airy_ai(double x, const PrecisionContext& ctx) {
  if (!std::isfinite(x)) throw DomainError("airy_ai: argument is not finite");
  return airy_ai(Real(x, ctx.precision_bits()), ctx);
}

std::vector<Real> bessel_i_row(int max_j, const Real& two_t, const PrecisionContext& ctx) {
  if (max_j < 0) throw DomainError("bessel_i_row: max_j must be >= 0");
  require_finite(two_t, "bessel_i_row");
  if (two_t < 0.0) throw DomainError("bessel_i_row: argument must be nonnegative");
  const long bits = ctx.precision_bits();
  std::vector<Real> row;
  row.reserve(static_cast<std::size_t>(max_j) + 1);
  if (two_t.is_zero()) {
    row.emplace_back(1.0, bits);
    for (int j = 1; j <= max_j; ++j) row.emplace_back(0.0, bits);
    return row;
  }
  const long wb = bits + 64 + static_cast<long>(std::ceil(two_t.to_double() * kLog2E));
  const Real t = two_t.at_precision(wb) / 2;
  const Real t2 = t * t;
  const Real eps = two_pow(-wb, 53);
  // leading term t^j / j!
  Real lead(1.0, wb);
  for (int j = 0; j <= max_j; ++j) {
    if (j > 0) {
      lead *= t;
      lead /= static_cast<long>(j);
    }
    Real sum = lead;
    Real term = lead;
    for (long k = 1;; ++k) {
      term *= t2;
      term /= k * (k + j);
      sum += term;
      if (term <= eps * sum && static_cast<double>(k) > t.to_double()) break;
    }
    row.push_back(sum.at_precision(bits));
  }
  return row;
}

Real log_gamma(const Real& z_in, const PrecisionContext& ctx) {
  require_finite(z_in, "log_gamma");
  if (z_in <= 0.0) throw DomainError("log_gamma: z must be positive");
  const long bits = ctx.precision_bits();
  const long wb = bits + guard_bits(bits);
  Real z = z_in.at_precision(wb);
  // Stirling remainder after optimal truncation is about exp(-2 pi w).
  const double w_min = std::max(20.0, static_cast<double>(wb) / (2.0 * M_PI * kLog2E) + 4.0);
  Real prod(1.0, wb);
  while (z < w_min) {
    prod *= z;
    z += 1.0;
  }
  const Real half_log_2pi = log(2 * mp::pi(wb)) / 2;
  Real result = (z - 0.5) * log(z) - z + half_log_2pi - log(prod);
  const Real eps = two_pow(-wb, 53);
  const int nb = static_cast<int>(static_cast<double>(wb) / 4.0) + 8;
  const auto b = bernoulli_even(nb, wb);
  const Real z2 = z * z;
  Real zpow = z;
  for (int k = 1; k <= nb; ++k) {
    Real term = b[static_cast<std::size_t>(k - 1)] / (static_cast<long>(2 * k) * (2 * k - 1) * zpow);
    result += term;
    if (abs(term) < eps) break;
    zpow *= z2;
  }
  return result.at_precision(bits);
}

Real zeta_prime_minus_one(const PrecisionContext& ctx) {
  // Euler-Maclaurin for sum_{k<=N} k log k. With log A the Glaisher constant,
  //   sum = log A + (N^2/2 + N/2 + 1/12) log N - N^2/4
  //         - sum_{j>=2} B_2j / ((2j)(2j-1)(2j-2)) N^(2-2j),
  // and zeta'(-1) = 1/12 - log A.
  const long bits = ctx.precision_bits();
  const long wb = bits + guard_bits(bits);
  const long n = static_cast<long>(std::ceil(static_cast<double>(wb) / (2.0 * M_PI * kLog2E))) + 12;
  Real sum(0.0, wb);
  for (long k = 2; k <= n; ++k) {
    const Real kk(k, wb);
    sum += kk * log(kk);
  }
  const Real nn(n, wb);
  const Real log_n = log(nn);
  Real log_a = sum - (nn * nn / 2 + nn / 2 + Real(1, 12, wb)) * log_n + nn * nn / 4;
  const int nb = static_cast<int>(static_cast<double>(wb) / 3.0) + 8;
  const auto b = bernoulli_even(nb, wb);
  const Real eps = two_pow(-wb, 53);
  const Real inv_n2 = 1.0 / (nn * nn);
  Real npow = inv_n2;
  for (int j = 2; j <= nb; ++j) {
    const Real term = b[static_cast<std::size_t>(j - 1)] * npow /
                      (static_cast<long>(2 * j) * (2 * j - 1) * (2 * j - 2));
    log_a += term;
    if (abs(term) < eps) break;
    npow *= inv_n2;
  }
  return (Real(1, 12, wb) - log_a).at_precision(bits);
}

Real log_barnes_g(const Real& z_in, const PrecisionContext& ctx) {
  require_finite(z_in, "log_barnes_g");
  if (z_in <= 0.0) throw DomainError("log_barnes_g: z must be positive");
  const long bits = ctx.precision_bits();
  const long wb = bits + guard_bits(bits);
  const PrecisionContext wctx = ctx.with_precision(wb);
  const Real z = z_in.at_precision(wb);

  // Shift so that the asymptotic argument w = z + m - 1 is large, then step
  // back with log G(y) = log G(y+1) - log Gamma(y).
  const double w_min = std::max(20.0, static_cast<double>(wb) / (2.0 * M_PI * kLog2E) + 4.0);
  long m = 0;
  while ((z + static_cast<double>(m) - 1.0) < w_min) ++m;
  const Real w = z + static_cast<double>(m) - 1.0;  // log G(z+m) = log G(w+1)

  const Real log_w = log(w);
  const Real w2 = w * w;
  Real result = w2 / 2 * log_w - w2 * 0.75 + w / 2 * log(2 * mp::pi(wb)) - log_w / 12 +
                zeta_prime_minus_one(wctx);
  const int nb = static_cast<int>(static_cast<double>(wb) / 4.0) + 8;
  const auto b = bernoulli_even(nb + 1, wb);
  const Real eps = two_pow(-wb, 53);
  Real wpow = w2;
  for (int k = 1; k <= nb; ++k) {
    const Real term = b[static_cast<std::size_t>(k)] / (static_cast<long>(4 * k) * (k + 1) * wpow);
    result += term;
    if (abs(term) < eps) break;
    wpow *= w2;
  }
  // sum_{i<m} log Gamma(z+i) = m log Gamma(z) + sum_{k<=m-2} (m-1-k) log(z+k)
  if (m > 0) {
    result -= static_cast<long>(m) * log_gamma(z, wctx);
    for (long k = 0; k <= m - 2; ++k) result -= (m - 1 - k) * log(z + static_cast<double>(k));
  }
  return result.at_precision(bits);
}

SpecialConstants special_constants(const PrecisionContext& ctx) {
  const long bits = ctx.precision_bits();
  return {zeta_prime_minus_one(ctx), mp::euler_gamma(bits), mp::ln2(bits), log(mp::pi(bits))};
}

}  // namespace tw::specialfn
