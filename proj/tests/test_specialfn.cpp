#include <doctest.h>

#include <cmath>
#include <random>

#include "tw/quadrature.hpp"
#include "tw/specialfn.hpp"

using namespace tw;
using namespace tw::specialfn;

namespace {

// MPFR's own Ai and Gamma serve as oracles independent of our series.
Real mpfr_airy(const Real& x) {
  Real r(x.precision());
  mpfr_ai(r.get(), x.get(), MPFR_RNDN);
  return r;
}

Real mpfr_gamma_of(const Real& x) {
  Real r(x.precision());
  mpfr_gamma(r.get(), x.get(), MPFR_RNDN);
  return r;
}

double rel(const Real& a, const Real& b) { return (abs(a - b) / abs(b)).to_double(); }
double dif(const Real& a, const Real& b) { return abs(a - b).to_double(); }

const PrecisionContext ctx256(256, 1e-60);

}  // namespace

TEST_CASE("Ai and Ai' at the origin match the Gamma closed forms") {
  const long b = 256;
  const auto a = airy_ai(Real(b), ctx256);
  const Real ai0 = pow_rational(Real(3.0, b), -2, 3) / mpfr_gamma_of(Real(2, 3, b));
  const Real aip0 = -pow_rational(Real(3.0, b), -1, 3) / mpfr_gamma_of(Real(1, 3, b));
  CHECK(dif(a.ai, ai0) < 1e-70);
  CHECK(dif(a.ai_prime, aip0) < 1e-70);
}

TEST_CASE("Ai agrees with the MPFR implementation across both branches") {
  const long b = 256;
  for (double x : {-25.0, -12.5, -7.0, -3.3, -0.5, 0.25, 1.0, 4.0, 7.5, 12.0, 30.0}) {
    const Real xr(x, b);
    const auto a = airy_ai(xr, ctx256);
    INFO("x = " << x);
    CHECK(dif(a.ai, mpfr_airy(xr)) < 1e-60 * std::max(1.0, 1.0));
    if (x > 0) CHECK(rel(a.ai, mpfr_airy(xr)) < 1e-55);
  }
}

TEST_CASE("Ai' is the derivative of Ai (central difference of the MPFR oracle)") {
  const long b = 256;
  const Real h(std::ldexp(1.0, -60), b);
  for (double x : {-9.0, -2.0, 0.7, 5.0, 11.0}) {
    const Real xr(x, b);
    const Real fd = (mpfr_airy(xr + h) - mpfr_airy(xr - h)) / (2 * h);
    CHECK(dif(airy_ai(xr, ctx256).ai_prime, fd) < 1e-30);
  }
}

TEST_CASE("Ai at x = 10 follows the leading asymptotic correction") {
  const long b = 256;
  const Real x(10.0, b);
  const Real zeta = Real(2.0, b) / 3 * pow_rational(x, 3, 2);
  const Real scaled = airy_ai(x, ctx256).ai * 2 * sqrt(mp::pi(b)) * pow_rational(x, 1, 4) * exp(zeta);
  const Real c1(5, 72, b);
  CHECK(std::fabs((scaled - (1.0 - c1 / zeta)).to_double()) < 1e-3);
}

TEST_CASE("finite-difference second derivative of Ai equals x Ai") {
  const PrecisionContext ctx(128, 1e-30);
  const double h = 1e-4;
  const Real hr(h, 128);
  auto check_at = [&](double x) {
    const Real xr(x, 128);
    const Real f0 = airy_ai(xr, ctx).ai;
    const Real fd = (airy_ai(xr + hr, ctx).ai - 2 * f0 + airy_ai(xr - hr, ctx).ai) / (hr * hr);
    // central-difference error is h^2 / 12 |Ai''''| <= h^2 (x^2 + 2) max|Ai, Ai'|
    CHECK(dif(fd, xr * f0) < h * h * (x * x + 2.0));
  };
  check_at(1.0);
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 50; ++i) check_at(u(rng));
}

TEST_CASE("series and asymptotic branches agree on the overlap window") {
  const PrecisionContext loose(256, 1e-8);
  for (double x = 6.0; x <= 9.0001; x += 0.25) {
    for (double s : {1.0, -1.0}) {
      const Real xr(s * x, 256);
      const auto a = airy_ai_series(xr, loose);
      const auto z = airy_ai_asymptotic(xr, loose);
      const double scale = std::max(std::fabs(a.ai.to_double()), std::fabs(a.ai_prime.to_double()));
      INFO("x = " << s * x);
      CHECK(dif(a.ai, z.ai) <= 10 * loose.tolerance() * scale);
      CHECK(dif(a.ai_prime, z.ai_prime) <= 10 * loose.tolerance() * scale);
    }
  }
  // at full precision the crossover moves out until the asymptotic branch suffices
  const double xc = airy_crossover(ctx256);
  CHECK(xc >= 7.0);
  for (double x : {xc, xc + 1.0}) {
    for (double s : {1.0, -1.0}) {
      const Real xr(s * x, 256);
      const auto a = airy_ai_series(xr, ctx256);
      const auto z = airy_ai_asymptotic(xr, ctx256);
      const double scale = std::max(std::fabs(a.ai.to_double()), std::fabs(a.ai_prime.to_double()));
      CHECK(dif(a.ai, z.ai) <= 10 * ctx256.tolerance() * scale);
      CHECK(dif(a.ai_prime, z.ai_prime) <= 10 * ctx256.tolerance() * scale);
    }
  }
}

TEST_CASE("airy_ai rejects non-finite input") {
  CHECK_THROWS_AS(airy_ai(std::nan(""), ctx256), DomainError);
  CHECK_THROWS_AS(airy_ai(HUGE_VAL, ctx256), DomainError);
}

TEST_CASE("Bessel row at zero argument is the unit vector") {
  const auto row = bessel_i_row(5, Real(256), ctx256);
  CHECK(row[0] == 1.0);
  for (std::size_t j = 1; j < row.size(); ++j) CHECK(row[j].is_zero());
}

TEST_CASE("Bessel generating function sums to e^{2t}") {
  const Real two_t(2.0, 256);
  const auto row = bessel_i_row(30, two_t, ctx256);
  Real s = row[0];
  for (int j = 1; j <= 30; ++j) s += 2 * row[static_cast<std::size_t>(j)];
  CHECK(dif(s, exp(two_t)) < 1e-20);
}

TEST_CASE("I_0(2) matches quadrature of the defining integral") {
  const long b = 256;
  const Real pi = mp::pi(b);
  const Real quad = quad::integrate([](const Real& th) { return exp(2 * cos(th)); }, Real(b), 2 * pi, 40, 8) /
                    (2 * pi);
  const auto row = bessel_i_row(0, Real(2.0, b), ctx256);
  CHECK(rel(row[0], quad) < 1e-15);
}

TEST_CASE("Bessel three-term recurrence") {
  const PrecisionContext ctx(256, 1e-60);
  for (double x : {0.5, 2.0, 10.0}) {
    const Real xr(x, 256);
    const auto row = bessel_i_row(21, xr, ctx);
    for (int j = 1; j <= 20; ++j) {
      const auto jj = static_cast<std::size_t>(j);
      const Real lhs = row[jj - 1] - row[jj + 1];
      const Real rhs = 2.0 * j / xr * row[jj];
      INFO("x = " << x << " j = " << j);
      CHECK(rel(lhs, rhs) < 10 * ctx.tolerance());
    }
  }
  CHECK_THROWS_AS(bessel_i_row(3, Real(-1.0, 64), ctx), DomainError);
  CHECK_THROWS_AS(bessel_i_row(-1, Real(1.0, 64), ctx), DomainError);
}

TEST_CASE("log Gamma special values and the MPFR oracle") {
  const long b = 256;
  CHECK(abs(log_gamma(Real(1.0, b), ctx256)).to_double() < 1e-70);
  CHECK(dif(log_gamma(Real(0.5, b), ctx256), log(mp::pi(b)) / 2) < 1e-70);
  CHECK(dif(log_gamma(Real(6.0, b), ctx256), log(Real(120.0, b))) < 1e-70);
  for (double z : {0.01, 0.3, 2.5, 17.25, 123.4}) {
    const Real zr(z, b);
    CHECK(dif(log_gamma(zr, ctx256), log(mpfr_gamma_of(zr))) < 1e-65);
  }
  CHECK_THROWS_AS(log_gamma(Real(0.0, b), ctx256), DomainError);
  CHECK_THROWS_AS(log_gamma(Real(-2.0, b), ctx256), DomainError);
}

TEST_CASE("Bernoulli numbers") {
  const auto bn = bernoulli_even(4, 128);
  CHECK(dif(bn[0], Real(1, 6, 128)) < 1e-35);
  CHECK(dif(bn[1], Real(-1, 30, 128)) < 1e-35);
  CHECK(dif(bn[2], Real(1, 42, 128)) < 1e-35);
  CHECK(dif(bn[3], Real(-1, 30, 128)) < 1e-35);
}

TEST_CASE("Barnes G special values") {
  const long b = 256;
  for (double z : {1.0, 2.0, 3.0}) CHECK(abs(log_barnes_g(Real(z, b), ctx256)).to_double() < 1e-60);
  CHECK(dif(log_barnes_g(Real(6.0, b), ctx256), log(Real(288.0, b))) < 1e-60);
  const Real zp = zeta_prime_minus_one(ctx256);
  const Real half_closed = log(Real(2.0, b)) / 24 - log(mp::pi(b)) / 4 + Real(1.5, b) * zp;
  CHECK(dif(log_barnes_g(Real(0.5, b), ctx256), half_closed) < 1e-20);
  CHECK_THROWS_AS(log_barnes_g(Real(0.0, b), ctx256), DomainError);
}

TEST_CASE("Barnes recurrence G(z+1) = Gamma(z) G(z)") {
  for (double z = 0.5; z <= 10.5; z += 1.0) {
    const Real zr(z, 256);
    const Real lhs = log_barnes_g(zr + 1.0, ctx256);
    const Real rhs = log_gamma(zr, ctx256) + log_barnes_g(zr, ctx256);
    CHECK(dif(lhs, rhs) < ctx256.tolerance());
  }
}

TEST_CASE("zeta'(-1) reference value and large-z fit of log G") {
  const long b = 256;
  const Real zp = zeta_prime_minus_one(ctx256);
  const Real ref = Real::parse("-0.1654211437004509292139196602427806", b);
  CHECK(dif(zp, ref) < 1e-33);

  // log G(z+1) minus the smooth part at z = 40 leaves zeta'(-1) + O(z^-2)
  const Real z(40.0, b);
  Real log_g(b);  // log(1! 2! ... 39!)
  Real log_fact(b);
  for (int k = 1; k <= 39; ++k) {
    log_fact += log(Real(static_cast<double>(k), b));
    log_g += log_fact;
  }
  const Real smooth = z * z / 2 * log(z) - Real(0.75, b) * z * z + z / 2 * log(2 * mp::pi(b)) - log(z) / 12;
  CHECK(dif(log_g - smooth, zp) < 1.0 / (40.0 * 40.0));
}

TEST_CASE("special constants bundle") {
  const auto c = special_constants(ctx256);
  CHECK(dif(c.euler_gamma, mp::euler_gamma(256)) < 1e-70);
  CHECK(dif(c.log2, log(Real(2.0, 256))) < 1e-70);
  CHECK(dif(c.log_pi, log(mp::pi(256))) < 1e-70);
  // Euler's constant against the harmonic-sum limit with its 1/(2K) correction
  const int k = 100000;
  double h = 0.0;
  for (int i = k; i >= 1; --i) h += 1.0 / i;
  CHECK(std::fabs(h - std::log(static_cast<double>(k)) - 1.0 / (2.0 * k) - c.euler_gamma.to_double()) < 1e-10);
}
