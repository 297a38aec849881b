#pragma once

// Scalar special functions at arbitrary precision: Airy Ai/Ai', modified
// Bessel I_j, log Gamma, log Barnes G and zeta'(-1).
//
// All functions are pure. Results are returned at ctx.precision_bits(); any
// guard bits used internally are dropped on return.

#include <vector>

#include "tw/precision.hpp"
#include "tw/real.hpp"

namespace tw::specialfn {

struct AiryPair {
  Real ai;
  Real ai_prime;
};

// |x| at and beyond which airy_ai switches from the Maclaurin series to the
// asymptotic expansions. Never below 7; grows with the requested tolerance
// because the asymptotic series cannot be summed past its smallest term.
double airy_crossover(const PrecisionContext& ctx);

AiryPair airy_ai(const Real& x, const PrecisionContext& ctx);
AiryPair airy_ai(double x, const PrecisionContext& ctx);

// The two branches individually, for overlap testing.
AiryPair airy_ai_series(const Real& x, const PrecisionContext& ctx);
AiryPair airy_ai_asymptotic(const Real& x, const PrecisionContext& ctx);

// I_0(two_t), ..., I_max_j(two_t).
std::vector<Real> bessel_i_row(int max_j, const Real& two_t, const PrecisionContext& ctx);

Real log_gamma(const Real& z, const PrecisionContext& ctx);
Real log_barnes_g(const Real& z, const PrecisionContext& ctx);
Real zeta_prime_minus_one(const PrecisionContext& ctx);

// B_2, B_4, ..., B_{2*count}.
std::vector<Real> bernoulli_even(int count, long bits);

struct SpecialConstants {
  Real zeta_prime_minus_one;
  Real euler_gamma;
  Real log2;
  Real log_pi;
};

SpecialConstants special_constants(const PrecisionContext& ctx);

}  // namespace tw::specialfn
