#pragma once

// Tracy-Widom distribution functions F_1, F_2, F_4 from the Hastings-McLeod
// solution, through the right-anchored integrals (x to +inf) and the
// left-anchored regularized integrals (-inf to x).

#include <string>
#include <vector>

#include "tw/painleve2.hpp"
#include "tw/precision.hpp"
#include "tw/real.hpp"

namespace tw::twdist {

using painleve2::HMSolution;

inline constexpr int kSchemaVersion = 1;
// relative agreement required between the two representations
inline constexpr double kRepresentationAgreement = 1e-8;

enum class Representation { right, left };
const char* to_string(Representation r);

struct FE {
  Real F;
  Real E;
};

struct TWPoint {
  Real x, F, E, F1, F2, F4;
  Representation representation = Representation::right;
};

struct TailConstants {
  Real zeta_prime_minus_one;
  Real tau1, tau2, tau4;
  Real f_prefactor;  // 2^(1/48) e^(zeta'(-1)/2)
  Real e_prefactor;  // 2^(-1/4)
};

TailConstants tail_constants(const PrecisionContext& ctx);

// F = exp(-1/2 int_x^inf R), E = exp(-1/2 int_x^inf q).
FE cdf_right(const Real& x, const HMSolution& sol, const PrecisionContext& ctx);
// The same pair from the integrals over (-inf, x]; x < 0.
FE cdf_left(const Real& x, const HMSolution& sol, const TailConstants& consts, const PrecisionContext& ctx);

// Left representation below -1, right otherwise; for x < 0 both are computed
// and a ConsistencyError is thrown if they disagree.
TWPoint tw_point(const Real& x, const HMSolution& sol, const TailConstants& consts, const PrecisionContext& ctx);
Real tw_cdf(const Real& x, int beta, const HMSolution& sol, const TailConstants& consts,
            const PrecisionContext& ctx);
TWPoint make_point(const Real& x, const FE& fe, Representation rep);

struct TotalIntegrals {
  Real lhs_r, rhs_r, lhs_q, rhs_q;
};
TotalIntegrals total_integral_check(const Real& c, const HMSolution& sol, const TailConstants& consts,
                                    const PrecisionContext& ctx);

// x -> -inf expansions with their first correction; x <= -3.
Real tail_left(const Real& x, int beta, const TailConstants& consts);

struct RightTails {
  Real F;
  Real E;
};
// x -> +inf expansions with their first correction; x >= 3.
RightTails tail_right(const Real& x);

std::string points_csv(const std::vector<TWPoint>& pts, int digits = 20);
std::string points_json(const std::vector<TWPoint>& pts, int digits = 20);

}  // namespace tw::twdist
