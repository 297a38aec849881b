#pragma once

#include "tw/painleve2.hpp"
#include "tw/precision.hpp"

namespace tw::testing {

inline const PrecisionContext& ctx() {
  static const PrecisionContext c(256, 1e-30);
  return c;
}

// Shared solve on the default window; the left tail series limits the
// left-anchored integrals to about 1e-19 here, hence the looser context.
inline const painleve2::HMSolution& hm() {
  static const painleve2::HMSolution s = painleve2::solve_hastings_mcleod(-12.0, 8.0, 2000, ctx());
  return s;
}

inline const PrecisionContext& dist_ctx() {
  static const PrecisionContext c(256, 1e-15);
  return c;
}

inline Real R(double x) { return Real(x, 256); }
inline double dif(const Real& a, const Real& b) { return abs(a - b).to_double(); }
inline double rel(const Real& a, const Real& b) { return (abs(a - b) / abs(b)).to_double(); }

}  // namespace tw::testing
