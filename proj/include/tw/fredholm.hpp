#pragma once

// F_2(x) = det(1 - A_x) for the Airy kernel on (x, inf), by Nystrom
// discretization with Gauss-Legendre nodes under an algebraic map.

#include <vector>

#include "tw/precision.hpp"
#include "tw/real.hpp"

namespace tw::fredholm {

// (Ai(u)Ai'(v) - Ai'(u)Ai(v)) / (u - v), with the confluent limit near u = v.
Real airy_kernel(const Real& u, const Real& v, const PrecisionContext& ctx);

// |u - v| below this switches the kernel to its diagonal expansion
inline constexpr double kDiagonalSwitch = 1e-6;

struct QuadratureRule {
  std::vector<Real> nodes;    // increasing, in (x, inf)
  std::vector<Real> weights;  // positive
  std::size_t size() const { return nodes.size(); }
};

// m Gauss-Legendre points in s, mapped by u = x + 10 (1 + s) / (1 - s) and
// truncated where Ai(u)^2 drops below 1e-40.
QuadratureRule airy_rule(const Real& x, int m, const PrecisionContext& ctx);

// Determinant at a single m (no self-check).
Real f2_fredholm_at(const Real& x, int m, const PrecisionContext& ctx);

// Determinant at m, checked against 2m; PrecisionError if they differ by more
// than ctx.tolerance().
Real f2_fredholm(const Real& x, int m, const PrecisionContext& ctx);

}  // namespace tw::fredholm
