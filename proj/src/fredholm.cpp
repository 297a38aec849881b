#include "tw/fredholm.hpp"

#include <cmath>

#include "tw/linalg.hpp"
#include "tw/quadrature.hpp"
#include "tw/specialfn.hpp"

namespace tw::fredholm {
namespace {

constexpr double kMapScale = 10.0;

// Point beyond which Ai(u)^2 < threshold, from the leading asymptotic.
double truncation_point(double threshold) {
  const double target = -std::log(threshold);
  double u = 1.0;
  for (int i = 0; i < 100; ++i) {
    // -log Ai^2 ~ (4/3) u^{3/2} + log(4 pi sqrt(u))
    const double f = 4.0 / 3.0 * std::pow(u, 1.5) + std::log(4.0 * M_PI * std::sqrt(u)) - target;
    const double df = 2.0 * std::sqrt(u) + 0.5 / u;
    const double next = std::max(0.5, u - f / df);
    if (std::fabs(next - u) < 1e-12) break;
    u = next;
  }
  return u;
}

Real kernel_from(const specialfn::AiryPair& a, const specialfn::AiryPair& b, const Real& u, const Real& v) {
  const Real d = u - v;
  if (abs(d) < kDiagonalSwitch) {
    // K(u,u) = Ai'^2 - u Ai^2, and both partials of K on the diagonal are -Ai^2/2
    const Real diag = a.ai_prime * a.ai_prime - u * a.ai * a.ai;
    return diag + d * a.ai * a.ai / 2;
  }
  return (a.ai * b.ai_prime - a.ai_prime * b.ai) / d;
}

}  // namespace

Real airy_kernel(const Real& u, const Real& v, const PrecisionContext& ctx) {
  if (!u.is_finite() || !v.is_finite()) throw DomainError("airy_kernel: arguments must be finite");
  return kernel_from(specialfn::airy_ai(u, ctx), specialfn::airy_ai(v, ctx), u, v);
}

QuadratureRule airy_rule(const Real& x, int m, const PrecisionContext& ctx) {
  if (m < 1) throw DomainError("airy_rule: m must be positive");
  const long bits = ctx.precision_bits();
  const double threshold = std::min(1e-40, ctx.tolerance() * 1e-10);
  const double xd = x.to_double();
  const double umax = std::max(truncation_point(threshold), xd + 4.0);
  const double c = (umax - xd) / kMapScale;
  const Real smax((c - 1.0) / (c + 1.0), bits);
  const quad::Rule g = quad::gauss_legendre(m, Real(-1.0, bits), smax);
  QuadratureRule r;
  r.nodes.reserve(g.size());
  r.weights.reserve(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Real& s = g.nodes[i];
    const Real one_minus = 1.0 - s;
    r.nodes.push_back(x.at_precision(bits) + kMapScale * (1.0 + s) / one_minus);
    r.weights.push_back(g.weights[i] * (2.0 * kMapScale) / (one_minus * one_minus));
  }
  return r;
}

Real f2_fredholm_at(const Real& x, int m, const PrecisionContext& ctx) {
  if (!x.is_finite()) throw DomainError("f2_fredholm: x must be finite");
  if (m < 20) throw DomainError("f2_fredholm: m must be >= 20");
  const QuadratureRule rule = airy_rule(x, m, ctx);
  const std::size_t n = rule.size();
  std::vector<specialfn::AiryPair> ai;
  std::vector<Real> sw;
  ai.reserve(n);
  sw.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    ai.push_back(specialfn::airy_ai(rule.nodes[i], ctx));
    sw.push_back(sqrt(rule.weights[i]));
  }
  const long bits = ctx.precision_bits();
  linalg::Matrix<Real> a(n, n, Real(bits));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      Real v = -(sw[i] * sw[j]) * kernel_from(ai[i], ai[j], rule.nodes[i], rule.nodes[j]);
      if (i == j) v += 1.0;
      a(i, j) = v;
      a(j, i) = a(i, j);
    }
  }
  linalg::cholesky_in_place(a);
  Real log_det(bits);
  for (std::size_t i = 0; i < n; ++i) log_det += 2 * log(a(i, i));
  return exp(log_det);
}

Real f2_fredholm(const Real& x, int m, const PrecisionContext& ctx) {
  Real coarse;
  try {
    coarse = f2_fredholm_at(x, m, ctx);
  } catch (const ConsistencyError&) {
    // an under-resolved rule can lose positive definiteness
    throw PrecisionError("f2_fredholm: m = " + std::to_string(m) + " too small at x = " + x.to_string(6));
  }
  const Real fine = f2_fredholm_at(x, 2 * m, ctx);
  if (abs(fine - coarse) > ctx.tolerance()) {
    throw PrecisionError("f2_fredholm: m = " + std::to_string(m) + " not converged (m vs 2m differ by " +
                         abs(fine - coarse).to_string(3) + ")");
  }
  return coarse;
}

}  // namespace tw::fredholm
