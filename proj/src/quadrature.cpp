#include "tw/quadrature.hpp"

#include <cmath>

namespace tw::quad {

Rule gauss_legendre(int n, long bits) {
  if (n < 1) throw DomainError("gauss_legendre: n must be >= 1");
  const long wb = bits + 32;
  Rule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const Real eps(std::ldexp(1.0, -static_cast<int>(wb) + 8), 53);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // i-th largest root, Tricomi initial guess refined by Newton.
    Real x(std::cos(M_PI * (i + 0.75) / (n + 0.5)), wb);
    Real dp(wb);
    for (int iter = 0; iter < 100; ++iter) {
      Real p0(1.0, wb), p1 = x;
      for (int k = 2; k <= n; ++k) {
        Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = std::move(p1);
        p1 = std::move(p2);
      }
      // P_n'(x) = n (x P_n - P_{n-1}) / (x^2 - 1)
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      Real dx = p1 / dp;
      x -= dx;
      if (abs(dx) < eps) {
        if (iter > 0) {
          // one more evaluation of dp at the converged root
          Real q0(1.0, wb), q1 = x;
          for (int k = 2; k <= n; ++k) {
            Real q2 = ((2 * k - 1) * x * q1 - (k - 1) * q0) / k;
            q0 = std::move(q1);
            q1 = std::move(q2);
          }
          dp = n * (x * q1 - q0) / (x * x - 1.0);
          break;
        }
      }
    }
    Real w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    const auto lo = static_cast<std::size_t>(i);
    rule.nodes[hi] = x.at_precision(bits);
    rule.weights[hi] = w.at_precision(bits);
    if (lo != hi) {
      rule.nodes[lo] = (-x).at_precision(bits);
      rule.weights[lo] = w.at_precision(bits);
    } else {
      rule.nodes[hi] = Real(bits);
    }
  }
  return rule;
}

Rule gauss_legendre(int n, const Real& a, const Real& b) {
  const long bits = std::max(a.precision(), b.precision());
  Rule r = gauss_legendre(n, bits);
  const Real mid = (a + b) / 2;
  const Real half = (b - a) / 2;
  for (std::size_t i = 0; i < r.size(); ++i) {
    r.nodes[i] = mid + half * r.nodes[i];
    r.weights[i] = half * r.weights[i];
  }
  return r;
}

Real integrate(const std::function<Real(const Real&)>& f, const Real& a, const Real& b, int points,
               int panels) {
  const long bits = std::max(a.precision(), b.precision());
  const Rule base = gauss_legendre(points, bits);
  Real total(bits);
  const Real h = (b - a) / static_cast<long>(panels);
  for (int p = 0; p < panels; ++p) {
    const Real lo = a + h * static_cast<long>(p);
    const Real mid = lo + h / 2;
    const Real half = h / 2;
    for (std::size_t i = 0; i < base.size(); ++i) {
      total += base.weights[i] * half * f(mid + half * base.nodes[i]);
    }
  }
  return total;
}

std::vector<Real> chebyshev_lobatto(int p, long bits) {
  std::vector<Real> x;
  x.reserve(static_cast<std::size_t>(p) + 1);
  const Real pi = mp::pi(bits);
  for (int k = p; k >= 0; --k) {
    if (2 * k == p) {
      x.emplace_back(bits);
    } else {
      x.push_back(cos(pi * k / p));
    }
  }
  x.front() = Real(-1.0, bits);
  x.back() = Real(1.0, bits);
  return x;
}

std::vector<double> chebyshev_lobatto_weights(int p) {
  std::vector<double> w(static_cast<std::size_t>(p) + 1);
  for (int k = 0; k <= p; ++k) {
    double v = (k % 2 == 0) ? 1.0 : -1.0;
    if (k == 0 || k == p) v *= 0.5;
    w[static_cast<std::size_t>(k)] = v;
  }
  return w;
}

}  // namespace tw::quad
