#pragma once

#include <functional>
#include <vector>

#include "tw/precision.hpp"
#include "tw/real.hpp"

namespace tw::quad {

// Nodes ascending on [-1, 1] with positive weights.
struct Rule {
  std::vector<Real> nodes;
  std::vector<Real> weights;
  std::size_t size() const { return nodes.size(); }
};

// n-point Gauss-Legendre rule on [-1, 1], exact for degree 2n-1.
Rule gauss_legendre(int n, long bits);

// Gauss-Legendre rule affinely mapped to [a, b].
Rule gauss_legendre(int n, const Real& a, const Real& b);

// Composite Gauss-Legendre: [a, b] split into `panels` equal pieces.
Real integrate(const std::function<Real(const Real&)>& f, const Real& a, const Real& b, int points,
               int panels = 1);

// Chebyshev-Lobatto points cos(pi k / p), k = 0..p, returned ascending on [-1, 1].
std::vector<Real> chebyshev_lobatto(int p, long bits);

// Barycentric weights for Chebyshev-Lobatto points in ascending order.
std::vector<double> chebyshev_lobatto_weights(int p);

}  // namespace tw::quad
