#pragma once

// Hastings-McLeod solution of q'' = 2 q^3 + x q with q ~ Ai(x) as x -> +inf.
//
// The boundary value problem is discretized by piecewise Chebyshev-Lobatto
// collocation (uniform elements of fixed degree, C^1 across interfaces) and
// solved by damped Newton: a double-precision pass from an interpolating
// initial guess, then polishing passes at the working precision.

#include <functional>
#include <string>
#include <vector>

#include "tw/precision.hpp"
#include "tw/real.hpp"

namespace tw::painleve2 {

inline constexpr int kSchemaVersion = 1;
inline constexpr int kDefaultElementDegree = 32;

class HMSolution {
 public:
  HMSolution() = default;

  // Assembles a solution from node values; derived data (q', R, residual) is
  // recomputed. Used by the solver and by deserialization.
  static HMSolution from_nodes(std::vector<Real> grid, std::vector<Real> q, int element_degree,
                               long precision_bits, int newton_iterations);

  const std::vector<Real>& grid() const { return grid_; }
  const std::vector<Real>& q_values() const { return q_; }
  const std::vector<Real>& q_prime_values() const { return qp_; }
  const std::vector<Real>& r_values() const { return r_; }
  const Real& x_left() const { return grid_.front(); }
  const Real& x_right() const { return grid_.back(); }
  double residual_norm() const { return residual_norm_; }
  long precision_bits() const { return precision_bits_; }
  int element_degree() const { return degree_; }
  std::size_t element_count() const { return (grid_.size() - 1) / static_cast<std::size_t>(degree_); }
  int newton_iterations() const { return newton_iterations_; }

  bool contains(const Real& x) const { return x >= x_left() && x <= x_right(); }

  // Barycentric interpolation of q and q' at x; DomainError outside the grid.
  Real q_at(const Real& x) const;
  Real q_prime_at(const Real& x) const;

  // Integrates f(x, q(x), q'(x)) over [a, b] inside the grid, element by
  // element with Gauss-Legendre on the collocation interpolant.
  using Field = std::function<Real(const Real& x, const Real& q, const Real& qp)>;
  Real integrate(const Field& f, const Real& a, const Real& b) const;

 private:
  struct Local {
    std::vector<Real> q;
    std::vector<Real> qp;
    Real mid, half;
  };
  std::size_t element_of(const Real& x) const;
  Local element(std::size_t e) const;
  Real interpolate(const std::vector<Real>& values, const Real& xi) const;

  std::vector<Real> grid_, q_, qp_, r_;
  std::vector<Real> xi_;    // Lobatto points on [-1, 1]
  std::vector<Real> diff_;  // (p+1)^2 differentiation matrix on xi_
  std::vector<double> bary_;
  double residual_norm_ = 0.0;
  long precision_bits_ = 0;
  int degree_ = kDefaultElementDegree;
  int newton_iterations_ = 0;
};

struct SolveOptions {
  int element_degree = kDefaultElementDegree;
  int max_newton_iterations = 60;
};

HMSolution solve_hastings_mcleod(double x_left, double x_right, int nodes, const PrecisionContext& ctx,
                                 const SolveOptions& options = {});

// Coefficients a_k of the x -> -inf expansion q = sqrt(-x/2) sum_k a_k x^(-3k),
// generated by the recursion that the expansion satisfies; a_0 = 1.
std::vector<Real> q_series_coefficients(int count, long bits);

// Coefficients r_k of R = (x^2/4) sum_k r_k x^(-3k); r_0 = 1.
std::vector<Real> r_series_coefficients(int count, long bits);

// Partial sum of the q expansion through x^(-3 order), order in 0..3.
Real q_left_asymptotic(const Real& x, int order);
// Partial sum of the R expansion through x^(-3 order), order in 0..2.
Real r_left_asymptotic(const Real& x, int order);

// The q expansion summed to its smallest term (used for boundary data);
// `error` receives the magnitude of the first omitted term.
Real q_left_series(const Real& x, const PrecisionContext& ctx, double* error = nullptr);

struct LeftTails {
  Real r_regularized;  // int_{-inf}^{x} (R - y^2/4 + 1/(8y)) dy
  Real q_regularized;  // int_{-inf}^{x} (q - sqrt(|y|/2)) dy
  double error_bound;  // first omitted series term, both integrals
};
LeftTails left_tail_integrals(const Real& x, const PrecisionContext& ctx);

// R(x) from the local formula q'^2 - x q^2 - q^4.
Real r_of(const HMSolution& sol, const Real& x);
// R(x) as int_x^{x_right} q^2 plus the Airy tail beyond x_right.
Real r_by_quadrature(const HMSolution& sol, const Real& x, const PrecisionContext& ctx);

// Versioned JSON document; values are exact hexadecimal strings.
std::string to_json(const HMSolution& sol);
HMSolution from_json(const std::string& text);

}  // namespace tw::painleve2
