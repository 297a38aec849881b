#include "tw/painleve2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tw/linalg.hpp"
#include "tw/quadrature.hpp"
#include "tw/specialfn.hpp"

namespace tw::painleve2 {
namespace {

template <class T>
double to_d(const T& v) {
  return Scalar<T>::to_double(v);
}

// Differentiation matrix for the barycentric interpolant on `xi`.
template <class T>
std::vector<T> diff_matrix(const std::vector<T>& xi, const std::vector<double>& w) {
  const std::size_t n = xi.size();
  std::vector<T> d(n * n, xi[0] * 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    T diag = xi[0] * 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      d[i * n + j] = (w[j] / w[i]) / (xi[i] - xi[j]);
      diag -= d[i * n + j];
    }
    d[i * n + i] = diag;
  }
  return d;
}

template <class T>
std::vector<T> mat_square(const std::vector<T>& a, std::size_t n) {
  std::vector<T> c(n * n, a[0] * 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) c[i * n + j] += a[i * n + k] * a[k * n + j];
  return c;
}

// Collocation system on uniform elements. Row layout: 0 is the left Dirichlet
// condition, element interiors carry the ODE, interface rows carry
// continuity of q', the last row is the Robin condition on the Airy branch.
template <class T>
struct Problem {
  std::size_t p = 0;
  std::size_t elements = 0;
  std::size_t n = 0;
  std::vector<T> x;
  std::vector<T> d1, d2;  // physical-scale, (p+1)^2
  T left, robin, zero;

  T d1_at(std::size_t i, std::size_t j) const { return d1[i * (p + 1) + j]; }
  T d2_at(std::size_t i, std::size_t j) const { return d2[i * (p + 1) + j]; }

  std::vector<T> residual(const std::vector<T>& q) const {
    std::vector<T> f(n, zero);
    f[0] = q[0] - left;
    for (std::size_t e = 0; e < elements; ++e) {
      const std::size_t base = e * p;
      for (std::size_t k = 1; k < p; ++k) {
        const std::size_t g = base + k;
        T s = zero;
        for (std::size_t m = 0; m <= p; ++m) s += d2_at(k, m) * q[base + m];
        f[g] = s - 2.0 * q[g] * q[g] * q[g] - x[g] * q[g];
      }
    }
    for (std::size_t e = 1; e < elements; ++e) {
      const std::size_t g = e * p;
      T s = zero;
      for (std::size_t m = 0; m <= p; ++m) s += d1_at(p, m) * q[g - p + m] - d1_at(0, m) * q[g + m];
      f[g] = s;
    }
    const std::size_t last = n - 1;
    T s = zero;
    for (std::size_t m = 0; m <= p; ++m) s += d1_at(p, m) * q[last - p + m];
    f[last] = s - robin * q[last];
    return f;
  }

  linalg::BandMatrix<T> jacobian(const std::vector<T>& q) const {
    linalg::BandMatrix<T> j(n, p, p, zero);
    j(0, 0) = zero + 1.0;
    for (std::size_t e = 0; e < elements; ++e) {
      const std::size_t base = e * p;
      for (std::size_t k = 1; k < p; ++k) {
        const std::size_t g = base + k;
        for (std::size_t m = 0; m <= p; ++m) j(g, base + m) = d2_at(k, m);
        j(g, g) -= 6.0 * q[g] * q[g] + x[g];
      }
    }
    for (std::size_t e = 1; e < elements; ++e) {
      const std::size_t g = e * p;
      for (std::size_t m = 0; m <= p; ++m) j(g, g - p + m) += d1_at(p, m);
      for (std::size_t m = 0; m <= p; ++m) j(g, g + m) -= d1_at(0, m);
    }
    const std::size_t last = n - 1;
    for (std::size_t m = 0; m <= p; ++m) j(last, last - p + m) = d1_at(p, m);
    j(last, last) -= robin;
    return j;
  }
};

template <class T>
double max_abs(const std::vector<T>& v) {
  double m = 0.0;
  for (const auto& e : v) m = std::max(m, std::fabs(to_d(e)));
  return m;
}

// Damped Newton with backtracking on the max-norm of the residual. Returns
// the iteration count; throws SolverError when the step fails to shrink.
template <class T>
int newton(const Problem<T>& prob, std::vector<T>& q, double step_tol, int max_iter) {
  std::vector<T> f = prob.residual(q);
  double fn = max_abs(f);
  for (int iter = 1; iter <= max_iter; ++iter) {
    std::vector<T> delta(f.size(), prob.zero);
    for (std::size_t i = 0; i < f.size(); ++i) delta[i] = -f[i];
    auto jac = prob.jacobian(q);
    jac.solve_in_place(delta);
    const double step = max_abs(delta);

    double alpha = 1.0;
    std::vector<T> trial(q.size(), prob.zero);
    std::vector<T> ft;
    double ftn = 0.0;
    for (;;) {
      for (std::size_t i = 0; i < q.size(); ++i) trial[i] = q[i] + alpha * delta[i];
      ft = prob.residual(trial);
      ftn = max_abs(ft);
      // near convergence the residual sits on the rounding floor; accept
      if (ftn <= (1.0 - 1e-4 * alpha) * fn || alpha * step <= 1e3 * step_tol) break;
      alpha *= 0.5;
      if (alpha < 1.0 / 4096) throw SolverError("hastings-mcleod: line search failed", fn);
    }
    q.swap(trial);
    f.swap(ft);
    fn = ftn;
    if (alpha == 1.0 && step <= step_tol) return iter;
  }
  throw SolverError("hastings-mcleod: Newton did not converge", fn);
}

std::vector<Real> b_coefficients(int count, long bits) {
  // w(u) = sum b_k u^(-3k) with q = sqrt(u/2) w, u = -x.
  std::vector<Real> b, c;  // c = coefficients of w^2
  b.reserve(static_cast<std::size_t>(count));
  b.emplace_back(1.0, bits);
  c.emplace_back(1.0, bits);
  for (int m = 1; m < count; ++m) {
    const auto mm = static_cast<std::size_t>(m);
    Real cprime(bits);
    for (std::size_t i = 1; i < mm; ++i) cprime += b[i] * b[mm - i];
    Real s = cprime;
    for (std::size_t k = 1; k < mm; ++k) s += c[k] * b[mm - k];
    const double km1 = m - 1;
    Real bm = (b[mm - 1] * (9.0 * km1 * km1 - 0.25) - s) / 2;
    c.push_back(2 * bm + cprime);
    b.push_back(std::move(bm));
  }
  return b;
}

std::vector<Real> convolve(const std::vector<Real>& a, const std::vector<Real>& b, long bits) {
  std::vector<Real> c(a.size(), Real(bits));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; i + j < a.size() && j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

void check_left_x(const Real& x, const char* who) {
  if (!x.is_finite() || x > -2.0) throw DomainError(std::string(who) + ": requires x <= -2");
}

// Sums terms(k), k = first.., until the terms reach the working epsilon or
// start to grow; the first omitted term is reported as the error.
template <class Fn>
Real sum_asymptotic(Fn&& term, int first, int max_terms, long bits, double* error) {
  Real sum(bits);
  Real prev_mag(bits);
  bool have_prev = false;
  double err = 0.0;
  for (int k = first; k < max_terms; ++k) {
    Real t = term(k);
    Real mag = abs(t);
    if (have_prev && mag > prev_mag) {
      err = mag.to_double();
      break;
    }
    if (mag.is_zero() || (!sum.is_zero() && mag < abs(sum) * std::ldexp(1.0, -static_cast<int>(bits)))) {
      err = mag.to_double();
      break;
    }
    sum += t;
    prev_mag = mag;
    have_prev = true;
    err = mag.to_double();
  }
  if (error) *error = err;
  return sum;
}

constexpr int kSeriesTerms = 80;

}  // namespace

// ---------------------------------------------------------------------------
// series

std::vector<Real> q_series_coefficients(int count, long bits) {
  if (count < 1) throw DomainError("q_series_coefficients: count must be >= 1");
  auto a = b_coefficients(count, bits);
  for (std::size_t k = 1; k < a.size(); k += 2) a[k] = -a[k];
  return a;
}

std::vector<Real> r_series_coefficients(int count, long bits) {
  if (count < 1) throw DomainError("r_series_coefficients: count must be >= 1");
  const auto b = b_coefficients(count, bits);
  const auto w2 = convolve(b, b, bits);
  const auto w4 = convolve(w2, w2, bits);
  std::vector<Real> p(b.size(), Real(bits));
  for (std::size_t k = 0; k < b.size(); ++k) p[k] = b[k] * (0.5 - 3.0 * static_cast<double>(k));
  const auto p2 = convolve(p, p, bits);
  std::vector<Real> r(b.size(), Real(bits));
  for (std::size_t k = 0; k < b.size(); ++k) {
    Real v = 2 * w2[k] - w4[k];
    if (k >= 1) v += 2 * p2[k - 1];
    r[k] = (k % 2 == 0) ? v : -v;
  }
  return r;
}

Real q_left_asymptotic(const Real& x, int order) {
  check_left_x(x, "q_left_asymptotic");
  if (order < 0 || order > 3) throw DomainError("q_left_asymptotic: order must be in 0..3");
  const long bits = x.precision();
  const auto a = q_series_coefficients(order + 1, bits);
  const Real x3 = x * x * x;
  Real sum(bits), pw(1.0, bits);
  for (int k = 0; k <= order; ++k) {
    sum += a[static_cast<std::size_t>(k)] * pw;
    pw /= x3;
  }
  return sqrt(-x / 2) * sum;
}

Real r_left_asymptotic(const Real& x, int order) {
  check_left_x(x, "r_left_asymptotic");
  if (order < 0 || order > 2) throw DomainError("r_left_asymptotic: unsupported order (0..2 only)");
  const long bits = x.precision();
  const auto r = r_series_coefficients(order + 1, bits);
  const Real x3 = x * x * x;
  Real sum(bits), pw(1.0, bits);
  for (int k = 0; k <= order; ++k) {
    sum += r[static_cast<std::size_t>(k)] * pw;
    pw /= x3;
  }
  return x * x / 4 * sum;
}

Real q_left_series(const Real& x, const PrecisionContext& ctx, double* error) {
  check_left_x(x, "q_left_series");
  const long bits = std::max<long>(ctx.precision_bits(), x.precision());
  const Real xx = x.at_precision(bits);
  const auto a = q_series_coefficients(kSeriesTerms, bits);
  const Real inv = 1.0 / (xx * xx * xx);
  double err = 0.0;
  Real s = sum_asymptotic([&](int k) { return a[static_cast<std::size_t>(k)] * pow(inv, k); }, 0, kSeriesTerms,
                          bits, &err);
  const Real scale = sqrt(-xx / 2);
  if (error) *error = err * scale.to_double();
  return scale * s;
}

LeftTails left_tail_integrals(const Real& x, const PrecisionContext& ctx) {
  check_left_x(x, "left_tail_integrals");
  const long bits = std::max<long>(ctx.precision_bits(), x.precision());
  const Real xx = x.at_precision(bits);
  const Real u = -xx;
  const auto b = b_coefficients(kSeriesTerms, bits);
  const auto r = r_series_coefficients(kSeriesTerms, bits);
  const Real rt2 = sqrt(Real(2.0, bits));

  // int_{-inf}^{x} sqrt(|y|/2) b_k |y|^(-3k) dy, k >= 1
  double eq = 0.0;
  Real qreg = sum_asymptotic(
      [&](int k) {
        const double e = 1.5 - 3.0 * k;
        return b[static_cast<std::size_t>(k)] * pow(u, Real(e, bits)) / ((-e) * rt2);
      },
      1, kSeriesTerms, bits, &eq);
  // int_{-inf}^{x} (r_k / 4) y^(2-3k) dy, k >= 2 (k = 1 is the 1/(8y) term)
  double er = 0.0;
  Real rreg = sum_asymptotic(
      [&](int k) {
        const long e = 3 - 3L * k;
        return r[static_cast<std::size_t>(k)] * pow(xx, e) / (4.0 * static_cast<double>(e));
      },
      2, kSeriesTerms, bits, &er);
  return {std::move(rreg), std::move(qreg), std::max(eq, er)};
}

// ---------------------------------------------------------------------------
// HMSolution

HMSolution HMSolution::from_nodes(std::vector<Real> grid, std::vector<Real> q, int element_degree,
                                  long precision_bits, int newton_iterations) {
  if (element_degree < 2) throw DomainError("HMSolution: element degree must be >= 2");
  const auto p = static_cast<std::size_t>(element_degree);
  if (grid.size() != q.size() || grid.size() < p + 1 || (grid.size() - 1) % p != 0) {
    throw DomainError("HMSolution: grid does not match the element layout");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw DomainError("HMSolution: grid must be strictly increasing");
  }
  HMSolution s;
  s.degree_ = element_degree;
  s.precision_bits_ = precision_bits;
  s.newton_iterations_ = newton_iterations;
  s.grid_ = std::move(grid);
  s.q_ = std::move(q);
  s.xi_ = quad::chebyshev_lobatto(element_degree, precision_bits);
  s.bary_ = quad::chebyshev_lobatto_weights(element_degree);
  s.diff_ = diff_matrix(s.xi_, s.bary_);
  const auto d2 = mat_square(s.diff_, p + 1);

  const std::size_t n = s.grid_.size();
  s.qp_.assign(n, Real(precision_bits));
  s.r_.assign(n, Real(precision_bits));
  std::vector<int> hits(n, 0);
  double res = 0.0;
  for (std::size_t e = 0; e < s.element_count(); ++e) {
    const Local loc = s.element(e);
    const Real half2 = loc.half * loc.half;
    for (std::size_t k = 0; k <= p; ++k) {
      const std::size_t g = e * p + k;
      s.qp_[g] += loc.qp[k];
      ++hits[g];
      Real qpp(precision_bits);
      for (std::size_t m = 0; m <= p; ++m) qpp += d2[k * (p + 1) + m] * loc.q[m];
      qpp /= half2;
      const Real& qg = s.q_[g];
      const Real r = qpp - 2 * qg * qg * qg - s.grid_[g] * qg;
      res = std::max(res, std::fabs(r.to_double()));
    }
  }
  for (std::size_t g = 0; g < n; ++g) {
    if (hits[g] > 1) s.qp_[g] /= static_cast<long>(hits[g]);
    const Real q2 = s.q_[g] * s.q_[g];
    s.r_[g] = s.qp_[g] * s.qp_[g] - s.grid_[g] * q2 - q2 * q2;
  }
  s.residual_norm_ = res;
  return s;
}

std::size_t HMSolution::element_of(const Real& x) const {
  if (grid_.empty() || !x.is_finite() || !contains(x)) {
    throw DomainError("HMSolution: x outside the solution grid");
  }
  const auto p = static_cast<std::size_t>(degree_);
  std::size_t lo = 0, hi = element_count();  // answer in [lo, hi)
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (grid_[mid * p] <= x) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

HMSolution::Local HMSolution::element(std::size_t e) const {
  const auto p = static_cast<std::size_t>(degree_);
  Local loc;
  const Real& a = grid_[e * p];
  const Real& b = grid_[e * p + p];
  loc.mid = (a + b) / 2;
  loc.half = (b - a) / 2;
  loc.q.assign(q_.begin() + static_cast<std::ptrdiff_t>(e * p),
               q_.begin() + static_cast<std::ptrdiff_t>(e * p + p + 1));
  loc.qp.assign(p + 1, Real(precision_bits_));
  for (std::size_t k = 0; k <= p; ++k) {
    Real s(precision_bits_);
    for (std::size_t m = 0; m <= p; ++m) s += diff_[k * (p + 1) + m] * loc.q[m];
    loc.qp[k] = s / loc.half;
  }
  return loc;
}

Real HMSolution::interpolate(const std::vector<Real>& values, const Real& xi) const {
  Real num(precision_bits_), den(precision_bits_);
  for (std::size_t k = 0; k < xi_.size(); ++k) {
    const Real d = xi - xi_[k];
    if (d.is_zero()) return values[k];
    const Real c = bary_[k] / d;
    num += c * values[k];
    den += c;
  }
  return num / den;
}

Real HMSolution::q_at(const Real& x) const {
  const std::size_t e = element_of(x);
  const Local loc = element(e);
  return interpolate(loc.q, (x - loc.mid) / loc.half);
}

Real HMSolution::q_prime_at(const Real& x) const {
  const std::size_t e = element_of(x);
  const Local loc = element(e);
  return interpolate(loc.qp, (x - loc.mid) / loc.half);
}

Real HMSolution::integrate(const Field& f, const Real& a, const Real& b) const {
  if (b < a) return -integrate(f, b, a);
  if (!contains(a) || !contains(b)) throw DomainError("HMSolution::integrate: range outside the grid");
  const auto p = static_cast<std::size_t>(degree_);
  const quad::Rule rule = quad::gauss_legendre(2 * degree_, precision_bits_);
  Real total(precision_bits_);
  if (a == b) return total;
  const std::size_t e0 = element_of(a);
  const std::size_t e1 = element_of(b);
  for (std::size_t e = e0; e <= e1; ++e) {
    const Real& el_lo = grid_[e * p];
    const Real& el_hi = grid_[e * p + p];
    const Real lo = (a > el_lo) ? a : el_lo;
    const Real hi = (b < el_hi) ? b : el_hi;
    if (!(hi > lo)) continue;
    const Local loc = element(e);
    const Real mid = (lo + hi) / 2;
    const Real half = (hi - lo) / 2;
    Real part(precision_bits_);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const Real y = mid + half * rule.nodes[i];
      const Real xi = (y - loc.mid) / loc.half;
      part += rule.weights[i] * f(y, interpolate(loc.q, xi), interpolate(loc.qp, xi));
    }
    total += half * part;
  }
  return total;
}

// ---------------------------------------------------------------------------
// solver

HMSolution solve_hastings_mcleod(double x_left, double x_right, int nodes, const PrecisionContext& ctx,
                                 const SolveOptions& options) {
  if (!std::isfinite(x_left) || !std::isfinite(x_right)) throw DomainError("solve: non-finite window");
  if (x_left > -6.0) throw DomainError("solve: x_left must be <= -6 for the boundary series");
  if (x_right < 6.0) throw DomainError("solve: x_right must be >= 6 for the Airy boundary");
  if (nodes < 200) throw DomainError("solve: nodes must be >= 200");
  const int deg = options.element_degree;
  if (deg < 4 || deg > 64) throw DomainError("solve: element degree must be in 4..64");

  const long bits = ctx.precision_bits();
  const auto p = static_cast<std::size_t>(deg);
  const std::size_t elements = (static_cast<std::size_t>(nodes) - 1 + p - 1) / p;
  const std::size_t n = elements * p + 1;

  const Real xl(x_left, bits), xr(x_right, bits);
  const Real h = (xr - xl) / static_cast<long>(elements);
  const auto xi = quad::chebyshev_lobatto(deg, bits);
  std::vector<Real> grid(n, Real(bits));
  for (std::size_t e = 0; e < elements; ++e) {
    const Real a = xl + h * static_cast<long>(e);
    for (std::size_t k = 0; k < p; ++k) grid[e * p + k] = a + h / 2 * (xi[k] + 1.0);
  }
  grid[n - 1] = xr;

  // Boundary data: the left expansion summed to its smallest term, and the
  // logarithmic derivative of Ai on the right.
  const Real left = q_left_series(xl, ctx);
  const auto airy_r = specialfn::airy_ai(xr, ctx);
  const Real robin = airy_r.ai_prime / airy_r.ai;

  const auto w = quad::chebyshev_lobatto_weights(deg);
  const Real half = h / 2;

  // double-precision pass
  Problem<double> pd;
  pd.p = p;
  pd.elements = elements;
  pd.n = n;
  pd.zero = 0.0;
  pd.left = left.to_double();
  pd.robin = robin.to_double();
  pd.x.resize(n);
  for (std::size_t i = 0; i < n; ++i) pd.x[i] = grid[i].to_double();
  {
    std::vector<double> xid(xi.size());
    for (std::size_t k = 0; k < xi.size(); ++k) xid[k] = xi[k].to_double();
    pd.d1 = diff_matrix(xid, w);
    const double hd = half.to_double();
    for (auto& v : pd.d1) v /= hd;
    pd.d2 = mat_square(pd.d1, p + 1);
  }
  std::vector<double> qd(n);
  {
    const PrecisionContext guess_ctx(64, 1e-16);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = pd.x[i];
      const double root = std::sqrt(std::max(-x, 0.0) / 2);
      if (x <= -3.0) {
        qd[i] = root;
        continue;
      }
      const double ai = specialfn::airy_ai(x, guess_ctx).ai.to_double();
      if (x >= -1.0) {
        qd[i] = ai;
      } else {
        const double s = (x + 3.0) / 2.0;
        const double blend = s * s * (3 - 2 * s);
        qd[i] = blend * ai + (1 - blend) * root;
      }
    }
  }
  int iters = newton(pd, qd, 1e-10, options.max_newton_iterations);

  // polishing at working precision
  Problem<Real> pr;
  pr.p = p;
  pr.elements = elements;
  pr.n = n;
  pr.zero = Real(bits);
  pr.left = left;
  pr.robin = robin;
  pr.x = grid;
  pr.d1 = diff_matrix(xi, w);
  for (auto& v : pr.d1) v /= half;
  pr.d2 = mat_square(pr.d1, p + 1);
  std::vector<Real> q(n, Real(bits));
  for (std::size_t i = 0; i < n; ++i) q[i] = Real(qd[i], bits);
  const double step_tol = std::ldexp(1.0, -static_cast<int>(bits) + 24);
  iters += newton(pr, q, step_tol, options.max_newton_iterations);

  return HMSolution::from_nodes(std::move(grid), std::move(q), deg, bits, iters);
}

Real r_of(const HMSolution& sol, const Real& x) {
  const Real q = sol.q_at(x);
  const Real qp = sol.q_prime_at(x);
  const Real q2 = q * q;
  return qp * qp - x * q2 - q2 * q2;
}

Real r_by_quadrature(const HMSolution& sol, const Real& x, const PrecisionContext& ctx) {
  const Real body = sol.integrate([](const Real&, const Real& q, const Real&) { return q * q; }, x, sol.x_right());
  const auto a = specialfn::airy_ai(sol.x_right(), ctx.with_precision(sol.precision_bits()));
  return body + a.ai_prime * a.ai_prime - sol.x_right() * a.ai * a.ai;
}

}  // namespace tw::painleve2
