#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "tw/real.hpp"

namespace tw {

// Error taxonomy shared by all numeric kernels.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double last_residual)
      : std::runtime_error(what), last_residual_(last_residual) {}
  double last_residual() const { return last_residual_; }

 private:
  double last_residual_;
};
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Working precision and accuracy target for every numeric kernel.
class PrecisionContext {
 public:
  PrecisionContext() = default;
  PrecisionContext(long precision_bits, double tolerance, int max_refinements = 4)
      : precision_bits_(precision_bits), tolerance_(tolerance), max_refinements_(max_refinements) {
    if (precision_bits_ < 64) throw DomainError("precision_bits must be >= 64");
    if (!(tolerance_ > 0.0)) throw DomainError("tolerance must be positive");
    if (max_refinements_ < 1) throw DomainError("max_refinements must be >= 1");
  }

  // Tolerance derived from the precision: 2^-(bits - 32), floored at 1e-300.
  static PrecisionContext with_bits(long bits) {
    double tol = std::ldexp(1.0, -static_cast<int>(bits - 32));
    if (tol < 1e-300) tol = 1e-300;
    return PrecisionContext(bits, tol);
  }

  long precision_bits() const { return precision_bits_; }
  double tolerance() const { return tolerance_; }
  int max_refinements() const { return max_refinements_; }

  PrecisionContext with_precision(long bits) const {
    return PrecisionContext(bits, tolerance_, max_refinements_);
  }
  PrecisionContext doubled() const { return with_precision(2 * precision_bits_); }
  PrecisionContext with_extra_bits(long extra) const { return with_precision(precision_bits_ + extra); }
  PrecisionContext with_tolerance(double tol) const {
    return PrecisionContext(precision_bits_, tol, max_refinements_);
  }

  Real real(double v) const { return Real(v, precision_bits_); }
  Real real(long num, long den) const { return Real(num, den, precision_bits_); }

 private:
  long precision_bits_ = 256;
  double tolerance_ = 1e-60;
  int max_refinements_ = 4;
};

// Evaluates fn(ctx) at the working precision and again at doubled precision and
// returns the doubled-precision result once the two agree to ctx.tolerance()
// (relative for |value| > 1, absolute otherwise). Doubles further on failure.
template <class Fn>
Real stabilized(const PrecisionContext& ctx, Fn&& fn) {
  PrecisionContext cur = ctx;
  Real prev = fn(cur);
  for (int i = 0; i < ctx.max_refinements(); ++i) {
    cur = cur.doubled();
    Real next = fn(cur);
    Real scale = abs(next);
    if (scale < 1.0) scale = Real(1.0, next.precision());
    if (abs(next - prev) <= scale * ctx.tolerance()) return next;
    prev = std::move(next);
  }
  throw PrecisionError("result failed to stabilize after " + std::to_string(ctx.max_refinements()) +
                       " precision doublings");
}

}  // namespace tw
