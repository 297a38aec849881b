#pragma once

// Toeplitz and Toeplitz+Hankel determinants of the symbol e^{2t cos theta}
// (moments I_j(2t)), the orthogonal-polynomial data kappa_q and pi_q(0)
// derived from them, and the finite-(t, L, M) decompositions whose limits
// reproduce the Tracy-Widom integrals.
//
// Every factorization runs at ctx.precision_bits + guard_bits(t, n) and is
// repeated at doubled precision until two runs agree.

#include <optional>
#include <string>
#include <vector>

#include "tw/painleve2.hpp"
#include "tw/precision.hpp"
#include "tw/real.hpp"
#include "tw/twdist.hpp"

namespace tw::toeplitz {

inline constexpr int kSchemaVersion = 1;
inline constexpr int kMaxDimension = 400;

// plain: I_{j-k}; plus_plus: I_{j-k} - I_{j+k+2}; minus_plus: I_{j-k} + I_{j+k+1}
enum class Kind { plain, plus_plus, minus_plus };
const char* to_string(Kind k);

struct MomentMatrixSpec {
  double t = 1.0;
  int n = 1;
  Kind kind = Kind::plain;
};

// Stabilized leading-minor data of one moment matrix.
struct Ledger {
  Kind kind = Kind::plain;
  double t = 0.0;
  std::vector<Real> log_d;  // log D_0 = 0, ..., log D_n
  std::vector<Real> pi0;    // pi_q(0) for q = 0..n-1 (plain with_pi only)
  long precision_bits_used = 0;

  int size() const { return static_cast<int>(log_d.size()) - 1; }
  Real log_kappa_sq(int q) const;      // log D_q - log D_{q+1}
  Real log_kappa_inv_sq(int q) const;  // log D_{q+1} - log D_q
};

// Guard bits for an n x n factorization: ceil(min(2t^2, 4tn) log2 e) + 64.
long guard_bits(double t, int n);

// Leading minors D_0..D_n (and optionally pi_q(0) from the inverse factor).
Ledger determinant_ledger(Kind kind, double t, int n, const PrecisionContext& ctx, bool with_pi = false);

Real toeplitz_log_det(const MomentMatrixSpec& spec, const PrecisionContext& ctx);
// log kappa_q^2
Real kappa_sq(int q, double t, const PrecisionContext& ctx);
// pi_q(0) from the q x q normal equations of the monic polynomial.
Real pi_zero(int q, double t, const PrecisionContext& ctx);
// log D^{++}_ell or log D^{-+}_ell
Real d_pm_log(Kind kind, int ell, double t, const PrecisionContext& ctx);

struct AiryPrediction {
  static constexpr double c1 = 5.0 / 72.0;
  static constexpr double d1 = -7.0 / 72.0;
  // -1/(8(2t - q)) - 1/(12 q)
  static double correction(int q, double t);
};

// Predicted log kappa_{q-1}^{-2} with and without the first correction.
Real airy_log_kappa_prediction(int q, double t);
Real airy_log_kappa_leading(int q, double t);
// (-1)^q sqrt((2t - q) / (2t)) for q < 2t.
Real airy_pi_prediction(int q, double t);
// (2t)^2 / (q^{3/2} (2t-q)^{5/2}) + (2t)^2 / (q^2 (2t-q)^2)
double airy_error_envelope(int q, double t);

struct ScanRecord {
  int q = 0;
  Real gamma;
  Real log_kappa_sq;
  Real pi0;
  std::optional<Real> log_kappa_sq_airy_pred;
  std::optional<Real> pi0_airy_pred;
};

struct ToeplitzScan {
  double t = 0.0;
  std::vector<ScanRecord> records;
  long precision_bits_used = 0;
};

ToeplitzScan toeplitz_scan(double t, int q_min, int q_max, const PrecisionContext& ctx);
std::string scan_csv(const ToeplitzScan& scan, int digits = 25);
std::string scan_json(const ToeplitzScan& scan, int digits = 25);

int floor_n(double t, double x);    // floor(2t + x t^{1/3})
int floor_ell(double t, double x);  // floor(t + (x/2) t^{1/3})

struct SumPartsReport {
  double t = 0.0, x = 0.0;
  int L = 0, M = 0;
  int n = 0;        // floor(2t + x t^{1/3})
  int q_split = 0;  // floor(2t - M t^{1/3}), first index of the Painleve part
  Real exact_part, airy_part, painleve_part, total;
  Real direct;  // log(e^{-t^2} D_n) from a separate factorization
  Real exact_limit, airy_limit, painleve_limit;
  Real f2_reference;
  long precision_bits_used = 0;
};

SumPartsReport sum_parts_report(double t, double x, int L, int M, const painleve2::HMSolution& sol,
                                const PrecisionContext& ctx);
std::string to_json(const SumPartsReport& r, int digits = 25);

// Hermite-weight Selberg integral D_L^Herm(t): closed form through Barnes G,
// and by direct L-dimensional Gauss-Legendre quadrature (L <= 3).
Real selberg_closed_form(int L, double t, const PrecisionContext& ctx);
Real selberg_quadrature(int L, double t, const PrecisionContext& ctx);

struct ExactPartCheck {
  Real residual;  // log D_L minus its large-t, large-L form
  std::optional<Real> selberg_closed, selberg_quadrature;
};
ExactPartCheck exact_part_limit_check(int L, double t, const PrecisionContext& ctx);

// log(D^{++}_{L-1} D^{-+}_L / D_{2L-1}) - (2L - 1) log 2
Real exact_combination_residual(int L, double t, const PrecisionContext& ctx);

struct EScalingReport {
  double t = 0.0, x = 0.0;
  int L = 0, M = 0;
  int ell = 0;
  Real d_pp_scaled;  // e^{-t^2/2} D^{++}_{ell-1}
  Real d_mp_scaled;  // e^{-t^2/2 - t} D^{-+}_ell
  Real fe;           // F(x) E(x)
  Real exact_part, airy_part, painleve_part, total;  // total approximates 2 log E
  Real direct;  // log(e^{-t} D^{++}_{ell-1} D^{-+}_ell / D_{2 ell - 1}), equal to total
  Real two_log_e;
  Real exact_limit, airy_limit;
  Real painleve_limit;  // int_{-M}^x q
  std::vector<int> caps;
  std::vector<Real> odd_residuals;   // sum_{j=ell}^{ell+K} log(1 - pi_{2j+1}(0)) + log E
  std::vector<Real> even_residuals;  // sum_{j=ell}^{ell+K} log(1 + pi_{2j+2}(0)) + log E
  long precision_bits_used = 0;
};

EScalingReport e_double_scaling_check(double t, double x, int L, int M, const painleve2::HMSolution& sol,
                                      const PrecisionContext& ctx,
                                      const std::vector<int>& caps = {0, 1, 2, 4, 8, 16, 32});
std::string to_json(const EScalingReport& r, int digits = 25);

}  // namespace tw::toeplitz
