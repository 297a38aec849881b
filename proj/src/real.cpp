#include "tw/real.hpp"

#include <cstdio>
#include <memory>
#include <stdexcept>
#include <string>

namespace tw::mp {

Real Real::parse(std::string_view text, mpfr_prec_t bits) {
  Real r(bits);
  std::string s(text);
  char* end = nullptr;
  mpfr_strtofr(r.v_, s.c_str(), &end, 0, MPFR_RNDN);
  if (s.empty() || end == nullptr || *end != '\0') {
    throw std::invalid_argument("cannot parse real number: '" + s + "'");
  }
  return r;
}

namespace {
std::string format(const char* fmt, int digits, mpfr_srcptr v) {
  char* buf = nullptr;
  int n = digits >= 0 ? mpfr_asprintf(&buf, fmt, digits, v) : mpfr_asprintf(&buf, fmt, v);
  if (n < 0 || buf == nullptr) throw std::runtime_error("mpfr_asprintf failed");
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}
}  // namespace

std::string Real::to_string(int digits) const {
  if (digits < 1) digits = 1;
  return format("%.*Re", digits - 1, v_);
}

std::string Real::to_hex() const { return format("%Ra", -1, v_); }

}  // namespace tw::mp
