#include "resist/mp.hpp"

#include <climits>
#include <stdexcept>
#include <utility>

namespace resist::hp {

namespace {
thread_local long g_bits = 128;
}

long working_bits() { return g_bits; }

Precision::Precision(long bits) : saved_(g_bits) {
  if (bits < MPFR_PREC_MIN || bits > MPFR_PREC_MAX)
    throw std::invalid_argument("precision out of range");
  g_bits = bits;
}

Precision::~Precision() { g_bits = saved_; }

void Real::init(long bits) { mpfr_init2(v_, static_cast<mpfr_prec_t>(bits)); }

Real::Real() {
  init(g_bits);
  mpfr_set_zero(v_, 1);
}

Real::Real(double v) {
  init(g_bits < 53 ? 53 : g_bits);
  mpfr_set_d(v_, v, MPFR_RNDN);
}

Real::Real(long double v) {
  init(g_bits < 64 ? 64 : g_bits);
  mpfr_set_ld(v_, v, MPFR_RNDN);
}

Real::Real(int v) {
  init(g_bits);
  mpfr_set_si(v_, v, MPFR_RNDN);
}

Real::Real(const std::string &s) {
  init(g_bits);
  if (mpfr_set_str(v_, s.c_str(), 10, MPFR_RNDN) != 0) {
    // mpfr_set_str returns nonzero only when the whole string is not a number
    if (!mpfr_number_p(v_))
      throw std::invalid_argument("not a decimal real: " + s);
  }
}

Real::Real(const Real &o) {
  init(o.bits());
  mpfr_set(v_, o.v_, MPFR_RNDN);
}

Real::Real(Real &&o) noexcept {
  v_[0] = o.v_[0];
  o.v_->_mpfr_d = nullptr;
}

Real &Real::operator=(const Real &o) {
  if (this == &o)
    return *this;
  if (v_->_mpfr_d == nullptr)
    init(o.bits());
  else
    mpfr_set_prec(v_, o.bits());
  mpfr_set(v_, o.v_, MPFR_RNDN);
  return *this;
}

Real &Real::operator=(Real &&o) noexcept {
  if (this == &o)
    return *this;
  if (v_->_mpfr_d != nullptr)
    mpfr_clear(v_);
  v_[0] = o.v_[0];
  o.v_->_mpfr_d = nullptr;
  return *this;
}

Real::~Real() {
  if (v_->_mpfr_d != nullptr)
    mpfr_clear(v_);
}

long Real::exponent() const {
  if (mpfr_zero_p(v_))
    return LONG_MIN / 2;
  return static_cast<long>(mpfr_get_exp(v_));
}

std::string Real::str() const {
  if (mpfr_zero_p(v_))
    return "0";
  mpfr_exp_t e = 0;
  char *s = mpfr_get_str(nullptr, &e, 10, 0, v_, MPFR_RNDN);
  std::string digits(s);
  mpfr_free_str(s);
  std::string out;
  if (digits[0] == '-') {
    out = "-";
    digits.erase(0, 1);
  }
  out += digits.substr(0, 1);
  if (digits.size() > 1)
    out += "." + digits.substr(1);
  out += "e" + std::to_string(static_cast<long>(e) - 1);
  return out;
}

Real &Real::operator+=(const Real &o) {
  *this = *this + o;
  return *this;
}
Real &Real::operator-=(const Real &o) {
  *this = *this - o;
  return *this;
}
Real &Real::operator*=(const Real &o) {
  *this = *this * o;
  return *this;
}
Real &Real::operator*=(double a) {
  *this = *this * a;
  return *this;
}
Real &Real::operator/=(const Real &o) {
  *this = *this / o;
  return *this;
}

Real operator-(const Real &a) {
  Real r;
  mpfr_neg(r.raw(), a.raw(), MPFR_RNDN);
  return r;
}
Real operator+(const Real &a, const Real &b) {
  Real r;
  mpfr_add(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  return r;
}
Real operator-(const Real &a, const Real &b) {
  Real r;
  mpfr_sub(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  return r;
}
Real operator*(const Real &a, const Real &b) {
  Real r;
  mpfr_mul(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  return r;
}
Real operator/(const Real &a, const Real &b) {
  Real r;
  mpfr_div(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  return r;
}
Real operator*(const Real &a, double b) {
  Real r;
  mpfr_mul_d(r.raw(), a.raw(), b, MPFR_RNDN);
  return r;
}
Real operator*(double a, const Real &b) { return b * a; }
Real operator/(const Real &a, double b) {
  Real r;
  mpfr_div_d(r.raw(), a.raw(), b, MPFR_RNDN);
  return r;
}
Real operator+(const Real &a, double b) {
  Real r;
  mpfr_add_d(r.raw(), a.raw(), b, MPFR_RNDN);
  return r;
}
Real operator-(const Real &a, double b) {
  Real r;
  mpfr_sub_d(r.raw(), a.raw(), b, MPFR_RNDN);
  return r;
}

bool operator<(const Real &a, const Real &b) { return mpfr_less_p(a.raw(), b.raw()) != 0; }
bool operator<=(const Real &a, const Real &b) { return mpfr_lessequal_p(a.raw(), b.raw()) != 0; }
bool operator>(const Real &a, const Real &b) { return mpfr_greater_p(a.raw(), b.raw()) != 0; }
bool operator>=(const Real &a, const Real &b) { return mpfr_greaterequal_p(a.raw(), b.raw()) != 0; }
bool operator==(const Real &a, const Real &b) { return mpfr_equal_p(a.raw(), b.raw()) != 0; }
bool operator!=(const Real &a, const Real &b) { return !(a == b); }

Real sqrt(const Real &a) {
  Real r;
  mpfr_sqrt(r.raw(), a.raw(), MPFR_RNDN);
  return r;
}
Real abs(const Real &a) {
  Real r;
  mpfr_abs(r.raw(), a.raw(), MPFR_RNDN);
  return r;
}
Real exp(const Real &a) {
  Real r;
  mpfr_exp(r.raw(), a.raw(), MPFR_RNDN);
  return r;
}
Real log(const Real &a) {
  Real r;
  mpfr_log(r.raw(), a.raw(), MPFR_RNDN);
  return r;
}
Real log1p(const Real &a) {
  Real r;
  mpfr_log1p(r.raw(), a.raw(), MPFR_RNDN);
  return r;
}
Real cosh(const Real &a) {
  Real r;
  mpfr_cosh(r.raw(), a.raw(), MPFR_RNDN);
  return r;
}
Real sinh(const Real &a) {
  Real r;
  mpfr_sinh(r.raw(), a.raw(), MPFR_RNDN);
  return r;
}
Real cos(const Real &a) {
  Real r;
  mpfr_cos(r.raw(), a.raw(), MPFR_RNDN);
  return r;
}
Real sin(const Real &a) {
  Real r;
  mpfr_sin(r.raw(), a.raw(), MPFR_RNDN);
  return r;
}
Real pi() {
  Real r;
  mpfr_const_pi(r.raw(), MPFR_RNDN);
  return r;
}

Real rounded(const Real &a, long bits) {
  Precision p(bits);
  Real r;
  mpfr_set(r.raw(), a.raw(), MPFR_RNDN);
  return r;
}

} // namespace resist::hp
