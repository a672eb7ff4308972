#pragma once

#include <mpfr.h>

#include <string>

// Thin value type over mpfr_t. Arithmetic results are rounded to the
// thread-local working precision; copies keep the precision of their source.
namespace resist::hp {

long working_bits();

class Precision {
public:
  explicit Precision(long bits);
  ~Precision();
  Precision(const Precision &) = delete;
  Precision &operator=(const Precision &) = delete;

private:
  long saved_;
};

class Real {
public:
  Real();
  Real(double v);
  Real(long double v);
  Real(int v);
  explicit Real(const std::string &s);
  Real(const Real &o);
  Real(Real &&o) noexcept;
  Real &operator=(const Real &o);
  Real &operator=(Real &&o) noexcept;
  ~Real();

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }
  long bits() const { return static_cast<long>(mpfr_get_prec(v_)); }

  long double ld() const { return mpfr_get_ld(v_, MPFR_RNDN); }
  double d() const { return mpfr_get_d(v_, MPFR_RNDN); }
  int sign() const { return mpfr_sgn(v_); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  // Binary exponent e with 0.5 <= |x| / 2^e < 1; very negative for zero.
  long exponent() const;
  std::string str() const;

  Real &operator+=(const Real &o);
  Real &operator-=(const Real &o);
  Real &operator*=(const Real &o);
  Real &operator*=(double a);
  Real &operator/=(const Real &o);

private:
  void init(long bits);
  mpfr_t v_;
};

Real operator-(const Real &a);
Real operator+(const Real &a, const Real &b);
Real operator-(const Real &a, const Real &b);
Real operator*(const Real &a, const Real &b);
Real operator/(const Real &a, const Real &b);
Real operator*(const Real &a, double b);
Real operator*(double a, const Real &b);
Real operator/(const Real &a, double b);
Real operator+(const Real &a, double b);
Real operator-(const Real &a, double b);

bool operator<(const Real &a, const Real &b);
bool operator<=(const Real &a, const Real &b);
bool operator>(const Real &a, const Real &b);
bool operator>=(const Real &a, const Real &b);
bool operator==(const Real &a, const Real &b);
bool operator!=(const Real &a, const Real &b);

Real sqrt(const Real &a);
Real abs(const Real &a);
Real exp(const Real &a);
Real log(const Real &a);
Real log1p(const Real &a);
Real cosh(const Real &a);
Real sinh(const Real &a);
Real cos(const Real &a);
Real sin(const Real &a);
Real pi();

// Copy of a rounded to the given precision.
Real rounded(const Real &a, long bits);

} // namespace resist::hp
