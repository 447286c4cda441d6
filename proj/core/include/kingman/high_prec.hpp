#pragma once

#include <mpfr.h>

#include <string>

namespace kingman {

// Real scalar with a per-value mantissa width, backed by MPFR. Binary
// operations produce a result at the wider of the two operand precisions.
class HighPrecReal {
 public:
  static constexpr long kMinPrecision = 53;

  explicit HighPrecReal(long bits = kMinPrecision);
  HighPrecReal(double value, long bits);
  HighPrecReal(const HighPrecReal& other);
  HighPrecReal(HighPrecReal&& other) noexcept;
  HighPrecReal& operator=(const HighPrecReal& other);
  HighPrecReal& operator=(HighPrecReal&& other) noexcept;
  ~HighPrecReal();

  long precision() const { return static_cast<long>(mpfr_get_prec(value_)); }
  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  // log2 |x|, or -inf for zero.
  double log2_abs() const;
  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  int sign() const { return mpfr_sgn(value_); }
  std::string to_string(int digits = 40) const;

  mpfr_srcptr get() const { return value_; }
  mpfr_ptr get() { return value_; }

  HighPrecReal& operator+=(const HighPrecReal& rhs);
  HighPrecReal& operator-=(const HighPrecReal& rhs);
  HighPrecReal& operator*=(const HighPrecReal& rhs);
  HighPrecReal& operator/=(const HighPrecReal& rhs);
  HighPrecReal& operator*=(double rhs);
  HighPrecReal& operator/=(double rhs);

  friend HighPrecReal operator+(const HighPrecReal& a, const HighPrecReal& b);
  friend HighPrecReal operator-(const HighPrecReal& a, const HighPrecReal& b);
  friend HighPrecReal operator*(const HighPrecReal& a, const HighPrecReal& b);
  friend HighPrecReal operator/(const HighPrecReal& a, const HighPrecReal& b);
  friend HighPrecReal operator-(const HighPrecReal& a);
  friend bool operator<(const HighPrecReal& a, const HighPrecReal& b) {
    return mpfr_less_p(a.value_, b.value_) != 0;
  }

 private:
  void widen_to(long bits);
  mpfr_t value_;
};

HighPrecReal exp(const HighPrecReal& x);
HighPrecReal log(const HighPrecReal& x);
HighPrecReal abs(const HighPrecReal& x);
// ln Gamma(x) for x > 0.
HighPrecReal lngamma(const HighPrecReal& x);

}  // namespace kingman
