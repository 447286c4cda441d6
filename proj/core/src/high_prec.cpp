#include "kingman/high_prec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "kingman/errors.hpp"

namespace kingman {

namespace {

long clamp_bits(long bits) {
  if (bits < HighPrecReal::kMinPrecision) {
    throw DomainError("HighPrecReal precision must be at least 53 bits");
  }
  return bits;
}

}  // namespace

HighPrecReal::HighPrecReal(long bits) {
  mpfr_init2(value_, clamp_bits(bits));
  mpfr_set_zero(value_, +1);
}

HighPrecReal::HighPrecReal(double value, long bits) {
  mpfr_init2(value_, clamp_bits(bits));
  mpfr_set_d(value_, value, MPFR_RNDN);
}

HighPrecReal::HighPrecReal(const HighPrecReal& other) {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

HighPrecReal::HighPrecReal(HighPrecReal&& other) noexcept {
  // mpfr_swap needs an initialised target.
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_swap(value_, other.value_);
}

HighPrecReal& HighPrecReal::operator=(const HighPrecReal& other) {
  if (this != &other) {
    mpfr_set_prec(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

HighPrecReal& HighPrecReal::operator=(HighPrecReal&& other) noexcept {
  if (this != &other) mpfr_swap(value_, other.value_);
  return *this;
}

HighPrecReal::~HighPrecReal() { mpfr_clear(value_); }

double HighPrecReal::log2_abs() const {
  if (mpfr_zero_p(value_)) return -std::numeric_limits<double>::infinity();
  long exponent = 0;
  const double mantissa = mpfr_get_d_2exp(&exponent, value_, MPFR_RNDN);
  return std::log2(std::abs(mantissa)) + static_cast<double>(exponent);
}

std::string HighPrecReal::to_string(int digits) const {
  std::vector<char> buf(static_cast<size_t>(digits) + 32);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, value_);
  return std::string(buf.data());
}

void HighPrecReal::widen_to(long bits) {
  if (bits > precision()) mpfr_prec_round(value_, bits, MPFR_RNDN);
}

HighPrecReal& HighPrecReal::operator+=(const HighPrecReal& rhs) {
  widen_to(rhs.precision());
  mpfr_add(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

HighPrecReal& HighPrecReal::operator-=(const HighPrecReal& rhs) {
  widen_to(rhs.precision());
  mpfr_sub(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

HighPrecReal& HighPrecReal::operator*=(const HighPrecReal& rhs) {
  widen_to(rhs.precision());
  mpfr_mul(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

HighPrecReal& HighPrecReal::operator/=(const HighPrecReal& rhs) {
  widen_to(rhs.precision());
  mpfr_div(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

HighPrecReal& HighPrecReal::operator*=(double rhs) {
  mpfr_mul_d(value_, value_, rhs, MPFR_RNDN);
  return *this;
}

HighPrecReal& HighPrecReal::operator/=(double rhs) {
  mpfr_div_d(value_, value_, rhs, MPFR_RNDN);
  return *this;
}

HighPrecReal operator+(const HighPrecReal& a, const HighPrecReal& b) {
  HighPrecReal r(std::max(a.precision(), b.precision()));
  mpfr_add(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}

HighPrecReal operator-(const HighPrecReal& a, const HighPrecReal& b) {
  HighPrecReal r(std::max(a.precision(), b.precision()));
  mpfr_sub(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}

HighPrecReal operator*(const HighPrecReal& a, const HighPrecReal& b) {
  HighPrecReal r(std::max(a.precision(), b.precision()));
  mpfr_mul(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}

HighPrecReal operator/(const HighPrecReal& a, const HighPrecReal& b) {
  HighPrecReal r(std::max(a.precision(), b.precision()));
  mpfr_div(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}

HighPrecReal operator-(const HighPrecReal& a) {
  HighPrecReal r(a.precision());
  mpfr_neg(r.value_, a.value_, MPFR_RNDN);
  return r;
}

HighPrecReal exp(const HighPrecReal& x) {
  HighPrecReal r(x.precision());
  mpfr_exp(r.get(), x.get(), MPFR_RNDN);
  return r;
}

HighPrecReal log(const HighPrecReal& x) {
  if (x.sign() <= 0) throw DomainError("log of a non-positive HighPrecReal");
  HighPrecReal r(x.precision());
  mpfr_log(r.get(), x.get(), MPFR_RNDN);
  return r;
}

HighPrecReal abs(const HighPrecReal& x) {
  HighPrecReal r(x.precision());
  mpfr_abs(r.get(), x.get(), MPFR_RNDN);
  return r;
}

HighPrecReal lngamma(const HighPrecReal& x) {
  if (x.sign() <= 0) throw DomainError("lngamma requires a positive argument");
  HighPrecReal r(x.precision());
  mpfr_lngamma(r.get(), x.get(), MPFR_RNDN);
  return r;
}

}  // namespace kingman
