#include "kingman/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "kingman/errors.hpp"

namespace kingman {

namespace {

// B_{2k} / (2k (2k-1)) for k = 1..8, the Stirling correction coefficients.
constexpr std::array<double, 8> kStirling = {
    1.0 / 12.0,        -1.0 / 360.0,        1.0 / 1260.0,       -1.0 / 1680.0,
    1.0 / 1188.0,      -691.0 / 360360.0,   1.0 / 156.0,        -3617.0 / 122400.0,
};

constexpr double kStirlingCutoff = 15.0;

double stirling(double x) {
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double corr = 0.0;
  double power = inv;
  for (double c : kStirling) {
    corr += c * power;
    power *= inv2;
  }
  return (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi) + corr;
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma requires x > 0");
  if (x >= kStirlingCutoff) return stirling(x);
  // Gamma(x) = Gamma(x + s) / (x (x+1) ... (x+s-1))
  double shifted = x;
  double product = 1.0;
  while (shifted < kStirlingCutoff) {
    product *= shifted;
    shifted += 1.0;
  }
  return stirling(shifted) - std::log(product);
}

HighPrecReal log_gamma(const HighPrecReal& x) { return lngamma(x); }

double log_rising_factorial(double a, long k) {
  if (!(a > 0.0)) throw DomainError("log_rising_factorial requires a > 0");
  if (k < 0) throw DomainError("log_rising_factorial requires k >= 0");
  if (k == 0) return 0.0;
  if (k <= 16) {
    double product = 1.0;
    for (long j = 0; j < k; ++j) product *= a + static_cast<double>(j);
    return std::log(product);
  }
  return log_gamma(a + static_cast<double>(k)) - log_gamma(a);
}

HighPrecReal log_rising_factorial(const HighPrecReal& a, long k) {
  if (a.sign() <= 0) throw DomainError("log_rising_factorial requires a > 0");
  if (k < 0) throw DomainError("log_rising_factorial requires k >= 0");
  if (k == 0) return HighPrecReal(0.0, a.precision());
  HighPrecReal shifted = a + HighPrecReal(static_cast<double>(k), a.precision());
  return lngamma(shifted) - lngamma(a);
}

double death_rate(long k, double theta) {
  const auto kd = static_cast<double>(k);
  return kd * (kd + theta - 1.0) / 2.0;
}

double log_binom_prefactor(long n, double theta) {
  if (!(theta > 0.0)) throw DomainError("log_binom_prefactor requires theta > 0");
  if (n < 0) throw DomainError("log_binom_prefactor requires n >= 0");
  const auto nd = static_cast<double>(n);
  if (n == 0) return -(theta - 1.0) * std::numbers::ln2;
  return log_gamma(2.0 * nd + theta) - log_gamma(nd + 1.0) - log_gamma(nd + theta) -
         (2.0 * nd - 1.0 + theta) * std::numbers::ln2;
}

double log_binomial(long k, long n) {
  if (n < 0 || n > k) throw DomainError("log_binomial requires 0 <= n <= k");
  if (n == 0 || n == k) return 0.0;
  return log_gamma(static_cast<double>(k) + 1.0) - log_gamma(static_cast<double>(n) + 1.0) -
         log_gamma(static_cast<double>(k - n) + 1.0);
}

std::vector<mpq_class> bernoulli_even_exact(int m) {
  if (m < 1) throw DomainError("bernoulli_even requires m >= 1");
  if (2 * m > 60) throw DomainError("bernoulli_even supports 2m <= 60");
  const int top = 2 * m;
  // sum_{j=0}^{k} C(k+1, j) B_j = 0 for k >= 1, B_0 = 1.
  std::vector<mpq_class> b(static_cast<size_t>(top) + 1);
  b[0] = 1;
  for (int k = 1; k <= top; ++k) {
    mpq_class acc = 0;
    mpz_class binom = 1;  // C(k+1, j), starting at j = 0
    for (int j = 0; j < k; ++j) {
      acc += mpq_class(binom) * b[static_cast<size_t>(j)];
      binom = binom * (k + 1 - j) / (j + 1);
    }
    // binom now holds C(k+1, k) = k+1
    b[static_cast<size_t>(k)] = -acc / mpq_class(binom);
    b[static_cast<size_t>(k)].canonicalize();
  }
  std::vector<mpq_class> out;
  out.reserve(static_cast<size_t>(m));
  for (int j = 1; j <= m; ++j) out.push_back(b[static_cast<size_t>(2 * j)]);
  return out;
}

std::vector<double> bernoulli_even(int m) {
  std::vector<double> out;
  for (const auto& q : bernoulli_even_exact(m)) out.push_back(q.get_d());
  return out;
}

}  // namespace kingman
