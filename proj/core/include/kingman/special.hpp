#pragma once

#include <gmpxx.h>

#include <vector>

#include "kingman/high_prec.hpp"

namespace kingman {

/// ln Gamma(x) for x > 0 (shifted Stirling series with Bernoulli corrections).
double log_gamma(double x);
/// ln Gamma(x) at the precision of x.
HighPrecReal log_gamma(const HighPrecReal& x);

/// ln[a (a+1) ... (a+k-1)]; zero for k == 0.
double log_rising_factorial(double a, long k);
HighPrecReal log_rising_factorial(const HighPrecReal& a, long k);

/// Death rate k(k+theta-1)/2 of the block-counting chain.
double death_rate(long k, double theta);

/// ln[Gamma(2n+theta) / (Gamma(n+1) Gamma(n+theta))] - (2n-1+theta) ln 2,
/// the log of the generalized binomial C(2n-1+theta, n) / 2^(2n-1+theta).
double log_binom_prefactor(long n, double theta);

/// ln C(k, n) for integers 0 <= n <= k.
double log_binomial(long k, long n);

/// B_2, B_4, ..., B_{2m} exactly. Supports 2m <= 60.
std::vector<mpq_class> bernoulli_even_exact(int m);
std::vector<double> bernoulli_even(int m);

}  // namespace kingman
