#pragma once

#include "kingman/params.hpp"
#include "kingman/quadrature.hpp"

namespace kingman {

// Small-time local CLT: with n = floor((2 + sqrt(t) v) / t),
// d_n(t) ~ sqrt(3/2) sqrt(t) / sqrt(2 pi) e^{-3 v^2 / 4}.

// floor((2 + sqrt(t) v) / t); DomainError unless 2 + sqrt(t) v > 0.
long n_of_v(double v, double t);
// Inverse coordinate of a lattice point, (n t - 2) / sqrt(t).
double v_of_n(long n, double t);

double lclt_density(double v, double t);

// Closed form 2 sqrt(6) sqrt(2 pi) e^{-3 v^2 / 4} of int exp(i v y / 4 - y^2 / 48) dy.
double gaussian_limit_integral(double v);
// The same integral by quadrature over [-half_width, half_width].
Complex gaussian_limit_quadrature(double v, double half_width = 200.0, const QuadratureConfig& cfg = {});

// (2 pi)^{-1/2} sqrt(2 / n), the large-n form of C(2n-1+theta, n) / 2^{2n-1+theta}.
double stirling_prefactor(long n);

struct PsiQuadratic {
  double linear_imag;  // ((2n+theta) t - 4) / (8 sqrt t)
  double quadratic;    // (2n+theta) t / (12 * 16)
};
PsiQuadratic psi_quadratic_coeffs(long n, const ModelParams& p);

}  // namespace kingman
