#include "kingman/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace kingman {

long n_of_v(double v, double t) {
  if (!(t > 0.0)) throw DomainError("n_of_v requires t > 0");
  const double num = 2.0 + std::sqrt(t) * v;
  if (!(num > 0.0)) throw DomainError("n_of_v requires 2 + sqrt(t) v > 0");
  // the nudge keeps exact lattice points such as 2.2 / 0.04 from rounding down
  const double x = num / t;
  return static_cast<long>(std::floor(x + 1e-9 * std::max(1.0, x)));
}

double v_of_n(long n, double t) { return (static_cast<double>(n) * t - 2.0) / std::sqrt(t); }

double lclt_density(double v, double t) {
  if (!(t > 0.0)) throw DomainError("lclt_density requires t > 0");
  return std::sqrt(1.5) * std::sqrt(t) / std::sqrt(2.0 * std::numbers::pi) * std::exp(-0.75 * v * v);
}

double gaussian_limit_integral(double v) {
  return 2.0 * std::sqrt(6.0) * std::sqrt(2.0 * std::numbers::pi) * std::exp(-0.75 * v * v);
}

Complex gaussian_limit_quadrature(double v, double half_width, const QuadratureConfig& cfg) {
  const auto f = [v](Complex y) { return std::exp(Complex(0.0, v / 4.0) * y - y * y / 48.0); };
  return integrate_path(f, ContourPath::segment(-half_width, half_width), cfg).value;
}

double stirling_prefactor(long n) {
  if (n < 1) throw DomainError("stirling_prefactor requires n >= 1");
  return std::sqrt(2.0 / static_cast<double>(n)) / std::sqrt(2.0 * std::numbers::pi);
}

PsiQuadratic psi_quadratic_coeffs(long n, const ModelParams& p) {
  const double s = (2.0 * static_cast<double>(n) + p.theta) * p.t;
  return {(s - 4.0) / (8.0 * std::sqrt(p.t)), s / 192.0};
}

}  // namespace kingman
