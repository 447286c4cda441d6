#pragma once

#include "kingman/params.hpp"
#include "kingman/quadrature.hpp"

namespace kingman {

// d_n(t) by contour integration: the Gaussian line Im w = -A, the theta
// circle around the origin, and the steep-descent path through z = -pi.

enum class ContourMethod { Line, Circle, SteepDescent };

struct LineSpec {
  double A;  // the line is Im w = -A
  double R;  // truncation half-width in Re w
};

struct CIntResult {
  double value = 0.0;
  double err_est = 0.0;  // quadrature + truncation + |spurious imaginary part|
  long nodes = 0;
  ContourMethod method = ContourMethod::Line;
  double quad_err = 0.0;      // quadrature error estimate alone
  double tail_bound = 0.0;    // line truncation certificate
  double imag_residue = 0.0;  // |Im| of the assembled value
  double shift = 0.0;         // A for the line, radius for the circle
  double half_width = 0.0;    // R for the line
  double inner = 0.0;         // steep descent: contribution of the near-saddle disc
  double outer = 0.0;         // steep descent: the rest of the path
};

// ---- line --------------------------------------------------------------

// ln of the constant in front of the line integral:
// ln C(2n-1+theta, n) + (1-theta)^2 t / 8 - ln sqrt(2 pi t).
double line_log_prefactor(long n, const ModelParams& p);

// The integrand including the prefactor, in the exponential form
// e^{-w^2/2t} e^{-i w (2n+theta-1)/2} (1 - e^{-iw}) (1 + e^{-iw})^{-(2n+theta)}.
// With |e^{-iw}| < 1 below the real axis the last factor is the continuous
// continuation of (1 + e^{iw})^{-(2n+theta)} e^{i w (2n+theta)} from w = -iA.
Complex line_integrand(long n, const ModelParams& p, Complex w);
double line_log_magnitude(long n, const ModelParams& p, Complex w);

// ln of the bound on |integrand| over the whole line, Gaussian factor aside.
double line_log_majorant(long n, const ModelParams& p, double A);
// Bound on the two tails |Re w| > R.
double line_tail_bound(long n, const ModelParams& p, double A, double R);
// Smallest R (by fixed-point iteration) whose tail bound is below tol.
double truncate_line(long n, const ModelParams& p, double A, double tol);

// Root of A = scale / (1 + e^{-A}) by bisection on (0, 50].
double stationary_line_shift(double scale);
// A minimizing the peak integrand magnitude on the line, so that rounding
// relative to the result stays small even at small t.
double choose_A(long n, const ModelParams& p);

CIntResult pmf_line_integral(long n, const ModelParams& p, const LineSpec& spec,
                             const QuadratureConfig& cfg = {});
// choose_A and truncate_line fill in the spec.
CIntResult pmf_line_integral(long n, const ModelParams& p, const QuadratureConfig& cfg = {});

// ---- circle (integer theta) -------------------------------------------

// Radius in [0.3, 2 pi - 0.3] minimizing the peak integrand magnitude. For
// integer theta the integrand is single valued in 0 < |z| < 2 pi, so any
// such circle gives the same c_n.
double choose_circle_radius(long n, const ModelParams& p);

// radius <= 0 selects choose_circle_radius; radius = 1 is the unit circle.
CIntResult c_coefficient_circle(long n, const ModelParams& p, const QuadratureConfig& cfg = {},
                                double radius = 0.0);
// exp(log_binom_prefactor) * c_n, integrated directly at pmf scale.
CIntResult pmf_circle(long n, const ModelParams& p, const QuadratureConfig& cfg = {},
                      double radius = 0.0);

// ---- steep descent (integer theta, t <= 1) ----------------------------

// Near-saddle cutoff t^{1/4} ln(1/t), in the parameter y of z(y) = -pi + y + iy.
double steep_disc_radius(double t);

CIntResult c_coefficient_steep(long n, const ModelParams& p, const QuadratureConfig& cfg = {});
CIntResult pmf_steep(long n, const ModelParams& p, const QuadratureConfig& cfg = {});

}  // namespace kingman
