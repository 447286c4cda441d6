#include <cmath>

#include "doctest.h"
#include "kingman/asymptotics.hpp"
#include "kingman/contour.hpp"
#include "kingman/errors.hpp"
#include "kingman/series.hpp"
#include "kingman/special.hpp"

using namespace kingman;
using doctest::Approx;

TEST_CASE("line integral against the series") {
  const ModelParams p(1.0, 1.0);
  const CIntResult r = pmf_line_integral(5, p, LineSpec{1.0, truncate_line(5, p, 1.0, 1e-16)});
  CHECK(std::abs(r.value - pmf_series(5, p).value) < 1e-10);
  CHECK(r.method == ContourMethod::Line);
  const ModelParams p2(1.0, 2.0);
  const CIntResult z = pmf_line_integral(0, p2, LineSpec{1.0, truncate_line(0, p2, 1.0, 1e-16)});
  CHECK(std::abs(z.value - pmf_zero_series(p2).value) < 1e-10);
  CHECK(std::abs(pmf_line_integral(1, ModelParams(2.0, 0.5)).value - 0.041362753508009210816) < 1e-13);
}

TEST_CASE("line integral for non-integer theta") {
  CHECK(std::abs(pmf_line_integral(0, ModelParams(0.5, 1.0)).value - 0.01139684552604238224) < 1e-13);
  const ModelParams p(1.7, 0.2);
  CHECK(std::abs(pmf_line_integral(12, p).value - pmf_series(12, p).value) < 1e-11);
}

TEST_CASE("line integral does not depend on A") {
  const ModelParams p(1.0, 1.0);
  const CIntResult a = pmf_line_integral(5, p, LineSpec{0.5, truncate_line(5, p, 0.5, 1e-16)});
  const CIntResult b = pmf_line_integral(5, p, LineSpec{2.0, truncate_line(5, p, 2.0, 1e-16)});
  CHECK(std::abs(a.value - b.value) <= a.err_est + b.err_est);
}

TEST_CASE("truncate_line") {
  const ModelParams p(1.0, 1.0);
  const double r1 = truncate_line(5, p, 1.0, 1e-14);
  const double r2 = truncate_line(5, p, 1.0, 5e-15);
  CHECK(r2 > r1);
  CHECK(line_tail_bound(5, p, 1.0, r1) < 1e-14);
  CHECK(r1 == Approx(std::sqrt(2.0 * std::log(std::exp(line_log_majorant(5, p, 1.0)) / 1e-14))).epsilon(0.3));
  CHECK(line_log_magnitude(5, p, Complex(r1, -1.0)) < std::log(1e-14));
  CHECK(line_log_magnitude(5, p, Complex(-r1, -1.0)) < std::log(1e-14));
  const CIntResult a = pmf_line_integral(5, p, LineSpec{1.0, r1});
  const CIntResult b = pmf_line_integral(5, p, LineSpec{1.0, 2.0 * r1});
  CHECK(std::abs(a.value - b.value) <= a.err_est);
  CHECK_THROWS_AS(pmf_line_integral(5, p, LineSpec{1.0, 1.0}), TailCertificateFailure);
}

TEST_CASE("choose_A") {
  const double root = stationary_line_shift(4.0);
  CHECK(root == Approx(4.0 / (1.0 + std::exp(-root))).epsilon(1e-12));
  CHECK(std::abs(root - 3.93) < 0.01);
  const ModelParams big(1.0, 10.0);
  const double A = choose_A(1, big);
  CHECK(line_log_majorant(1, big, A) <= line_log_majorant(1, big, 1.0));
}

TEST_CASE("circle method") {
  const ModelParams p(1.0, 1.0);
  const CIntResult c = c_coefficient_circle(5, p, {}, 1.0);
  CHECK(std::abs(std::exp(log_binom_prefactor(5, 1.0)) * c.value - pmf_series(5, p).value) < 1e-10);
  CHECK(std::abs(c.value - c_coefficient_circle(5, p).value) < 1e-12);

  const ModelParams q(2.0, 0.1);
  const CIntResult circ = pmf_circle(40, q);
  const CIntResult line = pmf_line_integral(40, q);
  CHECK(std::abs(circ.value - line.value) <= circ.err_est + line.err_est);
  CHECK(std::abs(circ.value - 1.1975146968435766e-13) <= circ.err_est);

  CHECK(pmf_circle(200, ModelParams(1.0, 0.01)).value == Approx(0.048821004945928739601).epsilon(1e-12));
  CHECK_THROWS_AS(pmf_circle(3, ModelParams(1.5, 1.0)), IntegerThetaRequired);
}

TEST_CASE("circle node parity and imaginary residue") {
  const ModelParams p(2.0, 0.5);
  const CIntResult full = pmf_circle(10, p);
  QuadratureConfig half;
  half.initial_nodes = full.nodes / 4;
  half.max_nodes = full.nodes / 2;
  half.rel_tol = 1.0;
  half.abs_tol = 1.0;
  const CIntResult coarse = pmf_circle(10, p, half, full.shift);
  CHECK(coarse.nodes == full.nodes / 2);
  CHECK(std::abs(full.value - coarse.value) <= full.err_est);
  CHECK(full.imag_residue <= 10.0 * full.quad_err + 1e-300);
  const CIntResult line = pmf_line_integral(10, p);
  CHECK(line.imag_residue <= 10.0 * line.quad_err);
}

TEST_CASE("steep descent") {
  const double t = 0.05;
  const long n = n_of_v(0.0, t);
  const ModelParams p(1.0, t);
  const CIntResult s = c_coefficient_steep(n, p);
  const CIntResult c = c_coefficient_circle(n, p);
  CHECK(std::abs(s.value - c.value) <= s.err_est + c.err_est);
  CHECK(std::abs(s.outer) < std::exp(-std::pow(std::log(1.0 / t), 4) / 24.0));
  CHECK(s.inner + s.outer == Approx(s.value).epsilon(1e-12));
  CHECK(pmf_steep(100, ModelParams(2.0, 0.02)).value == Approx(0.068458662524239012815).epsilon(1e-12));
  CHECK(steep_disc_radius(0.05) == Approx(std::pow(0.05, 0.25) * std::log(20.0)));
  CHECK_THROWS_AS(c_coefficient_steep(3, ModelParams(1.0, 2.0)), DomainError);
  CHECK_THROWS_AS(c_coefficient_steep(3, ModelParams(0.5, 0.5)), IntegerThetaRequired);
}
