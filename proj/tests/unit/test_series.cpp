#include <cmath>

#include "doctest.h"
#include "kingman/errors.hpp"
#include "kingman/oracle.hpp"
#include "kingman/series.hpp"
#include "kingman/special.hpp"

using namespace kingman;
using doctest::Approx;

// Reference values from an independent 60-digit evaluation of the series.
TEST_CASE("pmf_series frozen values") {
  CHECK(pmf_series(5, ModelParams(1.0, 1.0)).value == Approx(0.00089350431823863187).epsilon(1e-12));
  CHECK(pmf_series(1, ModelParams(2.0, 0.5)).value == Approx(0.041362753508009210816).epsilon(1e-12));
  CHECK(std::abs(pmf_series(20, ModelParams(1.0, 0.1)).value - 0.15327337294318202) < 1e-12);
  CHECK(pmf_zero_series(ModelParams(0.5, 1.0)).value == Approx(0.01139684552604238224).epsilon(1e-11));
}

TEST_CASE("pmf_series reports a bound that covers the true error") {
  const SeriesResult r = pmf_series(40, ModelParams(2.0, 0.1));
  CHECK(r.abs_err_bound <= 1e-12);
  CHECK(std::abs(r.value - 1.1975146968435766e-13) <= r.abs_err_bound);
  const SeriesResult hard = pmf_series(100, ModelParams(2.0, 0.02));
  CHECK(std::abs(hard.value - 0.068458662524239012815) <= hard.abs_err_bound);
  CHECK(hard.cancellation_bits > 80.0);
  CHECK(hard.precision_bits > 150);
}

TEST_CASE("large t: the first surviving term dominates") {
  const ModelParams p(1.0, 60.0);
  SeriesOptions so;
  so.target_abs_err = 1e-60;
  const double direct = [&] {
    double s = 0.0;
    for (long k = 1; k <= 5; ++k) s += ((k - 1) % 2 ? -1.0 : 1.0) * std::exp(log_abs_term(k, 1, p));
    return s;
  }();
  CHECK(pmf_series(1, p, so).value == Approx(direct).epsilon(1e-14));
  CHECK(direct == Approx(2.0 * std::exp(-30.0)).epsilon(1e-20));
}

TEST_CASE("pmf_zero_series limits") {
  SeriesOptions so;
  so.target_abs_err = 1e-40;
  CHECK(std::abs(pmf_zero_series(ModelParams(1.0, 200.0), so).value - 1.0) < 1e-40);
  const ModelParams p(1.0, 2.0);
  double rest = 0.0;
  for (long n = 1; n <= 30; ++n) rest += pmf_series(n, p).value;
  CHECK(pmf_zero_series(p).value == Approx(1.0 - rest).epsilon(1e-10));
}

TEST_CASE("series agrees with the forward-equation oracle") {
  OdeOptions oo;
  oo.start = Start::FromInfinity;
  CHECK(std::abs(pmf_series(5, ModelParams(1.0, 1.0)).value - ode_pmf(400, ModelParams(1.0, 1.0), 5, oo)) < 1e-8);
  CHECK(std::abs(pmf_zero_series(ModelParams(0.5, 1.0)).value - ode_pmf(400, ModelParams(0.5, 1.0), 0, oo)) < 1e-8);
}

TEST_CASE("log_abs_term") {
  CHECK(log_abs_term(1, 1, ModelParams(1.0, 1.0)) == Approx(std::log(2.0) - 0.5).epsilon(1e-14));
  CHECK(log_abs_term(1, 0, ModelParams(3.0, 1.0)) == Approx(std::log(4.0) - 1.5).epsilon(1e-14));
  const ModelParams p(1.0, 0.05);
  long k = 3;
  while (log_abs_term(k + 1, 3, p) > log_abs_term(k, 3, p)) ++k;
  for (long j = k; j < k + 200; ++j) CHECK(log_abs_term(j + 1, 3, p) < log_abs_term(j, 3, p));
}

TEST_CASE("term_tail_bound") {
  const ModelParams p(1.0, 1.0);
  CHECK(term_tail_bound(40, 1, p).log_bound < std::log(1e-200));
  double prev = term_tail_bound(10, 1, p).log_bound;
  CHECK(prev >= log_abs_term(10, 1, p));
  for (long k0 = 11; k0 < 60; ++k0) {
    const double b = term_tail_bound(k0, 1, p).log_bound;
    CHECK(b < prev);
    CHECK(b >= log_abs_term(k0, 1, p));
    prev = b;
  }
  CHECK_THROWS_AS(term_tail_bound(10, 10, ModelParams(1.0, 0.01)), NotInTail);
}

TEST_CASE("precision cap and domain errors") {
  SeriesOptions so;
  so.precision_cap = 128;
  CHECK_THROWS_AS(pmf_series(100, ModelParams(2.0, 0.02), so), PrecisionExhausted);
  CHECK_THROWS_AS(pmf_series(0, ModelParams(1.0, 1.0)), DomainError);
  CHECK_THROWS_AS(ModelParams(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(ModelParams(1.0, -1.0), DomainError);
}

TEST_CASE("precision estimate grows as t shrinks") {
  CHECK(estimate_series_precision(5, ModelParams(1.0, 1.0), 1e-12) < estimate_series_precision(5, ModelParams(1.0, 0.1), 1e-12));
}
