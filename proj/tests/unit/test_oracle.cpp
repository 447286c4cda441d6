#include <cmath>
#include <numeric>

#include "doctest.h"
#include "kingman/errors.hpp"
#include "kingman/oracle.hpp"
#include "kingman/series.hpp"

using namespace kingman;
using doctest::Approx;

TEST_CASE("ode_pmf closed forms") {
  CHECK(ode_pmf(1, ModelParams(1.0, 0.7), 1) == Approx(std::exp(-0.35)).epsilon(1e-10));
  CHECK(ode_pmf(2, ModelParams(1.0, 1.0), 1) == Approx(4.0 / 3.0 * (std::exp(-0.5) - std::exp(-2.0))).epsilon(1e-10));
  CHECK_THROWS_AS(ode_pmf(5, ModelParams(1.0, 1.0), 6), DomainError);
}

TEST_CASE("ode oracle against the series") {
  OdeOptions from_inf;
  from_inf.start = Start::FromInfinity;
  const ModelParams p(1.0, 1.0);
  CHECK(std::abs(ode_pmf(400, p, 5, from_inf) - pmf_series(5, p).value) < 1e-7);
  const auto a = ode_distribution(400, ModelParams(2.0, 0.5), from_inf);
  const auto b = ode_distribution(800, ModelParams(2.0, 0.5), from_inf);
  for (std::size_t n = 0; n <= 50; ++n) CHECK(std::abs(a[n] - b[n]) < 1e-9);
}

TEST_CASE("ode conserves mass") {
  for (long N : {100L, 800L})
    for (double t : {0.2, 10.0}) {
      const auto d = ode_distribution(N, ModelParams(1.0, t));
      CHECK(std::abs(std::accumulate(d.begin(), d.end(), 0.0) - 1.0) < 1e-9);
    }
}

TEST_CASE("entrance law cumulants") {
  const EntranceLaw e = entrance_law(400, 1.0);
  // mean of sum_{k>N} Exp(lambda_k) is about 2/N
  CHECK(e.mean == Approx(2.0 / 400.5).epsilon(1e-3));
  CHECK(e.prob_a > 0.0);
  CHECK(e.prob_a < 1.0);
}

TEST_CASE("counter rng is reproducible and uniform") {
  CounterRng a(5, 2);
  CounterRng b(5, 2);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = a.uniform();
    CHECK(u == b.uniform());
    sum += u;
  }
  CHECK(sum / 100000 == Approx(0.5).epsilon(0.01));
  CHECK(CounterRng(5, 3).next() != CounterRng(5, 2).next());
}

TEST_CASE("mc_sample") {
  CounterRng rng(1, 1);
  const ModelParams late(1.0, 1e6);
  for (int i = 0; i < 100; ++i) CHECK(mc_sample(late, 100, rng) == 0);
  CHECK(default_truncation(0.01) == 1000);
  CHECK(default_truncation(1.0) == 100);
}

TEST_CASE("mc mean at small t") {
  const double t = 0.01;
  const McHistogram h = mc_histogram(ModelParams(1.0, t), 100000, 3);
  double s = 0.0;
  for (std::size_t n = 0; n < h.counts.size(); ++n) s += static_cast<double>(n * static_cast<std::size_t>(h.counts[n]));
  const double scaled = t * s / static_cast<double>(h.reps);
  CHECK(scaled > 1.9);
  CHECK(scaled < 2.1);
}

TEST_CASE("mc_pmf against the series") {
  const ModelParams p(1.0, 1.0);
  const McEstimate e = mc_pmf(p, 2, 1000000, 11);
  CHECK(std::abs(e.p_hat - pmf_series(2, p).value) < 4.0 * e.std_err);
  CHECK(e.std_err == Approx(std::sqrt(e.p_hat * (1.0 - e.p_hat) / 1e6)));
  CHECK(mc_pmf(p, 2, 5000, 4).p_hat == mc_pmf(p, 2, 5000, 4).p_hat);
  CHECK_THROWS_AS(mc_pmf(p, 2, 10, 4), DomainError);
}

TEST_CASE("mc result does not depend on the worker count") {
  McOptions one;
  one.workers = 1;
  McOptions four;
  four.workers = 4;
  const ModelParams p(2.0, 0.3);
  CHECK(mc_histogram(p, 50000, 9, one).counts == mc_histogram(p, 50000, 9, four).counts);
}

TEST_CASE("mc truncation insensitivity") {
  McOptions base;
  base.n_trunc = default_truncation(0.1);
  McOptions doubled = base;
  doubled.n_trunc = 2 * base.n_trunc;
  const ModelParams p(1.0, 0.1);
  const McEstimate a = mc_estimate(mc_histogram(p, 200000, 21, base), 20);
  const McEstimate b = mc_estimate(mc_histogram(p, 200000, 22, doubled), 20);
  CHECK(std::abs(a.p_hat - b.p_hat) < 3.0 * std::hypot(a.std_err, b.std_err));
}
