#pragma once

#include <cstdint>
#include <vector>

#include "kingman/params.hpp"

namespace kingman {

// Paper-independent references: the forward equations of the finite pure
// death chain, and Monte Carlo of the chain coming down from infinity.

enum class Start {
  Finite,        // delta_N at time 0
  FromInfinity,  // the chain enters N at a random time drawn from the entrance law below
};

// Two-point law matching the first three cumulants of tau_N, the time the
// chain started at infinity needs to reach N: tau_N = sum_{k>N} Exp(lambda_k).
struct EntranceLaw {
  double mean;
  double stddev;
  double skewness;
  double time_a;  // lower support point
  double time_b;  // upper support point
  double prob_a;
};
EntranceLaw entrance_law(long N, double theta);

struct OdeOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  long max_steps = 50'000'000;
  Start start = Start::Finite;
};

// P(D_t = n), n = 0..N, by adaptive Dormand-Prince on p'_k = lambda_{k+1} p_{k+1} - lambda_k p_k.
// Throws StiffnessFailure when the step size underflows or the step budget runs out.
std::vector<double> ode_distribution(long N, const ModelParams& p, const OdeOptions& opts = {});
double ode_pmf(long N, const ModelParams& p, long n, const OdeOptions& opts = {});

// splitmix64 over a counter, keyed by (seed, stream): any block of draws can be
// regenerated without replaying the others.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);
  std::uint64_t next();
  double uniform();  // in (0, 1)
  double exponential(double rate);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// max(ceil(10 / t), 100)
long default_truncation(double t);

// Holding times Exp(lambda_k) for k = n_trunc down to 1; returns the state
// occupied at time t. Given an entrance law (normally entrance_law(n_trunc)),
// the chain first spends a draw from it above n_trunc; if that alone
// exceeds t, n_trunc is returned.
long mc_sample(const ModelParams& p, long n_trunc, CounterRng& rng, const EntranceLaw* entrance = nullptr);

struct McOptions {
  long n_trunc = 0;  // 0 selects default_truncation
  bool entrance = true;
  long block_size = 10000;
  unsigned workers = 0;  // 0 selects hardware concurrency
};

struct McHistogram {
  std::vector<long> counts;  // counts[n] = number of samples ending in n
  long reps = 0;
  std::uint64_t seed = 0;
};
McHistogram mc_histogram(const ModelParams& p, long reps, std::uint64_t seed, const McOptions& opts = {});

struct McEstimate {
  long n = 0;
  double p_hat = 0.0;
  double std_err = 0.0;  // sqrt(p_hat (1 - p_hat) / reps)
  long reps = 0;
  std::uint64_t seed = 0;
};
McEstimate mc_estimate(const McHistogram& h, long n);
// Requires reps >= 1000.
McEstimate mc_pmf(const ModelParams& p, long n, long reps, std::uint64_t seed, const McOptions& opts = {});

}  // namespace kingman
