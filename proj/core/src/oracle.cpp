#include "kingman/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <thread>

#include "kingman/special.hpp"

namespace kingman {

namespace {

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

class DeathChain {
 public:
  DeathChain(long N, double theta) : rates_(static_cast<std::size_t>(N + 1)) {
    for (long k = 0; k <= N; ++k) rates_[static_cast<std::size_t>(k)] = death_rate(k, theta);
  }

  void rhs(const std::vector<double>& y, std::vector<double>& dy) const {
    const std::size_t n = y.size();
    for (std::size_t k = 0; k + 1 < n; ++k) dy[k] = rates_[k + 1] * y[k + 1] - rates_[k] * y[k];
    dy[n - 1] = -rates_[n - 1] * y[n - 1];
  }

  std::size_t size() const { return rates_.size(); }

 private:
  std::vector<double> rates_;
};

// Advances y from time 0 through each of `times` (ascending), storing snapshots.
std::vector<std::vector<double>> integrate(const DeathChain& chain, std::vector<double> y,
                                           const std::vector<double>& times, const OdeOptions& opts) {
  const std::size_t n = chain.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), y_new(n);
  std::vector<std::vector<double>> out;
  double now = 0.0;
  double h = 1e-6;
  long steps = 0;
  chain.rhs(y, k1);
  for (double target : times) {
    while (now < target) {
      if (++steps > opts.max_steps) throw StiffnessFailure("ODE step budget exhausted");
      const bool last = now + h >= target;
      const double step = last ? target - now : h;
      if (step < 1e-15 * std::max(1.0, target)) throw StiffnessFailure("ODE step size underflow");
      for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + step * a21 * k1[i];
      chain.rhs(tmp, k2);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + step * (a31 * k1[i] + a32 * k2[i]);
      chain.rhs(tmp, k3);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + step * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      chain.rhs(tmp, k4);
      for (std::size_t i = 0; i < n; ++i)
        tmp[i] = y[i] + step * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      chain.rhs(tmp, k5);
      for (std::size_t i = 0; i < n; ++i)
        tmp[i] = y[i] + step * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
      chain.rhs(tmp, k6);
      for (std::size_t i = 0; i < n; ++i)
        y_new[i] = y[i] + step * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
      chain.rhs(y_new, k7);
      double err = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double e = step * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double scale = opts.abs_tol + opts.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
        err = std::max(err, std::abs(e) / scale);
      }
      const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      if (err <= 1.0) {
        now = last ? target : now + step;
        y.swap(y_new);
        k1.swap(k7);
        if (!last) h = step * factor;
      } else {
        h = step * factor;
      }
    }
    out.push_back(y);
  }
  return out;
}

// sum_{k>N} lambda_k^{-j} for j = 1, 2, 3: explicit part, then the
// integral tail with lambda_k ~ k^2 / 2.
std::array<double, 3> inverse_rate_sums(long N, double theta) {
  constexpr long kExplicit = 1'000'000;
  const long K = N + kExplicit;
  std::array<double, 3> s{};
  for (long k = K; k > N; --k) {
    const double r = 1.0 / death_rate(k, theta);
    s[0] += r;
    s[1] += r * r;
    s[2] += r * r * r;
  }
  const double x = static_cast<double>(K) + 0.5;
  for (int j = 1; j <= 3; ++j) {
    s[static_cast<std::size_t>(j - 1)] += std::pow(2.0, j) / ((2.0 * j - 1.0) * std::pow(x, 2.0 * j - 1.0));
  }
  return s;
}

constexpr std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

}  // namespace

EntranceLaw entrance_law(long N, double theta) {
  if (N < 1) throw DomainError("entrance_law requires N >= 1");
  // kappa_j = (j-1)! sum lambda_k^{-j}
  const auto sums = inverse_rate_sums(N, theta);
  const double k1 = sums[0];
  const double k2 = sums[1];
  const double k3 = 2.0 * sums[2];
  EntranceLaw law{};
  law.mean = k1;
  law.stddev = std::sqrt(k2);
  law.skewness = k3 / (k2 * law.stddev);
  const double root = std::sqrt(law.skewness * law.skewness + 4.0);
  const double a = (law.skewness - root) / 2.0;
  const double b = (law.skewness + root) / 2.0;
  law.prob_a = b / (b - a);
  law.time_a = std::max(0.0, law.mean + law.stddev * a);
  law.time_b = law.mean + law.stddev * b;
  return law;
}

std::vector<double> ode_distribution(long N, const ModelParams& p, const OdeOptions& opts) {
  if (N < 1) throw DomainError("ode_distribution requires N >= 1");
  const DeathChain chain(N, p.theta);
  std::vector<double> y0(static_cast<std::size_t>(N + 1), 0.0);
  y0.back() = 1.0;
  if (opts.start == Start::Finite) return integrate(chain, y0, {p.t}, opts).front();

  const EntranceLaw law = entrance_law(N, p.theta);
  const double ta = std::max(0.0, p.t - law.time_b);  // later entrance, less time left
  const double tb = std::max(0.0, p.t - law.time_a);
  std::vector<double> times;
  if (ta > 0.0) times.push_back(ta);
  if (tb > ta) times.push_back(tb);
  const auto snaps = integrate(chain, y0, times, opts);
  const std::vector<double>& late = ta > 0.0 ? snaps.front() : y0;
  const std::vector<double>& early = tb > ta ? snaps.back() : late;
  std::vector<double> out(y0.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = law.prob_a * early[i] + (1.0 - law.prob_a) * late[i];
  return out;
}

double ode_pmf(long N, const ModelParams& p, long n, const OdeOptions& opts) {
  if (n < 0 || n > N) throw DomainError("ode_pmf requires 0 <= n <= N");
  return ode_distribution(N, p, opts)[static_cast<std::size_t>(n)];
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix(seed + kGolden) ^ mix(mix(stream + 0x632be59bd9b4e019ULL) + kGolden)) {}

std::uint64_t CounterRng::next() { return mix(key_ + kGolden * ++counter_); }

double CounterRng::uniform() {
  return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::exponential(double rate) { return -std::log(uniform()) / rate; }

long default_truncation(double t) {
  if (!(t > 0.0)) throw DomainError("default_truncation requires t > 0");
  return std::max<long>(static_cast<long>(std::ceil(10.0 / t)), 100);
}

long mc_sample(const ModelParams& p, long n_trunc, CounterRng& rng, const EntranceLaw* entrance) {
  if (n_trunc < 1) throw DomainError("mc_sample requires n_trunc >= 1");
  double s = 0.0;
  if (entrance != nullptr) {
    s = rng.uniform() < entrance->prob_a ? entrance->time_a : entrance->time_b;
    if (s > p.t) return n_trunc;
  }
  for (long k = n_trunc; k >= 1; --k) {
    s += rng.exponential(death_rate(k, p.theta));
    if (s > p.t) return k;
  }
  return 0;
}

McHistogram mc_histogram(const ModelParams& p, long reps, std::uint64_t seed, const McOptions& opts) {
  if (reps < 1) throw DomainError("mc_histogram requires reps >= 1");
  if (opts.block_size < 1) throw DomainError("block_size must be >= 1");
  const long n_trunc = opts.n_trunc > 0 ? opts.n_trunc : default_truncation(p.t);
  const long blocks = (reps + opts.block_size - 1) / opts.block_size;
  unsigned workers = opts.workers > 0 ? opts.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<long>(workers, blocks));

  EntranceLaw law{};
  if (opts.entrance) law = entrance_law(n_trunc, p.theta);
  const EntranceLaw* law_ptr = opts.entrance ? &law : nullptr;

  std::vector<std::vector<long>> partial(workers, std::vector<long>(static_cast<std::size_t>(n_trunc + 1), 0));
  const auto run = [&](unsigned w) {
    for (long b = w; b < blocks; b += workers) {
      CounterRng rng(seed, static_cast<std::uint64_t>(b));
      const long count = std::min(opts.block_size, reps - b * opts.block_size);
      for (long r = 0; r < count; ++r) {
        ++partial[w][static_cast<std::size_t>(mc_sample(p, n_trunc, rng, law_ptr))];
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run, w);
  run(0);
  for (auto& th : pool) th.join();

  McHistogram h;
  h.counts.assign(static_cast<std::size_t>(n_trunc + 1), 0);
  for (const auto& part : partial)
    for (std::size_t i = 0; i < part.size(); ++i) h.counts[i] += part[i];
  h.reps = reps;
  h.seed = seed;
  return h;
}

McEstimate mc_estimate(const McHistogram& h, long n) {
  McEstimate e;
  e.n = n;
  e.reps = h.reps;
  e.seed = h.seed;
  const long c = (n >= 0 && n < static_cast<long>(h.counts.size())) ? h.counts[static_cast<std::size_t>(n)] : 0;
  e.p_hat = static_cast<double>(c) / static_cast<double>(h.reps);
  e.std_err = std::sqrt(e.p_hat * (1.0 - e.p_hat) / static_cast<double>(h.reps));
  return e;
}

McEstimate mc_pmf(const ModelParams& p, long n, long reps, std::uint64_t seed, const McOptions& opts) {
  if (reps < 1000) throw DomainError("mc_pmf requires reps >= 1000");
  if (n < 0) throw DomainError("mc_pmf requires n >= 0");
  return mc_estimate(mc_histogram(p, reps, seed, opts), n);
}

}  // namespace kingman
