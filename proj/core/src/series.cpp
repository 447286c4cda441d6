#include "kingman/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "kingman/special.hpp"

namespace kingman {

namespace {

long first_index(long n) { return std::max<long>(n, 1); }

// ln |T_{k+1} / T_k|
double log_ratio(long k, long n, const ModelParams& p) {
  const auto kd = static_cast<double>(k);
  const auto nd = static_cast<double>(n);
  return std::log((2.0 * kd + 1.0 + p.theta) / (2.0 * kd - 1.0 + p.theta)) +
         std::log((nd + p.theta + kd - 1.0) / (kd + 1.0 - nd)) - (kd + p.theta / 2.0) * p.t;
}

// ln of a ratio bound valid for every k >= k0.
double log_ratio_majorant(long k0, long n, const ModelParams& p) {
  const auto kd = static_cast<double>(k0);
  const auto nd = static_cast<double>(n);
  const double first = std::log((2.0 * kd + 1.0 + p.theta) / (2.0 * kd - 1.0 + p.theta));
  const double second = std::max(0.0, std::log((nd + p.theta + kd - 1.0) / (kd + 1.0 - nd)));
  return first + second - (kd + p.theta / 2.0) * p.t;
}

struct Scan {
  double peak_log = -std::numeric_limits<double>::infinity();  // natural log
  long last_k = 0;
};

// Walk ln|T_k| until the certified tail falls below target / 4.
Scan scan_terms(long n, const ModelParams& p, double target) {
  const long k0 = first_index(n);
  const double stop = std::log(target / 4.0);
  Scan scan;
  double log_term = log_abs_term(k0, n, p);
  for (long k = k0;; ++k) {
    scan.peak_log = std::max(scan.peak_log, log_term);
    const double next = log_term + log_ratio(k, n, p);
    const double lr = log_ratio_majorant(k + 1, n, p);
    if (lr < 0.0 && next - std::log1p(-std::exp(lr)) < stop) {
      scan.last_k = k;
      return scan;
    }
    log_term = next;
  }
}

long precision_for(const Scan& scan, double target, long guard) {
  const double peak_bits = std::max(0.0, scan.peak_log / std::numbers::ln2);
  return std::max<long>(64, static_cast<long>(std::ceil(peak_bits)) -
                                static_cast<long>(std::floor(std::log2(target))) + guard);
}

struct Summation {
  HighPrecReal sum;
  double rounding_bound = 0.0;
  long terms = 0;
};

Summation sum_terms(long n, const ModelParams& p, long last_k, long bits) {
  const long k0 = first_index(n);
  const HighPrecReal theta(p.theta, bits);
  const HighPrecReal t(p.t, bits);
  const auto k0d = static_cast<double>(k0);
  const auto nd = static_cast<double>(n);

  // T_{k0} = (2k0-1+theta)/k0! * (n+theta)_(k0-1) * exp(-lambda_k0 t); C(k0, n) = 1 here.
  HighPrecReal log_first = log(HighPrecReal(2.0 * k0d - 1.0, bits) + theta) -
                           lngamma(HighPrecReal(k0d + 1.0, bits)) +
                           log_rising_factorial(HighPrecReal(nd, bits) + theta, k0 - 1);
  HighPrecReal lambda = HighPrecReal(k0d, bits) * (HighPrecReal(k0d - 1.0, bits) + theta);
  lambda /= 2.0;
  log_first -= lambda * t;
  HighPrecReal term = exp(log_first);
  if ((k0 - n) % 2 != 0) term = -term;
  const double log_first_abs = std::abs(log_first.to_double());

  // E_k = exp(-(k + theta/2) t), E_{k+1} = E_k e^{-t}
  HighPrecReal half_theta = theta;
  half_theta /= 2.0;
  HighPrecReal decay = exp(-((HighPrecReal(k0d, bits) + half_theta) * t));
  const HighPrecReal step = exp(-t);

  // Rounding is tracked at low precision so huge magnitudes cannot overflow.
  HighPrecReal magnitude(0.0, 64);
  HighPrecReal partial_sums(0.0, 64);
  Summation out{HighPrecReal(0.0, bits), 0.0, 0};
  for (long k = k0; k <= last_k; ++k) {
    out.sum += term;
    ++out.terms;
    const double weight = 4.0 * log_first_abs + 8.0 * static_cast<double>(k - k0) + 8.0;
    HighPrecReal w(weight, 64);
    magnitude += w * abs(term);
    partial_sums += abs(out.sum);
    if (k == last_k) break;
    const auto kd = static_cast<double>(k);
    // ratio -(2k+1+theta)(n+theta+k-1) / ((2k-1+theta)(k+1-n)) * E_k
    HighPrecReal num = (HighPrecReal(2.0 * kd + 1.0, bits) + theta) *
                       (HighPrecReal(nd + kd - 1.0, bits) + theta);
    HighPrecReal den = (HighPrecReal(2.0 * kd - 1.0, bits) + theta) *
                       HighPrecReal(kd + 1.0 - nd, bits);
    term *= num;
    term /= den;
    term *= decay;
    term = -term;
    decay *= step;
  }
  HighPrecReal total = magnitude + partial_sums;
  const double log2_total = total.log2_abs();
  out.rounding_bound = std::exp2(log2_total - static_cast<double>(bits));
  return out;
}

SeriesResult evaluate(long n, const ModelParams& p, const SeriesOptions& opts) {
  if (!(opts.target_abs_err > 0.0)) throw DomainError("target_abs_err must be > 0");
  const Scan scan = scan_terms(n, p, opts.target_abs_err);
  long bits = precision_for(scan, opts.target_abs_err, opts.guard_bits);
  const double tail = term_tail_bound(scan.last_k + 1, n, p).value();
  while (true) {
    if (bits > opts.precision_cap) {
      throw PrecisionExhausted("series needs " + std::to_string(bits) +
                                   " bits, above the cap of " +
                                   std::to_string(opts.precision_cap),
                               bits);
    }
    Summation s = sum_terms(n, p, scan.last_k, bits);
    if (s.rounding_bound > opts.target_abs_err / 2.0) {
      bits *= 2;
      continue;
    }
    SeriesResult r;
    r.value_hp = std::move(s.sum);
    if (n == 0) {
      HighPrecReal one(1.0, bits);
      r.value_hp = one + r.value_hp;
    }
    r.value = r.value_hp.to_double();
    r.abs_err_bound = tail + s.rounding_bound;
    r.terms_used = s.terms;
    r.precision_bits = bits;
    r.peak_log2_term = scan.peak_log / std::numbers::ln2;
    const double log2_value = r.value_hp.log2_abs();
    r.cancellation_bits = std::isfinite(log2_value) ? r.peak_log2_term - log2_value
                                                    : std::numeric_limits<double>::infinity();
    return r;
  }
}

}  // namespace

double log_abs_term(long k, long n, const ModelParams& p) {
  if (n < 0) throw DomainError("log_abs_term requires n >= 0");
  if (k < first_index(n)) throw DomainError("log_abs_term requires k >= max(n, 1)");
  const auto kd = static_cast<double>(k);
  return std::log(2.0 * kd - 1.0 + p.theta) - log_gamma(kd + 1.0) + log_binomial(k, n) +
         log_rising_factorial(static_cast<double>(n) + p.theta, k - 1) - death_rate(k, p.theta) * p.t;
}

double TailBound::value() const { return std::exp(log_bound); }

TailBound term_tail_bound(long k0, long n, const ModelParams& p) {
  if (k0 < first_index(n)) throw DomainError("term_tail_bound requires k0 >= max(n, 1)");
  const double lr = log_ratio_majorant(k0, n, p);
  if (!(lr < 0.0)) {
    throw NotInTail("term ratio is not dominated by r < 1 at k0 = " + std::to_string(k0));
  }
  const double r = std::exp(lr);
  return {log_abs_term(k0, n, p) - std::log1p(-r), r};
}

long estimate_series_precision(long n, const ModelParams& p, double target_abs_err) {
  if (n < 0) throw DomainError("n must be >= 0");
  return precision_for(scan_terms(n, p, target_abs_err), target_abs_err, SeriesOptions{}.guard_bits);
}

SeriesResult pmf_series(long n, const ModelParams& p, const SeriesOptions& opts) {
  if (n < 1) throw DomainError("pmf_series requires n >= 1 (use pmf_zero_series for n = 0)");
  return evaluate(n, p, opts);
}

SeriesResult pmf_zero_series(const ModelParams& p, const SeriesOptions& opts) {
  return evaluate(0, p, opts);
}

}  // namespace kingman
