#include "kingman/dist_api.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "kingman/asymptotics.hpp"
#include "kingman/contour.hpp"
#include "kingman/series.hpp"
#include "parallel.hpp"

namespace kingman {

namespace {

double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a + std::log1p(std::exp(b - a));
}

QuadratureConfig quad_for(const PmfOptions& opts, double tol) {
  QuadratureConfig cfg = opts.quad;
  cfg.abs_tol = std::min(cfg.abs_tol, tol / 10.0);
  return cfg;
}

PmfResult run_method(long n, const ModelParams& p, Method m, double tol, const PmfOptions& opts) {
  PmfResult r;
  r.n = n;
  r.theta = p.theta;
  r.t = p.t;
  r.method = m;
  switch (m) {
    case Method::Series: {
      SeriesOptions so;
      so.target_abs_err = tol;
      so.precision_cap = opts.precision_cap;
      const SeriesResult s = n == 0 ? pmf_zero_series(p, so) : pmf_series(n, p, so);
      r.value = s.value;
      r.err_est = s.abs_err_bound;
      r.terms_used = s.terms_used;
      r.precision_bits = s.precision_bits;
      break;
    }
    case Method::Line:
    case Method::Circle:
    case Method::SteepDescent: {
      const QuadratureConfig cfg = quad_for(opts, tol);
      const CIntResult c = m == Method::Line     ? pmf_line_integral(n, p, cfg)
                           : m == Method::Circle ? pmf_circle(n, p, cfg)
                                                 : pmf_steep(n, p, cfg);
      r.value = c.value;
      r.err_est = c.err_est;
      r.nodes = c.nodes;
      break;
    }
    case Method::Lclt:
      r.value = lclt_density(v_of_n(n, p.t), p.t);
      r.err_est = r.value;
      break;
    case Method::Auto:
      throw DomainError("Auto must be resolved before evaluation");
  }
  return r;
}

}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::Series: return "series";
    case Method::Line: return "line";
    case Method::Circle: return "circle";
    case Method::SteepDescent: return "steep";
    case Method::Lclt: return "lclt";
    case Method::Auto: return "auto";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  for (Method m : {Method::Series, Method::Line, Method::Circle, Method::SteepDescent, Method::Lclt, Method::Auto}) {
    if (method_name(m) == name) return m;
  }
  throw DomainError("unknown method '" + name + "'");
}

MethodChoice resolve_auto(long n, const ModelParams& p, double tol, const PmfOptions& opts) {
  const long bits = estimate_series_precision(n, p, tol);
  if (bits <= opts.series_bits_threshold) {
    return {Method::Series, "series needs " + std::to_string(bits) + " bits"};
  }
  if (is_integer_theta(p.theta)) {
    return {Method::Circle, "series needs " + std::to_string(bits) + " bits; integer theta"};
  }
  return {Method::Line, "series needs " + std::to_string(bits) + " bits; non-integer theta"};
}

PmfResult pmf(long n, const ModelParams& p, const MethodChoice& choice, double tol, const PmfOptions& opts) {
  if (n < 0) throw DomainError("pmf requires n >= 0");
  if (!(tol > 0.0)) throw DomainError("pmf requires tol > 0");
  if (choice.method != Method::Auto) {
    PmfResult r = run_method(n, p, choice.method, tol, opts);
    r.reason = choice.reason.empty() ? "requested" : choice.reason;
    return r;
  }
  const MethodChoice first = resolve_auto(n, p, tol, opts);
  std::vector<Method> order{first.method};
  for (Method m : {Method::Series, Method::Circle, Method::Line}) {
    if (m == Method::Circle && !is_integer_theta(p.theta)) continue;
    if (m != first.method) order.push_back(m);
  }
  std::vector<std::string> trail;
  for (Method m : order) {
    try {
      PmfResult r = run_method(n, p, m, tol, opts);
      r.reason = m == first.method ? first.reason : "fallback after " + trail.back();
      r.trail = trail;
      return r;
    } catch (const NumericalError& e) {
      trail.push_back(method_name(m) + ": " + e.what());
    }
  }
  std::string what = "every method failed:";
  for (const auto& s : trail) what += " [" + s + "]";
  throw MethodFailure(what, trail);
}

double log_series_mass_bound(long n, const ModelParams& p) {
  if (n < 0) throw DomainError("n must be >= 0");
  double total = -std::numeric_limits<double>::infinity();
  for (long k = std::max<long>(n, 1);; ++k) {
    try {
      const TailBound tb = term_tail_bound(k, n, p);
      if (tb.log_bound < total - 40.0 || tb.log_bound < -800.0) return log_add(total, tb.log_bound);
    } catch (const NotInTail&) {
    }
    total = log_add(total, log_abs_term(k, n, p));
  }
}

double tail_mass_bound(long n_max, const ModelParams& p, bool weight_by_n) {
  double total = -std::numeric_limits<double>::infinity();
  double previous = std::numeric_limits<double>::infinity();
  for (long n = n_max + 1;; ++n) {
    double lb = log_series_mass_bound(n, p);
    if (weight_by_n) lb += std::log(static_cast<double>(n));
    total = log_add(total, lb);
    // once the bounds fall by half per step, the rest is at most one more term
    if (lb - previous < -std::numbers::ln2 && (lb < total - 40.0 || lb < -800.0)) {
      return std::exp(log_add(total, lb));
    }
    previous = lb;
  }
}

PmfTable pmf_table(const ModelParams& p, long n_max, double tol, const PmfOptions& opts) {
  if (n_max < 0) throw DomainError("pmf_table requires n_max >= 0");
  PmfTable table;
  table.rows.resize(static_cast<std::size_t>(n_max + 1));
  detail::parallel_for(table.rows.size(), [&](std::size_t i) {
    const long n = static_cast<long>(i);
    try {
      table.rows[i] = pmf(n, p, {}, tol, opts);
    } catch (const std::exception& e) {
      PmfResult r;
      r.n = n;
      r.theta = p.theta;
      r.t = p.t;
      r.ok = false;
      r.value = std::numeric_limits<double>::quiet_NaN();
      r.err_est = std::numeric_limits<double>::quiet_NaN();
      r.error = e.what();
      table.rows[i] = r;
    }
  });
  double sum = 0.0;
  for (const auto& r : table.rows)
    if (r.ok) sum += r.value;
  table.normalization_defect = std::abs(1.0 - sum);
  table.tail_bound = tail_mass_bound(n_max, p);
  return table;
}

MeanResult mean_blocks_detailed(const ModelParams& p, double tol, const PmfOptions& opts) {
  if (!(tol > 0.0)) throw DomainError("mean_blocks requires tol > 0");
  long n_max = std::max<long>(16, static_cast<long>(std::ceil(3.0 / p.t)));
  double tail = tail_mass_bound(n_max, p, true);
  while (tail > tol / 2.0) {
    n_max += n_max / 2;
    tail = tail_mass_bound(n_max, p, true);
  }
  std::vector<PmfResult> rows(static_cast<std::size_t>(n_max));
  detail::parallel_for(rows.size(), [&](std::size_t i) {
    rows[i] = pmf(static_cast<long>(i) + 1, p, {}, tol / static_cast<double>(n_max * n_max), opts);
  });
  MeanResult m;
  m.n_max = n_max;
  m.err_est = tail;
  for (const auto& r : rows) {
    m.mean += static_cast<double>(r.n) * r.value;
    m.err_est += static_cast<double>(r.n) * r.err_est;
  }
  return m;
}

double mean_blocks(const ModelParams& p, double tol) { return mean_blocks_detailed(p, tol).mean; }

}  // namespace kingman
