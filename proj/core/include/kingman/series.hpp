#pragma once

#include "kingman/high_prec.hpp"
#include "kingman/params.hpp"

namespace kingman {

// Evaluation of Tavare's alternating series for P(D_t = n).
//
// Terms are T_k = (-1)^(k-n) (2k-1+theta)/k! C(k,n) (n+theta)_(k-1) e^(-lambda_k t)
// for k >= max(n, 1); for n = 0 the constant 1 is added. At small t the
// terms reach ~1e170 while the sum is at most 1, so the working precision
// is sized from a log-magnitude scan before summation.

struct SeriesOptions {
  double target_abs_err = 1e-12;
  long precision_cap = 16384;  // bits; beyond this PrecisionExhausted is raised
  long guard_bits = 64;
};

struct SeriesResult {
  double value = 0.0;
  HighPrecReal value_hp;  // the working-precision sum; abs_err_bound refers to it
  double abs_err_bound = 0.0;
  long terms_used = 0;
  long precision_bits = 0;
  double cancellation_bits = 0.0;  // log2 max|T_k| - log2|value|
  double peak_log2_term = 0.0;
};

// ln|T_k| for k >= max(n, 1).
double log_abs_term(long k, long n, const ModelParams& p);

// Geometric majorant of sum_{k >= k0} |T_k|, kept in log form because the
// bound routinely underflows a double.
struct TailBound {
  double log_bound;  // ln of the bound
  double ratio;      // majorant ratio r < 1 valid for every k >= k0
  double value() const;
};

// Throws NotInTail if no ratio r < 1 dominates |T_{k+1}/T_k| for all k >= k0.
TailBound term_tail_bound(long k0, long n, const ModelParams& p);

// Working precision that pmf_series would start with; used by method selection.
long estimate_series_precision(long n, const ModelParams& p, double target_abs_err);

SeriesResult pmf_series(long n, const ModelParams& p, const SeriesOptions& opts = {});
SeriesResult pmf_zero_series(const ModelParams& p, const SeriesOptions& opts = {});

}  // namespace kingman
