#pragma once

#include <string>
#include <vector>

#include "kingman/params.hpp"
#include "kingman/quadrature.hpp"

namespace kingman {

enum class Method { Series, Line, Circle, SteepDescent, Lclt, Auto };

std::string method_name(Method m);
// Accepts series|line|circle|steep|lclt|auto; DomainError otherwise.
Method parse_method(const std::string& name);

struct MethodChoice {
  Method method = Method::Auto;
  std::string reason;
};

struct PmfOptions {
  long series_bits_threshold = 1024;  // Auto picks the series at or below this working precision
  long precision_cap = 16384;
  QuadratureConfig quad{};  // abs_tol is tightened to tol / 10 per call
};

struct PmfResult {
  long n = 0;
  double theta = 0.0;
  double t = 0.0;
  double value = 0.0;
  double err_est = 0.0;  // for Lclt this is the value itself: the asymptotic form carries no bound
  Method method = Method::Auto;  // the method that produced the value
  std::string reason;
  long terms_used = 0;
  long precision_bits = 0;
  long nodes = 0;
  std::vector<std::string> trail;  // failed attempts before the one that succeeded
  bool ok = true;                  // false only inside tables, for cells that failed
  std::string error;
};

// Raised by Auto when every candidate method failed; what() lists the trail.
class MethodFailure : public NumericalError {
 public:
  MethodFailure(const std::string& what, std::vector<std::string> trail)
      : NumericalError(what), trail_(std::move(trail)) {}
  const std::vector<std::string>& trail() const noexcept { return trail_; }

 private:
  std::vector<std::string> trail_;
};

// Auto policy: Series when its estimated working precision is within the
// threshold, else Circle for integer theta, else Line.
MethodChoice resolve_auto(long n, const ModelParams& p, double tol, const PmfOptions& opts = {});

// Explicit methods propagate their own exceptions. Auto falls back along
// Series, Circle (integer theta), Line and throws MethodFailure if all fail.
PmfResult pmf(long n, const ModelParams& p, const MethodChoice& choice = {}, double tol = 1e-12,
              const PmfOptions& opts = {});

// ln of sum_{k >= max(n,1)} |T_k|, which bounds d_n from above.
double log_series_mass_bound(long n, const ModelParams& p);
// Bound on sum_{n > n_max} d_n (weight 1) or sum_{n > n_max} n d_n (weight n).
double tail_mass_bound(long n_max, const ModelParams& p, bool weight_by_n = false);

struct PmfTable {
  std::vector<PmfResult> rows;       // n = 0..n_max
  double normalization_defect = 0.0; // |1 - sum of rows|
  double tail_bound = 0.0;           // certified mass above n_max
};
PmfTable pmf_table(const ModelParams& p, long n_max, double tol = 1e-12, const PmfOptions& opts = {});

struct MeanResult {
  double mean = 0.0;
  double err_est = 0.0;
  long n_max = 0;  // last n summed
};
MeanResult mean_blocks_detailed(const ModelParams& p, double tol = 1e-10, const PmfOptions& opts = {});
double mean_blocks(const ModelParams& p, double tol = 1e-10);

}  // namespace kingman
