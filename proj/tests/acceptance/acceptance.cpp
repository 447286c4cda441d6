// Acceptance checks, one per criterion. Usage: kingman_acceptance [1-8 ...]
// Prints one PASS/FAIL line per criterion; exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "kingman/asymptotics.hpp"
#include "kingman/contour.hpp"
#include "kingman/dist_api.hpp"
#include "kingman/oracle.hpp"
#include "kingman/series.hpp"
#include "kingman/special.hpp"
#include "kingman/theta.hpp"

using namespace kingman;

namespace {

constexpr double kPi = std::numbers::pi;

// Tolerances, as pinned by the criteria.
constexpr double kTriangleTol = 1e-8;
constexpr double kTriangleBudgetSeconds = 600.0;
constexpr double kNormTol = 1e-8;
constexpr double kNormTailTol = 1e-10;
constexpr double kNormSmallTTol = 1e-6;
constexpr double kOdeTol = 1e-7;
constexpr double kOdeStartTol = 1e-9;
constexpr long kMcReps = 1'000'000;
constexpr double kMcSigmas = 4.0;
constexpr double kMcCoverage = 0.99;
constexpr double kJacobiTol = 1e-12;
constexpr double kProductTol = 1e-12;
constexpr double kLcltTol = 0.2;
constexpr double kLcltBudgetSeconds = 600.0;
constexpr double kGaussianTol = 1e-10;
constexpr double kCubicMismatch = 1e3;
constexpr double kMonotoneSlack = 1e-12;
constexpr double kMeanLo = 1.9;
constexpr double kMeanHi = 2.1;
constexpr std::uint64_t kSeed = 20261015;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

Outcome method_triangle() {
  const auto t0 = std::chrono::steady_clock::now();
  double series_line = 0.0;
  double line_circle = 0.0;
  double nonint = 0.0;
  for (double theta : {1.0, 2.0, 0.5, 1.7})
    for (double t : {0.2, 0.5, 1.0, 2.0})
      for (long n = 0; n <= 50; ++n) {
        const ModelParams p(theta, t);
        const double s = pmf(n, p, {Method::Series, ""}).value;
        const double l = pmf(n, p, {Method::Line, ""}).value;
        if (is_integer_theta(theta)) {
          const double c = pmf(n, p, {Method::Circle, ""}).value;
          series_line = std::max(series_line, std::abs(s - l));
          line_circle = std::max(line_circle, std::abs(l - c));
        } else {
          nonint = std::max(nonint, std::abs(s - l));
        }
      }
  const double secs = seconds_since(t0);
  const bool pass = series_line < kTriangleTol && line_circle < kTriangleTol && nonint < kTriangleTol &&
                    secs < kTriangleBudgetSeconds;
  return {pass, "max|S-L|=" + sci(series_line) + " max|L-C|=" + sci(line_circle) + " non-integer max|S-L|=" +
                    sci(nonint) + " (tol " + sci(kTriangleTol) + "), " + sci(secs) + " s"};
}

Outcome normalization() {
  double worst = 0.0;
  for (double theta : {0.5, 1.0, 2.7})
    for (double t : {0.2, 1.0, 5.0}) {
      const ModelParams p(theta, t);
      long n_max = 5;
      while (tail_mass_bound(n_max, p) > kNormTailTol) ++n_max;
      const PmfTable table = pmf_table(p, n_max);
      worst = std::max(worst, table.normalization_defect + table.tail_bound);
    }
  const PmfTable small = pmf_table(ModelParams(1.0, 0.05), 200);
  double circle_sum = 0.0;
  for (long n = 0; n <= 200; ++n) circle_sum += pmf(n, ModelParams(1.0, 0.05), {Method::Circle, ""}).value;
  const double small_defect = std::abs(1.0 - circle_sum) + small.tail_bound;
  return {worst < kNormTol && small_defect < kNormSmallTTol,
          "max |sum-1| + tail=" + sci(worst) + " (tol " + sci(kNormTol) + "); t=0.05 circle n<=200: " +
              sci(small_defect) + " (tol " + sci(kNormSmallTTol) + ")"};
}

Outcome oracle_agreement() {
  OdeOptions oo;
  oo.start = Start::FromInfinity;
  double ode_dev = 0.0;
  double start_dev = 0.0;
  for (double theta : {0.5, 1.0, 2.0})
    for (double t : {0.5, 1.0}) {
      const ModelParams p(theta, t);
      const auto a = ode_distribution(400, p, oo);
      const auto b = ode_distribution(800, p, oo);
      for (long n = 0; n <= 30; ++n) {
        const auto i = static_cast<std::size_t>(n);
        ode_dev = std::max(ode_dev, std::abs(pmf(n, p, {Method::Series, ""}).value - a[i]));
        start_dev = std::max(start_dev, std::abs(a[i] - b[i]));
      }
    }
  long tested = 0;
  long covered = 0;
  const std::vector<std::pair<double, double>> cells{{1.0, 1.0}, {1.0, 0.5}, {2.0, 1.0}, {0.5, 1.0}};
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const ModelParams p(cells[c].first, cells[c].second);
    const McHistogram h = mc_histogram(p, kMcReps, kSeed + c);
    for (long n = 0; n < static_cast<long>(h.counts.size()); ++n) {
      const double exact = pmf(n, p).value;
      const long count = h.counts[static_cast<std::size_t>(n)];
      if (exact * kMcReps < 5.0 && count == 0) continue;
      const double sigma = std::sqrt(exact * (1.0 - exact) / kMcReps);
      ++tested;
      if (std::abs(static_cast<double>(count) / kMcReps - exact) <= kMcSigmas * sigma) ++covered;
    }
  }
  const double coverage = static_cast<double>(covered) / static_cast<double>(tested);
  return {ode_dev < kOdeTol && start_dev < kOdeStartTol && coverage >= kMcCoverage,
          "max|series-ode400|=" + sci(ode_dev) + " max|ode400-ode800|=" + sci(start_dev) + " mc coverage " +
              std::to_string(covered) + "/" + std::to_string(tested)};
}

Outcome jacobi() {
  double identity = 0.0;
  for (double q : {0.1, 0.3, 0.5, 0.7})
    for (int j = 0; j < 18; ++j) {
      const Complex x = j < 16 ? std::polar(1.0, 2.0 * kPi * j / 16.0) : Complex(j == 16 ? 0.5 : 2.0, 0.0);
      identity = std::max(identity, std::abs(jacobi_series(q, x, 40) - triple_product(q, x, triple_product_terms(q, x, 1e-17))));
    }
  double factored = 0.0;
  for (double theta : {1.0, 2.0, 3.0})
    for (double t : {0.5, 2.0})
      for (int j = 0; j < 16; ++j) {
        const ModelParams p(theta, t);
        const Complex z = std::polar(1.0, 2.0 * kPi * j / 16.0);
        const Complex s = theta_sum(z, p);
        // relative to the head terms, since h cancels to rounding level at some z
        const double scale = std::abs(std::exp(-(kPi + z) * (kPi + z) / (2.0 * t))) +
                             std::abs(std::exp(-(kPi - z) * (kPi - z) / (2.0 * t)));
        factored = std::max(factored, std::abs(s - theta_product_form(z, p)) / std::max(std::abs(s), scale));
      }
  return {identity < kJacobiTol && factored < kProductTol,
          "max|sum-product|=" + sci(identity) + " max rel|h_sum-h_product|=" + sci(factored)};
}

Outcome lclt() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> ts{0.2, 0.1, 0.05, 0.02};
  std::vector<double> literal;
  std::vector<double> lattice;
  for (double t : ts) {
    double a = 0.0;
    double b = 0.0;
    for (double v : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
      const long n = n_of_v(v, t);
      const double d = pmf(n, ModelParams(1.0, t)).value;
      a = std::max(a, std::abs(d / lclt_density(v, t) - 1.0));
      b = std::max(b, std::abs(d / lclt_density(v_of_n(n, t), t) - 1.0));
    }
    literal.push_back(a);
    lattice.push_back(b);
  }
  const auto decreasing = [](const std::vector<double>& m) {
    for (std::size_t i = 0; i + 1 < m.size(); ++i)
      if (!(m[i + 1] < m[i])) return false;
    return true;
  };
  const double constant = lclt_density(0.0, 1.0);
  const bool constant_ok = constant == std::sqrt(1.5) / std::sqrt(2.0 * kPi);
  std::string lit = "";
  std::string lat = "";
  for (std::size_t i = 0; i < ts.size(); ++i) {
    lit += " " + sci(literal[i]);
    lat += " " + sci(lattice[i]);
  }
  std::printf("info: lattice-consistent max|ratio-1| along t=0.2,0.1,0.05,0.02:%s (%s)\n", lat.c_str(),
              decreasing(lattice) && lattice.back() < kLcltTol ? "decreasing, below 0.2" : "not monotone");
  const double secs = seconds_since(t0);
  return {decreasing(literal) && literal.back() < kLcltTol && constant_ok && secs < kLcltBudgetSeconds,
          "max|ratio-1| along t=0.2,0.1,0.05,0.02:" + lit + "; v=0 constant " + (constant_ok ? "exact" : "off")};
}

Outcome exponent_fix() {
  double worst = 0.0;
  for (double v : {0.0, 1.0, -1.0, 2.0, -2.0, 4.0, -4.0})
    worst = std::max(worst, std::abs(gaussian_limit_quadrature(v) - gaussian_limit_integral(v)));
  const double cubic = 2.0 * std::sqrt(6.0) * std::sqrt(2.0 * kPi) * std::exp(-3.0 * -8.0 / 4.0);
  const double mismatch = cubic / gaussian_limit_quadrature(-2.0).real();
  return {worst < kGaussianTol && mismatch > kCubicMismatch,
          "max|quadrature-closed form|=" + sci(worst) + "; cubic/quadrature at v=-2: " + sci(mismatch)};
}

Outcome steep() {
  double rise = -1.0;
  for (long n : {1L, 20L, 40L, 200L})
    for (double t : {0.01, 0.05, 0.1, 1.0}) {
      const ModelParams p(1.0, t);
      double prev = steep_profile(0.0, n, p);
      for (int i = 1; i < 1000; ++i) {
        const double cur = steep_profile(2.0 * kPi * i / 999.0, n, p);
        rise = std::max(rise, cur - prev);
        prev = cur;
      }
    }
  bool agree = true;
  std::string detail;
  for (double t : {0.1, 0.05}) {
    const long n = n_of_v(0.0, t);
    const ModelParams p(1.0, t);
    const CIntResult s = c_coefficient_steep(n, p);
    const CIntResult c = c_coefficient_circle(n, p);
    agree = agree && std::abs(s.value - c.value) <= s.err_est + c.err_est;
    detail += " t=" + sci(t) + ": |steep-circle|=" + sci(std::abs(s.value - c.value)) + " vs " + sci(s.err_est + c.err_est);
  }
  const double t = 0.05;
  const double outer = std::abs(c_coefficient_steep(n_of_v(0.0, t), ModelParams(1.0, t)).outer);
  const double ceiling = std::exp(-std::pow(std::log(1.0 / t), 4) / 24.0);
  return {rise <= kMonotoneSlack && agree && outer < ceiling,
          "max a(y+h)-a(y)=" + sci(rise) + ";" + detail + "; outer leg " + sci(outer) + " < " + sci(ceiling)};
}

Outcome mean_limit() {
  bool pass = true;
  std::string detail = "t*mean:";
  for (double t : {0.1, 0.05, 0.02}) {
    const double m = t * mean_blocks(ModelParams(1.0, t));
    pass = pass && m >= kMeanLo && m <= kMeanHi;
    detail += " t=" + sci(t) + ":" + sci(m);
  }
  return {pass, detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"method triangle", method_triangle}, {"normalization", normalization},
      {"oracle agreement", oracle_agreement}, {"triple product", jacobi},
      {"local limit", lclt},               {"limit exponent", exponent_fix},
      {"steep descent", steep},             {"mean from infinity", mean_limit}};
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  if (which.empty())
    for (int i = 1; i <= 8; ++i) which.push_back(i);

  bool all = true;
  for (int k : which) {
    if (k < 1 || k > 8) {
      std::fprintf(stderr, "unknown criterion %d\n", k);
      return 1;
    }
    Outcome o{false, ""};
    try {
      o = criteria[static_cast<std::size_t>(k - 1)].second();
    } catch (const std::exception& e) {
      o = {false, std::string("raised: ") + e.what()};
    }
    std::printf("criterion %d (%s): %s  %s\n", k, criteria[static_cast<std::size_t>(k - 1)].first,
                o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
