#include "kingman/validate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "kingman/asymptotics.hpp"
#include "kingman/contour.hpp"
#include "kingman/dist_api.hpp"
#include "kingman/oracle.hpp"
#include "kingman/records.hpp"
#include "kingman/series.hpp"
#include "kingman/special.hpp"
#include "kingman/theta.hpp"
#include "parallel.hpp"

namespace kingman {

namespace {

using nlohmann::json;
constexpr double kPi = std::numbers::pi;

std::string fmt(double x) { return format_double(x); }

InvariantResult tolerance_check(const std::string& name, double threshold, double observed, std::string detail) {
  InvariantResult r;
  r.name = name;
  r.margin = threshold - observed;
  r.pass = std::isfinite(r.margin) && r.margin >= 0.0;
  r.detail = std::move(detail);
  return r;
}

InvariantResult margin_check(const std::string& name, double margin, std::string detail) {
  InvariantResult r;
  r.name = name;
  r.margin = margin;
  r.pass = std::isfinite(margin) && margin >= 0.0;
  r.detail = std::move(detail);
  return r;
}

struct TriangleCell {
  long n = 0;
  double theta = 0.0;
  double t = 0.0;
  SeriesResult series;
  CIntResult line;
  CIntResult circle;
  bool has_circle = false;
};

std::vector<TriangleCell> triangle_cells(const ValidationGrid& g, const ValidationTolerances& tol,
                                         const ValidationOptions& opts) {
  std::vector<TriangleCell> cells;
  for (const auto* thetas : {&g.integer_thetas, &g.noninteger_thetas})
    for (double theta : *thetas)
      for (double t : g.ts)
        for (long n = 0; n <= g.n_max; ++n) {
          TriangleCell c;
          c.n = n;
          c.theta = theta;
          c.t = t;
          c.has_circle = is_integer_theta(theta);
          cells.push_back(std::move(c));
        }
  QuadratureConfig cfg;
  cfg.abs_tol = tol.pmf_tol / 10.0;
  SeriesOptions so;
  so.target_abs_err = tol.pmf_tol;
  detail::parallel_for(cells.size(), [&](std::size_t i) {
    TriangleCell& c = cells[i];
    const ModelParams p(c.theta, c.t);
    c.series = c.n == 0 ? pmf_zero_series(p, so) : pmf_series(c.n, p, so);
    c.line = pmf_line_integral(c.n, p, cfg);
    if (c.has_circle) {
      c.circle = pmf_circle(c.n, p, cfg);
      c.circle.value += opts.circle_perturbation;
    }
  });
  return cells;
}

// per-t maxima of |ratio - 1| over v in {-2..2}; lattice uses v of the chosen n
std::vector<double> lclt_maxima(const std::vector<double>& ts, bool lattice, double pmf_tol) {
  std::vector<double> out;
  for (double t : ts) {
    double worst = 0.0;
    for (double v : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
      const long n = n_of_v(v, t);
      const double d = pmf(n, ModelParams(1.0, t), {}, pmf_tol).value;
      const double dens = lclt_density(lattice ? v_of_n(n, t) : v, t);
      worst = std::max(worst, std::abs(d / dens - 1.0));
    }
    out.push_back(worst);
  }
  return out;
}

InvariantResult lclt_invariant(const std::string& name, const std::vector<double>& ts, const std::vector<double>& m,
                               double bound) {
  double margin = bound - m.back();
  std::string detail = "max|ratio-1| along t:";
  for (std::size_t i = 0; i < m.size(); ++i) {
    detail += " t=" + fmt(ts[i]) + ":" + fmt(m[i]);
    if (i + 1 < m.size()) margin = std::min(margin, m[i] - m[i + 1]);
  }
  return margin_check(name, margin, detail + "; needs strict decrease and last < " + fmt(bound));
}

}  // namespace

ValidationGrid ValidationGrid::small() {
  ValidationGrid g;
  g.name = "small";
  g.noninteger_thetas = {0.5};
  g.ts = {0.5, 1.0};
  g.n_max = 12;
  g.normalization_thetas = {1.0};
  g.normalization_ts = {0.2, 1.0};
  g.ode_thetas = {1.0};
  g.ode_ts = {1.0};
  g.ode_n_max = 12;
  g.ode_mass_sizes = {100};
  g.mc_cells = {{1.0, 1.0}};
  g.mc_reps = 100'000;
  g.mc_mean_ts = {0.1, 0.05};
  g.mc_mean_reps = 20'000;
  g.steep_ts = {0.1};
  return g;
}

ValidationGrid ValidationGrid::by_name(const std::string& name) {
  if (name == "default") return ValidationGrid{};
  if (name == "small") return small();
  throw DomainError("unknown grid '" + name + "' (expected default or small)");
}

bool ValidationReport::all_pass() const {
  return std::all_of(invariants.begin(), invariants.end(), [](const auto& r) { return r.pass; });
}

const InvariantResult* ValidationReport::find(const std::string& name) const {
  for (const auto& r : invariants)
    if (r.name == name) return &r;
  return nullptr;
}

std::vector<std::string> invariant_names() {
  return {"numerics.log_rising_factorial_step",
          "numerics.death_rate_increasing",
          "numerics.path_reversal",
          "numerics.odd_symmetric_path",
          "numerics.path_split_additivity",
          "series.normalization",
          "series.nonnegativity",
          "series.cancellation_bookkeeping",
          "series.ode_agreement",
          "theta.jacobi_identity",
          "theta.product_vs_sum",
          "theta.phi_even_and_theta_period",
          "theta.kernel_continuity",
          "theta.steep_profile_monotone",
          "contour.method_triangle",
          "contour.a_invariance",
          "contour.circle_node_parity",
          "contour.imaginary_residue",
          "contour.deformation_equivalence",
          "asymptotics.lclt_convergence",
          "asymptotics.lclt_convergence_lattice",
          "asymptotics.gaussian_limit_quadrature",
          "asymptotics.lattice_mass",
          "oracle.ode_mass_conservation",
          "oracle.ode_start_insensitivity",
          "oracle.mc_coverage",
          "oracle.mc_mean_limit",
          "dist_api.auto_cross_check",
          "dist_api.determinism",
          "dist_api.table_reproducible",
          "cli.determinism",
          "cli.round_trip",
          "cli.exit_codes"};
}

ValidationReport validate(const ValidationGrid& g, const ValidationTolerances& tol, const ValidationOptions& opts) {
  ValidationReport report;
  report.grid_name = g.name;
  QuadratureConfig cfg;
  cfg.abs_tol = tol.pmf_tol / 10.0;

  std::vector<TriangleCell> cells;
  std::string triangle_error;
  try {
    cells = triangle_cells(g, tol, opts);
  } catch (const std::exception& e) {
    triangle_error = e.what();
  }
  const auto need_cells = [&] {
    if (!triangle_error.empty()) throw NumericalError("triangle grid failed: " + triangle_error);
  };

  std::map<std::string, std::function<InvariantResult(const std::string&)>> suites;

  // ---- numerics ----
  suites["numerics.log_rising_factorial_step"] = [&](const std::string& name) {
    CounterRng rng(g.seed, 1);
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
      const double a = 10.0 * rng.uniform();
      const long k = static_cast<long>(rng.next() % 201);
      const double hi = log_rising_factorial(a, k + 1);
      const double err = std::abs(hi - log_rising_factorial(a, k) - std::log(a + static_cast<double>(k)));
      worst = std::max(worst, err / (1.0 + std::abs(hi)));
    }
    return tolerance_check(name, 1e-12, worst, "max relative step error over 500 random (a, k)");
  };
  suites["numerics.death_rate_increasing"] = [&](const std::string& name) {
    double margin = std::numeric_limits<double>::infinity();
    for (double theta : {0.1, 0.5, 1.0, 2.7, 10.0})
      for (long k = 1; k < 1000; ++k) margin = std::min(margin, death_rate(k + 1, theta) - death_rate(k, theta));
    return margin_check(name, margin, "min lambda_{k+1} - lambda_k for k < 1000");
  };
  suites["numerics.path_reversal"] = [&](const std::string& name) {
    const auto f = [](Complex z) { return std::exp(z) * std::cos(z); };
    const ContourPath path = ContourPath::polyline({0.0, Complex(2.0, 0.0), Complex(2.0, 1.5), Complex(-1.0, 1.0)});
    const Complex a = integrate_path(f, path, cfg).value;
    const Complex b = integrate_path(f, path.reversed(), cfg).value;
    return tolerance_check(name, 0.0, std::abs(a + b), "|I(path) + I(reversed)|");
  };
  suites["numerics.odd_symmetric_path"] = [&](const std::string& name) {
    const auto f = [](Complex z) { return z * std::exp(-z * z) * std::cos(z); };
    const Complex v = integrate_path(f, ContourPath::segment(Complex(-1.0, -1.0), Complex(1.0, 1.0)), cfg).value;
    return tolerance_check(name, cfg.abs_tol, std::abs(v), "|integral of an odd integrand over -(1+i) -> 1+i|");
  };
  suites["numerics.path_split_additivity"] = [&](const std::string& name) {
    const auto f = [](Complex z) { return std::exp(z) * std::sin(3.0 * z); };
    const ContourPath path = ContourPath::polyline({0.0, Complex(2.0, 0.0), Complex(2.0, 2.0)});
    const auto whole = integrate_path(f, path, cfg);
    const auto [left, right] = path.split(0, 0.37);
    const auto a = integrate_path(f, left, cfg);
    const auto b = integrate_path(f, right, cfg);
    return tolerance_check(name, whole.err_est + a.err_est + b.err_est, std::abs(a.value + b.value - whole.value),
                           "|I_left + I_right - I| against the combined error estimates");
  };

  // ---- series ----
  suites["series.normalization"] = [&](const std::string& name) {
    double worst = 0.0;
    std::string detail;
    SeriesOptions so;
    so.target_abs_err = tol.pmf_tol;
    for (double theta : g.normalization_thetas)
      for (double t : g.normalization_ts) {
        const ModelParams p(theta, t);
        long N = 5;
        while (tail_mass_bound(N, p) > tol.normalization_tail) N += std::max<long>(1, N / 4);
        double sum = pmf_zero_series(p, so).value;
        for (long n = 1; n <= N; ++n) sum += pmf_series(n, p, so).value;
        worst = std::max(worst, std::abs(sum - 1.0));
        detail += "theta=" + fmt(theta) + ",t=" + fmt(t) + ",N=" + std::to_string(N) + " ";
      }
    return tolerance_check(name, tol.normalization, worst, "max |sum - 1| over " + detail);
  };
  suites["series.nonnegativity"] = [&](const std::string& name) {
    need_cells();
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& c : cells) margin = std::min(margin, c.series.value + c.series.abs_err_bound);
    return margin_check(name, margin, "min value + abs_err_bound over the triangle grid");
  };
  suites["series.cancellation_bookkeeping"] = [&](const std::string& name) {
    need_cells();
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& c : cells) {
      if (c.series.value_hp.is_zero()) continue;
      worst = std::max(worst, c.series.cancellation_bits + c.series.value_hp.log2_abs() - c.series.peak_log2_term);
    }
    return tolerance_check(name, 2.0, worst, "max cancellation_bits + log2|value| - log2 max|term|");
  };
  std::map<std::pair<double, double>, std::pair<std::vector<double>, std::vector<double>>> ode_cache;
  const auto ode_pair = [&](double theta, double t) -> const auto& {
    auto key = std::make_pair(theta, t);
    auto it = ode_cache.find(key);
    if (it == ode_cache.end()) {
      OdeOptions oo;
      oo.start = Start::FromInfinity;
      const ModelParams p(theta, t);
      it = ode_cache.emplace(key, std::make_pair(ode_distribution(400, p, oo), ode_distribution(800, p, oo))).first;
    }
    return it->second;
  };
  suites["series.ode_agreement"] = [&](const std::string& name) {
    double worst = 0.0;
    for (double theta : g.ode_thetas)
      for (double t : g.ode_ts) {
        const ModelParams p(theta, t);
        const auto& ode = ode_pair(theta, t).first;
        for (long n = 0; n <= g.ode_n_max; ++n) {
          const double s = n == 0 ? pmf_zero_series(p).value : pmf_series(n, p).value;
          worst = std::max(worst, std::abs(s - ode[static_cast<std::size_t>(n)]));
        }
      }
    return tolerance_check(name, tol.ode, worst, "max |series - ode(N=400)| for n <= " + std::to_string(g.ode_n_max));
  };

  // ---- theta ----
  suites["theta.jacobi_identity"] = [&](const std::string& name) {
    double worst = 0.0;
    std::vector<Complex> xs;
    for (int j = 0; j < 16; ++j) xs.push_back(std::polar(1.0, 2.0 * kPi * j / 16.0));
    xs.push_back(0.5);
    xs.push_back(2.0);
    for (double q : {0.1, 0.3, 0.5, 0.7})
      for (Complex x : xs) {
        const double spread = std::max(std::abs(x), 1.0 / std::abs(x));
        long N = 1;
        while (std::pow(q, static_cast<double>((N + 1) * (N + 1))) * std::pow(spread, static_cast<double>(N + 1)) > 1e-18)
          ++N;
        const Complex s = jacobi_series(q, x, N);
        const Complex p = triple_product(q, x, triple_product_terms(q, x, 1e-17));
        worst = std::max(worst, std::abs(s - p));
      }
    return tolerance_check(name, tol.jacobi, worst, "max |sum - product| over q in {0.1,0.3,0.5,0.7}, 18 x");
  };
  suites["theta.product_vs_sum"] = [&](const std::string& name) {
    double worst = 0.0;
    for (double theta : {1.0, 2.0, 3.0})
      for (double t : {0.5, 2.0})
        for (int j = 0; j < 16; ++j) {
          const ModelParams p(theta, t);
          const Complex z = std::polar(1.0, 2.0 * kPi * j / 16.0);
          const Complex s = theta_sum(z, p);
          // relative to the head terms: h itself cancels to rounding level at some z
          const double scale = std::abs(std::exp(-(kPi + z) * (kPi + z) / (2.0 * t))) +
                               std::abs(std::exp(-(kPi - z) * (kPi - z) / (2.0 * t)));
          worst = std::max(worst, std::abs(s - theta_product_form(z, p)) / std::max(std::abs(s), scale));
        }
    return tolerance_check(name, tol.product_sum, worst, "max |h_sum - h_product| relative to max(|h|, head magnitude) on |z| = 1");
  };
  suites["theta.phi_even_and_theta_period"] = [&](const std::string& name) {
    double worst = 0.0;
    bool even = true;
    for (double theta : {0.5, 1.0, 1.7, 2.0})
      for (double t : {0.2, 1.0, 5.0})
        for (int j = 0; j < 12; ++j) {
          const ModelParams p(theta, t);
          const ModelParams p2(theta + 2.0, t);
          const Complex z = std::polar(0.3 + 0.2 * j, 0.7 * j);
          even = even && phi(z, p) == phi(-z, p);
          const Complex a = theta_sum(z, p);
          worst = std::max(worst, std::abs(a - theta_sum(z, p2)) / std::abs(a));
        }
    const double margin = even ? 1e-12 - worst : -1.0;
    return margin_check(name, margin,
                        std::string("phi(-z) == phi(z) ") + (even ? "exactly" : "violated") +
                            "; theta-period deviation " + fmt(worst) + " against 1e-12");
  };
  suites["theta.kernel_continuity"] = [&](const std::string& name) {
    double worst = 0.0;
    for (double theta : {1.0, 2.0, 3.0})
      for (long n : {0L, 3L}) {
        const ModelParams p(theta, 0.5);
        const auto jump = [&](int m) {
          double j = 0.0;
          Complex prev = kernel_K({std::polar(1.0, 0.0), p, n});
          for (int i = 1; i <= m; ++i) {
            const Complex cur = kernel_K({std::polar(1.0, 2.0 * kPi * i / m), p, n});
            j = std::max(j, std::abs(cur - prev));
            prev = cur;
          }
          return j;
        };
        worst = std::max(worst, jump(4096) / jump(2048));
      }
    return tolerance_check(name, 0.75, worst,
                           "max-jump ratio between 4096 and 2048 points on |z| = 1 (about 0.5 when continuous)");
  };
  suites["theta.steep_profile_monotone"] = [&](const std::string& name) {
    double worst = -std::numeric_limits<double>::infinity();
    for (long n : {1L, 20L, 200L})
      for (double t : {0.01, 0.1, 1.0}) {
        const ModelParams p(1.0, t);
        double prev = steep_profile(0.0, n, p);
        for (int i = 1; i < 1000; ++i) {
          const double cur = steep_profile(2.0 * kPi * i / 999.0, n, p);
          worst = std::max(worst, cur - prev);
          prev = cur;
        }
      }
    return tolerance_check(name, tol.steep_profile, worst, "max a(y_{i+1}) - a(y_i) on a 1000-point grid");
  };

  // ---- contour ----
  suites["contour.method_triangle"] = [&](const std::string& name) {
    need_cells();
    double worst = 0.0;
    for (const auto& c : cells) {
      double dev = std::abs(c.series.value - c.line.value);
      if (c.has_circle) {
        dev = std::max({dev, std::abs(c.line.value - c.circle.value), std::abs(c.circle.value - c.series.value)});
      }
      if (dev > worst) {
        worst = dev;
        report.worst_cell = {name, c.n, c.theta, c.t, dev};
      }
    }
    return tolerance_check(name, tol.triangle, worst, "max pairwise deviation among series, line, circle");
  };
  suites["contour.a_invariance"] = [&](const std::string& name) {
    double margin = std::numeric_limits<double>::infinity();
    const std::vector<std::tuple<long, double, double>> sample{{0, 1.0, 1.0}, {5, 1.0, 1.0}, {5, 1.7, 0.5},
                                                               {20, 2.0, 0.5}, {3, 0.5, 2.0}};
    for (const auto& [n, theta, t] : sample) {
      const ModelParams p(theta, t);
      std::vector<CIntResult> rs;
      for (double A : {0.5, 1.0, 2.0, choose_A(n, p)}) {
        rs.push_back(pmf_line_integral(n, p, {A, truncate_line(n, p, A, cfg.abs_tol / 10.0)}, cfg));
      }
      for (std::size_t i = 0; i < rs.size(); ++i)
        for (std::size_t j = i + 1; j < rs.size(); ++j)
          margin = std::min(margin, rs[i].err_est + rs[j].err_est - std::abs(rs[i].value - rs[j].value));
    }
    return margin_check(name, margin, "min (err_A + err_B - |d_A - d_B|) over A in {0.5, 1, 2, choose_A}");
  };
  suites["contour.circle_node_parity"] = [&](const std::string& name) {
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& [n, theta, t] : std::vector<std::tuple<long, double, double>>{{5, 1.0, 1.0}, {10, 2.0, 0.5}, {20, 1.0, 0.2}}) {
      const ModelParams p(theta, t);
      const CIntResult full = pmf_circle(n, p, cfg);
      QuadratureConfig half;
      half.initial_nodes = std::max<long>(8, full.nodes / 4);
      half.max_nodes = std::max<long>(half.initial_nodes * 2, full.nodes / 2);
      half.rel_tol = 1.0;
      half.abs_tol = 1.0;
      const CIntResult coarse = pmf_circle(n, p, half, full.shift);
      margin = std::min(margin, full.err_est - std::abs(full.value - coarse.value));
    }
    return margin_check(name, margin, "err_est(2M) - |I_2M - I_M| on three cells");
  };
  suites["contour.imaginary_residue"] = [&](const std::string& name) {
    need_cells();
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& c : cells) {
      margin = std::min(margin, 10.0 * c.line.quad_err - c.line.imag_residue);
      if (c.has_circle) margin = std::min(margin, 10.0 * c.circle.quad_err - c.circle.imag_residue);
    }
    return margin_check(name, margin, "min 10 quad_err - |Im| over line and circle results");
  };
  suites["contour.deformation_equivalence"] = [&](const std::string& name) {
    double margin = std::numeric_limits<double>::infinity();
    std::vector<std::tuple<long, double, double>> sample{{10, 1.0, 0.5}, {25, 2.0, 0.2}, {5, 1.0, 1.0}};
    for (double t : g.steep_ts) sample.emplace_back(n_of_v(0.0, t), 1.0, t);
    std::string detail;
    for (const auto& [n, theta, t] : sample) {
      const ModelParams p(theta, t);
      const CIntResult s = c_coefficient_steep(n, p, cfg);
      const CIntResult c = c_coefficient_circle(n, p, cfg);
      margin = std::min(margin, s.err_est + c.err_est - std::abs(s.value - c.value));
      detail += "(" + std::to_string(n) + "," + fmt(theta) + "," + fmt(t) + ") ";
    }
    return margin_check(name, margin, "min (err_steep + err_circle - |c_steep - c_circle|) on " + detail);
  };

  // ---- asymptotics ----
  suites["asymptotics.lclt_convergence"] = [&](const std::string& name) {
    return lclt_invariant(name, g.lclt_ts, lclt_maxima(g.lclt_ts, false, tol.pmf_tol), tol.lclt);
  };
  suites["asymptotics.lclt_convergence_lattice"] = [&](const std::string& name) {
    return lclt_invariant(name, g.lclt_ts, lclt_maxima(g.lclt_ts, true, tol.pmf_tol), tol.lclt);
  };
  suites["asymptotics.gaussian_limit_quadrature"] = [&](const std::string& name) {
    double worst = 0.0;
    for (int i = 0; i <= 16; ++i) {
      const double v = -4.0 + 0.5 * i;
      worst = std::max(worst, std::abs(gaussian_limit_quadrature(v) - gaussian_limit_integral(v)));
    }
    return tolerance_check(name, tol.gaussian, worst, "max |quadrature - closed form| for v in [-4, 4]");
  };
  suites["asymptotics.lattice_mass"] = [&](const std::string& name) {
    const double t = 0.02;
    const double a = 2.0;
    double lattice = 0.0;
    for (long n = n_of_v(-a, t); n <= n_of_v(a, t) + 1; ++n) {
      const double v = v_of_n(n, t);
      if (v >= -a && v <= a) lattice += pmf(n, ModelParams(1.0, t), {}, tol.pmf_tol).value;
    }
    // integral of the density over [-a, a], divided by the lattice spacing sqrt(t)
    const double continuum = std::erf(a * std::sqrt(0.75));
    return tolerance_check(name, tol.lattice_mass, std::abs(lattice / continuum - 1.0),
                           "relative gap between lattice mass " + fmt(lattice) + " and density mass " + fmt(continuum) +
                               " on |v| <= 2, t = 0.02");
  };

  // ---- oracle ----
  suites["oracle.ode_mass_conservation"] = [&](const std::string& name) {
    double worst = 0.0;
    for (long N : g.ode_mass_sizes)
      for (double t : {0.2, 1.0, 10.0}) {
        double s = 0.0;
        for (double x : ode_distribution(N, ModelParams(1.0, t))) s += x;
        worst = std::max(worst, std::abs(s - 1.0));
      }
    return tolerance_check(name, tol.ode_mass, worst, "max |sum p - 1|");
  };
  suites["oracle.ode_start_insensitivity"] = [&](const std::string& name) {
    double worst = 0.0;
    for (double theta : g.ode_thetas) {
      std::vector<double> ts = g.ode_ts;
      ts.push_back(0.2);
      for (double t : ts) {
        const auto& [a, b] = ode_pair(theta, t);
        for (long n = 0; n <= 50; ++n) worst = std::max(worst, std::abs(a[static_cast<std::size_t>(n)] - b[static_cast<std::size_t>(n)]));
      }
    }
    return tolerance_check(name, tol.ode_start, worst, "max |p_n(N=400) - p_n(N=800)| for n <= 50");
  };
  suites["oracle.mc_coverage"] = [&](const std::string& name) {
    long cells_tested = 0;
    long covered = 0;
    for (std::size_t i = 0; i < g.mc_cells.size(); ++i) {
      const auto [theta, t] = g.mc_cells[i];
      const ModelParams p(theta, t);
      const McHistogram h = mc_histogram(p, g.mc_reps, g.seed + i);
      for (long n = 0; n < static_cast<long>(h.counts.size()); ++n) {
        const double exact = pmf(n, p, {}, tol.pmf_tol).value;
        const long count = h.counts[static_cast<std::size_t>(n)];
        if (exact * static_cast<double>(h.reps) < 5.0 && count == 0) continue;
        const double sigma = std::sqrt(std::max(exact * (1.0 - exact), 0.0) / static_cast<double>(h.reps));
        const double p_hat = static_cast<double>(count) / static_cast<double>(h.reps);
        ++cells_tested;
        if (std::abs(p_hat - exact) <= tol.mc_sigmas * sigma) ++covered;
      }
    }
    const double frac = cells_tested ? static_cast<double>(covered) / static_cast<double>(cells_tested) : 0.0;
    return margin_check(name, frac - tol.mc_coverage,
                        std::to_string(covered) + " of " + std::to_string(cells_tested) + " cells within " +
                            fmt(tol.mc_sigmas) + " sigma");
  };
  suites["oracle.mc_mean_limit"] = [&](const std::string& name) {
    double worst = 0.0;
    std::string detail;
    for (std::size_t i = 0; i < g.mc_mean_ts.size(); ++i) {
      const double t = g.mc_mean_ts[i];
      const McHistogram h = mc_histogram(ModelParams(1.0, t), g.mc_mean_reps, g.seed + 100 + i);
      double sum = 0.0;
      for (std::size_t n = 0; n < h.counts.size(); ++n) sum += static_cast<double>(n) * static_cast<double>(h.counts[n]);
      const double scaled = t * sum / static_cast<double>(h.reps);
      worst = std::max(worst, std::abs(scaled - 2.0) / 2.0);
      detail += "t=" + fmt(t) + ":" + fmt(scaled) + " ";
    }
    return tolerance_check(name, tol.mc_mean, worst, "relative |t mean - 2|, " + detail);
  };

  // ---- dist_api ----
  suites["dist_api.auto_cross_check"] = [&](const std::string& name) {
    need_cells();
    double margin = std::numeric_limits<double>::infinity();
    long checked = 0;
    for (std::size_t i = 0; i < cells.size(); i += 20) {
      const ModelParams p(cells[i].theta, cells[i].t);
      const PmfResult a = pmf(cells[i].n, p, {}, tol.pmf_tol);
      const PmfResult b = pmf(cells[i].n, p, {Method::Line, ""}, tol.pmf_tol);
      margin = std::min(margin, a.err_est + b.err_est - std::abs(a.value - b.value));
      ++checked;
    }
    return margin_check(name, margin, "Auto vs Line on " + std::to_string(checked) + " sampled cells (every 20th)");
  };
  suites["dist_api.determinism"] = [&](const std::string& name) {
    bool same = true;
    for (Method m : {Method::Series, Method::Line, Method::Circle, Method::SteepDescent, Method::Lclt, Method::Auto}) {
      const ModelParams p(1.0, 0.5);
      const PmfResult a = pmf(7, p, {m, ""}, tol.pmf_tol);
      const PmfResult b = pmf(7, p, {m, ""}, tol.pmf_tol);
      same = same && fmt(a.value) == fmt(b.value) && fmt(a.err_est) == fmt(b.err_est);
    }
    return margin_check(name, same ? 0.0 : -1.0, "repeated pmf calls are bit-identical for every method");
  };
  suites["dist_api.table_reproducible"] = [&](const std::string& name) {
    const ModelParams p(1.0, 1.0);
    const PmfTable table = pmf_table(p, 20, tol.pmf_tol);
    bool same = true;
    for (const auto& row : table.rows) {
      const PmfResult again = pmf(row.n, p, {row.method, ""}, tol.pmf_tol);
      same = same && fmt(again.value) == fmt(row.value);
    }
    return margin_check(name, same ? 0.0 : -1.0, "table rows equal pmf with the resolved method, bit for bit");
  };

  // ---- cli ----
  const auto table_records = [&] {
    std::vector<OutputRecord> rows;
    for (const auto& r : pmf_table(ModelParams(2.0, 0.5), 15, tol.pmf_tol).rows) rows.push_back(to_record(r));
    return rows;
  };
  suites["cli.determinism"] = [&](const std::string& name) {
    const bool same = records_to_csv(table_records()) == records_to_csv(table_records());
    return margin_check(name, same ? 0.0 : -1.0, "two table renderings are byte-identical");
  };
  suites["cli.round_trip"] = [&](const std::string& name) {
    const auto rows = table_records();
    const std::string csv = records_to_csv(rows, {"normalization_defect=0"});
    const bool ok = records_to_csv(records_from_csv(csv), {"normalization_defect=0"}) == csv &&
                    records_from_csv(csv) == rows && records_from_json(records_to_json(rows)) == rows;
    return margin_check(name, ok ? 0.0 : -1.0, "CSV and JSON parse back to identical records");
  };
  suites["cli.exit_codes"] = [&](const std::string& name) {
    const bool ok = exit_code_for(DomainError("x")) == kExitUsage &&
                    exit_code_for(std::invalid_argument("x")) == kExitUsage &&
                    exit_code_for(PrecisionExhausted("x", 1)) == kExitNumerical &&
                    exit_code_for(NonConvergence("x", {}, 0.0)) == kExitNumerical;
    return margin_check(name, ok ? 0.0 : -1.0, "usage errors map to 1, numerical failures to 2");
  };

  for (const std::string& name : invariant_names()) {
    try {
      report.invariants.push_back(suites.at(name)(name));
    } catch (const std::exception& e) {
      report.invariants.push_back({name, -std::numeric_limits<double>::infinity(), false,
                                   std::string("suite raised: ") + e.what()});
    }
  }
  for (const auto& c : cells) {
    CellValues v{c.n, c.theta, c.t, {{"series", c.series.value}, {"line", c.line.value}}};
    if (c.has_circle) v.values["circle"] = c.circle.value;
    report.grid.push_back(std::move(v));
  }
  return report;
}

namespace {

json num(double x) { return std::isfinite(x) ? json(x) : json(format_double(x)); }
double num(const json& j) { return j.is_string() ? parse_double(j.get<std::string>()) : j.get<double>(); }

}  // namespace

std::string report_to_json(const ValidationReport& r) {
  json doc;
  doc["schema_version"] = r.schema_version;
  doc["grid_name"] = r.grid_name;
  doc["grid"] = json::array();
  for (const auto& c : r.grid) {
    json values = json::object();
    for (const auto& [k, v] : c.values) values[k] = num(v);
    doc["grid"].push_back({{"n", c.n}, {"theta", num(c.theta)}, {"t", num(c.t)}, {"values", values}});
  }
  doc["invariants"] = json::array();
  for (const auto& i : r.invariants) {
    doc["invariants"].push_back({{"name", i.name}, {"margin", num(i.margin)}, {"pass", i.pass}, {"detail", i.detail}});
  }
  const WorstCell& w = r.worst_cell;
  doc["worst_cell"] = {{"invariant", w.invariant}, {"n", w.n}, {"theta", num(w.theta)}, {"t", num(w.t)},
                       {"deviation", num(w.deviation)}};
  doc["all_pass"] = r.all_pass();
  return doc.dump(2) + "\n";
}

ValidationReport report_from_json(const std::string& text) {
  const json doc = json::parse(text);
  ValidationReport r;
  r.schema_version = doc.at("schema_version").get<int>();
  r.grid_name = doc.at("grid_name").get<std::string>();
  for (const auto& c : doc.at("grid")) {
    CellValues v{c.at("n").get<long>(), num(c.at("theta")), num(c.at("t")), {}};
    for (const auto& [k, x] : c.at("values").items()) v.values[k] = num(x);
    r.grid.push_back(std::move(v));
  }
  for (const auto& i : doc.at("invariants")) {
    r.invariants.push_back({i.at("name").get<std::string>(), num(i.at("margin")), i.at("pass").get<bool>(),
                            i.at("detail").get<std::string>()});
  }
  const json& w = doc.at("worst_cell");
  r.worst_cell = {w.at("invariant").get<std::string>(), w.at("n").get<long>(), num(w.at("theta")), num(w.at("t")),
                  num(w.at("deviation"))};
  return r;
}

}  // namespace kingman
