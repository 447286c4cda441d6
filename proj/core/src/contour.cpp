#include "kingman/contour.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "kingman/special.hpp"
#include "kingman/theta.hpp"

namespace kingman {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI(0.0, 1.0);

// log(1 + q) for |q| < 1 without losing small q.
Complex log1p_complex(Complex q) {
  const double a = q.real();
  const double b = q.imag();
  return {0.5 * std::log1p(2.0 * a + a * a + b * b), std::atan2(b, 1.0 + a)};
}

double power_of(long n, const ModelParams& p) { return 2.0 * static_cast<double>(n) + p.theta; }

template <class F>
double golden_min(F&& f, double lo, double hi, int iters = 60) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? c : d;
}

// Grid scan followed by golden-section refinement around the best node.
template <class F>
double minimize_on(F&& f, const std::vector<double>& grid) {
  std::size_t best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = f(grid[i]);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  const double lo = grid[best == 0 ? 0 : best - 1];
  const double hi = grid[std::min(best + 1, grid.size() - 1)];
  if (hi <= lo) return grid[best];
  const double x = golden_min(f, lo, hi);
  return f(x) <= best_val ? x : grid[best];
}

void require_integer_theta(const ModelParams& p, const char* what) {
  if (!is_integer_theta(p.theta)) {
    throw IntegerThetaRequired(std::string(what) + " is defined only for positive integer theta");
  }
}

void require_n(long n) {
  if (n < 0) throw DomainError("n must be >= 0");
}

// ln of E(t) e^{(1-theta)^2 t/8}
double theta_log_scale(const ModelParams& p) {
  return std::log(euler_prefactor(p)) + (1.0 - p.theta) * (1.0 - p.theta) * p.t / 8.0;
}

// exp(scale - (pi+z)^2/2t - (2n+theta) log cos u) sin u, u = (z+pi)/2
Complex scaled_kernel(long n, const ModelParams& p, Complex z, double log_scale) {
  const Complex u = (z + kPi) / 2.0;
  const Complex w = kPi + z;
  return std::sin(u) * std::exp(log_scale - w * w / (2.0 * p.t) - power_of(n, p) * std::log(std::cos(u)));
}

double scaled_kernel_log_abs(long n, const ModelParams& p, Complex z) {
  const Complex u = (z + kPi) / 2.0;
  const Complex w = kPi + z;
  return std::log(std::abs(std::sin(u))) - (w * w).real() / (2.0 * p.t) -
         power_of(n, p) * std::log(std::abs(std::cos(u)));
}

double circle_log_peak(long n, const ModelParams& p, double radius) {
  constexpr int kAngles = 96;
  double peak = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < kAngles; ++j) {
    const Complex z = std::polar(radius, kPi + 2.0 * kPi * j / kAngles);
    const double a = std::max(scaled_kernel_log_abs(n, p, z), scaled_kernel_log_abs(n, p, -z));
    peak = std::max(peak, a + std::log(std::abs(phi(z, p))));
  }
  return peak;
}

CIntResult circle_integral(long n, const ModelParams& p, const QuadratureConfig& cfg, double radius,
                           double log_scale) {
  if (radius <= 0.0) radius = choose_circle_radius(n, p);
  if (!(radius < 2.0 * kPi)) throw DomainError("circle radius must be below 2 pi");
  const auto f = [&](Complex z) {
    return kI * (scaled_kernel(n, p, z, log_scale) - scaled_kernel(n, p, -z, log_scale)) * phi(z, p);
  };
  const QuadratureResult q = integrate_path(f, ContourPath::circle(0.0, radius, kPi), cfg);
  CIntResult r;
  r.method = ContourMethod::Circle;
  r.value = q.value.real();
  r.imag_residue = std::abs(q.value.imag());
  r.quad_err = q.err_est;
  r.err_est = q.err_est + r.imag_residue;
  r.nodes = q.nodes;
  r.shift = radius;
  return r;
}

struct SteepParts {
  Complex value;
  double err = 0.0;
  long nodes = 0;
};

// i (-int G dz + conj(int conj(G(conj z)) dz)) along `path`
SteepParts steep_piece(long n, const ModelParams& p, const ContourPath& path, const QuadratureConfig& cfg,
                       double log_scale) {
  const auto g = [&](Complex z) { return scaled_kernel(n, p, z, log_scale) * phi(z, p); };
  const auto gc = [&](Complex z) { return std::conj(g(std::conj(z))); };
  const QuadratureResult a = integrate_path(g, path, cfg);
  const QuadratureResult b = integrate_path(gc, path, cfg);
  return {kI * (-a.value + std::conj(b.value)), a.err_est + b.err_est, a.nodes + b.nodes};
}

CIntResult steep_integral(long n, const ModelParams& p, const QuadratureConfig& cfg, double log_scale) {
  // the diagonal leg is z(y) = -pi + y + iy, 0 <= y <= 2 pi
  const Complex dir(1.0, 1.0);
  const double length = 2.0 * kPi;
  const double r = std::clamp(steep_disc_radius(p.t), 0.05 * length, 0.95 * length);

  // geometric panels toward the saddle at z = -pi
  std::vector<Complex> inner_vertices{Complex(-kPi, 0.0)};
  std::vector<double> marks;
  const double smallest = 0.05 * std::sqrt(p.t);
  for (double b = r; b > smallest; b /= 2.0) marks.push_back(b);
  if (marks.empty()) marks.push_back(r);
  for (auto it = marks.rbegin(); it != marks.rend(); ++it) inner_vertices.push_back(-kPi + *it * dir);
  const ContourPath inner = ContourPath::polyline(inner_vertices);
  const ContourPath outer = ContourPath::polyline(
      {-kPi + r * dir, Complex(kPi, 2.0 * kPi), Complex(kPi, 0.0)});

  const SteepParts in = steep_piece(n, p, inner, cfg, log_scale);
  const SteepParts out = steep_piece(n, p, outer, cfg, log_scale);
  const Complex total = in.value + out.value;
  CIntResult res;
  res.method = ContourMethod::SteepDescent;
  res.value = total.real();
  res.imag_residue = std::abs(total.imag());
  res.quad_err = in.err + out.err;
  res.err_est = res.quad_err + res.imag_residue;
  res.nodes = in.nodes + out.nodes;
  res.inner = in.value.real();
  res.outer = out.value.real();
  res.shift = r;
  return res;
}

}  // namespace

// ---- line --------------------------------------------------------------

double line_log_prefactor(long n, const ModelParams& p) {
  require_n(n);
  return log_binom_prefactor(n, p.theta) + (power_of(n, p) - 1.0) * std::numbers::ln2 +
         (1.0 - p.theta) * (1.0 - p.theta) * p.t / 8.0 - 0.5 * std::log(2.0 * kPi * p.t);
}

Complex line_integrand(long n, const ModelParams& p, Complex w) {
  const Complex q = std::exp(-kI * w);
  const Complex e = line_log_prefactor(n, p) - w * w / (2.0 * p.t) -
                    kI * w * ((power_of(n, p) - 1.0) / 2.0) - power_of(n, p) * log1p_complex(q);
  return std::exp(e) * (1.0 - q);
}

double line_log_magnitude(long n, const ModelParams& p, Complex w) {
  const Complex q = std::exp(-kI * w);
  const Complex e = -w * w / (2.0 * p.t) - kI * w * ((power_of(n, p) - 1.0) / 2.0) -
                    power_of(n, p) * log1p_complex(q);
  return line_log_prefactor(n, p) + e.real() + std::log(std::abs(1.0 - q));
}

double line_log_majorant(long n, const ModelParams& p, double A) {
  if (!(A > 0.0)) throw DomainError("line shift A must be > 0");
  const double m = power_of(n, p);
  return line_log_prefactor(n, p) + A * A / (2.0 * p.t) - A * (m - 1.0) / 2.0 +
         std::log1p(std::exp(-A)) - m * std::log1p(-std::exp(-A));
}

double line_tail_bound(long n, const ModelParams& p, double A, double R) {
  if (!(R > 0.0)) throw DomainError("line half-width R must be > 0");
  // integral_R^inf e^{-x^2/2t} dx <= (t/R) e^{-R^2/2t}, both tails
  return std::exp(line_log_majorant(n, p, A) + std::log(2.0 * p.t / R) - R * R / (2.0 * p.t));
}

double truncate_line(long n, const ModelParams& p, double A, double tol) {
  if (!(tol > 0.0)) throw DomainError("truncate_line requires tol > 0");
  const double log_m = line_log_majorant(n, p, A);
  double R = std::sqrt(2.0 * p.t * std::max(1.0, log_m - std::log(tol)));
  for (int i = 0; i < 100; ++i) {
    const double next = std::sqrt(2.0 * p.t * std::max(0.5, log_m + std::log(2.0 * p.t / R) - std::log(tol)));
    if (std::abs(next - R) < 1e-12 * R) break;
    R = next;
  }
  while (line_tail_bound(n, p, A, R) >= tol) R *= 1.01;
  return R;
}

double stationary_line_shift(double scale) {
  const auto f = [scale](double A) { return A - scale / (1.0 + std::exp(-A)); };
  double lo = 1e-12;
  double hi = 50.0;
  if (!(f(lo) < 0.0 && f(hi) > 0.0)) return 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double choose_A(long n, const ModelParams& p) {
  require_n(n);
  // The non-Gaussian factor is 2 pi periodic in Re w and the Gaussian
  // decays, so the peak over the line lies in [0, 2 pi].
  const auto peak = [&](double A) {
    constexpr int kPoints = 256;
    double best = -std::numeric_limits<double>::infinity();
    for (int j = 0; j <= kPoints; ++j) {
      const double x = 2.0 * kPi * j / kPoints;
      best = std::max(best, line_log_magnitude(n, p, Complex(x, -A)));
    }
    return best;
  };
  std::vector<double> grid;
  // below ~0.25 the line runs close to the zeros of 1 + e^{iw}
  for (int i = 0; i <= 120; ++i) grid.push_back(0.25 * std::pow(200.0, i / 120.0));
  return minimize_on(peak, grid);
}

CIntResult pmf_line_integral(long n, const ModelParams& p, const LineSpec& spec, const QuadratureConfig& cfg) {
  require_n(n);
  if (!(spec.A > 0.0) || !(spec.R > 0.0)) throw DomainError("LineSpec requires A > 0 and R > 0");
  const double tail = line_tail_bound(n, p, spec.A, spec.R);
  if (tail > std::max(cfg.abs_tol, cfg.rel_tol)) {
    throw TailCertificateFailure("line truncation at R = " + std::to_string(spec.R) +
                                 " leaves a tail bound of " + std::to_string(tail));
  }
  const auto f = [&](Complex w) { return line_integrand(n, p, w); };
  const ContourPath path = ContourPath::segment(Complex(-spec.R, -spec.A), Complex(spec.R, -spec.A));
  const QuadratureResult q = integrate_path(f, path, cfg);
  CIntResult r;
  r.method = ContourMethod::Line;
  r.value = q.value.real();
  r.imag_residue = std::abs(q.value.imag());
  r.quad_err = q.err_est;
  r.tail_bound = tail;
  r.err_est = q.err_est + tail + r.imag_residue;
  r.nodes = q.nodes;
  r.shift = spec.A;
  r.half_width = spec.R;
  return r;
}

CIntResult pmf_line_integral(long n, const ModelParams& p, const QuadratureConfig& cfg) {
  const double A = choose_A(n, p);
  const double R = truncate_line(n, p, A, 0.1 * std::max(cfg.abs_tol, cfg.rel_tol));
  return pmf_line_integral(n, p, LineSpec{A, R}, cfg);
}

// ---- circle ------------------------------------------------------------

double choose_circle_radius(long n, const ModelParams& p) {
  require_n(n);
  require_integer_theta(p, "the circle representation");
  std::vector<double> grid;
  const double lo = 0.3;
  const double hi = 2.0 * kPi - 0.3;
  for (int i = 0; i <= 40; ++i) grid.push_back(lo + (hi - lo) * i / 40.0);
  return minimize_on([&](double r) { return circle_log_peak(n, p, r); }, grid);
}

CIntResult c_coefficient_circle(long n, const ModelParams& p, const QuadratureConfig& cfg, double radius) {
  require_n(n);
  require_integer_theta(p, "the circle representation");
  const double scale = theta_log_scale(p) - std::log(2.0 * std::sqrt(2.0 * kPi * p.t));
  return circle_integral(n, p, cfg, radius, scale);
}

CIntResult pmf_circle(long n, const ModelParams& p, const QuadratureConfig& cfg, double radius) {
  require_n(n);
  require_integer_theta(p, "the circle representation");
  const double scale =
      theta_log_scale(p) - std::log(2.0 * std::sqrt(2.0 * kPi * p.t)) + log_binom_prefactor(n, p.theta);
  return circle_integral(n, p, cfg, radius, scale);
}

// ---- steep descent -----------------------------------------------------

double steep_disc_radius(double t) { return std::pow(t, 0.25) * std::log(1.0 / t); }

CIntResult c_coefficient_steep(long n, const ModelParams& p, const QuadratureConfig& cfg) {
  require_n(n);
  require_integer_theta(p, "the steep-descent representation");
  if (p.t > 1.0) throw DomainError("steep descent is set up for t <= 1");
  return steep_integral(n, p, cfg, theta_log_scale(p) - 0.5 * std::log(2.0 * kPi * p.t));
}

CIntResult pmf_steep(long n, const ModelParams& p, const QuadratureConfig& cfg) {
  require_n(n);
  require_integer_theta(p, "the steep-descent representation");
  if (p.t > 1.0) throw DomainError("steep descent is set up for t <= 1");
  return steep_integral(n, p, cfg,
                        theta_log_scale(p) - 0.5 * std::log(2.0 * kPi * p.t) + log_binom_prefactor(n, p.theta));
}

}  // namespace kingman
