#include "kingman/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "kingman/errors.hpp"

namespace kingman {

namespace {

constexpr int kPanelOrder = 16;
constexpr double kEps = std::numeric_limits<double>::epsilon();

const GaussRule& panel_rule() {
  static const GaussRule rule = gauss_legendre(kPanelOrder);
  return rule;
}

bool close(Complex a, Complex b) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= 1e-10 * scale;
}

struct Partial {
  Complex sum;
  double magnitude = 0.0;  // sum |f| |w| |z'|
  long nodes = 0;
};

void check_finite(Complex v, Complex z) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    throw EvaluationFailure("integrand is not finite at z = (" + std::to_string(z.real()) + ", " +
                            std::to_string(z.imag()) + ")");
  }
}

Partial gauss_panels(const ComplexFunction& f, const PathSegment& seg, long panels) {
  const GaussRule& rule = panel_rule();
  Partial out;
  const double width = (seg.hi - seg.lo) / static_cast<double>(panels);
  for (long p = 0; p < panels; ++p) {
    const double a = seg.lo + width * static_cast<double>(p);
    const double mid = a + 0.5 * width;
    for (int i = 0; i < kPanelOrder; ++i) {
      const double s = mid + 0.5 * width * rule.nodes[static_cast<size_t>(i)];
      const double w = 0.5 * width * rule.weights[static_cast<size_t>(i)];
      const Complex z = seg.point(s);
      const Complex dz = seg.tangent(s);
      const Complex v = f(z);
      check_finite(v, z);
      out.sum += v * dz * w;
      out.magnitude += std::abs(v) * std::abs(dz) * w;
    }
  }
  out.nodes = panels * kPanelOrder;
  return out;
}

// Sum of f z' over the points lo + (j + offset) h, j = 0..count-1.
Partial trapezoid_points(const ComplexFunction& f, const PathSegment& seg, long count,
                         double offset) {
  Partial out;
  const double h = (seg.hi - seg.lo) / static_cast<double>(count);
  for (long j = 0; j < count; ++j) {
    const double s = seg.lo + (static_cast<double>(j) + offset) * h;
    const Complex z = seg.point(s);
    const Complex dz = seg.tangent(s);
    const Complex v = f(z);
    check_finite(v, z);
    out.sum += v * dz;
    out.magnitude += std::abs(v) * std::abs(dz);
  }
  out.nodes = count;
  return out;
}

// Refinement state of one segment.
struct SegmentState {
  const PathSegment* seg = nullptr;
  long level_nodes = 0;  // nodes at the current level
  long panels = 0;       // Gauss panels (open segments)
  Complex raw_sum;       // trapezoid: unscaled sum at current level
  double raw_mag = 0.0;
  Complex value;
  Complex previous;
  double magnitude = 0.0;
  double err = std::numeric_limits<double>::infinity();
  bool at_floor = false;  // levels agree to rounding; refining cannot help

  void refine(const ComplexFunction& f) {
    previous = value;
    if (seg->periodic) {
      // Nested refinement: the new midpoints are interleaved with the old nodes.
      const Partial mid = trapezoid_points(f, *seg, level_nodes, 0.5);
      raw_sum += mid.sum;
      raw_mag += mid.magnitude;
      level_nodes *= 2;
      const double h = (seg->hi - seg->lo) / static_cast<double>(level_nodes);
      value = raw_sum * h;
      magnitude = raw_mag * h;
    } else {
      panels *= 2;
      const Partial p = gauss_panels(f, *seg, panels);
      value = p.sum;
      magnitude = p.magnitude;
      level_nodes = p.nodes;
    }
    const double floor = 8.0 * kEps * magnitude;
    at_floor = std::abs(value - previous) <= floor;
    err = std::abs(value - previous) + floor;
  }

  void start(const ComplexFunction& f, long initial_nodes) {
    if (seg->periodic) {
      level_nodes = std::max<long>(8, initial_nodes);
      const Partial p = trapezoid_points(f, *seg, level_nodes, 0.0);
      raw_sum = p.sum;
      raw_mag = p.magnitude;
      const double h = (seg->hi - seg->lo) / static_cast<double>(level_nodes);
      value = raw_sum * h;
      magnitude = raw_mag * h;
    } else {
      panels = std::max<long>(1, initial_nodes / kPanelOrder);
      const Partial p = gauss_panels(f, *seg, panels);
      value = p.sum;
      magnitude = p.magnitude;
      level_nodes = p.nodes;
    }
  }
};

}  // namespace

GaussRule gauss_legendre(int order) {
  if (order < 1) throw DomainError("gauss_legendre order must be positive");
  GaussRule rule;
  rule.nodes.resize(static_cast<size_t>(order));
  rule.weights.resize(static_cast<size_t>(order));
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) p0 = 1.0;
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<size_t>(i)] = -x;
    rule.nodes[static_cast<size_t>(order - 1 - i)] = x;
    rule.weights[static_cast<size_t>(i)] = w;
    rule.weights[static_cast<size_t>(order - 1 - i)] = w;
  }
  return rule;
}

ContourPath::ContourPath(std::vector<PathSegment> segments, int orientation)
    : segments_(std::move(segments)), orientation_(orientation) {
  if (segments_.empty()) throw DomainError("ContourPath needs at least one segment");
  if (orientation_ != 1 && orientation_ != -1) throw DomainError("orientation must be +1 or -1");
  for (std::size_t i = 0; i + 1 < segments_.size(); ++i) {
    if (segments_[i].periodic || segments_[i + 1].periodic) {
      throw DomainError("a periodic segment must be the only segment of its path");
    }
    if (!close(segments_[i].end(), segments_[i + 1].start())) {
      throw DomainError("ContourPath segments are not contiguous at segment " + std::to_string(i));
    }
  }
  for (const auto& s : segments_) {
    if (!(s.hi > s.lo)) throw DomainError("PathSegment requires hi > lo");
  }
}

ContourPath ContourPath::segment(Complex from, Complex to) {
  PathSegment s;
  s.point = [from, to](double u) { return from + (to - from) * u; };
  s.tangent = [from, to](double) { return to - from; };
  s.lo = 0.0;
  s.hi = 1.0;
  return ContourPath({s});
}

ContourPath ContourPath::circle(Complex center, double radius, double start_angle) {
  if (!(radius > 0.0)) throw DomainError("circle radius must be positive");
  PathSegment s;
  s.point = [center, radius](double a) { return center + std::polar(radius, a); };
  s.tangent = [radius](double a) { return Complex(0.0, 1.0) * std::polar(radius, a); };
  s.lo = start_angle;
  s.hi = start_angle + 2.0 * std::numbers::pi;
  s.periodic = true;
  return ContourPath({s});
}

ContourPath ContourPath::polyline(const std::vector<Complex>& vertices) {
  if (vertices.size() < 2) throw DomainError("polyline needs at least two vertices");
  std::vector<PathSegment> segs;
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
    segs.push_back(segment(vertices[i], vertices[i + 1]).segments().front());
  }
  return ContourPath(std::move(segs));
}

ContourPath ContourPath::reversed() const { return ContourPath(segments_, -orientation_); }

std::pair<ContourPath, ContourPath> ContourPath::split(std::size_t index, double at) const {
  if (index >= segments_.size()) throw DomainError("split index out of range");
  const PathSegment& s = segments_[index];
  if (s.periodic) throw DomainError("cannot split a periodic segment");
  if (!(at > s.lo && at < s.hi)) throw DomainError("split point must be interior");
  std::vector<PathSegment> first(segments_.begin(), segments_.begin() + static_cast<long>(index));
  std::vector<PathSegment> second;
  PathSegment left = s;
  left.hi = at;
  PathSegment right = s;
  right.lo = at;
  first.push_back(left);
  second.push_back(right);
  second.insert(second.end(), segments_.begin() + static_cast<long>(index) + 1, segments_.end());
  if (orientation_ < 0) {
    return {ContourPath(std::move(second), -1), ContourPath(std::move(first), -1)};
  }
  return {ContourPath(std::move(first)), ContourPath(std::move(second))};
}

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw DomainError("quadrature tolerances must be > 0");
  if (initial_nodes < 8) throw DomainError("initial_nodes must be >= 8");
  if (max_nodes < initial_nodes) throw DomainError("max_nodes must be >= initial_nodes");
}

QuadratureResult integrate_path(const ComplexFunction& f, const ContourPath& path,
                                const QuadratureConfig& cfg) {
  cfg.validate();
  std::vector<SegmentState> states(path.segments().size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    states[i].seg = &path.segments()[i];
    states[i].start(f, cfg.initial_nodes);
  }
  for (auto& s : states) s.refine(f);

  const double share = 1.0 / static_cast<double>(states.size());
  while (true) {
    Complex total;
    long nodes = 0;
    double err = 0.0;
    for (const auto& s : states) {
      total += s.value;
      nodes += s.level_nodes;
      err += s.err;
    }
    const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
    std::vector<SegmentState*> pending;
    for (auto& s : states) {
      if (s.err > tol * share && !s.at_floor) pending.push_back(&s);
    }
    if (pending.empty()) {
      const Complex value = static_cast<double>(path.orientation()) * total;
      return {value, err, nodes};
    }
    long next_nodes = nodes;
    for (auto* s : pending) next_nodes += s->level_nodes;
    if (next_nodes > cfg.max_nodes) {
      throw NonConvergence("quadrature tolerance not met within max_nodes = " +
                               std::to_string(cfg.max_nodes),
                           static_cast<double>(path.orientation()) * total, err);
    }
    for (auto* s : pending) s->refine(f);
  }
}

}  // namespace kingman
