#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace kingman {

using Complex = std::complex<double>;

// One smooth piece of a contour, parametrized over [lo, hi].
// Periodic segments describe a closed curve and use the uniform
// trapezoid rule; open segments use composite Gauss-Legendre panels.
struct PathSegment {
  std::function<Complex(double)> point;
  std::function<Complex(double)> tangent;
  double lo = 0.0;
  double hi = 1.0;
  bool periodic = false;

  Complex start() const { return point(lo); }
  Complex end() const { return point(hi); }
};

class ContourPath {
 public:
  // Throws DomainError if consecutive segments are not end-to-start contiguous.
  explicit ContourPath(std::vector<PathSegment> segments, int orientation = +1);

  static ContourPath segment(Complex from, Complex to);
  // Counterclockwise circle; the parametrization starts at angle `start_angle`.
  static ContourPath circle(Complex center, double radius, double start_angle = 0.0);
  // Concatenation of straight segments through the given vertices.
  static ContourPath polyline(const std::vector<Complex>& vertices);

  ContourPath reversed() const;
  // Splits open segment `index` at parameter `at`, returning the two halves.
  std::pair<ContourPath, ContourPath> split(std::size_t index, double at) const;

  const std::vector<PathSegment>& segments() const { return segments_; }
  int orientation() const { return orientation_; }

 private:
  std::vector<PathSegment> segments_;
  int orientation_;
};

struct QuadratureConfig {
  double rel_tol = 1e-13;
  double abs_tol = 1e-15;
  long max_nodes = 1L << 21;
  long initial_nodes = 64;

  void validate() const;
};

struct QuadratureResult {
  Complex value;
  double err_est = 0.0;
  long nodes = 0;
};

using ComplexFunction = std::function<Complex(Complex)>;

// Adaptive integral of f(z) dz along `path`. The error estimate is the
// difference between the last two refinement levels plus a rounding floor
// proportional to sum |f| |dz|. A segment whose last two levels agree to
// within that floor is accepted even above tolerance. Throws NonConvergence (carrying the best
// value) when the tolerance is not met within max_nodes, EvaluationFailure
// if f is non-finite at a node.
QuadratureResult integrate_path(const ComplexFunction& f, const ContourPath& path,
                                const QuadratureConfig& cfg);

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre(int order);

}  // namespace kingman
