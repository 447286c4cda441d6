#pragma once

#include <cmath>
#include <string>

#include "kingman/errors.hpp"

namespace kingman {

// Mutation rate theta and time t. Both strictly positive.
struct ModelParams {
  double theta;
  double t;

  ModelParams(double theta_, double t_) : theta(theta_), t(t_) {
    if (!(theta > 0.0) || !std::isfinite(theta)) {
      throw DomainError("theta must be a positive finite number, got " + std::to_string(theta));
    }
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw DomainError("t must be a positive finite number, got " + std::to_string(t));
    }
  }
};

// True when theta is a positive integer (the circle and steep-descent
// representations need a single-valued integrand).
inline bool is_integer_theta(double theta) {
  return theta >= 1.0 && std::abs(theta - std::round(theta)) < 1e-12;
}

}  // namespace kingman
