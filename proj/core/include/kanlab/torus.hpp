#ifndef KANLAB_TORUS_HPP
#define KANLAB_TORUS_HPP

#include <cmath>

#include "kanlab/linalg.hpp"

namespace kanlab {

// Reduce to [0,1). fmod keeps exact values exact (0.2 stays 0.2).
inline double mod1(double x) {
  if (x >= 0.0 && x < 1.0) return x;
  double r = std::fmod(x, 1.0);
  if (r < 0.0) r += 1.0;
  if (r == 1.0) r = 0.0;
  return r;
}

// Reduce a circle lift to [0,2). Lifts produced by the maps stay within a
// few periods, where the subtractions are exact (Sterbenz); fmod covers the
// rest.
inline double mod2(double y) {
  if (y >= 0.0 && y < 2.0) return y;
  if (y >= 2.0 && y < 4.0) return y - 2.0;
  if (y >= -2.0 && y < 0.0) {
    double r = y + 2.0;
    return r == 2.0 ? 0.0 : r;
  }
  double r = std::fmod(y, 2.0);
  if (r < 0.0) r += 2.0;
  if (r == 2.0) r = 0.0;
  return r;
}

// Signed representative in [-0.5, 0.5).
inline double wrap_half(double x) {
  double r = mod1(x);
  return r >= 0.5 ? r - 1.0 : r;
}

// Same for x already in (-1, 1): branch instead of fmod (hot path).
inline double wrap_half_unit(double d) {
  if (d >= 0.5) return d - 1.0;
  if (d < -0.5) return d + 1.0;
  return d;
}

// Circle lift reduced to [-1, 1).
inline double pi2(double c) {
  double r = mod2(c);
  return r >= 1.0 ? r - 2.0 : r;
}

// Point of T^2 = R^2/Z^2, representatives in [0,1)^2.
struct TorusPoint {
  double u = 0, v = 0;

  static TorusPoint reduced(double uu, double vv) {
    return {mod1(uu), mod1(vv)};
  }

  // Minimal-translate displacement this -> other, componentwise in [-.5,.5).
  // Representatives live in [0,1), so the difference is already in (-1,1).
  Vec2 displacement_to(const TorusPoint& o) const {
    return {wrap_half_unit(o.u - u), wrap_half_unit(o.v - v)};
  }

  // Quotient metric (minimum over integer translates).
  double distance_to(const TorusPoint& o) const {
    Vec2 d = displacement_to(o);
    return d.norm();
  }
};

// Point of S = R/2Z, representative in [0,2).
struct CirclePoint {
  double y = 0;

  static CirclePoint reduced(double yy) { return {mod2(yy)}; }

  double distance_to(const CirclePoint& o) const {
    double d = std::fabs(mod2(y - o.y));
    return d > 1.0 ? 2.0 - d : d;
  }
};

}  // namespace kanlab

#endif  // KANLAB_TORUS_HPP
