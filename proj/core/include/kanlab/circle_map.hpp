#ifndef KANLAB_CIRCLE_MAP_HPP
#define KANLAB_CIRCLE_MAP_HPP

#include <cmath>
#include <numbers>

namespace kanlab {

// Lift of the circle factor map: phi(c) = c - sin(pi c)/(2 pi).
// phi(c+2) = phi(c)+2, fixed points at the integers, phi'(0) = 1/2,
// phi'(1) = 3/2, and (phi'-1) >= -1/2 everywhere.
inline double phi_eval(double c) {
  return c - std::sin(std::numbers::pi * c) / (2.0 * std::numbers::pi);
}

inline double phi_deriv(double c) {
  return 1.0 - 0.5 * std::cos(std::numbers::pi * c);
}

// |phi''| <= pi/2, used as a Lipschitz bound for phi' in certification.
inline constexpr double kPhiDerivLipschitz = std::numbers::pi / 2.0;
// phi(c)-c = -sin(pi c)/(2 pi), so |phi - id| <= 1/(2 pi).
inline constexpr double kPhiDisplacementMax = 1.0 / (2.0 * std::numbers::pi);

}  // namespace kanlab

#endif  // KANLAB_CIRCLE_MAP_HPP
