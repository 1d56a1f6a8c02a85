#ifndef KANLAB_BUMP_HPP
#define KANLAB_BUMP_HPP

#include <cmath>

namespace kanlab {

// C^inf plateau bump: psi = 1 on [0, delta/2], 0 on [delta, inf), even,
// strictly decreasing on (delta/2, delta). Built from the standard
// exponential smoothstep h(u) = S(u)/(S(u)+S(1-u)), S(t) = exp(-1/t).
struct BumpProfile {
  double delta;

  explicit BumpProfile(double d) : delta(d) {}

  double value(double x) const {
    double ax = std::fabs(x);
    if (ax <= 0.5 * delta) return 1.0;
    if (ax >= delta) return 0.0;
    return smoothstep(2.0 * (1.0 - ax / delta));
  }

  double deriv(double x) const {
    double ax = std::fabs(x);
    if (ax <= 0.5 * delta || ax >= delta) return 0.0;
    double d = smoothstep_deriv(2.0 * (1.0 - ax / delta)) * (-2.0 / delta);
    return x < 0 ? -d : d;
  }

  // Global bounds used for Lipschitz pads and the C1 perturbation-size
  // certificate. Scale-free: divide by delta (slope) or delta^2 (curvature).
  // Values verified against dense scans in the test suite.
  static constexpr double kMaxSlopeScaled = 4.0;        // sup |psi'| * delta  (exactly 2*h'(1/2) = 4)
  static constexpr double kMaxValueSlopeScaled = 2.77;  // sup |psi * psi'| * delta
  static constexpr double kMaxSlopeTimesArg = 3.08;     // sup |psi'(x) * x|
  static constexpr double kMaxCurvatureScaled = 42.0;   // sup |psi''| * delta^2

 private:
  static double S(double t) {
    if (t <= 1e-12) return 0.0;  // exp(-1/t) underflows anyway; avoid 1/0
    return std::exp(-1.0 / t);
  }
  static double S_deriv(double t) {
    if (t <= 1e-12) return 0.0;
    double s = std::exp(-1.0 / t);
    return s / (t * t);
  }
  // h: [0,1] -> [0,1] increasing, flat to all orders at both ends.
  static double smoothstep(double u) {
    double su = S(u), sv = S(1.0 - u);
    return su / (su + sv);
  }
  static double smoothstep_deriv(double u) {
    double su = S(u), sv = S(1.0 - u);
    double den = su + sv;
    return (S_deriv(u) * sv + su * S_deriv(1.0 - u)) / (den * den);
  }
};

}  // namespace kanlab

#endif  // KANLAB_BUMP_HPP
