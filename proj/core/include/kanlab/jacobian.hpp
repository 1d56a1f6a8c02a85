#ifndef KANLAB_JACOBIAN_HPP
#define KANLAB_JACOBIAN_HPP

#include "kanlab/linalg.hpp"
#include "kanlab/maps.hpp"

namespace kanlab {

// Frame indices of the adapted splitting; every 5x5 Jacobian uses this order.
enum FrameIndex : int {
  kEuu = 0,  // unstable of A^{n1}, first torus
  kEu = 1,   // unstable of A^{n0}, second torus
  kTS = 2,   // circle direction
  kEs = 3,   // stable of A^{n0}
  kEss = 4,  // stable of A^{n1}
};

using Jac5 = Mat5;

// Analytic derivative cocycles in the adapted frame. Charts are isometries,
// so these are exact chain rules, never finite differences.
class JacobianEvaluator {
 public:
  explicit JacobianEvaluator(const KanSystem& sys) : sys_(sys) {}

  Jac5 df(const MPoint& p) const;
  Mat3 dg(const GPoint& q) const;       // frame (E^uu, TS, E^ss)
  Jac5 dh_eps(const MPoint& p) const;   // derivative of the perturbation
  Jac5 dftilde(const MPoint& p) const;  // df(h(p)) * dh(p)

  // Derivative of f along the invariant E^u line: sigma0 * dP/dd at p
  // (equals sigma0 outside the P support). The E^cu exponent is the
  // Birkhoff average of its log.
  double eu_multiplier(const MPoint& p) const;

  // d/dy of the circle action of g at q (the TS diagonal dQ/dc); the TS
  // exponent is the Birkhoff average of its log.
  double ts_multiplier(const GPoint& q) const;

  // 2x2 restriction of df to the invariant subbundle TS + E^u,
  // rows/cols ordered (TS, E^u).
  std::array<std::array<double, 2>, 2> block_ts_eu(const MPoint& p) const;

 private:
  const KanSystem& sys_;
};

// Central finite difference of the map in frame coordinates; test oracle
// and certification cross-check only.
Jac5 finite_difference_df(const KanSystem& sys, const MPoint& p, double step,
                          bool perturbed = false);

}  // namespace kanlab

#endif  // KANLAB_JACOBIAN_HPP
