#ifndef KANLAB_HETEROCLINIC_HPP
#define KANLAB_HETEROCLINIC_HPP

#include <vector>

#include "kanlab/geometry.hpp"

namespace kanlab {

// Intersection point r of the unstable leaf of q1 with the stable leaf of
// q2, found and iterated in exact arithmetic over Q(sqrt 5) so that the
// orbit-isolation check does not drown in the sigma_1^i error growth of
// floating point.
struct HeteroclinicResult {
  TorusPoint r;
  double t = 0;  // leaf parameter along the unstable direction (1,(sqrt5-1)/2)
  double s = 0;  // leaf parameter along the stable direction
  double min_orbit_gap = 0;   // min distance of A^{n1 i} r to r, 1<=|i|<=window
  double min_anchor_gap = 0;  // min eigen max-norm distance of r to anchors
  // forward distances d(A^{n1 i} r, q2) for i = 0..ratio steps
  std::vector<double> forward_dist;
  // backward distances d(A^{-n1 i} r, q1)
  std::vector<double> backward_dist;
};

struct HeteroclinicQuery {
  RationalPoint q1, q2;
  std::array<RationalPoint, 4> anchors;
  int n1 = 1;
  double eps = 0;      // isolation / product-form radius
  double delta = 0;    // anchor box scale (boxes have half width 5*delta)
  int window = 8;      // integer translate search window [-W, W]^2
  int isolation_horizon = 50;
  int ratio_steps = 8;
};

// Returns the candidate with the smallest |t| that satisfies (i) the eps-ball
// of r avoids all four 5*delta anchor boxes and (ii) orbit isolation over the
// horizon. Throws std::runtime_error when the window is exhausted.
HeteroclinicResult heteroclinic_point(const HeteroclinicQuery& query);

}  // namespace kanlab

#endif  // KANLAB_HETEROCLINIC_HPP
