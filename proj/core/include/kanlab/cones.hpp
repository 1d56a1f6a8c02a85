#ifndef KANLAB_CONES_HPP
#define KANLAB_CONES_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "kanlab/jacobian.hpp"
#include "kanlab/maps.hpp"

namespace kanlab {

// Cone C_alpha(E, F) = { v_E + v_F : ||v_F|| <= alpha ||v_E|| } over a
// Df-invariant subframe. E and F are disjoint lists of frame indices;
// together they must span an invariant subbundle (checked numerically).
struct ConeSpec {
  std::string name;
  std::vector<int> e_axes;
  std::vector<int> f_axes;
  double alpha = 1.0;
};

enum class ConeDirection { forward, backward };

struct ConeReport {
  std::string cone;
  ConeDirection direction;
  double alpha = 0;
  double kappa_hat = 0;   // worst aperture ratio; pass iff < 1
  double min_margin = 0;  // 1 - kappa_hat
  std::uint64_t samples = 0;
  int directions = 0;
  bool pass = false;
};

// Stratified sample of base points: uniform over M, plus oversampling of
// every anchor box (and the r box when present), plus the six fixed points.
std::vector<MPoint> stratified_points(const KanSystem& sys,
                                      std::uint64_t count,
                                      std::uint64_t seed);

// Worst-case aperture ratio of Df (or Df^{-1}) over sampled points and
// extremal boundary vectors of the cone.
ConeReport cone_certify(const KanSystem& sys, const ConeSpec& cone,
                        ConeDirection direction, MapKind map,
                        std::uint64_t samples, std::uint64_t seed,
                        int boundary_directions = 64);

// Smallest aperture from `ladder` with kappa_hat < 1; 0 if none certifies.
double aperture_search(const KanSystem& sys, ConeSpec cone,
                       ConeDirection direction, MapKind map,
                       const std::vector<double>& ladder,
                       std::uint64_t samples, std::uint64_t seed);

struct SandwichReport {
  std::string cone;
  bool pass = false;
  int steps = 0;
  std::uint64_t orbits = 0;
  double worst_low = 0;   // min of (log growth - log lower bound)
  double worst_high = 0;  // min of (log upper bound - log growth)
};

// n-step growth of cone vectors along orbits stays inside
// [chi_min^n / sqrt(1+alpha^2), chi_max^n * sqrt(1+alpha^2)].
SandwichReport growth_sandwich_check(const KanSystem& sys,
                                     const ConeSpec& cone,
                                     ConeDirection direction, int steps,
                                     std::uint64_t orbits, double chi_min,
                                     double chi_max, std::uint64_t seed);

}  // namespace kanlab

#endif  // KANLAB_CONES_HPP
