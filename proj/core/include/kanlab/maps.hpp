#ifndef KANLAB_MAPS_HPP
#define KANLAB_MAPS_HPP

#include "kanlab/bump.hpp"
#include "kanlab/params.hpp"
#include "kanlab/torus.hpp"

namespace kanlab {

// Point of M = T^2 x S x T^2.
struct MPoint {
  TorusPoint x;
  CirclePoint y;
  TorusPoint z;
};

// Point of T^2 x S (the factor g acts on).
struct GPoint {
  TorusPoint x;
  CirclePoint y;
};

inline double mpoint_distance(const MPoint& p, const MPoint& q) {
  double dx = p.x.distance_to(q.x);
  double dy = p.y.distance_to(q.y);
  double dz = p.z.distance_to(q.z);
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

inline double gpoint_distance(const GPoint& p, const GPoint& q) {
  double dx = p.x.distance_to(q.x);
  double dy = p.y.distance_to(q.y);
  return std::sqrt(dx * dx + dy * dy);
}

enum class Site : int { p1 = 0, p2 = 1, q1 = 2, q2 = 3, none = -1 };

// Which map an experiment drives.
enum class MapKind { f, g, ftilde, gtilde };

// Immutable evaluator for the whole map family at fixed parameters.
// All methods are pure; shared freely across workers.
class KanSystem {
 public:
  explicit KanSystem(const SystemParams& params);

  const SystemParams& params() const { return params_; }
  const EigenFrame& frame() const { return frame_; }
  const BumpProfile& bump() const { return bump_; }
  double sigma0() const { return sigma0_; }
  double sigma1() const { return sigma1_; }
  TorusPoint anchor(Site s) const { return anchors_[static_cast<int>(s)]; }

  // x-chart lookup over the four 5*delta anchor boxes (disjoint by
  // certification, so the first hit is the only one).
  struct ChartHit {
    Site site = Site::none;
    ChartCoords ab;
  };
  ChartHit locate(const TorusPoint& x) const;

  MPoint id_eval(const MPoint& p) const;
  MPoint f(const MPoint& p) const;
  GPoint g(const GPoint& q) const;

  // Perturbation H_eps (circle shift R in the chart of r) and the
  // perturbed maps built from it.
  MPoint h_eps(const MPoint& p) const;
  GPoint h_eps(const GPoint& q) const;
  MPoint ftilde(const MPoint& p) const;
  GPoint gtilde(const GPoint& q) const;

  MPoint apply(MapKind kind, const MPoint& p) const;
  GPoint apply_factor(MapKind kind, const GPoint& q) const;

  // distance(pi32(f(p)), g(pi32(p))) (or the ftilde/gtilde pair)
  double semiconjugacy_residual(const MPoint& p, bool perturbed = false) const;

  TorusPoint apply_cat_n1(const TorusPoint& x) const;
  TorusPoint apply_cat_n0(const TorusPoint& x) const;

 private:
  friend class JacobianEvaluator;

  // y-action of ID at a chart hit; returns new y and the input lift used.
  double circle_action(Site site, double a, double b, double y) const;

  SystemParams params_;
  EigenFrame frame_;
  BumpProfile bump_;
  double sigma0_, sigma1_;
  Mat2i cat_n0_, cat_n1_;
  std::array<TorusPoint, 4> anchors_;
  TorusPoint r_point_;
  bool has_r_ = false;
  double chart_half_width_;
  double r_half_width_;
};

}  // namespace kanlab

#endif  // KANLAB_MAPS_HPP
