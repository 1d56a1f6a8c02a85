#ifndef KANLAB_GEOMETRY_HPP
#define KANLAB_GEOMETRY_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "kanlab/linalg.hpp"
#include "kanlab/torus.hpp"

namespace kanlab {

// ------------------------------------------------------------------ frame

// Shared eigenframe of A = [[2,1],[1,1]] and all its powers. A is symmetric,
// so the frame is orthonormal and leaf charts are isometries.
struct EigenFrame {
  Vec2 v_u;       // unstable unit eigendirection
  Vec2 v_s;       // stable unit eigendirection
  double lambda;  // largest eigenvalue of A, (3+sqrt 5)/2

  static EigenFrame standard();

  // (a,b) components of w in the (v_u, v_s) basis.
  Vec2 to_frame(Vec2 w) const { return {w.dot(v_u), w.dot(v_s)}; }
  Vec2 from_frame(Vec2 ab) const {
    return {ab.x * v_u.x + ab.y * v_s.x, ab.x * v_u.y + ab.y * v_s.y};
  }
};

struct CatPower {
  Mat2i matrix;  // exact integer entries of A^n
  double sigma;  // lambda^n, recovered from the integer trace
  int n = 0;
};

// Exact power of the cat matrix. Throws std::overflow_error once entries
// would leave the int64 range (n ~ 45).
CatPower cat_power(int n);

// ------------------------------------------------------- rational points

// Fixed points of A^n are rational with denominator |det(A^n - I)|.
struct RationalPoint {
  std::int64_t num_u = 0, num_v = 0, den = 1;  // reduced mod den, in [0, den)

  TorusPoint to_point() const {
    return {static_cast<double>(num_u) / static_cast<double>(den),
            static_cast<double>(num_v) / static_cast<double>(den)};
  }
  bool operator==(const RationalPoint&) const = default;
  // lexicographic on (u, v) as exact rationals
  bool operator<(const RationalPoint& o) const {
    if (num_u != o.num_u) return num_u < o.num_u;
    return num_v < o.num_v;
  }
};

// All fixed points of A^n on the torus, exactly enumerated, sorted
// lexicographically. Size equals |det(A^n - I)| = lambda^n + lambda^-n - 2.
std::vector<RationalPoint> fixed_points(int n);

// Verifies (A^n - I) x in Z^2 in integer arithmetic.
bool is_fixed_point(const RationalPoint& x, const Mat2i& a_pow_n);

// ----------------------------------------------------------- anchor set

struct AnchorSet {
  RationalPoint p1, p2, q1, q2;
  std::array<TorusPoint, 4> points() const {
    return {p1.to_point(), p2.to_point(), q1.to_point(), q2.to_point()};
  }
};

// Deterministic choice: the lexicographically smallest 4-tuple of candidates
// whose pairwise torus distances exceed 10*delta and whose 5*delta leaf boxes
// are pairwise disjoint. Throws std::runtime_error naming the violated
// separation when no tuple exists.
AnchorSet select_anchors(const std::vector<RationalPoint>& candidates,
                         double delta, const EigenFrame& frame);

// Max-norm distance in the eigenframe, minimized over integer translates.
// Two half-width-w leaf boxes are disjoint iff this exceeds 2w.
double leaf_box_distance(const TorusPoint& x, const TorusPoint& y,
                         const EigenFrame& frame);

// ------------------------------------------------------------- charts

struct ChartCoords {
  double a = 0, b = 0;  // along v_u, v_s from the anchor
};

// Leaf coordinates of x relative to anchor when both lie within the
// half-width box; nullopt otherwise. Chart spans at most 5*delta < 1/4, so
// the minimal translate is unambiguous.
std::optional<ChartCoords> leaf_coords(const TorusPoint& x,
                                       const TorusPoint& anchor,
                                       const EigenFrame& frame,
                                       double half_width);

TorusPoint leaf_point(const TorusPoint& anchor, const ChartCoords& c,
                      const EigenFrame& frame);

}  // namespace kanlab

#endif  // KANLAB_GEOMETRY_HPP
