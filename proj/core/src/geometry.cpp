#include "kanlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace kanlab {

EigenFrame EigenFrame::standard() {
  // A v = lambda v with v = (1, (sqrt5 - 1)/2); stable vector orthogonal.
  double s5 = std::sqrt(5.0);
  double t = (s5 - 1.0) / 2.0;
  double n = std::sqrt(1.0 + t * t);
  EigenFrame f;
  f.v_u = {1.0 / n, t / n};
  f.v_s = {-t / n, 1.0 / n};
  f.lambda = (3.0 + s5) / 2.0;
  return f;
}

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r))
    throw std::overflow_error("cat_power: integer overflow");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r))
    throw std::overflow_error("cat_power: integer overflow");
  return r;
}

Mat2i mul(const Mat2i& x, const Mat2i& y) {
  Mat2i r;
  r.a = checked_add(checked_mul(x.a, y.a), checked_mul(x.b, y.c));
  r.b = checked_add(checked_mul(x.a, y.b), checked_mul(x.b, y.d));
  r.c = checked_add(checked_mul(x.c, y.a), checked_mul(x.d, y.c));
  r.d = checked_add(checked_mul(x.c, y.b), checked_mul(x.d, y.d));
  return r;
}

}  // namespace

CatPower cat_power(int n) {
  if (n < 1) throw std::invalid_argument("cat_power: n must be >= 1");
  Mat2i base{2, 1, 1, 1};
  Mat2i acc{1, 0, 0, 1};
  for (int i = 0; i < n; ++i) acc = mul(acc, base);
  CatPower out;
  out.matrix = acc;
  out.n = n;
  // sigma = (tr + sqrt(tr^2 - 4))/2, exact integer trace (det A^n = 1).
  double tr = static_cast<double>(acc.trace());
  out.sigma = 0.5 * (tr + std::sqrt(tr * tr - 4.0));
  return out;
}

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b, r = a % b;
  return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

std::int64_t mod_pos(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

bool is_fixed_point(const RationalPoint& x, const Mat2i& m) {
  // (A^n - I) x must have integer coordinates.
  __int128 nu = static_cast<__int128>(m.a - 1) * x.num_u +
                static_cast<__int128>(m.b) * x.num_v;
  __int128 nv = static_cast<__int128>(m.c) * x.num_u +
                static_cast<__int128>(m.d - 1) * x.num_v;
  return nu % x.den == 0 && nv % x.den == 0;
}

std::vector<RationalPoint> fixed_points(int n) {
  CatPower ap = cat_power(n);
  const Mat2i& A = ap.matrix;
  // M = A^n - I; fixed points are M^{-1} Z^2 / Z^2, i.e. {adj(M) t / det}
  // with t running over coset representatives of Z^2 / M Z^2. Column-style
  // Hermite form of M gives exactly |det| representatives.
  Mat2i M{A.a - 1, A.b, A.c, A.d - 1};
  std::int64_t det = M.det();
  if (det == 0) throw std::runtime_error("fixed_points: det(A^n - I) == 0");
  std::int64_t adet = det < 0 ? -det : det;

  // Hermite normal form of the column lattice M Z^2: columns (a,c),(b,d).
  // Euclidean reduction on the top row.
  std::int64_t a = M.a, b = M.b, c = M.c, d = M.d;
  while (b != 0) {
    std::int64_t q = floor_div(a, b);
    a -= q * b;
    c -= q * d;
    std::swap(a, b);
    std::swap(c, d);
  }
  if (a < 0) {
    a = -a;
    c = -c;
  }
  // Lattice = span{(a, c), (0, d')} with d' = |det|/a.
  std::int64_t h11 = a;
  std::int64_t h22 = adet / (a == 0 ? 1 : a);
  if (h11 == 0) {  // degenerate column; fall back to diagonal |det| x 1
    h11 = adet;
    h22 = 1;
  }

  // adj(M) / det = M^{-1}
  std::int64_t adj11 = M.d, adj12 = -M.b, adj21 = -M.c, adj22 = M.a;

  std::vector<RationalPoint> out;
  out.reserve(static_cast<std::size_t>(adet));
  for (std::int64_t j = 0; j < h11; ++j) {
    for (std::int64_t k = 0; k < h22; ++k) {
      // x = M^{-1} (j', k') mod 1 with (j', k') = j*(1,0)+k*(c-shear...) --
      // any full set of residues works; (j,k) over the HNF box is one.
      __int128 xu = static_cast<__int128>(adj11) * j +
                    static_cast<__int128>(adj12) * k;
      __int128 xv = static_cast<__int128>(adj21) * j +
                    static_cast<__int128>(adj22) * k;
      // reduce (xu/det, xv/det) into [0,1)
      std::int64_t su = static_cast<std::int64_t>(xu % det);
      std::int64_t sv = static_cast<std::int64_t>(xv % det);
      RationalPoint p;
      p.den = adet;
      p.num_u = mod_pos(det < 0 ? -su : su, adet);
      p.num_v = mod_pos(det < 0 ? -sv : sv, adet);
      out.push_back(p);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (static_cast<std::int64_t>(out.size()) != adet)
    throw std::runtime_error("fixed_points: enumeration lost points");
  for (const auto& p : out)
    if (!is_fixed_point(p, A))
      throw std::runtime_error("fixed_points: non-fixed point enumerated");
  return out;
}

double leaf_box_distance(const TorusPoint& x, const TorusPoint& y,
                         const EigenFrame& frame) {
  // Max-norm in frame coordinates, minimized over the 9 nearest translates.
  double best = std::numeric_limits<double>::infinity();
  for (int du = -1; du <= 1; ++du) {
    for (int dv = -1; dv <= 1; ++dv) {
      Vec2 w{y.u - x.u + du, y.v - x.v + dv};
      Vec2 ab = frame.to_frame(w);
      best = std::min(best, std::max(std::fabs(ab.x), std::fabs(ab.y)));
    }
  }
  return best;
}

namespace {

bool anchors_compatible(const RationalPoint& a, const RationalPoint& b,
                        double delta, const EigenFrame& frame) {
  TorusPoint pa = a.to_point(), pb = b.to_point();
  if (pa.distance_to(pb) <= 10.0 * delta) return false;
  return leaf_box_distance(pa, pb, frame) > 10.0 * delta;
}

bool extend(const std::vector<RationalPoint>& cand, double delta,
            const EigenFrame& frame, std::vector<std::size_t>& pick,
            std::size_t from) {
  if (pick.size() == 4) return true;
  for (std::size_t i = from; i < cand.size(); ++i) {
    bool ok = true;
    for (std::size_t j : pick)
      if (!anchors_compatible(cand[j], cand[i], delta, frame)) {
        ok = false;
        break;
      }
    if (!ok) continue;
    pick.push_back(i);
    if (extend(cand, delta, frame, pick, i + 1)) return true;
    pick.pop_back();
  }
  return false;
}

}  // namespace

AnchorSet select_anchors(const std::vector<RationalPoint>& candidates,
                         double delta, const EigenFrame& frame) {
  if (10.0 * delta >= std::sqrt(0.5))
    throw std::runtime_error(
        "select_anchors: 10*delta = " + std::to_string(10.0 * delta) +
        " exceeds the torus diameter; separation impossible");
  std::vector<RationalPoint> sorted = candidates;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> pick;
  if (!extend(sorted, delta, frame, pick, 0))
    throw std::runtime_error(
        "select_anchors: no 4 candidates with pairwise distance > 10*delta "
        "and disjoint 5*delta leaf boxes");
  return AnchorSet{sorted[pick[0]], sorted[pick[1]], sorted[pick[2]],
                   sorted[pick[3]]};
}

std::optional<ChartCoords> leaf_coords(const TorusPoint& x,
                                       const TorusPoint& anchor,
                                       const EigenFrame& frame,
                                       double half_width) {
  Vec2 w = anchor.displacement_to(x);
  Vec2 ab = frame.to_frame(w);
  if (std::fabs(ab.x) > half_width || std::fabs(ab.y) > half_width)
    return std::nullopt;
  return ChartCoords{ab.x, ab.y};
}

TorusPoint leaf_point(const TorusPoint& anchor, const ChartCoords& c,
                      const EigenFrame& frame) {
  Vec2 w = frame.from_frame({c.a, c.b});
  return TorusPoint::reduced(anchor.u + w.x, anchor.v + w.y);
}

}  // namespace kanlab
