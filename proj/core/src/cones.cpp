#include "kanlab/cones.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kanlab/parallel.hpp"
#include "kanlab/rng.hpp"

namespace kanlab {

namespace {

MPoint random_mpoint(CounterRng& rng) {
  return {TorusPoint{rng.uniform(), rng.uniform()},
          CirclePoint{rng.uniform(0.0, 2.0)},
          TorusPoint{rng.uniform(), rng.uniform()}};
}

// Unit vectors spread over the F-sphere: signs for d=1, angles for d=2,
// spherical Fibonacci for d=3.
std::vector<std::vector<double>> boundary_directions(std::size_t dim,
                                                     int count) {
  std::vector<std::vector<double>> dirs;
  if (dim == 1) {
    dirs.push_back({1.0});
    dirs.push_back({-1.0});
    return dirs;
  }
  if (dim == 2) {
    for (int i = 0; i < count; ++i) {
      double th = 2.0 * std::numbers::pi * i / count;
      dirs.push_back({std::cos(th), std::sin(th)});
    }
    return dirs;
  }
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    double z = 1.0 - 2.0 * (i + 0.5) / count;
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    double th = golden * i;
    dirs.push_back({r * std::cos(th), r * std::sin(th), z});
  }
  return dirs;
}

struct SubMatrix {
  // row-major n x n
  int n = 0;
  std::array<double, 25> v{};
  double& at(int i, int j) { return v[i * n + j]; }
  double at(int i, int j) const { return v[i * n + j]; }
};

SubMatrix extract_block(const Jac5& m, const std::vector<int>& axes) {
  SubMatrix b;
  b.n = static_cast<int>(axes.size());
  for (int i = 0; i < b.n; ++i)
    for (int j = 0; j < b.n; ++j) b.at(i, j) = m[axes[i]][axes[j]];
  return b;
}

// The cone subframe must be invariant: no leakage out of the block.
void check_block_invariance(const Jac5& m, const std::vector<int>& axes) {
  bool in_block[5] = {false, false, false, false, false};
  for (int a : axes) in_block[a] = true;
  for (int j : axes)
    for (int i = 0; i < 5; ++i)
      if (!in_block[i] && m[i][j] != 0.0)
        throw std::logic_error(
            "cone_certify: E+F does not span an invariant subbundle");
}

SubMatrix invert(const SubMatrix& m) {
  SubMatrix inv;
  inv.n = m.n;
  std::array<std::array<double, 10>, 5> w{};
  for (int i = 0; i < m.n; ++i) {
    for (int j = 0; j < m.n; ++j) w[i][j] = m.at(i, j);
    w[i][m.n + i] = 1.0;
  }
  for (int col = 0; col < m.n; ++col) {
    int piv = col;
    for (int r = col + 1; r < m.n; ++r)
      if (std::fabs(w[r][col]) > std::fabs(w[piv][col])) piv = r;
    std::swap(w[piv], w[col]);
    double p = w[col][col];
    for (int j = 0; j < 2 * m.n; ++j) w[col][j] /= p;
    for (int r = 0; r < m.n; ++r) {
      if (r == col) continue;
      double f = w[r][col];
      if (f == 0.0) continue;
      for (int j = 0; j < 2 * m.n; ++j) w[r][j] -= f * w[col][j];
    }
  }
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) inv.at(i, j) = w[i][m.n + j];
  return inv;
}

}  // namespace

std::vector<MPoint> stratified_points(const KanSystem& sys,
                                      std::uint64_t count,
                                      std::uint64_t seed) {
  std::vector<MPoint> pts;
  pts.reserve(count);
  const SystemParams& P = sys.params();
  const double w = 5.0 * P.delta;
  const EigenFrame& frame = sys.frame();

  // the six fixed points first
  TorusPoint p1 = sys.anchor(Site::p1), p2 = sys.anchor(Site::p2);
  TorusPoint q1 = sys.anchor(Site::q1), q2 = sys.anchor(Site::q2);
  pts.push_back({p1, {0.0}, p1});
  pts.push_back({p2, {1.0}, p2});
  pts.push_back({q1, {0.0}, q1});
  pts.push_back({q2, {1.0}, q2});
  pts.push_back({q1, {1.0}, q1});
  pts.push_back({q2, {0.0}, q2});
  if (P.r) pts.push_back({*P.r, {0.0}, *P.r});

  CounterRng rng(seed, 0xc0defULL);
  auto box_point = [&](const TorusPoint& anchor, double half) {
    ChartCoords c{rng.uniform(-half, half), rng.uniform(-half, half)};
    return leaf_point(anchor, c, frame);
  };

  while (pts.size() < count) {
    // 50% uniform, the rest split over chart strata
    MPoint p = random_mpoint(rng);
    switch (rng.uniform_index(8)) {
      case 0: p.x = box_point(p1, w); break;
      case 1: p.x = box_point(p2, w); break;
      case 2: p.x = box_point(q1, w); break;
      case 3: p.x = box_point(q2, w); break;
      case 4:
        // deep stratum: x and z inside the same p-chart, near the P support
        if (rng.uniform() < 0.5) {
          p.x = box_point(p1, std::min(w, 2.0 * P.delta / P.k));
          p.z = box_point(p1, std::min(w, 2.0 * P.delta / P.k));
          p.y = CirclePoint::reduced(
              rng.uniform(-2.0 * P.delta / P.k, 2.0 * P.delta / P.k));
        } else {
          p.x = box_point(p2, std::min(w, 2.0 * P.delta / P.k));
          p.z = box_point(p2, std::min(w, 2.0 * P.delta / P.k));
          p.y = CirclePoint::reduced(
              1.0 + rng.uniform(-2.0 * P.delta / P.k, 2.0 * P.delta / P.k));
        }
        break;
      case 5:
        if (P.r) {
          p.x = box_point(*P.r, P.eps / 10.0);
          p.y = CirclePoint::reduced(
              rng.uniform(-2.0 * P.delta / P.ell, 2.0 * P.delta / P.ell));
        }
        break;
      default:
        break;  // uniform
    }
    pts.push_back(p);
  }
  return pts;
}

ConeReport cone_certify(const KanSystem& sys, const ConeSpec& cone,
                        ConeDirection direction, MapKind map,
                        std::uint64_t samples, std::uint64_t seed,
                        int boundary_dirs) {
  if (cone.e_axes.size() != 1)
    throw std::invalid_argument("cone_certify: one-dimensional E expected");
  if (map == MapKind::g || map == MapKind::gtilde)
    throw std::invalid_argument(
        "cone_certify: certify factor cones through the full map (the dg "
        "block embeds in df)");

  std::vector<int> axes = cone.e_axes;
  axes.insert(axes.end(), cone.f_axes.begin(), cone.f_axes.end());
  const int n = static_cast<int>(axes.size());
  const int fdim = n - 1;

  auto dirs = boundary_directions(fdim, boundary_dirs);
  std::vector<MPoint> pts = stratified_points(sys, samples, seed);
  JacobianEvaluator jac(sys);

  std::vector<double> worst(pts.size(), 0.0);
  parallel_for(pts.size(), [&](std::uint64_t i) {
    Jac5 full = map == MapKind::ftilde ? jac.dftilde(pts[i]) : jac.df(pts[i]);
    check_block_invariance(full, axes);
    SubMatrix block = extract_block(full, axes);
    if (direction == ConeDirection::backward) block = invert(block);
    double w = 0.0;
    for (const auto& d : dirs) {
      // v = e_E + alpha * u_F
      std::array<double, 5> v{};
      v[0] = 1.0;
      for (int j = 0; j < fdim; ++j) v[1 + j] = cone.alpha * d[j];
      std::array<double, 5> img{};
      for (int r = 0; r < n; ++r) {
        double s = 0;
        for (int c2 = 0; c2 < n; ++c2) s += block.at(r, c2) * v[c2];
        img[r] = s;
      }
      double fe = std::fabs(img[0]);
      double ff = 0;
      for (int j = 1; j < n; ++j) ff += img[j] * img[j];
      ff = std::sqrt(ff);
      w = std::max(w, ff / (cone.alpha * fe));
    }
    worst[i] = w;
  });

  ConeReport rep;
  rep.cone = cone.name;
  rep.direction = direction;
  rep.alpha = cone.alpha;
  rep.samples = pts.size();
  rep.directions = static_cast<int>(dirs.size());
  rep.kappa_hat = *std::max_element(worst.begin(), worst.end());
  rep.min_margin = 1.0 - rep.kappa_hat;
  rep.pass = rep.kappa_hat < 1.0;
  return rep;
}

double aperture_search(const KanSystem& sys, ConeSpec cone,
                       ConeDirection direction, MapKind map,
                       const std::vector<double>& ladder,
                       std::uint64_t samples, std::uint64_t seed) {
  for (double alpha : ladder) {
    cone.alpha = alpha;
    ConeReport r = cone_certify(sys, cone, direction, map, samples, seed);
    if (r.pass) return alpha;
  }
  return 0.0;
}

SandwichReport growth_sandwich_check(const KanSystem& sys,
                                     const ConeSpec& cone,
                                     ConeDirection direction, int steps,
                                     std::uint64_t orbits, double chi_min,
                                     double chi_max, std::uint64_t seed) {
  std::vector<int> axes = cone.e_axes;
  axes.insert(axes.end(), cone.f_axes.begin(), cone.f_axes.end());
  const int n = static_cast<int>(axes.size());
  const double slack = 0.5 * std::log1p(cone.alpha * cone.alpha);
  JacobianEvaluator jac(sys);

  std::vector<double> lo(orbits), hi(orbits);
  parallel_for(orbits, [&](std::uint64_t i) {
    CounterRng rng(seed, i);
    MPoint p = random_mpoint(rng);
    // boundary vector of the cone, random F direction
    std::array<double, 5> v{};
    v[0] = 1.0;
    double fn = 0;
    for (int j = 1; j < n; ++j) {
      v[j] = rng.uniform(-1.0, 1.0);
      fn += v[j] * v[j];
    }
    fn = std::sqrt(fn);
    for (int j = 1; j < n; ++j) v[j] *= cone.alpha / (fn > 0 ? fn : 1.0);
    double norm0 = 0;
    for (int j = 0; j < n; ++j) norm0 += v[j] * v[j];
    norm0 = std::sqrt(norm0);

    double log_growth = 0;
    if (direction == ConeDirection::forward) {
      for (int s = 0; s < steps; ++s) {
        Jac5 full = jac.df(p);
        SubMatrix block = extract_block(full, axes);
        std::array<double, 5> img{};
        for (int r = 0; r < n; ++r) {
          double acc = 0;
          for (int c = 0; c < n; ++c) acc += block.at(r, c) * v[c];
          img[r] = acc;
        }
        double nn = 0;
        for (int r = 0; r < n; ++r) nn += img[r] * img[r];
        nn = std::sqrt(nn);
        log_growth += std::log(nn / norm0);
        for (int r = 0; r < n; ++r) v[r] = img[r] / nn;
        norm0 = 1.0;
        p = sys.f(p);
      }
    } else {
      // record the blocks along a forward orbit, then apply inverses in
      // reverse: the growth of Df^{-n} at the orbit endpoint.
      std::vector<SubMatrix> blocks(steps);
      for (int s = 0; s < steps; ++s) {
        blocks[s] = extract_block(jac.df(p), axes);
        p = sys.f(p);
      }
      for (int s = steps - 1; s >= 0; --s) {
        SubMatrix inv = invert(blocks[s]);
        std::array<double, 5> img{};
        for (int r = 0; r < n; ++r) {
          double acc = 0;
          for (int c = 0; c < n; ++c) acc += inv.at(r, c) * v[c];
          img[r] = acc;
        }
        double nn = 0;
        for (int r = 0; r < n; ++r) nn += img[r] * img[r];
        nn = std::sqrt(nn);
        log_growth += std::log(nn / norm0);
        for (int r = 0; r < n; ++r) v[r] = img[r] / nn;
        norm0 = 1.0;
      }
    }
    double log_lo = steps * std::log(chi_min) - slack;
    double log_hi = steps * std::log(chi_max) + slack;
    lo[i] = log_growth - log_lo;
    hi[i] = log_hi - log_growth;
  });

  SandwichReport rep;
  rep.cone = cone.name;
  rep.steps = steps;
  rep.orbits = orbits;
  rep.worst_low = *std::min_element(lo.begin(), lo.end());
  rep.worst_high = *std::min_element(hi.begin(), hi.end());
  // boundary vectors attain the bounds exactly; tolerate log-accumulation
  // rounding of order steps * eps
  const double fp_slack = 1e-9;
  rep.pass = rep.worst_low >= -fp_slack && rep.worst_high >= -fp_slack;
  return rep;
}

}  // namespace kanlab
