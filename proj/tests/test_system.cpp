#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kanlab/jacobian.hpp"
#include "kanlab/kernels.hpp"
#include "kanlab/maps.hpp"
#include "kanlab/rng.hpp"

using namespace kanlab;

namespace {

const SystemParams& desk() {
  static SystemParams p = desk_preset();
  return p;
}

const KanSystem& sys() {
  static KanSystem s(desk());
  return s;
}

MPoint random_point(CounterRng& rng) {
  return {TorusPoint{rng.uniform(), rng.uniform()},
          CirclePoint{rng.uniform(0.0, 2.0)},
          TorusPoint{rng.uniform(), rng.uniform()}};
}

std::array<MPoint, 6> six_fixed_points(const KanSystem& s) {
  TorusPoint p1 = s.anchor(Site::p1), p2 = s.anchor(Site::p2);
  TorusPoint q1 = s.anchor(Site::q1), q2 = s.anchor(Site::q2);
  return {MPoint{p1, {0.0}, p1}, MPoint{p2, {1.0}, p2},
          MPoint{q1, {0.0}, q1}, MPoint{q2, {1.0}, q2},
          MPoint{q1, {1.0}, q1}, MPoint{q2, {0.0}, q2}};
}

}  // namespace

TEST_CASE("ID acts as identity off the charts, as phi at the anchors") {
  CounterRng rng(31, 0);
  int outside = 0;
  for (int i = 0; i < 2000; ++i) {
    MPoint p = random_point(rng);
    if (sys().locate(p.x).site != Site::none) continue;
    ++outside;
    MPoint q = sys().id_eval(p);
    CHECK(q.x.u == p.x.u);
    CHECK(q.y.y == p.y.y);
    CHECK(q.z.u == p.z.u);
    CHECK(q.z.v == p.z.v);
  }
  CHECK(outside > 1000);

  // exactly at q1: pure phi on y, z untouched
  MPoint p{sys().anchor(Site::q1), {0.3}, {0.77, 0.13}};
  MPoint q = sys().id_eval(p);
  CHECK(q.y.y == phi_eval(0.3));
  CHECK(q.z.u == p.z.u);
  CHECK(q.z.v == p.z.v);

  // at p1 with z = p1: P acts but fixes the origin
  MPoint pp{sys().anchor(Site::p1), {0.0}, sys().anchor(Site::p1)};
  MPoint qq = sys().id_eval(pp);
  CHECK(qq.y.y == 0.0);
  CHECK(qq.z.distance_to(pp.z) == 0.0);
}

TEST_CASE("the six fixed points are fixed") {
  for (const MPoint& p : six_fixed_points(sys())) {
    MPoint q = sys().f(p);
    CHECK(mpoint_distance(p, q) < 1e-12);
  }
}

TEST_CASE("section invariance is exact") {
  CounterRng rng(33, 0);
  for (int i = 0; i < 500; ++i) {
    MPoint p = random_point(rng);
    p.y = CirclePoint{rng.uniform() < 0.5 ? 0.0 : 1.0};
    double ysec = p.y.y;
    for (int s = 0; s < 20; ++s) {
      p = sys().f(p);
      CHECK(p.y.y == ysec);
    }
  }
}

TEST_CASE("x outside charts: f is the linear product") {
  CounterRng rng(35, 0);
  for (int i = 0; i < 500; ++i) {
    MPoint p = random_point(rng);
    if (sys().locate(p.x).site != Site::none) continue;
    MPoint q = sys().f(p);
    CHECK(q.y.y == p.y.y);
    TorusPoint ax = sys().apply_cat_n1(p.x);
    TorusPoint az = sys().apply_cat_n0(p.z);
    CHECK(q.x.distance_to(ax) == 0.0);
    CHECK(q.z.distance_to(az) == 0.0);
  }
}

TEST_CASE("semiconjugacy through the factor is exact") {
  CounterRng rng(37, 0);
  double worst = 0;
  for (int i = 0; i < 20000; ++i) {
    MPoint p = random_point(rng);
    worst = std::max(worst, sys().semiconjugacy_residual(p, false));
  }
  CHECK(worst <= 1e-12);
  // g fixes (q1, 0)
  GPoint gq{sys().anchor(Site::q1), {0.0}};
  CHECK(gpoint_distance(sys().g(gq), gq) < 1e-12);
  // off-chart: (x, 0.5) -> (A^n1 x, 0.5)
  GPoint far{TorusPoint{0.07, 0.52}, {0.5}};
  if (sys().locate(far.x).site == Site::none) {
    GPoint img = sys().g(far);
    CHECK(img.y.y == 0.5);
  }
}

TEST_CASE("perturbed map: kick at the channel origin, section 1 kept") {
  SystemParams p = desk();
  REQUIRE(p.r.has_value());
  const KanSystem& s = sys();
  const double ell = p.ell;

  // at (r, 0, z): H moves y to exactly 1/ell^3
  MPoint at_r{*p.r, {0.0}, {0.3, 0.6}};
  MPoint h = s.h_eps(at_r);
  CHECK(h.y.y == 1.0 / (ell * ell * ell));
  CHECK(h.x.distance_to(at_r.x) == 0.0);

  // y = 1 is preserved exactly by ftilde
  CounterRng rng(39, 0);
  for (int i = 0; i < 300; ++i) {
    MPoint q = random_point(rng);
    q.y = CirclePoint{1.0};
    for (int step = 0; step < 10; ++step) {
      q = s.ftilde(q);
      CHECK(q.y.y == 1.0);
    }
  }

  // off the eps/10 box of r: ftilde == f
  for (int i = 0; i < 2000; ++i) {
    MPoint q = random_point(rng);
    auto c = leaf_coords(q.x, *p.r, s.frame(), p.eps / 10.0);
    if (c) continue;
    MPoint a = s.ftilde(q), b = s.f(q);
    CHECK(mpoint_distance(a, b) == 0.0);
  }

  // perturbed semiconjugacy is exact too
  double worst = 0;
  for (int i = 0; i < 20000; ++i)
    worst = std::max(worst, s.semiconjugacy_residual(random_point(rng), true));
  CHECK(worst <= 1e-12);
}

TEST_CASE("Jacobians at the six fixed points match the diagonal spectra") {
  JacobianEvaluator jac(sys());
  const double s0 = sys().sigma0(), s1 = sys().sigma1();
  auto fps = six_fixed_points(sys());
  const double mids[6] = {0.5, 0.5, 0.5, 0.5, 1.5, 1.5};
  const double eus[6] = {0.75, 0.75, s0, s0, s0, s0};
  for (int i = 0; i < 6; ++i) {
    Jac5 m = jac.df(fps[i]);
    Vec5 want{s1, eus[i], mids[i], 1.0 / s0, 1.0 / s1};
    for (int r = 0; r < 5; ++r)
      for (int c = 0; c < 5; ++c) {
        if (r == c)
          CHECK(std::fabs(m[r][c] - want[r]) <= 1e-9 * std::fabs(want[r]));
        else
          CHECK(std::fabs(m[r][c]) <= 1e-12);
      }
  }
}

TEST_CASE("analytic Jacobian matches central finite differences") {
  JacobianEvaluator jac(sys());
  CounterRng rng(41, 0);
  const double delta = desk().delta;
  const EigenFrame& fr = sys().frame();
  int tested = 0;
  for (int i = 0; i < 400; ++i) {
    MPoint p = random_point(rng);
    if (i % 2 == 0) {
      // stratify into chart boxes and the P support
      Site site = static_cast<Site>(i % 4);
      TorusPoint anchor = sys().anchor(site);
      double w = (i % 8 < 4) ? 5.0 * delta : 1.5 * delta / desk().k;
      ChartCoords c{rng.uniform(-w, w), rng.uniform(-w, w)};
      p.x = leaf_point(anchor, c, fr);
      if (site == Site::p1 || site == Site::p2) {
        ChartCoords cz{rng.uniform(-w, w), rng.uniform(-w, w)};
        p.z = leaf_point(anchor, cz, fr);
        p.y = CirclePoint::reduced((site == Site::p2 ? 1.0 : 0.0) +
                                   rng.uniform(-0.002, 0.002));
      }
    }
    Jac5 analytic = jac.df(p);
    Jac5 fd = finite_difference_df(sys(), p, 2e-7);
    double scale = std::max(1.0, mat5_max_abs(analytic));
    for (int r = 0; r < 5; ++r)
      for (int c = 0; c < 5; ++c)
        CHECK(std::fabs(analytic[r][c] - fd[r][c]) <= 1e-5 * scale);
    ++tested;
  }
  CHECK(tested == 400);
}

TEST_CASE("E^u column invariance and the determinant identity") {
  JacobianEvaluator jac(sys());
  CounterRng rng(43, 0);
  for (int i = 0; i < 500; ++i) {
    MPoint p = random_point(rng);
    Jac5 m = jac.df(p);
    // column u is exactly diagonal
    CHECK(m[kEuu][kEu] == 0.0);
    CHECK(m[kTS][kEu] == 0.0);
    CHECK(m[kEs][kEu] == 0.0);
    CHECK(m[kEss][kEu] == 0.0);
    CHECK(m[kEu][kEu] == jac.eu_multiplier(p));
    // 5x5 sparsity of Eq-structure: first row, s and ss rows diagonal
    CHECK(m[kEuu][kEuu] == sys().sigma1());
    for (int c = 1; c < 5; ++c) CHECK(m[kEuu][c] == 0.0);
    for (int c = 0; c < 5; ++c) {
      if (c != kEs) CHECK(m[kEs][c] == 0.0);
      if (c != kEss) CHECK(m[kEss][c] == 0.0);
    }
    // det Df = sigma1 * (s0 dP/dd) * dQ/dc * (1/s0) * (1/s1)
    double expect = m[kEu][kEu] * m[kTS][kTS] * m[kEs][kEs];
    CHECK(mat5_det(m) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("perturbation norm: closed form and global bound") {
  JacobianEvaluator jac(sys());
  const SystemParams& p = desk();
  const double ell = p.ell;
  const BumpProfile& bump = sys().bump();
  CounterRng rng(45, 0);
  double global = std::numbers::sqrt2 *
                  (BumpProfile::kMaxSlopeScaled / p.delta) / (ell * ell);
  for (int i = 0; i < 400; ++i) {
    // sample inside the kick region where the difference is nonzero
    ChartCoords c{rng.uniform(-1.2 * p.delta / ell, 1.2 * p.delta / ell),
                  rng.uniform(-1.2 * p.delta / ell, 1.2 * p.delta / ell)};
    MPoint q{leaf_point(*p.r, c, sys().frame()),
             CirclePoint::reduced(rng.uniform(-p.delta / ell, p.delta / ell)),
             TorusPoint{rng.uniform(), rng.uniform()}};
    Jac5 dft = jac.dftilde(q);
    Jac5 df = jac.df(q);
    double fro = 0;
    for (int r = 0; r < 5; ++r)
      for (int cc = 0; cc < 5; ++cc) {
        double d = dft[r][cc] - df[r][cc];
        fro += d * d;
      }
    fro = std::sqrt(fro);
    // rows other than TS are untouched, so the Frobenius norm equals the
    // row norm sqrt((psi_c psi'_rho)^2 + (psi'_c psi_rho)^2)/ell^2
    double rho = std::sqrt(c.a * c.a + c.b * c.b);
    double clift = pi2(q.y.y);
    double t1 = bump.value(ell * clift) * bump.deriv(ell * rho);
    double t2 = bump.deriv(ell * clift) * bump.value(ell * rho);
    double closed = std::sqrt(t1 * t1 + t2 * t2) / (ell * ell);
    CHECK(fro == doctest::Approx(closed).epsilon(1e-10));
    CHECK(fro <= global + 1e-15);
    CHECK(fro <= p.eps);
  }
}
