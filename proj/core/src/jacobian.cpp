#include "kanlab/jacobian.hpp"

#include "kanlab/kernels.hpp"

namespace kanlab {

Jac5 JacobianEvaluator::df(const MPoint& p) const {
  const double s0 = sys_.sigma0();
  const double s1 = sys_.sigma1();
  KanSystem::ChartHit hit = sys_.locate(p.x);
  if (hit.site == Site::none)
    return mat5_diag(s1, s0, 1.0, 1.0 / s0, 1.0 / s1);

  const double a = hit.ab.a, b = hit.ab.b;
  const double shift =
      (hit.site == Site::p2 || hit.site == Site::q2) ? 1.0 : 0.0;
  const double c_lift = p.y.y - shift;

  Jac5 m = mat5_zero();
  m[kEuu][kEuu] = s1;
  m[kEs][kEs] = 1.0 / s0;
  m[kEss][kEss] = 1.0 / s1;

  QPartials qp = q_partials(a, b, c_lift, sys_.bump());
  m[kTS][kEuu] = qp.da;
  m[kTS][kTS] = qp.dc;
  m[kTS][kEss] = qp.db;

  bool p_active = false;
  if (hit.site == Site::p1 || hit.site == Site::p2) {
    const TorusPoint anchor = sys_.anchor(hit.site);
    if (auto de = leaf_coords(p.z, anchor, sys_.frame(),
                              5.0 * sys_.params().delta)) {
      PPartials pp = p_partials(a, b, pi2(c_lift), de->a, de->b,
                                sys_.params().k, s0, sys_.bump());
      m[kEu][kEuu] = s0 * pp.da;
      m[kEu][kEu] = s0 * pp.dd;
      m[kEu][kTS] = s0 * pp.dc;
      m[kEu][kEs] = s0 * pp.de;
      m[kEu][kEss] = s0 * pp.db;
      p_active = true;
    }
  }
  if (!p_active) m[kEu][kEu] = s0;
  return m;
}

Mat3 JacobianEvaluator::dg(const GPoint& q) const {
  const double s1 = sys_.sigma1();
  Mat3 m{};
  m[0][0] = s1;
  m[2][2] = 1.0 / s1;
  KanSystem::ChartHit hit = sys_.locate(q.x);
  if (hit.site == Site::none) {
    m[1][1] = 1.0;
    return m;
  }
  const double shift =
      (hit.site == Site::p2 || hit.site == Site::q2) ? 1.0 : 0.0;
  QPartials qp = q_partials(hit.ab.a, hit.ab.b, q.y.y - shift, sys_.bump());
  m[1][0] = qp.da;
  m[1][1] = qp.dc;
  m[1][2] = qp.db;
  return m;
}

Jac5 JacobianEvaluator::dh_eps(const MPoint& p) const {
  Jac5 m = mat5_diag(1, 1, 1, 1, 1);
  sys_.params().require_r();
  auto c = leaf_coords(p.x, *sys_.params().r, sys_.frame(),
                       sys_.params().eps / 10.0);
  if (!c) return m;
  RPartials rp =
      r_partials(c->a, c->b, pi2(p.y.y), sys_.params().ell, sys_.bump());
  m[kTS][kEuu] = rp.da;
  m[kTS][kTS] = rp.dc;
  m[kTS][kEss] = rp.db;
  return m;
}

Jac5 JacobianEvaluator::dftilde(const MPoint& p) const {
  Jac5 dh = dh_eps(p);
  Jac5 df_at = df(sys_.h_eps(p));
  return mat5_mul(df_at, dh);
}

double JacobianEvaluator::eu_multiplier(const MPoint& p) const {
  const double s0 = sys_.sigma0();
  KanSystem::ChartHit hit = sys_.locate(p.x);
  if (hit.site != Site::p1 && hit.site != Site::p2) return s0;
  const TorusPoint anchor = sys_.anchor(hit.site);
  auto de = leaf_coords(p.z, anchor, sys_.frame(), 5.0 * sys_.params().delta);
  if (!de) return s0;
  const double shift = hit.site == Site::p2 ? 1.0 : 0.0;
  return s0 * p_dd(hit.ab.a, hit.ab.b, pi2(p.y.y - shift), de->a, de->b,
                   sys_.params().k, s0, sys_.bump());
}

double JacobianEvaluator::ts_multiplier(const GPoint& q) const {
  KanSystem::ChartHit hit = sys_.locate(q.x);
  if (hit.site == Site::none) return 1.0;
  const double shift =
      (hit.site == Site::p2 || hit.site == Site::q2) ? 1.0 : 0.0;
  return q_dc(hit.ab.a, hit.ab.b, q.y.y - shift, sys_.bump());
}

std::array<std::array<double, 2>, 2> JacobianEvaluator::block_ts_eu(
    const MPoint& p) const {
  Jac5 m = df(p);
  return {{{m[kTS][kTS], m[kTS][kEu]}, {m[kEu][kTS], m[kEu][kEu]}}};
}

namespace {

// Displace p by t along one frame direction.
MPoint displace(const KanSystem& sys, const MPoint& p, int dir, double t) {
  const EigenFrame& fr = sys.frame();
  MPoint q = p;
  switch (dir) {
    case kEuu: {
      Vec2 w = fr.from_frame({t, 0});
      q.x = TorusPoint::reduced(p.x.u + w.x, p.x.v + w.y);
      break;
    }
    case kEss: {
      Vec2 w = fr.from_frame({0, t});
      q.x = TorusPoint::reduced(p.x.u + w.x, p.x.v + w.y);
      break;
    }
    case kTS:
      q.y = CirclePoint::reduced(p.y.y + t);
      break;
    case kEu: {
      Vec2 w = fr.from_frame({t, 0});
      q.z = TorusPoint::reduced(p.z.u + w.x, p.z.v + w.y);
      break;
    }
    case kEs: {
      Vec2 w = fr.from_frame({0, t});
      q.z = TorusPoint::reduced(p.z.u + w.x, p.z.v + w.y);
      break;
    }
  }
  return q;
}

// Frame components of the minimal-translate difference q - p.
Vec5 frame_difference(const KanSystem& sys, const MPoint& q, const MPoint& p) {
  const EigenFrame& fr = sys.frame();
  Vec2 dx = fr.to_frame(p.x.displacement_to(q.x));
  Vec2 dz = fr.to_frame(p.z.displacement_to(q.z));
  double dy = pi2(q.y.y - p.y.y);
  return {dx.x, dz.x, dy, dz.y, dx.y};
}

}  // namespace

Jac5 finite_difference_df(const KanSystem& sys, const MPoint& p, double step,
                          bool perturbed) {
  Jac5 m{};
  for (int dir = 0; dir < 5; ++dir) {
    MPoint plus = displace(sys, p, dir, step);
    MPoint minus = displace(sys, p, dir, -step);
    MPoint fp = perturbed ? sys.ftilde(plus) : sys.f(plus);
    MPoint fm = perturbed ? sys.ftilde(minus) : sys.f(minus);
    Vec5 d = frame_difference(sys, fp, fm);
    for (int row = 0; row < 5; ++row) m[row][dir] = d[row] / (2.0 * step);
  }
  return m;
}

}  // namespace kanlab
