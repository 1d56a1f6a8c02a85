#include "kanlab/maps.hpp"

#include <stdexcept>

#include "kanlab/kernels.hpp"

namespace kanlab {

KanSystem::KanSystem(const SystemParams& params)
    : params_(params),
      frame_(EigenFrame::standard()),
      bump_(params.delta),
      cat_n0_(cat_power(params.n0).matrix),
      cat_n1_(cat_power(params.n1).matrix) {
  sigma0_ = cat_power(params.n0).sigma;
  sigma1_ = cat_power(params.n1).sigma;
  anchors_ = params.anchors.points();
  chart_half_width_ = 5.0 * params.delta;
  if (params.r) {
    r_point_ = *params.r;
    has_r_ = true;
  }
  r_half_width_ = params.eps / 10.0;
}

KanSystem::ChartHit KanSystem::locate(const TorusPoint& x) const {
  for (int i = 0; i < 4; ++i) {
    if (auto c = leaf_coords(x, anchors_[i], frame_, chart_half_width_))
      return {static_cast<Site>(i), *c};
  }
  return {};
}

TorusPoint KanSystem::apply_cat_n1(const TorusPoint& x) const {
  Vec2 w = cat_n1_.apply({x.u, x.v});
  return TorusPoint::reduced(w.x, w.y);
}

TorusPoint KanSystem::apply_cat_n0(const TorusPoint& x) const {
  Vec2 w = cat_n0_.apply({x.u, x.v});
  return TorusPoint::reduced(w.x, w.y);
}

double KanSystem::circle_action(Site site, double a, double b,
                                double y) const {
  // Sites anchored at section 1 act through the unit-shift conjugation
  // y -> 1 + Q(a, b, y-1); Q commutes with y -> y+2, so the lift choice
  // does not matter.
  double shift =
      (site == Site::p2 || site == Site::q2) ? 1.0 : 0.0;
  return mod2(shift + q_eval(a, b, y - shift, bump_));
}

MPoint KanSystem::id_eval(const MPoint& p) const {
  ChartHit hit = locate(p.x);
  if (hit.site == Site::none) return p;

  MPoint out = p;
  out.y = CirclePoint{circle_action(hit.site, hit.ab.a, hit.ab.b, p.y.y)};

  // The second-torus action exists only in the charts at p1, p2 and only
  // when z lies in the same anchor's box.
  if (hit.site == Site::p1 || hit.site == Site::p2) {
    const TorusPoint& anchor = anchors_[static_cast<int>(hit.site)];
    if (auto de = leaf_coords(p.z, anchor, frame_, chart_half_width_)) {
      double shift = hit.site == Site::p2 ? 1.0 : 0.0;
      double c_slot = pi2(p.y.y - shift);
      double d_new = p_eval(hit.ab.a, hit.ab.b, c_slot, de->a, de->b,
                            params_.k, sigma0_, bump_);
      out.z = leaf_point(anchor, {d_new, de->b}, frame_);
    }
  }
  return out;
}

MPoint KanSystem::f(const MPoint& p) const {
  MPoint q = id_eval(p);
  return {apply_cat_n1(q.x), q.y, apply_cat_n0(q.z)};
}

GPoint KanSystem::g(const GPoint& q) const {
  ChartHit hit = locate(q.x);
  double y = hit.site == Site::none
                 ? q.y.y
                 : circle_action(hit.site, hit.ab.a, hit.ab.b, q.y.y);
  return {apply_cat_n1(q.x), CirclePoint{y}};
}

GPoint KanSystem::h_eps(const GPoint& q) const {
  if (!has_r_)
    throw std::runtime_error("perturbed map requested but params has no r");
  auto c = leaf_coords(q.x, r_point_, frame_, r_half_width_);
  if (!c) return q;
  double y = mod2(r_eval(c->a, c->b, pi2(q.y.y), params_.ell, bump_));
  return {q.x, CirclePoint{y}};
}

MPoint KanSystem::h_eps(const MPoint& p) const {
  GPoint q = h_eps(GPoint{p.x, p.y});
  return {q.x, q.y, p.z};
}

MPoint KanSystem::ftilde(const MPoint& p) const { return f(h_eps(p)); }

GPoint KanSystem::gtilde(const GPoint& q) const { return g(h_eps(q)); }

MPoint KanSystem::apply(MapKind kind, const MPoint& p) const {
  switch (kind) {
    case MapKind::f: return f(p);
    case MapKind::ftilde: return ftilde(p);
    default:
      throw std::invalid_argument("apply: factor maps need a GPoint");
  }
}

GPoint KanSystem::apply_factor(MapKind kind, const GPoint& q) const {
  switch (kind) {
    case MapKind::g: return g(q);
    case MapKind::gtilde: return gtilde(q);
    case MapKind::f: return g(q);        // pi32-projected action coincides
    case MapKind::ftilde: return gtilde(q);
  }
  return q;
}

double KanSystem::semiconjugacy_residual(const MPoint& p,
                                         bool perturbed) const {
  MPoint fp = perturbed ? ftilde(p) : f(p);
  GPoint lhs{fp.x, fp.y};
  GPoint rhs = perturbed ? gtilde(GPoint{p.x, p.y}) : g(GPoint{p.x, p.y});
  return gpoint_distance(lhs, rhs);
}

}  // namespace kanlab
