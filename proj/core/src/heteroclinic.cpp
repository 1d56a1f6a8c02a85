#include "kanlab/heteroclinic.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace kanlab {

namespace {

// Element of Q(sqrt 5): a + b*sqrt5 with exact rational a, b.
struct Q5 {
  mpq_class a, b;

  Q5() : a(0), b(0) {}
  Q5(mpq_class ra, mpq_class rb) : a(std::move(ra)), b(std::move(rb)) {}
  static Q5 rational(const mpq_class& r) { return {r, mpq_class(0)}; }

  Q5 operator+(const Q5& o) const { return {a + o.a, b + o.b}; }
  Q5 operator-(const Q5& o) const { return {a - o.a, b - o.b}; }
  Q5 operator*(const Q5& o) const {
    return {a * o.a + 5 * b * o.b, a * o.b + b * o.a};
  }
  Q5 operator*(const mpq_class& r) const { return {a * r, b * r}; }
  Q5 operator/(const Q5& o) const {
    // multiply by conjugate / norm
    mpq_class norm = o.a * o.a - 5 * o.b * o.b;
    Q5 num = *this * Q5{o.a, -o.b};
    return {num.a / norm, num.b / norm};
  }

  // The coefficients grow under iteration while the value stays in [0,1),
  // so a + b sqrt5 cancels catastrophically in double. Evaluate through
  // mpf at a precision that covers the coefficient magnitudes.
  double to_double() const {
    std::size_t bits = 64 + std::max(coeff_bits(a), coeff_bits(b));
    mpf_class fa(a, bits), fb(b, bits), five(5, bits);
    mpf_class s5(0, bits);
    mpf_sqrt(s5.get_mpf_t(), five.get_mpf_t());
    mpf_class r = fa + fb * s5;
    return r.get_d();
  }

  // Exact floor: write the value as (A + B sqrt5)/D over a common positive
  // denominator; floor(B sqrt5) comes from the integer square root of 5B^2,
  // and no integer can hide between A+floor(B sqrt5) and the value.
  mpz_class floor_val() const {
    mpz_class qa = a.get_den(), qb = b.get_den();
    mpz_class D = qa * qb;  // positive: mpq keeps denominators positive
    mpz_class A = a.get_num() * qb;
    mpz_class B = b.get_num() * qa;
    mpz_class n2 = 5 * B * B, n;
    mpz_sqrt(n.get_mpz_t(), n2.get_mpz_t());
    mpz_class floor_b_sqrt5 = B >= 0 ? n : -n - 1;
    mpz_class L = A + floor_b_sqrt5, out;
    mpz_fdiv_q(out.get_mpz_t(), L.get_mpz_t(), D.get_mpz_t());
    return out;
  }

  static std::size_t coeff_bits(const mpq_class& r) {
    return mpz_sizeinbase(r.get_num().get_mpz_t(), 2) +
           mpz_sizeinbase(r.get_den().get_mpz_t(), 2);
  }

  // representative in [0,1)
  Q5 mod1() const {
    Q5 r = *this;
    r.a -= mpq_class(floor_val());
    r.a.canonicalize();
    return r;
  }
};

struct Q5Vec {
  Q5 u, v;
  Q5Vec mod1() const { return {u.mod1(), v.mod1()}; }
};

Q5Vec apply(const Mat2i& m, const Q5Vec& x) {
  mpq_class a(static_cast<long>(m.a)), b(static_cast<long>(m.b));
  mpq_class c(static_cast<long>(m.c)), d(static_cast<long>(m.d));
  return {x.u * a + x.v * b, x.u * c + x.v * d};
}

TorusPoint to_torus(const Q5Vec& x) {
  Q5Vec r = x.mod1();
  return TorusPoint::reduced(r.u.to_double(), r.v.to_double());
}

// Torus distance computed from the exact displacement, so values far below
// the double resolution of the coordinates stay meaningful.
double exact_distance(const Q5Vec& x, const Q5Vec& y) {
  auto comp = [](const Q5& a, const Q5& b) {
    Q5 d = (a - b).mod1();  // in [0,1)
    // signed representative in [-1/2, 1/2), decided and shifted exactly
    if ((d + d).floor_val() >= 1) d = d - Q5::rational(1);
    return d.to_double();
  };
  double du = comp(x.u, y.u);
  double dv = comp(x.v, y.v);
  return std::sqrt(du * du + dv * dv);
}

mpq_class rat_of(std::int64_t num, std::int64_t den) {
  mpq_class r(static_cast<long>(num), static_cast<long>(den));
  r.canonicalize();
  return r;
}

}  // namespace

HeteroclinicResult heteroclinic_point(const HeteroclinicQuery& query) {
  const EigenFrame frame = EigenFrame::standard();
  const Mat2i fwd = cat_power(query.n1).matrix;
  // A^{-1} = [[1,-1],[-1,2]]; power it for the backward map.
  Mat2i bwd{1, 0, 0, 1};
  {
    Mat2i ainv{1, -1, -1, 2};
    for (int i = 0; i < query.n1; ++i) {
      Mat2i r;
      r.a = bwd.a * ainv.a + bwd.b * ainv.c;
      r.b = bwd.a * ainv.b + bwd.b * ainv.d;
      r.c = bwd.c * ainv.a + bwd.d * ainv.c;
      r.d = bwd.c * ainv.b + bwd.d * ainv.d;
      bwd = r;
    }
  }

  // Unnormalized leaf directions with exact Q(sqrt5) entries:
  // d_u = (1, (sqrt5-1)/2), d_s = (1, -(sqrt5+1)/2).
  const Q5 one = Q5::rational(1);
  const Q5 du_v{mpq_class(-1, 2), mpq_class(1, 2)};   // (sqrt5-1)/2
  const Q5 ds_v{mpq_class(-1, 2), mpq_class(-1, 2)};  // -(sqrt5+1)/2
  const double du_norm = std::sqrt(1.0 + du_v.to_double() * du_v.to_double());
  const double ds_norm = std::sqrt(1.0 + ds_v.to_double() * ds_v.to_double());

  Q5Vec q1{Q5::rational(rat_of(query.q1.num_u, query.q1.den)),
           Q5::rational(rat_of(query.q1.num_v, query.q1.den))};
  Q5Vec q2{Q5::rational(rat_of(query.q2.num_u, query.q2.den)),
           Q5::rational(rat_of(query.q2.num_v, query.q2.den))};

  const std::array<TorusPoint, 4> anchor_pts = {
      query.anchors[0].to_point(), query.anchors[1].to_point(),
      query.anchors[2].to_point(), query.anchors[3].to_point()};

  struct Candidate {
    Q5 t, s;
    double abs_t;
  };
  std::vector<Candidate> cands;
  const int W = query.window;
  for (int m = -W; m <= W; ++m) {
    for (int n = -W; n <= W; ++n) {
      // solve t*d_u - s*d_s = (q2 - q1) + (m, n) over Q(sqrt5)
      Q5 rhs_u = q2.u - q1.u + Q5::rational(m);
      Q5 rhs_v = q2.v - q1.v + Q5::rational(n);
      // [[1, -1], [du_v, -ds_v]] (t, s)^T = rhs; det = -ds_v + du_v = sqrt5
      Q5 det = du_v - ds_v;  // = sqrt5
      Q5 t = (rhs_u * (ds_v * mpq_class(-1)) + rhs_v) / det;
      Q5 s = (rhs_v - rhs_u * du_v) / det;
      double at = std::fabs(t.to_double());
      double as = std::fabs(s.to_double());
      if (at < 1e-15 && as < 1e-15) continue;  // trivial solution q1 == q2
      cands.push_back({t, s, at});
    }
  }
  std::sort(cands.begin(), cands.end(),
            [](const Candidate& x, const Candidate& y) {
              return x.abs_t < y.abs_t;
            });

  for (const Candidate& cand : cands) {
    Q5Vec r{(q1.u + cand.t * one).mod1(), (q1.v + cand.t * du_v).mod1()};
    TorusPoint rd = to_torus(r);

    // (i) eps-ball avoids all four 5*delta anchor boxes
    double min_anchor = std::numeric_limits<double>::infinity();
    for (const auto& a : anchor_pts)
      min_anchor = std::min(min_anchor, leaf_box_distance(rd, a, frame));
    if (min_anchor <= 5.0 * query.delta + query.eps) continue;

    // (ii) orbit isolation over the horizon, exact iteration
    double min_gap = std::numeric_limits<double>::infinity();
    bool isolated = true;
    for (int dir = 0; dir < 2 && isolated; ++dir) {
      const Mat2i& step = dir == 0 ? fwd : bwd;
      Q5Vec x = r;
      for (int i = 1; i <= query.isolation_horizon; ++i) {
        x = apply(step, x).mod1();
        double gap = to_torus(x).distance_to(rd);
        min_gap = std::min(min_gap, gap);
        if (gap <= query.eps) {
          isolated = false;
          break;
        }
      }
    }
    if (!isolated) continue;

    HeteroclinicResult out;
    out.r = rd;
    out.t = cand.t.to_double() * du_norm;  // arclength parameters
    out.s = cand.s.to_double() * ds_norm;
    out.min_orbit_gap = min_gap;
    out.min_anchor_gap = min_anchor;
    Q5Vec x = r;
    out.forward_dist.push_back(exact_distance(x, q2));
    for (int i = 1; i <= query.ratio_steps; ++i) {
      x = apply(fwd, x).mod1();
      out.forward_dist.push_back(exact_distance(x, q2));
    }
    x = r;
    out.backward_dist.push_back(exact_distance(x, q1));
    for (int i = 1; i <= query.ratio_steps; ++i) {
      x = apply(bwd, x).mod1();
      out.backward_dist.push_back(exact_distance(x, q1));
    }
    return out;
  }
  throw std::runtime_error(
      "heteroclinic_point: search window exhausted; no candidate satisfies "
      "anchor clearance and orbit isolation");
}

}  // namespace kanlab
