#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kanlab/certify.hpp"
#include "kanlab/circle_map.hpp"
#include "kanlab/kernels.hpp"
#include "kanlab/rng.hpp"
#include "oracles.hpp"

using namespace kanlab;

namespace {
constexpr double kDelta = 0.03;
const BumpProfile bump(kDelta);
}  // namespace

TEST_CASE("psi plateau, support, range, symmetry") {
  CHECK(bump.value(0.0) == 1.0);
  CHECK(bump.value(0.5 * kDelta) == 1.0);
  CHECK(bump.value(kDelta) == 0.0);
  CHECK(bump.value(10.0 * kDelta) == 0.0);
  double v6 = bump.value(0.6 * kDelta);
  double v9 = bump.value(0.9 * kDelta);
  CHECK(v6 > 0.0);
  CHECK(v6 < 1.0);
  CHECK(v9 > 0.0);
  CHECK(v9 < 1.0);
  CHECK(v6 > v9);
  CHECK(bump.value(-0.7 * kDelta) == bump.value(0.7 * kDelta));
  for (double x = 0; x < 1.5 * kDelta; x += kDelta / 311)
    CHECK(bump.value(x) == bump.value(-x));
}

TEST_CASE("psi strictly decreasing on the transition interval") {
  // strictness is representable only once the competing exponential rises
  // above machine epsilon, a ~1% band inside each corner
  double prev = 1.0;
  for (int i = 1; i <= 2000; ++i) {
    double x = 0.5 * kDelta + 0.5 * kDelta * i / 2000.0;
    double v = bump.value(x);
    CHECK(v <= prev);
    if (i > 80 && i < 1920) CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("psi derivative matches finite differences, C1 at the corners") {
  CounterRng rng(7, 0);
  for (int i = 0; i < 1000; ++i) {
    double x = rng.uniform(-1.5 * kDelta, 1.5 * kDelta);
    double fd = oracles::fd_derivative([&](double t) { return bump.value(t); },
                                       x, kDelta);
    CHECK(std::fabs(bump.deriv(x) - fd) <=
          1e-6 * std::max(1.0, std::fabs(bump.deriv(x))) * (4.0 / kDelta));
  }
  // derivative vanishes approaching both corners
  CHECK(std::fabs(bump.deriv(0.5 * kDelta + 1e-9)) < 1e-6);
  CHECK(std::fabs(bump.deriv(kDelta - 1e-9)) < 1e-6);
  CHECK(bump.deriv(0.25 * kDelta) == 0.0);
  CHECK(bump.deriv(2.0 * kDelta) == 0.0);
}

TEST_CASE("frozen slope and curvature bounds hold on a dense scan") {
  double max_slope = 0, max_vs = 0, max_sx = 0, max_curv = 0;
  const int n = 200000;
  double prev_d = bump.deriv(0.0);
  double h = 2.0 * kDelta / n;
  for (int i = 1; i <= n; ++i) {
    double x = i * h;
    double d = bump.deriv(x);
    max_slope = std::max(max_slope, std::fabs(d));
    max_vs = std::max(max_vs, std::fabs(bump.value(x) * d));
    max_sx = std::max(max_sx, std::fabs(d * x));
    max_curv = std::max(max_curv, std::fabs(d - prev_d) / h);
    prev_d = d;
  }
  CHECK(max_slope * kDelta <= BumpProfile::kMaxSlopeScaled + 1e-9);
  CHECK(max_slope * kDelta > 3.9);  // the bound is tight, not slack
  CHECK(max_vs * kDelta <= BumpProfile::kMaxValueSlopeScaled);
  CHECK(max_vs * kDelta > 2.6);
  CHECK(max_sx <= BumpProfile::kMaxSlopeTimesArg);
  CHECK(max_sx > 2.9);
  CHECK(max_curv * kDelta * kDelta <= BumpProfile::kMaxCurvatureScaled);
}

TEST_CASE("phi fixed points and derivative values") {
  CHECK(phi_eval(0.0) == 0.0);
  CHECK(phi_eval(1.0) == 1.0);
  CHECK(phi_eval(2.0) == 2.0);
  CHECK(phi_eval(-1.0) == -1.0);
  CHECK(phi_deriv(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(phi_deriv(1.0) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(phi_eval(0.5) ==
        doctest::Approx(0.5 - 1.0 / (2.0 * M_PI)).epsilon(1e-15));
  // only integer fixed points on [0,2]
  for (double c = 0.01; c < 2.0; c += 0.013)
    if (std::fabs(c - 1.0) > 0.005) CHECK(std::fabs(phi_eval(c) - c) > 1e-6);
  // 2-periodic lift
  CounterRng rng(11, 0);
  for (int i = 0; i < 200; ++i) {
    double c = rng.uniform(-7.0, 7.0);
    CHECK(phi_eval(c + 2.0) ==
          doctest::Approx(phi_eval(c) + 2.0).epsilon(1e-14));
  }
}

TEST_CASE("well-definedness margin of the circle action") {
  double mn = 1e300;
  for (double c = -1.0; c <= 1.0; c += 1e-4)
    for (double psi : {0.0, 0.3, 1.0})
      mn = std::min(mn, 1.0 + (phi_deriv(c) - 1.0) * psi);
  CHECK(mn == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(mn > 0.0);
}

TEST_CASE("Q: section values, locality, plateau") {
  CounterRng rng(3, 0);
  for (int i = 0; i < 300; ++i) {
    double a = rng.uniform(-2 * kDelta, 2 * kDelta);
    double b = rng.uniform(-2 * kDelta, 2 * kDelta);
    double c = rng.uniform(-3.0, 3.0);
    CHECK(q_eval(a, b, 0.0, bump) == 0.0);
    CHECK(q_eval(a, b, 1.0, bump) == 1.0);
    CHECK(q_eval(a, b, -1.0, bump) == -1.0);
    // 2-periodicity of the lift
    CHECK(q_eval(a, b, c + 2.0, bump) ==
          doctest::Approx(q_eval(a, b, c, bump) + 2.0).epsilon(1e-14));
    // identity off the disk
    if (a * a + b * b >= kDelta * kDelta)
      CHECK(q_eval(a, b, c, bump) == c);
  }
  // plateau: pure phi
  CHECK(q_eval(0.0, 0.0, 0.37, bump) == phi_eval(0.37));
  CHECK(q_eval(0.001, 0.002, -0.8, bump) == phi_eval(-0.8));
}

TEST_CASE("Q partials match finite differences and stay positive in c") {
  CounterRng rng(5, 0);
  for (int i = 0; i < 1000; ++i) {
    double a = rng.uniform(-1.2 * kDelta, 1.2 * kDelta);
    double b = rng.uniform(-1.2 * kDelta, 1.2 * kDelta);
    double c = rng.uniform(-2.0, 2.0);
    QPartials qp = q_partials(a, b, c, bump);
    CHECK(qp.dc > 0.0);
    CHECK(qp.dc == q_dc(a, b, c, bump));
    double fa = oracles::fd_derivative(
        [&](double t) { return q_eval(t, b, c, bump); }, a, kDelta);
    double fb = oracles::fd_derivative(
        [&](double t) { return q_eval(a, t, c, bump); }, b, kDelta);
    double fc = oracles::fd_derivative(
        [&](double t) { return q_eval(a, b, t, bump); }, c);
    double scale = std::max({1.0, std::fabs(qp.da), std::fabs(qp.db)});
    CHECK(std::fabs(qp.da - fa) <= 2e-5 * scale);
    CHECK(std::fabs(qp.db - fb) <= 2e-5 * scale);
    CHECK(std::fabs(qp.dc - fc) <= 1e-6 * std::max(1.0, std::fabs(qp.dc)));
  }
}

TEST_CASE("P: plateau contraction, locality, lower bound") {
  const double sigma0 = 6.854101966249685;
  const double k = 13.0;
  // deep plateau: P = 3d/(4 sigma0)
  for (double d : {0.0005, -0.0008, 0.001}) {
    CHECK(p_eval(0, 0, 0, d, 0, k, sigma0, bump) ==
          doctest::Approx(3.0 * d / (4.0 * sigma0)).epsilon(1e-15));
  }
  CHECK(p_eval(0, 0, 0, 0, 0, k, sigma0, bump) == 0.0);
  // outside either bump: identity in d
  CHECK(p_eval(kDelta / k, 0, 0, 0.4, 0, k, sigma0, bump) == 0.4);
  CHECK(p_eval(0, 0, 0, kDelta / k + 1e-9, 0, k, sigma0, bump) ==
        kDelta / k + 1e-9);
  // grid lower bound sigma0 dP/dd >= 3/4
  double mn = 1e300;
  for (int iu = 0; iu <= 400; ++iu)
    for (int is = 0; is <= 200; ++is) {
      double d = -kDelta / k + 2.0 * kDelta / k * iu / 400.0;
      double s = kDelta / k * is / 200.0;
      mn = std::min(mn, sigma0 * p_dd(s, 0, 0, d, 0, k, sigma0, bump));
    }
  CHECK(mn >= 0.75 - 1e-12);
  CHECK(mn < 0.7501);  // attained at the origin
}

TEST_CASE("P partials match finite differences") {
  const double sigma0 = 6.854101966249685;
  const double k = 13.0;
  CounterRng rng(9, 0);
  for (int i = 0; i < 1000; ++i) {
    double lim = 1.3 * kDelta / k;
    double a = rng.uniform(-lim, lim), b = rng.uniform(-lim, lim);
    double c = rng.uniform(-lim, lim), e = rng.uniform(-lim, lim);
    double d = rng.uniform(-lim, lim);
    PPartials pp = p_partials(a, b, c, d, e, k, sigma0, bump);
    auto fd = [&](int which) {
      return oracles::fd_derivative(
          [&](double t) {
            double aa = a, bb = b, cc = c, dd = d, ee = e;
            (which == 0 ? aa
             : which == 1 ? bb
             : which == 2 ? cc
             : which == 3 ? dd
                          : ee) = t;
            return p_eval(aa, bb, cc, dd, ee, k, sigma0, bump);
          },
          which == 0 ? a
          : which == 1 ? b
          : which == 2 ? c
          : which == 3 ? d
                       : e,
          lim);
    };
    double scale = std::max({1.0, std::fabs(pp.da), std::fabs(pp.dd)});
    CHECK(std::fabs(pp.da - fd(0)) <= 2e-5 * scale);
    CHECK(std::fabs(pp.db - fd(1)) <= 2e-5 * scale);
    CHECK(std::fabs(pp.dc - fd(2)) <= 2e-5 * scale);
    CHECK(std::fabs(pp.dd - fd(3)) <= 2e-5 * scale);
    CHECK(std::fabs(pp.de - fd(4)) <= 2e-5 * scale);
    CHECK(sigma0 * pp.dd >= 0.75 - 1e-12);
  }
}

TEST_CASE("R: kick at the origin, locality, diffeo margin") {
  const double ell = 87.0;
  CHECK(r_eval(0, 0, 0, ell, bump) == 1.0 / (ell * ell * ell));
  CHECK(r_eval(0, 0, kDelta / ell + 1e-12, ell, bump) ==
        kDelta / ell + 1e-12);
  CHECK(r_eval(kDelta / ell, 0, 1e-4, ell, bump) == 1e-4);
  CHECK(r_eval(0, 0, -1.0, ell, bump) == -1.0);  // section 1 lift untouched
  CounterRng rng(13, 0);
  for (int i = 0; i < 1000; ++i) {
    double lim = 1.2 * kDelta / ell;
    double a = rng.uniform(-lim, lim), b = rng.uniform(-lim, lim);
    double c = rng.uniform(-lim, lim);
    RPartials rp = r_partials(a, b, c, ell, bump);
    CHECK(rp.dc > 0.0);
    double fc = oracles::fd_derivative(
        [&](double t) { return r_eval(a, b, t, ell, bump); }, c, lim);
    CHECK(std::fabs(rp.dc - fc) <= 2e-5 * std::max(1.0, std::fabs(rp.dc)));
    double fa = oracles::fd_derivative(
        [&](double t) { return r_eval(t, b, c, ell, bump); }, a, lim);
    CHECK(std::fabs(rp.da - fa) <= 2e-5 * std::max(1.0, std::fabs(rp.da)));
  }
  // sup of the C1 perturbation bound: sqrt2 |psi(lc) psi'(lrho)| / l^2
  double sup = 0;
  for (int i = 0; i <= 2000; ++i)
    for (int j = 0; j <= 2000; ++j) {
      double c = kDelta * i / 2000.0 / ell;
      double rho = kDelta * j / 2000.0 / ell;
      sup = std::max(sup, std::sqrt(2.0) *
                              std::fabs(bump.value(ell * c) *
                                        bump.deriv(ell * rho)) /
                              (ell * ell));
    }
  CHECK(sup <= std::sqrt(2.0) * (BumpProfile::kMaxSlopeScaled / kDelta) /
                   (ell * ell) + 1e-12);
}

TEST_CASE("quadrature identity: implementation route equals the GL oracle") {
  // integrand log((1 - psi/2)(1 + psi/2)) = log(1 - psi^2/4) < 0 on the disk
  for (double delta : {0.03, 1e-4}) {
    double impl = symmetry_integral(delta, 20001);
    double oracle = oracles::ts_space_average(delta, 400);
    CHECK(impl == doctest::Approx(oracle).epsilon(1e-8));
    CHECK(impl < 0.0);
  }
}
