#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "kanlab/certify.hpp"
#include "kanlab/experiments.hpp"
#include "kanlab/jacobian.hpp"
#include "oracles.hpp"

using namespace kanlab;

namespace {

SystemParams certified_desk() {
  SystemParams p = desk_preset();
  CertifyOptions o;
  o.grid_1d = 2048;
  o.grid_q = 60;
  o.grid_p = 401;
  o.quad_n = 4001;
  o.with_cones = false;
  CertificateReport rep = certify_params(p, o);
  REQUIRE(rep.overall);
  return p;
}

const KanSystem& sys() {
  static KanSystem s(certified_desk());
  return s;
}

}  // namespace

TEST_CASE("experiments refuse uncertified parameter records") {
  SystemParams p = desk_preset();  // no certificate stamped
  KanSystem s(p);
  OrbitSpec spec{1, 0, 10, 2};
  CHECK_THROWS_AS(lyap_ts_g(s, 0, spec), std::runtime_error);
  CHECK_THROWS_AS(basin_map(s, MapKind::f, spec, {10}), std::runtime_error);
}

TEST_CASE("birkhoff average: constants and invariant sections") {
  OrbitSpec spec{1, 10, 1000, 1};
  MPoint x0{{0.123, 0.456}, {0.7}, {0.89, 0.01}};
  double one = birkhoff_average(
      sys(), MapKind::f, [](const MPoint&) { return 1.0; }, x0, spec);
  CHECK(one == 1.0);
  MPoint s1{{0.123, 0.456}, {1.0}, {0.89, 0.01}};
  double c = birkhoff_average(
      sys(), MapKind::f,
      [](const MPoint& p) { return std::cos(std::numbers::pi * p.y.y); }, s1,
      spec);
  CHECK(c == -1.0);
}

TEST_CASE("TS exponent of g matches the quadrature oracle") {
  OrbitSpec spec{2024, 100, 40000, 64};
  LyapReport rep = lyap_ts_g(sys(), 0, spec);
  double oracle = oracles::ts_space_average(sys().params().delta, 400);
  CHECK(rep.lambda_hat < 0.0);
  CHECK(std::fabs(rep.lambda_hat - oracle) <= 5.0 * rep.stderr_);
  CHECK(rep.has_oracle);
  CHECK(rep.oracle == doctest::Approx(oracle).epsilon(1e-6));

  // section 1 by the y -> y+1 symmetry: same sign and magnitude
  LyapReport rep1 = lyap_ts_g(sys(), 1, spec);
  CHECK(rep1.lambda_hat < 0.0);
  CHECK(std::fabs(rep1.lambda_hat - oracle) <= 5.0 * rep1.stderr_);
}

TEST_CASE("cu exponent of f: positive, above the displayed bound") {
  OrbitSpec spec{77, 100, 20000, 32};
  LyapReport rep = lyap_cu_f(sys(), 0, spec);
  const SystemParams& p = sys().params();
  double b2 = 2.0 * p.beta * p.beta;
  double bound = b2 * std::log(0.75) + (1.0 - b2) * std::log(p.sigma0());
  CHECK(rep.lambda_hat > 0.0);
  CHECK(rep.lambda_hat >= bound - 3.0 * rep.stderr_);
  // orbits essentially never meet the P support at desk scale
  CHECK(rep.lambda_hat ==
        doctest::Approx(std::log(p.sigma0())).epsilon(1e-9));
}

TEST_CASE("per-step values at fixed points") {
  JacobianEvaluator jac(sys());
  TorusPoint p1 = sys().anchor(Site::p1);
  TorusPoint q2 = sys().anchor(Site::q2);
  MPoint fp1{p1, {0.0}, p1};
  MPoint fq2{q2, {0.0}, q2};
  CHECK(std::log(jac.eu_multiplier(fp1)) ==
        doctest::Approx(std::log(0.75)).epsilon(1e-12));
  CHECK(std::log(jac.ts_multiplier(GPoint{fq2.x, fq2.y})) ==
        doctest::Approx(std::log(1.5)).epsilon(1e-12));
  CHECK(std::log(jac.ts_multiplier(GPoint{fp1.x, fp1.y})) ==
        doctest::Approx(std::log(0.5)).epsilon(1e-12));
}

TEST_CASE("TS exponent of f: projected and Benettin methods agree") {
  OrbitSpec spec{4242, 100, 40000, 48};
  LyapReport rep = lyap_ts_f(sys(), 0, spec);
  CHECK(!rep.methods_flagged);
  CHECK(rep.method_a < 0.0);
  CHECK(rep.method_b < 0.0);
  double comb = std::sqrt(rep.stderr_a * rep.stderr_a +
                          rep.stderr_b * rep.stderr_b);
  CHECK(std::fabs(rep.method_a - rep.method_b) <= 5.0 * comb);
  double oracle = oracles::ts_space_average(sys().params().delta, 400);
  CHECK(std::fabs(rep.method_a - oracle) <= 5.0 * rep.stderr_a);
}

TEST_CASE("full spectrum on a periodic product orbit is exact") {
  // a period-2 A^{n1}-orbit whose points carry no kernel action (outside
  // every delta-disk and P-support); the cocycle there is the exact diagonal.
  // Iteration drifts off the periodic orbit by sigma1 per step, so only a
  // handful of steps stay meaningful in double precision.
  const KanSystem& s = sys();
  JacobianEvaluator jac(s);
  TorusPoint x{1.0 / 3.0, 1.0 / 3.0};
  TorusPoint it = x;
  for (int i = 0; i < 4; ++i) {
    MPoint probe{it, {0.5}, it};
    REQUIRE(jac.ts_multiplier(GPoint{it, {0.5}}) == 1.0);
    REQUIRE(jac.eu_multiplier(probe) == s.sigma0());
    it = s.apply_cat_n1(it);
  }
  MPoint x0{x, {0.5}, x};
  auto lam = lyap_spectrum_full(s, x0, 4);
  double l1 = std::log(s.sigma1()), l0 = std::log(s.sigma0());
  CHECK(lam[0] == doctest::Approx(l1).epsilon(1e-10));
  CHECK(lam[1] == doctest::Approx(l0).epsilon(1e-10));
  CHECK(std::fabs(lam[2]) < 1e-10);
  CHECK(lam[3] == doctest::Approx(-l0).epsilon(1e-10));
  CHECK(lam[4] == doctest::Approx(-l1).epsilon(1e-10));
}

TEST_CASE("full spectrum at the fixed point (q1,0,q1)") {
  // same pseudo-orbit caveat: the hyperbolic drift leaves the plateau after
  // ~5 steps, within it the multipliers are the exact diagonal values
  TorusPoint q1 = sys().anchor(Site::q1);
  MPoint fp{q1, {0.0}, q1};
  auto lam = lyap_spectrum_full(sys(), fp, 5);
  double l1 = std::log(sys().sigma1()), l0 = std::log(sys().sigma0());
  CHECK(lam[0] == doctest::Approx(l1).epsilon(1e-9));
  CHECK(lam[1] == doctest::Approx(l0).epsilon(1e-9));
  CHECK(lam[2] == doctest::Approx(std::log(0.5)).epsilon(1e-9));
  CHECK(lam[3] == doctest::Approx(-l0).epsilon(1e-9));
  CHECK(lam[4] == doctest::Approx(-l1).epsilon(1e-9));
}

TEST_CASE("basin map: invariant starts, undecided shrinks, determinism") {
  OrbitSpec spec{99, 0, 20000, 400};
  std::vector<std::uint64_t> horizons{1000, 5000, 20000};
  BasinReport rep = basin_map(sys(), MapKind::f, spec, horizons);
  REQUIRE(rep.horizons.size() == 3);
  // undecided nonincreasing across the schedule
  CHECK(rep.fraction_undecided[1] <= rep.fraction_undecided[0] + 1e-12);
  CHECK(rep.fraction_undecided[2] <= rep.fraction_undecided[1] + 1e-12);
  // both basins visible already at modest scale
  CHECK(rep.fraction_section0.back() > 0.1);
  CHECK(rep.fraction_section1.back() > 0.1);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(rep.fraction_section0[i] + rep.fraction_section1[i] +
              rep.fraction_undecided[i] ==
          doctest::Approx(1.0).epsilon(1e-12));

  BasinReport again = basin_map(sys(), MapKind::f, spec, horizons);
  CHECK(again.fraction_section0 == rep.fraction_section0);
  CHECK(again.fraction_section1 == rep.fraction_section1);
}

TEST_CASE("worker count does not change results") {
  OrbitSpec spec{7, 10, 2000, 16};
  setenv("KANLAB_WORKERS", "1", 1);
  LyapReport one = lyap_ts_g(sys(), 0, spec);
  setenv("KANLAB_WORKERS", "2", 1);
  LyapReport two = lyap_ts_g(sys(), 0, spec);
  unsetenv("KANLAB_WORKERS");
  CHECK(one.lambda_hat == two.lambda_hat);
  CHECK(one.stderr_ == two.stderr_);
}

TEST_CASE("ustate sampler: uniformity on the section, errors") {
  OrbitSpec spec{31337, 0, 0, 64};
  GPoint center{TorusPoint{0.51, 0.17}, CirclePoint{0.0}};
  UStateReport rep =
      ustate_sampler(sys(), MapKind::g, 0, center, 0.2, 4000, 16, spec);
  CHECK(rep.uniform_pass);
  CHECK(rep.circle_mass_near_section == 1.0);  // started exactly on section
  double mass = 0;
  for (double v : rep.torus_hist) mass += v;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(
      ustate_sampler(sys(), MapKind::g, 0, center, 0.0, 100, 16, spec),
      std::invalid_argument);
  CHECK_THROWS_AS(
      ustate_sampler(sys(), MapKind::g, 0, center, 0.1, 0, 16, spec),
      std::invalid_argument);
}

TEST_CASE("ustate sampler: circle marginal collapses toward the section") {
  OrbitSpec spec{555, 0, 0, 48};
  GPoint center{TorusPoint{0.51, 0.17}, CirclePoint{0.12}};
  UStateReport rep =
      ustate_sampler(sys(), MapKind::g, 0, center, 0.2, 60000, 16, spec);
  CHECK(rep.circle_mass_near_section > 0.8);
}

TEST_CASE("manifold check: stable sets converge to the skeleton points") {
  ManifoldReport r1 = manifold_check(sys(), false, 200, 16, 2026);
  INFO("worst ratio ", r1.worst_ratio, " bound ", r1.ratio_bound,
       " floor ", r1.worst_final_distance);
  CHECK(r1.pass);
  CHECK(r1.worst_ratio <= r1.ratio_bound);
  ManifoldReport r2 = manifold_check(sys(), true, 200, 16, 2027);
  CHECK(r2.pass);

  // the fixed point itself stays put while the drift is representable
  TorusPoint q1 = sys().anchor(Site::q1);
  MPoint fp{q1, {0.0}, q1};
  MPoint it = fp;
  for (int i = 0; i < 4; ++i) {
    it = sys().f(it);
    CHECK(mpoint_distance(it, fp) < 1e-6);
  }
}

TEST_CASE("collapse: channel is exactly frozen for f, reports are paired") {
  OrbitSpec basin{12, 0, 4000, 100};
  OrbitSpec channel{12, 0, 4000, 200};
  std::vector<std::uint64_t> horizons{1000, 4000};
  CollapseReport rep =
      collapse_experiment(sys(), basin, channel, horizons, 0.5);
  for (double v : rep.channel_crossing_f) CHECK(v == 0.0);
  CHECK(rep.basin_f.seed == rep.basin_ftilde.seed);
  CHECK(rep.basin_f.samples == rep.basin_ftilde.samples);
  // determinism of the paired run
  CollapseReport again =
      collapse_experiment(sys(), basin, channel, horizons, 0.5);
  CHECK(again.channel_crossing_ftilde == rep.channel_crossing_ftilde);
  CHECK(again.basin_ftilde.fraction_section1 ==
        rep.basin_ftilde.fraction_section1);
}

TEST_CASE("unstable density: coverage grows and reaches the named points") {
  std::vector<std::uint64_t> steps{0, 2, 4, 6};
  std::vector<double> radii{0.25};
  CoverageReport rep = unstable_density(sys(), steps, radii, 3000, 4);
  REQUIRE(rep.coverage.size() == steps.size());
  for (std::size_t i = 1; i < steps.size(); ++i)
    CHECK(rep.coverage[i][0] >= rep.coverage[i - 1][0]);
  CHECK(rep.coverage[0][0] < 0.2);  // n=0: just the local patch
  CHECK(rep.coverage.back()[0] > 0.9);
  CHECK(rep.contains_p1);
  CHECK(rep.contains_q2);
}

TEST_CASE("chi-square critical values") {
  CHECK(chi2_critical_95(1023) == doctest::Approx(1098.5).epsilon(2e-3));
  CHECK(chi2_critical_95(255) == doctest::Approx(293.25).epsilon(2e-3));
}
