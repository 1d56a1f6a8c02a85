#include "kanlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kanlab/certify.hpp"
#include "kanlab/circle_map.hpp"
#include "kanlab/jacobian.hpp"
#include "kanlab/parallel.hpp"
#include "kanlab/rng.hpp"

namespace kanlab {

namespace {

struct MeanStderr {
  double mean = 0, se = 0;
};

MeanStderr reduce(const std::vector<double>& xs) {
  MeanStderr r;
  double n = static_cast<double>(xs.size());
  for (double x : xs) r.mean += x;
  r.mean /= n;
  double var = 0;
  for (double x : xs) var += (x - r.mean) * (x - r.mean);
  if (xs.size() > 1) r.se = std::sqrt(var / (n - 1) / n);
  return r;
}

MPoint random_start(CounterRng& rng, int section) {
  MPoint p{TorusPoint{rng.uniform(), rng.uniform()},
           CirclePoint{static_cast<double>(section)},
           TorusPoint{rng.uniform(), rng.uniform()}};
  if (section < 0) p.y = CirclePoint{rng.uniform(0.0, 2.0)};
  return p;
}

// Implementation-route value of the TS space average (the independent
// quadrature oracle lives in the test suite).
double ts_oracle(double delta) { return symmetry_integral(delta, 20001); }

}  // namespace

double chi2_critical_95(int dof) {
  // Wilson-Hilferty: chi2_p ~ dof * (1 - 2/(9 dof) + z_p sqrt(2/(9 dof)))^3
  const double z95 = 1.6448536269514722;
  double t = 2.0 / (9.0 * dof);
  double c = 1.0 - t + z95 * std::sqrt(t);
  return dof * c * c * c;
}

double birkhoff_average(const KanSystem& sys, MapKind kind,
                        const std::function<double(const MPoint&)>& obs,
                        const MPoint& x0, const OrbitSpec& spec) {
  sys.params().require_certified();
  MPoint p = x0;
  for (std::uint64_t i = 0; i < spec.burn_in; ++i) p = sys.apply(kind, p);
  double acc = 0;
  for (std::uint64_t i = 0; i < spec.n; ++i) {
    acc += obs(p);
    p = sys.apply(kind, p);
  }
  return acc / static_cast<double>(spec.n);
}

LyapReport lyap_ts_g(const KanSystem& sys, int section,
                     const OrbitSpec& spec) {
  sys.params().require_certified();
  JacobianEvaluator jac(sys);
  std::vector<double> means(spec.samples);
  parallel_for(spec.samples, [&](std::uint64_t s) {
    CounterRng rng(spec.seed, s);
    GPoint q{TorusPoint{rng.uniform(), rng.uniform()},
             CirclePoint{static_cast<double>(section)}};
    for (std::uint64_t i = 0; i < spec.burn_in; ++i) q = sys.g(q);
    double acc = 0;
    for (std::uint64_t i = 0; i < spec.n; ++i) {
      acc += std::log(jac.ts_multiplier(q));
      q = sys.g(q);
    }
    means[s] = acc / static_cast<double>(spec.n);
  });
  MeanStderr ms = reduce(means);
  LyapReport rep;
  rep.bundle = "TS(g) section " + std::to_string(section);
  rep.lambda_hat = ms.mean;
  rep.stderr_ = ms.se;
  rep.n = spec.n;
  rep.samples = spec.samples;
  rep.oracle = ts_oracle(sys.params().delta);
  rep.has_oracle = true;
  rep.below_resolution = std::fabs(rep.oracle) < 3.0 * ms.se;
  rep.certificate_hash = sys.params().certificate_hash;
  return rep;
}

LyapReport lyap_cu_f(const KanSystem& sys, int section,
                     const OrbitSpec& spec) {
  sys.params().require_certified();
  JacobianEvaluator jac(sys);
  std::vector<double> means(spec.samples);
  parallel_for(spec.samples, [&](std::uint64_t s) {
    CounterRng rng(spec.seed, s);
    MPoint p = random_start(rng, section);
    for (std::uint64_t i = 0; i < spec.burn_in; ++i) p = sys.f(p);
    double acc = 0;
    for (std::uint64_t i = 0; i < spec.n; ++i) {
      acc += std::log(jac.eu_multiplier(p));
      p = sys.f(p);
    }
    means[s] = acc / static_cast<double>(spec.n);
  });
  MeanStderr ms = reduce(means);
  LyapReport rep;
  rep.bundle = "Ecu(f) section " + std::to_string(section);
  rep.lambda_hat = ms.mean;
  rep.stderr_ = ms.se;
  rep.n = spec.n;
  rep.samples = spec.samples;
  double b2 = 2.0 * sys.params().beta * sys.params().beta;
  rep.oracle = b2 * std::log(0.75) + (1.0 - b2) * std::log(sys.sigma0());
  rep.has_oracle = true;  // displayed lower bound, not an equality target
  rep.certificate_hash = sys.params().certificate_hash;
  return rep;
}

LyapReport lyap_ts_f(const KanSystem& sys, int section,
                     const OrbitSpec& spec) {
  sys.params().require_certified();
  JacobianEvaluator jac(sys);
  const std::uint64_t batch = 1000;  // batch means absorb short correlations
  std::vector<double> mean_a(spec.samples), mean_b(spec.samples);
  std::vector<double> var_b(spec.samples);
  parallel_for(spec.samples, [&](std::uint64_t s) {
    CounterRng rng(spec.seed, s);
    MPoint p = random_start(rng, section);
    for (std::uint64_t i = 0; i < spec.burn_in; ++i) p = sys.f(p);
    // method A: projected multiplier; method B: QR on the (TS,Eu) block
    double acc_a = 0;
    double v1c = std::numbers::sqrt2 / 2, v1d = std::numbers::sqrt2 / 2;
    double v2c = std::numbers::sqrt2 / 2, v2d = -std::numbers::sqrt2 / 2;
    double acc_b = 0;
    std::vector<double> batches;
    double batch_acc = 0;
    for (std::uint64_t i = 0; i < spec.n; ++i) {
      acc_a += std::log(jac.ts_multiplier(GPoint{p.x, p.y}));
      auto blk = jac.block_ts_eu(p);
      // v1 through the block, normalized (tracks the dominant direction)
      double u1c = blk[0][0] * v1c + blk[0][1] * v1d;
      double u1d = blk[1][0] * v1c + blk[1][1] * v1d;
      double r11 = std::sqrt(u1c * u1c + u1d * u1d);
      v1c = u1c / r11;
      v1d = u1d / r11;
      // v2 through the block, Gram-Schmidt against v1
      double u2c = blk[0][0] * v2c + blk[0][1] * v2d;
      double u2d = blk[1][0] * v2c + blk[1][1] * v2d;
      double proj = u2c * v1c + u2d * v1d;
      u2c -= proj * v1c;
      u2d -= proj * v1d;
      double r22 = std::sqrt(u2c * u2c + u2d * u2d);
      v2c = u2c / r22;
      v2d = u2d / r22;
      acc_b += std::log(r22);
      batch_acc += std::log(r22);
      if ((i + 1) % batch == 0) {
        batches.push_back(batch_acc / batch);
        batch_acc = 0;
      }
      p = sys.f(p);
    }
    mean_a[s] = acc_a / static_cast<double>(spec.n);
    mean_b[s] = acc_b / static_cast<double>(spec.n);
    MeanStderr bm = reduce(batches);
    var_b[s] = bm.se;
  });
  MeanStderr a = reduce(mean_a), b = reduce(mean_b);
  LyapReport rep;
  rep.bundle = "TS(f) section " + std::to_string(section);
  rep.method_a = a.mean;
  rep.method_b = b.mean;
  rep.stderr_a = a.se;
  rep.stderr_b = b.se;
  rep.lambda_hat = a.mean;
  rep.stderr_ = a.se;
  rep.n = spec.n;
  rep.samples = spec.samples;
  rep.oracle = ts_oracle(sys.params().delta);
  rep.has_oracle = true;
  double comb = std::sqrt(a.se * a.se + b.se * b.se);
  rep.methods_flagged = std::fabs(a.mean - b.mean) > 5.0 * comb;
  rep.below_resolution = std::fabs(rep.oracle) < 3.0 * a.se;
  rep.certificate_hash = sys.params().certificate_hash;
  return rep;
}

std::array<double, 5> lyap_spectrum_full(const KanSystem& sys,
                                         const MPoint& x0, std::uint64_t n) {
  sys.params().require_certified();
  JacobianEvaluator jac(sys);
  // modified Gram-Schmidt QR iteration on the full frame
  std::array<Vec5, 5> q;
  for (int i = 0; i < 5; ++i) {
    q[i] = Vec5{};
    q[i][i] = 1.0;
  }
  std::array<double, 5> acc{};
  MPoint p = x0;
  for (std::uint64_t step = 0; step < n; ++step) {
    Jac5 m = jac.df(p);
    std::array<Vec5, 5> w;
    for (int i = 0; i < 5; ++i) w[i] = mat5_apply(m, q[i]);
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < i; ++j) {
        double d = vec5_dot(w[i], q[j]);
        for (int k = 0; k < 5; ++k) w[i][k] -= d * q[j][k];
      }
      double r = vec5_norm(w[i]);
      acc[i] += std::log(r);
      for (int k = 0; k < 5; ++k) q[i][k] = w[i][k] / r;
    }
    p = sys.f(p);
  }
  std::array<double, 5> out;
  for (int i = 0; i < 5; ++i) out[i] = acc[i] / static_cast<double>(n);
  std::sort(out.begin(), out.end(), std::greater<double>());
  return out;
}

BasinReport basin_map(const KanSystem& sys, MapKind kind,
                      const OrbitSpec& spec,
                      const std::vector<std::uint64_t>& horizons,
                      double threshold) {
  sys.params().require_certified();
  if (horizons.empty()) throw std::invalid_argument("basin_map: no horizons");
  std::vector<std::uint64_t> hs = horizons;
  std::sort(hs.begin(), hs.end());
  const std::uint64_t max_h = hs.back();

  // classification per sample per horizon: 0, 1, or -1 undecided
  std::vector<std::vector<int>> cls(hs.size(),
                                    std::vector<int>(spec.samples));
  parallel_for(spec.samples, [&](std::uint64_t s) {
    CounterRng rng(spec.seed, s);
    MPoint p = random_start(rng, -1);
    double acc = 0;
    std::size_t hi = 0;
    for (std::uint64_t i = 0; i < max_h; ++i) {
      acc += std::cos(std::numbers::pi * p.y.y);
      p = sys.apply(kind, p);
      while (hi < hs.size() && i + 1 == hs[hi]) {
        double avg = acc / static_cast<double>(i + 1);
        cls[hi][s] = avg >= threshold ? 0 : (avg <= -threshold ? 1 : -1);
        ++hi;
      }
    }
  });

  BasinReport rep;
  rep.horizons = hs;
  rep.threshold = threshold;
  rep.samples = spec.samples;
  rep.seed = spec.seed;
  rep.certificate_hash = sys.params().certificate_hash;
  for (std::size_t hi = 0; hi < hs.size(); ++hi) {
    double n0 = 0, n1 = 0, nu = 0;
    for (int c : cls[hi]) (c == 0 ? n0 : (c == 1 ? n1 : nu)) += 1.0;
    double n = static_cast<double>(spec.samples);
    rep.fraction_section0.push_back(n0 / n);
    rep.fraction_section1.push_back(n1 / n);
    rep.fraction_undecided.push_back(nu / n);
  }
  return rep;
}

UStateReport ustate_sampler(const KanSystem& sys, MapKind kind, int section,
                            const GPoint& segment_center,
                            double segment_length, std::uint64_t n, int bins,
                            const OrbitSpec& spec) {
  sys.params().require_certified();
  if (segment_length <= 0.0)
    throw std::invalid_argument("ustate_sampler: zero-length segment");
  if (n == 0) throw std::invalid_argument("ustate_sampler: n must be >= 1");

  const EigenFrame& frame = sys.frame();
  std::vector<std::vector<std::uint32_t>> hists(
      spec.samples, std::vector<std::uint32_t>());
  std::vector<std::vector<std::uint32_t>> yhists(spec.samples);
  const int B = bins;
  parallel_for(spec.samples, [&](std::uint64_t s) {
    CounterRng rng(spec.seed, s);
    double t = rng.uniform(-0.5, 0.5) * segment_length;
    Vec2 w = frame.from_frame({t, 0});
    GPoint q{TorusPoint::reduced(segment_center.x.u + w.x,
                                 segment_center.x.v + w.y),
             segment_center.y};
    std::vector<std::uint32_t> h(B * B, 0), hy(B, 0);
    for (std::uint64_t i = 0; i < n; ++i) {
      int bu = std::min(B - 1, static_cast<int>(q.x.u * B));
      int bv = std::min(B - 1, static_cast<int>(q.x.v * B));
      h[bu * B + bv]++;
      hy[std::min(B - 1, static_cast<int>(q.y.y / 2.0 * B))]++;
      q = sys.apply_factor(kind, q);
    }
    hists[s] = std::move(h);
    yhists[s] = std::move(hy);
  });

  UStateReport rep;
  rep.bins = B;
  rep.cesaro_steps = n;
  rep.segment_points = spec.samples;
  rep.segment_length = segment_length;
  rep.torus_hist.assign(B * B, 0.0);
  rep.circle_hist.assign(B, 0.0);
  double total = static_cast<double>(n) * spec.samples;
  for (std::uint64_t s = 0; s < spec.samples; ++s) {
    for (int i = 0; i < B * B; ++i) rep.torus_hist[i] += hists[s][i];
    for (int i = 0; i < B; ++i) rep.circle_hist[i] += yhists[s][i];
  }
  for (double& v : rep.torus_hist) v /= total;
  for (double& v : rep.circle_hist) v /= total;

  double expected = total / (B * B);
  double chi2 = 0;
  for (int i = 0; i < B * B; ++i) {
    double o = rep.torus_hist[i] * total;
    chi2 += (o - expected) * (o - expected) / expected;
  }
  rep.chi2 = chi2;
  rep.chi2_critical = chi2_critical_95(B * B - 1);
  rep.uniform_pass = chi2 < rep.chi2_critical;

  // circle-marginal mass within 0.1 of the section
  double mass = 0;
  for (int i = 0; i < B; ++i) {
    double y = (i + 0.5) * 2.0 / B;
    double d = std::fabs(y - section);
    d = std::min(d, 2.0 - d);
    if (d < 0.1) mass += rep.circle_hist[i];
  }
  rep.circle_mass_near_section = mass;
  rep.certificate_hash = sys.params().certificate_hash;
  return rep;
}

ManifoldReport manifold_check(const KanSystem& sys, bool second_target,
                              std::uint64_t samples, int steps,
                              std::uint64_t seed) {
  sys.params().require_certified();
  const double delta = sys.params().delta;
  const EigenFrame& frame = sys.frame();
  const Site site = second_target ? Site::q2 : Site::q1;
  const TorusPoint anchor = sys.anchor(site);
  const double ysec = second_target ? 1.0 : 0.0;
  const MPoint target{anchor, CirclePoint{ysec}, anchor};

  // Forward orbits lose log2(sigma1) bits per step along E^uu, so a sample
  // tracks the stable set only until rounding noise overtakes the contracting
  // distance. Convergence is judged down to that per-sample noise floor:
  // the distance must fall by floor_factor with monotone decay, and the
  // per-step ratio inside the measurement band must respect the bound.
  const double floor_factor = 12.0;
  const double y_range = 0.5;
  const double band_hi = 0.3;
  const double ratio_bound =
      std::max(1.0 / sys.sigma0(), phi_deriv(y_range * 0.8)) + 0.05;

  std::vector<double> floors(samples), ratios(samples, 0.0);
  std::vector<int> converged(samples, 0), monotone(samples, 1);
  std::vector<MPoint> starts(samples);
  parallel_for(samples, [&](std::uint64_t s) {
    CounterRng rng(seed, s);
    // F^ss_{delta/2}(q) x (-1,1) x F^s(q); the y window keeps the slow
    // escape from the repelling section out of the tracked steps
    ChartCoords xc{0.0, rng.uniform(-0.5 * delta, 0.5 * delta)};
    double ylift = ysec + rng.uniform(-y_range, y_range);
    ChartCoords zc{0.0, rng.uniform(-0.45, 0.45)};
    MPoint p{leaf_point(anchor, xc, frame), CirclePoint::reduced(ylift),
             leaf_point(anchor, zc, frame)};
    starts[s] = p;
    double d0 = mpoint_distance(p, target);
    double prev = d0, best = d0;
    bool mono = true;
    double worst_ratio = 0;
    for (int i = 0; i < steps; ++i) {
      p = sys.f(p);
      double d = mpoint_distance(p, target);
      if (d > 2.0 * best) break;  // noise floor reached
      if (d <= band_hi && prev > 4.0 * d0 / floor_factor && prev > 1e-13)
        worst_ratio = std::max(worst_ratio, d / prev);
      if (d > prev * 1.01 && prev > d0 / floor_factor) mono = false;
      best = std::min(best, d);
      prev = d;
    }
    floors[s] = best;
    ratios[s] = worst_ratio;
    monotone[s] = mono ? 1 : 0;
    converged[s] = best <= d0 / floor_factor ? 1 : 0;
  });

  ManifoldReport rep;
  rep.target = second_target ? "q2-section1" : "q1-section0";
  rep.samples = samples;
  rep.steps = steps;
  rep.worst_final_distance = *std::max_element(floors.begin(), floors.end());
  rep.worst_ratio = *std::max_element(ratios.begin(), ratios.end());
  rep.ratio_bound = ratio_bound;
  rep.monotone_after_burnin = true;
  for (std::uint64_t s = 0; s < samples; ++s) {
    if (!converged[s] || !monotone[s] || ratios[s] > ratio_bound) {
      rep.failures.push_back(starts[s]);
      rep.monotone_after_burnin = rep.monotone_after_burnin && monotone[s];
    }
  }
  rep.pass = rep.failures.empty();
  rep.certificate_hash = sys.params().certificate_hash;
  return rep;
}

CollapseReport collapse_experiment(const KanSystem& sys,
                                   const OrbitSpec& basin_spec,
                                   const OrbitSpec& channel_spec,
                                   const std::vector<std::uint64_t>& horizons,
                                   double threshold) {
  sys.params().require_certified();
  sys.params().require_r();

  CollapseReport rep;
  rep.horizons = horizons;
  std::sort(rep.horizons.begin(), rep.horizons.end());
  rep.seed = basin_spec.seed;
  rep.channel_samples = channel_spec.samples;
  rep.certificate_hash = sys.params().certificate_hash;

  rep.basin_f = basin_map(sys, MapKind::f, basin_spec, rep.horizons, threshold);
  rep.basin_ftilde =
      basin_map(sys, MapKind::ftilde, basin_spec, rep.horizons, threshold);

  // channel ensemble: x uniform in the eps/10 box of r, y = 0 exactly,
  // z Lebesgue; paired between f and ftilde by construction (same seeds).
  const TorusPoint r = *sys.params().r;
  const double w = sys.params().eps / 10.0;
  const EigenFrame& frame = sys.frame();
  const std::uint64_t max_h = rep.horizons.back();

  std::vector<std::vector<int>> crossed_f(rep.horizons.size(),
                                          std::vector<int>(channel_spec.samples));
  auto crossed_ft = crossed_f;
  parallel_for(channel_spec.samples, [&](std::uint64_t s) {
    CounterRng rng(channel_spec.seed, s);
    ChartCoords c{rng.uniform(-w, w), rng.uniform(-w, w)};
    MPoint start{leaf_point(r, c, frame), CirclePoint{0.0},
                 TorusPoint{rng.uniform(), rng.uniform()}};
    for (int variant = 0; variant < 2; ++variant) {
      MPoint p = start;
      double acc = 0;
      std::size_t hi = 0;
      auto& out = variant == 0 ? crossed_f : crossed_ft;
      for (std::uint64_t i = 0; i < max_h; ++i) {
        acc += std::cos(std::numbers::pi * p.y.y);
        p = variant == 0 ? sys.f(p) : sys.ftilde(p);
        while (hi < rep.horizons.size() && i + 1 == rep.horizons[hi]) {
          out[hi][s] = (acc / static_cast<double>(i + 1)) <= -threshold;
          ++hi;
        }
      }
    }
  });
  for (std::size_t hi = 0; hi < rep.horizons.size(); ++hi) {
    double cf = 0, ct = 0;
    for (std::uint64_t s = 0; s < channel_spec.samples; ++s) {
      cf += crossed_f[hi][s];
      ct += crossed_ft[hi][s];
    }
    rep.channel_crossing_f.push_back(cf / channel_spec.samples);
    rep.channel_crossing_ftilde.push_back(ct / channel_spec.samples);
  }
  return rep;
}

CoverageReport unstable_density(const KanSystem& sys,
                                const std::vector<std::uint64_t>& steps,
                                const std::vector<double>& radii,
                                std::uint64_t samples, std::uint64_t seed) {
  sys.params().require_certified();
  const double delta = sys.params().delta;
  const EigenFrame& frame = sys.frame();
  const TorusPoint q1 = sys.anchor(Site::q1);

  std::vector<std::uint64_t> schedule = steps;
  std::sort(schedule.begin(), schedule.end());
  const std::uint64_t max_n = schedule.back();
  const double rho_min = *std::min_element(radii.begin(), radii.end());
  const int G = std::max(4, static_cast<int>(std::ceil(1.0 / rho_min)));

  // occupancy of the 4-D section grid, cumulative over iterates
  std::vector<std::vector<MPoint>> orbits(samples);
  parallel_for(samples, [&](std::uint64_t s) {
    CounterRng rng(seed, s);
    ChartCoords xc{rng.uniform(-0.5 * delta, 0.5 * delta), 0.0};
    ChartCoords zc{rng.uniform(-0.5 * delta, 0.5 * delta), 0.0};
    MPoint p{leaf_point(q1, xc, frame), CirclePoint{0.0},
             leaf_point(q1, zc, frame)};
    std::vector<MPoint> orbit;
    orbit.reserve(max_n + 1);
    orbit.push_back(p);
    for (std::uint64_t i = 0; i < max_n; ++i) {
      p = sys.f(p);
      orbit.push_back(p);
    }
    orbits[s] = std::move(orbit);
  });

  // bucket points by 4-D cell for radius queries
  auto cell_of = [&](const MPoint& p) {
    auto idx = [&](double x) {
      int i = static_cast<int>(x * G);
      return std::min(G - 1, std::max(0, i));
    };
    return ((static_cast<std::uint64_t>(idx(p.x.u)) * G + idx(p.x.v)) * G +
            idx(p.z.u)) * G + idx(p.z.v);
  };

  CoverageReport rep;
  rep.steps = schedule;
  rep.radii = radii;
  rep.samples = samples;
  rep.certificate_hash = sys.params().certificate_hash;

  std::vector<std::vector<std::uint32_t>> buckets(
      static_cast<std::size_t>(G) * G * G * G);
  std::vector<MPoint> flat;

  auto torus_gap = [](double a, double b) {
    double d = std::fabs(a - b);
    return std::min(d, 1.0 - d);
  };

  std::uint64_t from = 0;
  for (std::uint64_t hi = 0; hi < schedule.size(); ++hi) {
    // add iterates up to schedule[hi] (cumulative union of images)
    for (std::uint64_t s = 0; s < samples; ++s)
      for (std::uint64_t i = from; i <= schedule[hi]; ++i) {
        buckets[cell_of(orbits[s][i])].push_back(
            static_cast<std::uint32_t>(flat.size()));
        flat.push_back(orbits[s][i]);
      }
    from = schedule[hi] + 1;

    std::vector<double> cov_row;
    for (double rho : radii) {
      int reach = static_cast<int>(std::ceil(rho * G)) + 1;
      std::uint64_t covered = 0;
      std::vector<std::uint64_t> covered_slots(
          static_cast<std::size_t>(G) * G * G * G, 0);
      parallel_for(static_cast<std::uint64_t>(G) * G * G * G,
                   [&](std::uint64_t cell) {
        int cu = static_cast<int>(cell / (G * G * G)) % G;
        int cv = static_cast<int>(cell / (G * G)) % G;
        int cz = static_cast<int>(cell / G) % G;
        int cw = static_cast<int>(cell) % G;
        MPoint center{TorusPoint{(cu + 0.5) / G, (cv + 0.5) / G},
                      CirclePoint{0.0},
                      TorusPoint{(cz + 0.5) / G, (cw + 0.5) / G}};
        bool found = false;
        for (int du = -reach; du <= reach && !found; ++du)
          for (int dv = -reach; dv <= reach && !found; ++dv)
            for (int dz = -reach; dz <= reach && !found; ++dz)
              for (int dw = -reach; dw <= reach && !found; ++dw) {
                std::uint64_t nb =
                    ((static_cast<std::uint64_t>((cu + du + G) % G) * G +
                      (cv + dv + G) % G) * G + (cz + dz + G) % G) * G +
                    (cw + dw + G) % G;
                for (std::uint32_t pi : buckets[nb]) {
                  const MPoint& pt = flat[pi];
                  double d1u = torus_gap(pt.x.u, center.x.u);
                  double d1v = torus_gap(pt.x.v, center.x.v);
                  double d2u = torus_gap(pt.z.u, center.z.u);
                  double d2v = torus_gap(pt.z.v, center.z.v);
                  if (d1u * d1u + d1v * d1v + d2u * d2u + d2v * d2v <=
                      rho * rho) {
                    found = true;
                    break;
                  }
                }
              }
        covered_slots[cell] = found ? 1 : 0;
      });
      for (auto v : covered_slots) covered += v;
      cov_row.push_back(static_cast<double>(covered) /
                        (static_cast<double>(G) * G * G * G));
    }
    rep.coverage.push_back(cov_row);
  }

  // the two named points of the skeleton closure claim
  const TorusPoint p1 = sys.anchor(Site::p1);
  const TorusPoint q2 = sys.anchor(Site::q2);
  MPoint tp1{p1, CirclePoint{0.0}, p1};
  MPoint tq2{q2, CirclePoint{0.0}, q2};
  double best1 = 1e300, best2 = 1e300;
  for (const MPoint& pt : flat) {
    best1 = std::min(best1, mpoint_distance(pt, tp1));
    best2 = std::min(best2, mpoint_distance(pt, tq2));
  }
  rep.contains_p1 = best1 <= rho_min;
  rep.contains_q2 = best2 <= rho_min;
  return rep;
}

}  // namespace kanlab
