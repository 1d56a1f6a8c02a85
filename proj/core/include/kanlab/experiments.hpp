#ifndef KANLAB_EXPERIMENTS_HPP
#define KANLAB_EXPERIMENTS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "kanlab/maps.hpp"

namespace kanlab {

// ----------------------------------------------------------------- specs

struct OrbitSpec {
  std::uint64_t seed = 1;
  std::uint64_t burn_in = 0;
  std::uint64_t n = 100000;     // steps per sample
  std::uint64_t samples = 1000;
};

// ---------------------------------------------------------------- reports

struct LyapReport {
  std::string bundle;
  double lambda_hat = 0;  // per-step exponent
  double stderr_ = 0;     // across independent samples (or batch means)
  std::uint64_t n = 0;
  std::uint64_t samples = 0;
  double oracle = 0;        // analytic/quadrature reference when available
  bool has_oracle = false;
  bool below_resolution = false;  // |oracle| indistinguishable from noise
  // method cross-check (lyap_TS_f): A = projected average, B = Benettin
  double method_a = 0, method_b = 0, stderr_a = 0, stderr_b = 0;
  bool methods_flagged = false;  // disagreement beyond 5 combined stderr
  std::uint64_t certificate_hash = 0;
};

struct BasinReport {
  std::vector<std::uint64_t> horizons;
  std::vector<double> fraction_section0;
  std::vector<double> fraction_section1;
  std::vector<double> fraction_undecided;
  double threshold = 0.5;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::uint64_t certificate_hash = 0;
};

struct UStateReport {
  int bins = 32;
  std::vector<double> torus_hist;   // bins x bins, row-major, mass 1
  std::vector<double> circle_hist;  // bins over [0,2), mass 1
  std::uint64_t cesaro_steps = 0;
  std::uint64_t segment_points = 0;
  double segment_length = 0;
  double chi2 = 0;
  double chi2_critical = 0;  // 95% quantile at bins^2-1 dof
  bool uniform_pass = false;
  double circle_mass_near_section = 0;  // mass within 0.1 of the section
  std::uint64_t certificate_hash = 0;
};

struct ManifoldReport {
  std::string target;  // "q1-section0" or "q2-section1"
  std::uint64_t samples = 0;
  int steps = 0;
  double worst_final_distance = 0;
  double worst_ratio = 0;       // max per-step contraction after burn-in
  double ratio_bound = 0;       // max(1/sigma0, sup phi' on the window)
  bool monotone_after_burnin = false;
  bool pass = false;
  std::vector<MPoint> failures;
  std::uint64_t certificate_hash = 0;
};

struct CollapseReport {
  BasinReport basin_f;
  BasinReport basin_ftilde;
  // channel ensemble: crossing fraction (classified section 1) per horizon
  std::vector<std::uint64_t> horizons;
  std::vector<double> channel_crossing_f;
  std::vector<double> channel_crossing_ftilde;
  std::uint64_t channel_samples = 0;
  std::uint64_t seed = 0;
  std::uint64_t certificate_hash = 0;
};

struct CoverageReport {
  std::vector<std::uint64_t> steps;    // cumulative iterate counts
  std::vector<double> radii;
  // coverage[s][r]: fraction of the section grid within radii[r] of the
  // union of images up to steps[s]
  std::vector<std::vector<double>> coverage;
  bool contains_p1 = false;  // (p1,0,p1) within min radius at final step
  bool contains_q2 = false;  // (q2,0,q2)
  std::uint64_t samples = 0;
  std::uint64_t certificate_hash = 0;
};

// ------------------------------------------------------------- operations

// Time average of `obs` along the orbit of x0 after burn-in.
double birkhoff_average(const KanSystem& sys, MapKind kind,
                        const std::function<double(const MPoint&)>& obs,
                        const MPoint& x0, const OrbitSpec& spec);

// TS exponent of the factor g on a section, with the quadrature oracle.
LyapReport lyap_ts_g(const KanSystem& sys, int section, const OrbitSpec& spec);

// E^cu exponent of f: Birkhoff average of log(sigma0 dP/dd) (exact E^u
// column invariance). Oracle field holds the displayed lower bound.
LyapReport lyap_cu_f(const KanSystem& sys, int section, const OrbitSpec& spec);

// TS exponent of f, two methods cross-checked: (A) project to the factor
// and average log dQ/dc; (B) two-vector Benettin on the (TS, E^u) block,
// subdominant exponent.
LyapReport lyap_ts_f(const KanSystem& sys, int section, const OrbitSpec& spec);

// Full 5-exponent spectrum by QR Benettin along one orbit, sorted
// descending.
std::array<double, 5> lyap_spectrum_full(const KanSystem& sys,
                                         const MPoint& x0, std::uint64_t n);

// Classify Lebesgue-random starts by the Birkhoff average of cos(pi y).
BasinReport basin_map(const KanSystem& sys, MapKind kind,
                      const OrbitSpec& spec,
                      const std::vector<std::uint64_t>& horizons,
                      double threshold = 0.5);

// Cesaro pushforward of a uniform strong-unstable segment; first-torus
// marginal histogram and a chi^2 uniformity verdict.
UStateReport ustate_sampler(const KanSystem& sys, MapKind kind, int section,
                            const GPoint& segment_center,
                            double segment_length, std::uint64_t n, int bins,
                            const OrbitSpec& spec);

// Convergence of sampled stable-set points to the skeleton fixed points.
ManifoldReport manifold_check(const KanSystem& sys, bool second_target,
                              std::uint64_t samples, int steps,
                              std::uint64_t seed);

// Paired basin runs for f and ftilde plus the r-channel escape statistics.
CollapseReport collapse_experiment(const KanSystem& sys,
                                   const OrbitSpec& basin_spec,
                                   const OrbitSpec& channel_spec,
                                   const std::vector<std::uint64_t>& horizons,
                                   double threshold = 0.5);

// Forward images of a local unstable patch of (q1,0,q1); cumulative
// coverage of the section at each radius.
CoverageReport unstable_density(const KanSystem& sys,
                                const std::vector<std::uint64_t>& steps,
                                const std::vector<double>& radii,
                                std::uint64_t samples, std::uint64_t seed);

// 95% chi-square quantile, Wilson-Hilferty approximation.
double chi2_critical_95(int dof);

}  // namespace kanlab

#endif  // KANLAB_EXPERIMENTS_HPP
