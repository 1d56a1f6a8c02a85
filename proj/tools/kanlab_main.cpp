// kanlab: build, certify, and run experiments on the Kan-type skew product
// family. Subcommands write JSON reports, CSV series, plot data, and a run
// manifest into the output directory.
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "kanlab/certify.hpp"
#include "kanlab/experiments.hpp"
#include "kanlab/heteroclinic.hpp"
#include "kanlab/io.hpp"
#include "kanlab/jacobian.hpp"
#include "kanlab/maps.hpp"
#include "kanlab/rng.hpp"

namespace fs = std::filesystem;
using namespace kanlab;

namespace {

constexpr const char* kVersion = "1.0.0";

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::string preset = "desk";
  std::uint64_t seed = 1;
  std::uint64_t samples = 0;  // 0 = subcommand default
  std::uint64_t steps = 0;
  std::string horizons;
  int section = 0;
  std::string bundle = "ts";
  bool skip_cones = false;
};

struct Session {
  SystemParams params;
  CertificateReport certificate;
  ConfigFile config;
  std::chrono::steady_clock::time_point t0;

  double wall() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         t0).count();
  }
};

std::vector<std::uint64_t> parse_horizons(const std::string& s,
                                          std::vector<std::uint64_t> fb) {
  if (s.empty()) return fb;
  std::vector<std::uint64_t> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoull(tok));
  return out;
}

Session open_session(const CommonArgs& args, bool need_r,
                     bool need_certificate = true) {
  Session s;
  s.t0 = std::chrono::steady_clock::now();
  if (!args.config_path.empty()) {
    s.config = ConfigFile::load(args.config_path);
    s.params = s.config.to_params();
  } else {
    s.params = preset_by_name(args.preset);
  }
  if (need_r) s.params.require_r();
  if (need_certificate) {
    CertifyOptions opts;
    opts.with_cones = !args.skip_cones &&
                      s.config.get("certify.with_cones", "1") != "0";
    opts.grid_1d = static_cast<int>(
        s.config.get_u64("certify.grid_1d", opts.grid_1d));
    opts.grid_q =
        static_cast<int>(s.config.get_u64("certify.grid_q", opts.grid_q));
    opts.grid_p =
        static_cast<int>(s.config.get_u64("certify.grid_p", opts.grid_p));
    opts.cone_samples =
        s.config.get_u64("certify.cone_samples", opts.cone_samples);
    s.certificate = certify_system(s.params, opts);
    if (!s.certificate.overall) {
      std::cerr << "certification FAILED:\n";
      for (const auto& c : s.certificate.checks)
        if (!c.pass)
          std::cerr << "  " << c.name << " (margin " << c.margin << ")\n";
      throw std::runtime_error("parameters failed certification");
    }
  }
  fs::create_directories(args.out_dir);
  return s;
}

void write_manifest(Session& s, const CommonArgs& args,
                    const std::string& subcommand,
                    std::vector<std::string> outputs) {
  RunManifest m;
  m.tool_version = kVersion;
  m.subcommand = subcommand;
  m.params = s.params;
  m.certificate_hash = s.params.certificate_hash;
  m.seed = args.seed;
  m.wall_clock_sec = s.wall();
  m.precision_loss_bits_per_step = std::log2(s.params.sigma1());
  m.outputs = std::move(outputs);
  std::string path = args.out_dir + "/manifest-" + subcommand + ".json";
  write_text_file(path, m.to_json());
  std::cout << "wrote " << path << "\n";
}

OrbitSpec spec_of(const CommonArgs& args, const Session& s,
                  std::uint64_t def_samples, std::uint64_t def_steps,
                  std::uint64_t def_burn = 0) {
  OrbitSpec spec;
  spec.seed = args.seed;
  spec.samples = args.samples ? args.samples
                              : s.config.get_u64("run.samples", def_samples);
  spec.n = args.steps ? args.steps : s.config.get_u64("run.steps", def_steps);
  spec.burn_in = s.config.get_u64("run.burn_in", def_burn);
  return spec;
}

int cmd_certify(const CommonArgs& args) {
  Session s;
  s.t0 = std::chrono::steady_clock::now();
  if (!args.config_path.empty()) {
    s.config = ConfigFile::load(args.config_path);
    s.params = s.config.to_params();
  } else {
    s.params = preset_by_name(args.preset);
  }
  CertifyOptions opts;
  opts.with_cones = !args.skip_cones;
  CertificateReport rep = certify_system(s.params, opts);
  fs::create_directories(args.out_dir);
  std::string path = args.out_dir + "/certificate.json";
  write_text_file(path, rep.to_json());
  for (const auto& c : rep.checks)
    std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << "  margin="
              << c.margin << "\n";
  std::cout << (rep.overall ? "certificate OK: " : "certificate FAILED: ")
            << path << "\n";
  write_manifest(s, args, "certify", {path});
  return rep.overall ? 0 : 1;
}

int cmd_fixed_points(const CommonArgs& args) {
  Session s = open_session(args, false);
  KanSystem sys(s.params);
  JacobianEvaluator jac(sys);
  double s0 = sys.sigma0(), s1 = sys.sigma1();
  struct Case {
    const char* name;
    Site site;
    double y;
    double eu, ts;
  };
  const Case cases[] = {
      {"(p1,0,p1)", Site::p1, 0.0, 0.75, 0.5},
      {"(p2,1,p2)", Site::p2, 1.0, 0.75, 0.5},
      {"(q1,0,q1)", Site::q1, 0.0, s0, 0.5},
      {"(q2,1,q2)", Site::q2, 1.0, s0, 0.5},
      {"(q1,1,q1)", Site::q1, 1.0, s0, 1.5},
      {"(q2,0,q2)", Site::q2, 0.0, s0, 1.5},
  };
  double worst_diag = 0, worst_off = 0;
  std::vector<std::vector<double>> rows;
  for (const auto& c : cases) {
    TorusPoint a = sys.anchor(c.site);
    MPoint p{a, {c.y}, a};
    Jac5 m = jac.df(p);
    Vec5 want{s1, c.eu, c.ts, 1.0 / s0, 1.0 / s1};
    double dd = 0, oo = 0;
    for (int r = 0; r < 5; ++r)
      for (int cc = 0; cc < 5; ++cc) {
        if (r == cc)
          dd = std::max(dd, std::fabs(m[r][r] - want[r]) / want[r]);
        else
          oo = std::max(oo, std::fabs(m[r][cc]));
      }
    worst_diag = std::max(worst_diag, dd);
    worst_off = std::max(worst_off, oo);
    std::cout << c.name << "  diag rel dev " << dd << "  max offdiag " << oo
              << "\n";
    rows.push_back({m[0][0], m[1][1], m[2][2], m[3][3], m[4][4], dd, oo});
  }
  std::string csv = args.out_dir + "/fixed_points.csv";
  write_csv(csv,
            {"jac_uu", "jac_u", "jac_ts", "jac_s", "jac_ss",
             "diag_rel_dev", "max_offdiag"},
            rows, s.params.certificate_hash);
  std::cout << "max diagonal rel deviation " << worst_diag
            << ", max off-diagonal " << worst_off << "\n";
  write_manifest(s, args, "fixed-points", {csv});
  return (worst_diag <= 1e-9 && worst_off <= 1e-12) ? 0 : 1;
}

int cmd_lyapunov(const CommonArgs& args) {
  Session s = open_session(args, false);
  KanSystem sys(s.params);
  OrbitSpec spec = spec_of(args, s, 1000, 100000, 100);
  LyapReport rep;
  if (args.bundle == "ts") {
    rep = lyap_ts_g(sys, args.section, spec);
  } else if (args.bundle == "ts-f") {
    rep = lyap_ts_f(sys, args.section, spec);
  } else if (args.bundle == "cu") {
    rep = lyap_cu_f(sys, args.section, spec);
  } else {
    std::cerr << "unknown bundle '" << args.bundle
              << "' (expected ts | ts-f | cu)\n";
    return 2;
  }
  std::string path = args.out_dir + "/lyapunov-" + args.bundle + "-s" +
                     std::to_string(args.section) + ".json";
  write_text_file(path, lyap_report_json(rep));
  std::cout << rep.bundle << ": lambda = " << rep.lambda_hat << " +- "
            << rep.stderr_;
  if (rep.has_oracle) std::cout << "  (reference " << rep.oracle << ")";
  std::cout << "\n";
  write_manifest(s, args, "lyapunov", {path});
  return 0;
}

int cmd_basins(const CommonArgs& args, bool perturbed) {
  Session s = open_session(args, perturbed);
  KanSystem sys(s.params);
  OrbitSpec spec = spec_of(args, s, 10000, 0);
  auto horizons = parse_horizons(
      args.horizons,
      s.config.get_u64_list("run.horizons", {1000, 5000, 20000, 60000}));
  spec.n = horizons.back();
  BasinReport rep = basin_map(sys, perturbed ? MapKind::ftilde : MapKind::f,
                              spec, horizons,
                              s.config.get_double("run.threshold", 0.5));
  std::string tag = perturbed ? "ftilde" : "f";
  std::string path = args.out_dir + "/basins-" + tag + ".json";
  write_text_file(path, basin_report_json(rep));
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < rep.horizons.size(); ++i) {
    rows.push_back({static_cast<double>(rep.horizons[i]),
                    rep.fraction_section0[i], rep.fraction_section1[i],
                    rep.fraction_undecided[i]});
    std::cout << "horizon " << rep.horizons[i] << ": s0="
              << rep.fraction_section0[i] << " s1=" << rep.fraction_section1[i]
              << " undecided=" << rep.fraction_undecided[i] << "\n";
  }
  std::string csv = args.out_dir + "/basins-" + tag + ".csv";
  write_csv(csv, {"horizon", "fraction_section0", "fraction_section1",
                  "fraction_undecided"},
            rows, s.params.certificate_hash);
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < rep.horizons.size(); ++i) {
    xs.push_back(static_cast<double>(rep.horizons[i]));
    ys.push_back(rep.fraction_undecided[i]);
  }
  std::string dat = args.out_dir + "/basins-" + tag + "-undecided.dat";
  write_plot_data(dat, "undecided fraction vs horizon", xs, ys,
                  s.params.certificate_hash);
  write_manifest(s, args, "basins", {path, csv, dat});
  return 0;
}

int cmd_ustate(const CommonArgs& args) {
  Session s = open_session(args, false);
  KanSystem sys(s.params);
  OrbitSpec spec = spec_of(args, s, 100, 10000);
  int bins = static_cast<int>(s.config.get_u64("run.bins", 32));
  GPoint center{TorusPoint{0.51, 0.17},
                CirclePoint{static_cast<double>(args.section)}};
  UStateReport rep = ustate_sampler(
      sys, MapKind::g, args.section, center,
      s.config.get_double("run.segment_length", 0.2), spec.n, bins, spec);
  std::string path = args.out_dir + "/ustate.json";
  write_text_file(path, ustate_report_json(rep));
  std::cout << "chi2 = " << rep.chi2 << " (95% critical "
            << rep.chi2_critical << "), uniform "
            << (rep.uniform_pass ? "PASS" : "FAIL") << "\n";
  std::cout << "circle mass within 0.1 of section: "
            << rep.circle_mass_near_section << "\n";
  write_manifest(s, args, "ustate", {path});
  return rep.uniform_pass ? 0 : 1;
}

int cmd_collapse(const CommonArgs& args) {
  Session s = open_session(args, true);
  KanSystem sys(s.params);
  OrbitSpec basin = spec_of(args, s, 20000, 0);
  OrbitSpec channel = basin;
  channel.samples = s.config.get_u64("run.channel_samples", basin.samples);
  auto horizons = parse_horizons(
      args.horizons,
      s.config.get_u64_list("run.horizons", {10000, 30000, 60000, 100000}));
  CollapseReport rep = collapse_experiment(sys, basin, channel, horizons,
                                           s.config.get_double(
                                               "run.threshold", 0.5));
  std::string path = args.out_dir + "/collapse.json";
  write_text_file(path, collapse_report_json(rep));
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < rep.horizons.size(); ++i) {
    rows.push_back({static_cast<double>(rep.horizons[i]),
                    rep.channel_crossing_f[i], rep.channel_crossing_ftilde[i],
                    rep.basin_f.fraction_section1[i],
                    rep.basin_ftilde.fraction_section1[i]});
    std::cout << "horizon " << rep.horizons[i] << ": channel f="
              << rep.channel_crossing_f[i] << " ftilde="
              << rep.channel_crossing_ftilde[i] << " | global s1 f="
              << rep.basin_f.fraction_section1[i] << " ftilde="
              << rep.basin_ftilde.fraction_section1[i] << "\n";
  }
  std::string csv = args.out_dir + "/collapse.csv";
  write_csv(csv, {"horizon", "channel_crossing_f", "channel_crossing_ftilde",
                  "global_s1_f", "global_s1_ftilde"},
            rows, s.params.certificate_hash);
  write_manifest(s, args, "collapse", {path, csv});
  return 0;
}

int cmd_heteroclinic(const CommonArgs& args) {
  Session s = open_session(args, false, false);
  HeteroclinicQuery q;
  q.q1 = s.params.anchors.q1;
  q.q2 = s.params.anchors.q2;
  q.anchors = {s.params.anchors.p1, s.params.anchors.p2, s.params.anchors.q1,
               s.params.anchors.q2};
  q.n1 = s.params.n1;
  q.eps = s.params.eps;
  q.delta = s.params.delta;
  HeteroclinicResult h = heteroclinic_point(q);
  std::cout << "r = (" << h.r.u << ", " << h.r.v << ")  t=" << h.t
            << " s=" << h.s << "\n";
  std::cout << "min orbit gap over horizon 50: " << h.min_orbit_gap
            << " (eps " << s.params.eps << ")\n";
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < h.forward_dist.size(); ++i) {
    xs.push_back(static_cast<double>(i));
    ys.push_back(h.forward_dist[i]);
  }
  std::string dat = args.out_dir + "/heteroclinic-forward.dat";
  write_plot_data(dat, "distance to q2 along forward iterates", xs, ys, 0);
  write_manifest(s, args, "heteroclinic", {dat});
  return 0;
}

int cmd_orbit(const CommonArgs& args) {
  Session s = open_session(args, false);
  KanSystem sys(s.params);
  OrbitSpec spec = spec_of(args, s, 1, 2000);
  CounterRng rng(spec.seed, 0);
  MPoint p{TorusPoint{rng.uniform(), rng.uniform()},
           CirclePoint{rng.uniform(0.0, 2.0)},
           TorusPoint{rng.uniform(), rng.uniform()}};
  std::vector<std::vector<double>> rows;
  for (std::uint64_t i = 0; i < spec.n; ++i) {
    rows.push_back({static_cast<double>(i), p.x.u, p.x.v, p.y.y, p.z.u,
                    p.z.v});
    p = sys.f(p);
  }
  std::string csv = args.out_dir + "/orbit.csv";
  write_csv(csv, {"step", "x_u", "x_v", "y", "z_u", "z_v"}, rows,
            s.params.certificate_hash);
  write_manifest(s, args, "orbit", {csv});
  return 0;
}

int cmd_spectrum(const CommonArgs& args) {
  Session s = open_session(args, false);
  KanSystem sys(s.params);
  OrbitSpec spec = spec_of(args, s, 1, 200000);
  CounterRng rng(spec.seed, 0);
  MPoint p{TorusPoint{rng.uniform(), rng.uniform()},
           CirclePoint{static_cast<double>(args.section)},
           TorusPoint{rng.uniform(), rng.uniform()}};
  auto lam = lyap_spectrum_full(sys, p, spec.n);
  std::vector<std::vector<double>> rows;
  std::cout << "exponents:";
  for (int i = 0; i < 5; ++i) {
    std::cout << " " << lam[i];
    rows.push_back({static_cast<double>(i), lam[i]});
  }
  std::cout << "\n  reference: +-log sigma1 = +-" << std::log(sys.sigma1())
            << ", +-log sigma0 = +-" << std::log(sys.sigma0()) << "\n";
  std::string csv = args.out_dir + "/spectrum.csv";
  write_csv(csv, {"index", "exponent"}, rows, s.params.certificate_hash);
  write_manifest(s, args, "spectrum", {csv});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulation and certification laboratory for a Kan-type "
               "partially hyperbolic skew product on T^2 x S x T^2"};
  app.require_subcommand(1);
  CommonArgs args;
  app.add_option("--config", args.config_path, "config file (key = value)");
  app.add_option("--out", args.out_dir, "output directory");
  app.add_option("--seed", args.seed, "base RNG seed");
  app.add_option("--preset", args.preset, "parameter preset: paper | desk")
      ->check(CLI::IsMember({"paper", "desk"}));
  app.add_option("--samples", args.samples, "sample count override");
  app.add_option("--steps", args.steps, "orbit length override");
  app.add_option("--horizons", args.horizons,
                 "comma-separated horizon schedule");
  app.add_option("--section", args.section, "section (0 or 1)")
      ->check(CLI::IsMember({0, 1}));
  app.add_option("--bundle", args.bundle, "lyapunov bundle: ts | ts-f | cu");
  app.add_flag("--skip-cones", args.skip_cones,
               "certify scalar checks only (faster)");

  for (auto [name, help] :
       std::initializer_list<std::pair<const char*, const char*>>{
           {"certify", "run the full certification"},
           {"fixed-points", "Jacobian spectra at the six fixed points"},
           {"lyapunov", "Lyapunov exponent estimates"},
           {"basins", "basin fractions for f"},
           {"basins-perturbed", "basin fractions for ftilde"},
           {"ustate", "Cesaro u-state sampler"},
           {"collapse", "paired f / ftilde collapse experiment"},
           {"heteroclinic", "find and verify the heteroclinic point"},
           {"orbit", "dump one orbit as CSV"},
           {"spectrum", "full 5-exponent spectrum"}})
    app.add_subcommand(name, help)->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("certify")) return cmd_certify(args);
    if (app.got_subcommand("fixed-points")) return cmd_fixed_points(args);
    if (app.got_subcommand("lyapunov")) return cmd_lyapunov(args);
    if (app.got_subcommand("basins")) return cmd_basins(args, false);
    if (app.got_subcommand("basins-perturbed")) return cmd_basins(args, true);
    if (app.got_subcommand("ustate")) return cmd_ustate(args);
    if (app.got_subcommand("collapse")) return cmd_collapse(args);
    if (app.got_subcommand("heteroclinic")) return cmd_heteroclinic(args);
    if (app.got_subcommand("orbit")) return cmd_orbit(args);
    if (app.got_subcommand("spectrum")) return cmd_spectrum(args);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
