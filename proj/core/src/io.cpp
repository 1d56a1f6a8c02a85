#include "kanlab/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace kanlab {

using nlohmann::json;

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "schema",          "preset",
      "params.preset",   "params.delta",  "params.beta",
      "params.k",        "params.ell",    "params.eps",
      "params.n0",       "params.n1",     "params.margin_rho",
      "params.tau1",     "params.tau3",   "params.tau4",
      "run.seed",        "run.samples",   "run.steps",
      "run.burn_in",     "run.horizons",  "run.bins",
      "run.threshold",   "run.segment_length", "run.channel_samples",
      "run.out",
      "certify.grid_1d", "certify.grid_q", "certify.grid_p",
      "certify.cone_samples", "certify.with_cones",
  };
  return keys;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  std::size_t e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

}  // namespace

ConfigFile ConfigFile::parse(const std::string& text) {
  ConfigFile cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected 'key = value', got '" + t + "'");
    std::string key = trim(t.substr(0, eq));
    std::string val = trim(t.substr(eq + 1));
    if (key.empty() || val.empty())
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": empty key or value");
    if (!known_keys().count(key))
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": unknown key '" + key + "'");
    if (cfg.values.count(key))
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": duplicate key '" + key + "'");
    cfg.values[key] = val;
  }
  if (cfg.has("schema")) {
    cfg.schema = static_cast<int>(cfg.get_u64("schema", 1));
    if (cfg.schema != 1)
      throw ConfigError("unsupported config schema " +
                        std::to_string(cfg.schema));
  }
  return cfg;
}

ConfigFile ConfigFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string ConfigFile::serialize() const {
  std::ostringstream os;
  os << "schema = " << schema << "\n";
  for (const auto& [k, v] : values) {
    if (k == "schema") continue;
    os << k << " = " << v << "\n";
  }
  return os.str();
}

std::string ConfigFile::get(const std::string& key,
                            const std::string& fallback) const {
  auto it = values.find(key);
  return it == values.end() ? fallback : it->second;
}

double ConfigFile::get_double(const std::string& key, double fallback) const {
  auto it = values.find(key);
  if (it == values.end()) return fallback;
  try {
    return std::stod(it->second);
  } catch (...) {
    throw ConfigError("config key '" + key + "': not a number: '" +
                      it->second + "'");
  }
}

std::uint64_t ConfigFile::get_u64(const std::string& key,
                                  std::uint64_t fallback) const {
  auto it = values.find(key);
  if (it == values.end()) return fallback;
  try {
    return std::stoull(it->second);
  } catch (...) {
    throw ConfigError("config key '" + key + "': not an integer: '" +
                      it->second + "'");
  }
}

std::vector<std::uint64_t> ConfigFile::get_u64_list(
    const std::string& key, std::vector<std::uint64_t> fb) const {
  auto it = values.find(key);
  if (it == values.end()) return fb;
  std::vector<std::uint64_t> out;
  std::istringstream ss(it->second);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    out.push_back(std::stoull(tok));
  }
  if (out.empty())
    throw ConfigError("config key '" + key + "': empty list");
  return out;
}

SystemParams ConfigFile::to_params() const {
  std::map<std::string, std::string> kv;
  std::string preset = get("preset", get("params.preset", "desk"));
  kv["params.preset"] = preset;
  for (const auto& [k, v] : values)
    if (k.rfind("params.", 0) == 0) kv[k] = v;
  return SystemParams::from_kv(kv);
}

ConfigFile ConfigFile::from_params(const SystemParams& p) {
  ConfigFile cfg;
  for (const auto& [k, v] : p.to_kv()) cfg.values[k] = v;
  return cfg;
}

// ------------------------------------------------------------- manifest

std::string hash_hex(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

std::string RunManifest::to_json() const {
  json j;
  j["tool_version"] = tool_version;
  j["subcommand"] = subcommand;
  json jp;
  for (const auto& [k, v] : params.to_kv()) jp[k] = v;
  j["params"] = jp;
  j["certificate_hash"] = hash_hex(certificate_hash);
  j["seed"] = seed;
  j["wall_clock_sec"] = wall_clock_sec;
  j["precision_loss_bits_per_step"] = precision_loss_bits_per_step;
  j["precision_note"] =
      "orbit statistics are pseudo-orbit statistics; the dominant expansion "
      "loses the stated bits of state per step";
  j["outputs"] = outputs;
  return j.dump(2) + "\n";
}

// ------------------------------------------------------------- writers

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

void write_csv(const std::string& path,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows,
               std::uint64_t certificate_hash) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  for (std::size_t i = 0; i < columns.size(); ++i)
    out << columns[i] << ",";
  out << "certificate_hash\r\n";
  out.precision(17);
  for (const auto& row : rows) {
    for (double v : row) out << v << ",";
    out << hash_hex(certificate_hash) << "\r\n";
  }
}

void write_plot_data(const std::string& path, const std::string& title,
                     const std::vector<double>& xs,
                     const std::vector<double>& ys,
                     std::uint64_t certificate_hash) {
  std::ostringstream os;
  os.precision(17);
  os << "# " << title << "\n";
  os << "# certificate_hash=" << hash_hex(certificate_hash) << "\n";
  for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i)
    os << xs[i] << " " << ys[i] << "\n";
  write_text_file(path, os.str());
  write_text_file(path + ".gp",
                  "set grid\nplot '" + path + "' using 1:2 with linespoints "
                  "title '" + title + "'\n");
}

// ------------------------------------------------------------- reports

namespace {

json lyap_json_obj(const LyapReport& r) {
  json j;
  j["bundle"] = r.bundle;
  j["lambda_hat"] = r.lambda_hat;
  j["stderr"] = r.stderr_;
  j["n"] = r.n;
  j["samples"] = r.samples;
  if (r.has_oracle) {
    j["oracle"] = r.oracle;
    j["oracle_gap_sigmas"] =
        r.stderr_ > 0 ? std::fabs(r.lambda_hat - r.oracle) / r.stderr_ : 0.0;
  }
  j["below_resolution"] = r.below_resolution;
  if (r.method_a != 0 || r.method_b != 0) {
    j["method_a"] = r.method_a;
    j["method_b"] = r.method_b;
    j["stderr_a"] = r.stderr_a;
    j["stderr_b"] = r.stderr_b;
    j["methods_flagged"] = r.methods_flagged;
  }
  j["certificate_hash"] = hash_hex(r.certificate_hash);
  return j;
}

json basin_json_obj(const BasinReport& r) {
  json j;
  j["horizons"] = r.horizons;
  j["fraction_section0"] = r.fraction_section0;
  j["fraction_section1"] = r.fraction_section1;
  j["fraction_undecided"] = r.fraction_undecided;
  j["threshold"] = r.threshold;
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  j["certificate_hash"] = hash_hex(r.certificate_hash);
  return j;
}

}  // namespace

std::string lyap_report_json(const LyapReport& r) {
  return lyap_json_obj(r).dump(2) + "\n";
}

std::string basin_report_json(const BasinReport& r) {
  return basin_json_obj(r).dump(2) + "\n";
}

std::string ustate_report_json(const UStateReport& r) {
  json j;
  j["bins"] = r.bins;
  j["cesaro_steps"] = r.cesaro_steps;
  j["segment_points"] = r.segment_points;
  j["segment_length"] = r.segment_length;
  j["chi2"] = r.chi2;
  j["chi2_critical_95"] = r.chi2_critical;
  j["uniform_pass"] = r.uniform_pass;
  j["circle_mass_near_section"] = r.circle_mass_near_section;
  j["torus_hist"] = r.torus_hist;
  j["circle_hist"] = r.circle_hist;
  j["certificate_hash"] = hash_hex(r.certificate_hash);
  return j.dump(2) + "\n";
}

std::string manifold_report_json(const ManifoldReport& r) {
  json j;
  j["target"] = r.target;
  j["samples"] = r.samples;
  j["steps"] = r.steps;
  j["worst_final_distance"] = r.worst_final_distance;
  j["worst_ratio"] = r.worst_ratio;
  j["ratio_bound"] = r.ratio_bound;
  j["monotone_after_burnin"] = r.monotone_after_burnin;
  j["pass"] = r.pass;
  json fails = json::array();
  for (const auto& p : r.failures) {
    fails.push_back({{"x", {p.x.u, p.x.v}},
                     {"y", p.y.y},
                     {"z", {p.z.u, p.z.v}}});
  }
  j["failures"] = fails;
  j["certificate_hash"] = hash_hex(r.certificate_hash);
  return j.dump(2) + "\n";
}

std::string collapse_report_json(const CollapseReport& r) {
  json j;
  j["basin_f"] = basin_json_obj(r.basin_f);
  j["basin_ftilde"] = basin_json_obj(r.basin_ftilde);
  j["horizons"] = r.horizons;
  j["channel_crossing_f"] = r.channel_crossing_f;
  j["channel_crossing_ftilde"] = r.channel_crossing_ftilde;
  j["channel_samples"] = r.channel_samples;
  j["seed"] = r.seed;
  j["certificate_hash"] = hash_hex(r.certificate_hash);
  return j.dump(2) + "\n";
}

std::string coverage_report_json(const CoverageReport& r) {
  json j;
  j["steps"] = r.steps;
  j["radii"] = r.radii;
  j["coverage"] = r.coverage;
  j["contains_p1_section0"] = r.contains_p1;
  j["contains_q2_section0"] = r.contains_q2;
  j["samples"] = r.samples;
  j["certificate_hash"] = hash_hex(r.certificate_hash);
  return j.dump(2) + "\n";
}

}  // namespace kanlab
