#ifndef KANLAB_IO_HPP
#define KANLAB_IO_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kanlab/certify.hpp"
#include "kanlab/experiments.hpp"
#include "kanlab/params.hpp"

namespace kanlab {

// ------------------------------------------------------------- config

// Line-oriented `dotted.key = value` format with '#' comments.
// Schema-versioned; unknown keys are rejected with line context.
struct ConfigFile {
  int schema = 1;
  std::map<std::string, std::string> values;

  static ConfigFile parse(const std::string& text);
  static ConfigFile load(const std::string& path);
  std::string serialize() const;

  bool has(const std::string& key) const { return values.count(key) > 0; }
  std::string get(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  std::vector<std::uint64_t> get_u64_list(const std::string& key,
                                          std::vector<std::uint64_t> fb) const;

  SystemParams to_params() const;
  static ConfigFile from_params(const SystemParams& p);
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ------------------------------------------------------------ manifest

struct RunManifest {
  std::string tool_version;
  std::string subcommand;
  SystemParams params;
  std::uint64_t certificate_hash = 0;
  std::uint64_t seed = 0;
  double wall_clock_sec = 0;
  double precision_loss_bits_per_step = 0;  // log2 sigma1, pseudo-orbit note
  std::vector<std::string> outputs;

  std::string to_json() const;
};

// ------------------------------------------------------------- writers

void write_text_file(const std::string& path, const std::string& content);

// CSV per the interface contract: header row first, every row ends with the
// certificate hash column, RFC-4180-style quoting not needed (numeric data).
void write_csv(const std::string& path,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows,
               std::uint64_t certificate_hash);

// two-column whitespace series + a gnuplot stub alongside
void write_plot_data(const std::string& path, const std::string& title,
                     const std::vector<double>& xs,
                     const std::vector<double>& ys,
                     std::uint64_t certificate_hash);

std::string lyap_report_json(const LyapReport& rep);
std::string basin_report_json(const BasinReport& rep);
std::string ustate_report_json(const UStateReport& rep);
std::string manifold_report_json(const ManifoldReport& rep);
std::string collapse_report_json(const CollapseReport& rep);
std::string coverage_report_json(const CoverageReport& rep);

std::string hash_hex(std::uint64_t h);

}  // namespace kanlab

#endif  // KANLAB_IO_HPP
