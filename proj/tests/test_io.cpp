#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "kanlab/io.hpp"

using namespace kanlab;

TEST_CASE("config parse, defaults, and round trip") {
  std::string text =
      "# comment\n"
      "schema = 1\n"
      "preset = desk\n"
      "params.delta = 0.03\n"
      "run.samples = 500\n"
      "run.horizons = 100, 1000, 10000\n";
  ConfigFile cfg = ConfigFile::parse(text);
  CHECK(cfg.schema == 1);
  CHECK(cfg.get("preset", "") == "desk");
  CHECK(cfg.get_double("params.delta", 0) == 0.03);
  CHECK(cfg.get_u64("run.samples", 0) == 500);
  auto hs = cfg.get_u64_list("run.horizons", {});
  REQUIRE(hs.size() == 3);
  CHECK(hs[2] == 10000);

  SystemParams p = cfg.to_params();
  CHECK(p.preset == "desk");
  CHECK(p.delta == 0.03);

  // serialize -> parse -> identical params record
  ConfigFile out = ConfigFile::from_params(p);
  ConfigFile back = ConfigFile::parse(out.serialize());
  SystemParams p2 = back.to_params();
  CHECK(p.to_kv() == p2.to_kv());
}

TEST_CASE("config rejects unknown keys, duplicates, bad lines") {
  CHECK_THROWS_WITH_AS(ConfigFile::parse("bogus.key = 1\n"),
                       doctest::Contains("unknown key"), ConfigError);
  CHECK_THROWS_WITH_AS(ConfigFile::parse("run.samples 12\n"),
                       doctest::Contains("line 1"), ConfigError);
  CHECK_THROWS_AS(
      ConfigFile::parse("run.samples = 1\nrun.samples = 2\n"), ConfigError);
  CHECK_THROWS_AS(ConfigFile::parse("schema = 9\n"), ConfigError);
  CHECK_THROWS_AS(ConfigFile::parse("run.samples = abc\n").get_u64(
                      "run.samples", 0),
                  ConfigError);
}

TEST_CASE("csv writer: header row plus certificate hash column") {
  std::string path = "/tmp/kanlab_test.csv";
  write_csv(path, {"horizon", "fraction"}, {{100.0, 0.25}, {200.0, 0.5}},
            0xabcdULL);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "horizon,fraction,certificate_hash\r");
  std::getline(in, line);
  CHECK(line.find("abcd") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("plot data writer emits series and a gnuplot stub") {
  std::string path = "/tmp/kanlab_test.dat";
  write_plot_data(path, "demo", {1, 2, 3}, {4, 5, 6}, 0x1234ULL);
  std::ifstream in(path);
  std::string all((std::istreambuf_iterator<char>(in)),
                  std::istreambuf_iterator<char>());
  CHECK(all.find("certificate_hash=1234") != std::string::npos);
  CHECK(all.find("1 4") != std::string::npos);
  std::ifstream gp(path + ".gp");
  CHECK(gp.good());
  std::remove(path.c_str());
  std::remove((path + ".gp").c_str());
}

TEST_CASE("manifest and report serializations are valid json") {
  RunManifest m;
  m.tool_version = "1.0.0";
  m.subcommand = "lyapunov";
  m.params = desk_preset();
  m.certificate_hash = 0x77;
  m.seed = 42;
  m.wall_clock_sec = 1.5;
  m.precision_loss_bits_per_step = 8.33;
  m.outputs = {"a.json", "b.csv"};
  auto j = nlohmann::json::parse(m.to_json());
  CHECK(j["subcommand"] == "lyapunov");
  CHECK(j["params"]["params.preset"] == "desk");
  CHECK(j["outputs"].size() == 2);

  LyapReport rep;
  rep.bundle = "TS(g) section 0";
  rep.lambda_hat = -7.9e-4;
  rep.stderr_ = 1e-6;
  rep.has_oracle = true;
  rep.oracle = -7.98e-4;
  rep.certificate_hash = 0x99;
  auto jl = nlohmann::json::parse(lyap_report_json(rep));
  CHECK(jl["bundle"] == "TS(g) section 0");
  CHECK(jl.contains("oracle_gap_sigmas"));

  BasinReport br;
  br.horizons = {10, 20};
  br.fraction_section0 = {0.4, 0.45};
  br.fraction_section1 = {0.35, 0.45};
  br.fraction_undecided = {0.25, 0.10};
  auto jb = nlohmann::json::parse(basin_report_json(br));
  CHECK(jb["fraction_undecided"][1] == 0.10);
}
