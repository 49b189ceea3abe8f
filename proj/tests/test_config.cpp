#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "qprecode/config.hpp"
#include "qprecode/errors.hpp"

using namespace qprecode;

namespace {

SimConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

}  // namespace

TEST_CASE("an empty stream yields the documented defaults") {
  const SimConfig cfg = parse("");
  CHECK(cfg.system.m_h == 4);
  CHECK(cfg.system.m_v == 4);
  CHECK(cfg.system.M() == 16);
  CHECK(cfg.system.K == 4);
  CHECK(cfg.system.L == 8);
  CHECK(cfg.system.kappa == 5.0);
  CHECK(cfg.system.asd_deg == 10.0);
  CHECK(cfg.system.d_h == 0.5);
  CHECK(cfg.system.d_v == 0.5);
  REQUIRE(cfg.sweep.snr_db.size() == 8);
  CHECK(cfg.sweep.snr_db.front() == 0.0);
  CHECK(cfg.sweep.snr_db.back() == 35.0);
  CHECK(cfg.sweep.num_drops == 50);
  CHECK(cfg.sweep.seed == 1);
  CHECK(cfg.run.iterations == 10);
  CHECK(cfg.run.schemes == all_schemes());
  CHECK(cfg.run.sd_node_budget == 1'000'000);
  CHECK(cfg.run.lambda_tol == 1e-6);
  CHECK(cfg.run.power_tol == 1e-8);
  CHECK(cfg.run.fixed_delta == 0.0);
  CHECK(cfg.run.heuristic_passes == 1);
  CHECK(cfg.output.directory == ".");
  CHECK(cfg.output.emit_plot == true);
}

TEST_CASE("a full file sets every field") {
  const SimConfig cfg = parse(
      "# full override\n"
      "[system]\n"
      "m_h = 2\n"
      "m_v = 3\n"
      "K = 2\n"
      "L = 4\n"
      "kappa = 0\n"
      "asd_deg = 15\n"
      "d_h = 0.7\n"
      "d_v = 0.25\n"
      "\n"
      "[sweep]\n"
      "snr_db = -5, 0, 5\n"
      "num_drops = 7\n"
      "seed = 99\n"
      "\n"
      "[run]\n"
      "iterations = 3\n"
      "schemes = proposed_sd, unaware\n"
      "sd_node_budget = 12345\n"
      "lambda_tol = 1e-4\n"
      "power_tol = 1e-5\n"
      "fixed_delta = 0.3\n"
      "heuristic_passes = 2\n"
      "\n"
      "[output]\n"
      "directory = out\n"
      "emit_plot = false\n");
  CHECK(cfg.system.m_h == 2);
  CHECK(cfg.system.m_v == 3);
  CHECK(cfg.system.K == 2);
  CHECK(cfg.system.L == 4);
  CHECK(cfg.system.kappa == 0.0);
  CHECK(cfg.system.asd_deg == 15.0);
  CHECK(cfg.system.d_h == 0.7);
  CHECK(cfg.system.d_v == 0.25);
  REQUIRE(cfg.sweep.snr_db.size() == 3);
  CHECK(cfg.sweep.snr_db[0] == -5.0);
  CHECK(cfg.sweep.snr_db[1] == 0.0);
  CHECK(cfg.sweep.snr_db[2] == 5.0);
  CHECK(cfg.sweep.num_drops == 7);
  CHECK(cfg.sweep.seed == 99);
  CHECK(cfg.run.iterations == 3);
  REQUIRE(cfg.run.schemes.size() == 2);
  CHECK(cfg.run.schemes[0] == SchemeId::proposed_sd);
  CHECK(cfg.run.schemes[1] == SchemeId::unaware);
  CHECK(cfg.run.sd_node_budget == 12345);
  CHECK(cfg.run.lambda_tol == 1e-4);
  CHECK(cfg.run.power_tol == 1e-5);
  CHECK(cfg.run.fixed_delta == 0.3);
  CHECK(cfg.run.heuristic_passes == 2);
  CHECK(cfg.output.directory == "out");
  CHECK(cfg.output.emit_plot == false);
}

TEST_CASE("comments, blank lines, and whitespace are tolerated") {
  const SimConfig cfg = parse(
      "\n"
      "# hash comment\n"
      "; semicolon comment\n"
      "  [system]  \n"
      "   K   =   6   \n");
  CHECK(cfg.system.K == 6);
}

TEST_CASE("special value spellings") {
  SUBCASE("kappa accepts inf") {
    const SimConfig cfg = parse("[system]\nkappa = inf\n");
    CHECK(std::isinf(cfg.system.kappa));
    CHECK(cfg.system.kappa > 0);
  }
  SUBCASE("fixed_delta accepts auto") {
    const SimConfig cfg = parse("[run]\nfixed_delta = auto\n");
    CHECK(cfg.run.fixed_delta == 0.0);
  }
  SUBCASE("emit_plot boolean spellings") {
    for (const char* v : {"true", "1", "yes", "on"}) {
      CHECK(parse(std::string("[output]\nemit_plot = ") + v + "\n").output.emit_plot);
    }
    for (const char* v : {"false", "0", "no", "off"}) {
      CHECK(!parse(std::string("[output]\nemit_plot = ") + v + "\n").output.emit_plot);
    }
    CHECK_THROWS_AS(parse("[output]\nemit_plot = maybe\n"), ConfigError);
  }
  SUBCASE("seed covers the full unsigned range") {
    const SimConfig cfg = parse("[sweep]\nseed = 18446744073709551615\n");
    CHECK(cfg.sweep.seed == 18446744073709551615ull);
    CHECK_THROWS_AS(parse("[sweep]\nseed = -1\n"), ConfigError);
  }
}

TEST_CASE("parse errors carry the line number") {
  CHECK_THROWS_WITH_AS(parse("[system\nK = 2\n"),
                       doctest::Contains("line 1: malformed section header"), ConfigError);
  CHECK_THROWS_WITH_AS(parse("[system]\n[nope]\n"),
                       doctest::Contains("line 2: unknown section 'nope'"), ConfigError);
  CHECK_THROWS_WITH_AS(parse("[system]\njust words\n"),
                       doctest::Contains("line 2: expected key=value"), ConfigError);
  CHECK_THROWS_WITH_AS(parse("K = 2\n"),
                       doctest::Contains("line 1: key outside of a section"), ConfigError);
  CHECK_THROWS_WITH_AS(parse("[system]\nK = two\n"), doctest::Contains("line 2:"), ConfigError);
  CHECK_THROWS_WITH_AS(parse("[system]\nK = two\n"), doctest::Contains("invalid value 'two'"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse("[system]\nwat = 1\n"),
                       doctest::Contains("unknown key 'system.wat'"), ConfigError);
  CHECK_THROWS_WITH_AS(parse("[system]\nkappa = nan\n"), doctest::Contains("line 2:"),
                       ConfigError);
}

TEST_CASE("validation rejects out-of-range fields") {
  CHECK_THROWS_WITH_AS(parse("[system]\nm_h = 0\n"), doctest::Contains("array dimensions"),
                       ConfigError);
  CHECK_THROWS_AS(parse("[system]\nm_v = -2\n"), ConfigError);
  CHECK_THROWS_WITH_AS(parse("[system]\nK = 0\n"), doctest::Contains("K must be"), ConfigError);
  CHECK_THROWS_WITH_AS(parse("[system]\nL = 3\n"), doctest::Contains("power of two"),
                       ConfigError);
  CHECK_THROWS_AS(parse("[system]\nL = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("[system]\nL = 6\n"), ConfigError);
  CHECK_THROWS_WITH_AS(parse("[system]\nkappa = -0.5\n"), doctest::Contains("kappa"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse("[system]\nasd_deg = 0\n"), doctest::Contains("asd_deg"),
                       ConfigError);
  CHECK_THROWS_AS(parse("[system]\nasd_deg = 45\n"), ConfigError);
  CHECK_THROWS_WITH_AS(parse("[system]\nd_h = 0\n"), doctest::Contains("spacings"), ConfigError);
  CHECK_THROWS_AS(parse("[system]\nd_v = -0.5\n"), ConfigError);
  CHECK_THROWS_WITH_AS(parse("[sweep]\nnum_drops = 0\n"), doctest::Contains("num_drops"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse("[run]\niterations = 0\n"), doctest::Contains("iterations"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse("[run]\nlambda_tol = 0\n"), doctest::Contains("lambda_tol"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse("[run]\npower_tol = -1e-9\n"), doctest::Contains("power_tol"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse("[run]\nfixed_delta = -0.1\n"), doctest::Contains("fixed_delta"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse("[run]\nheuristic_passes = -1\n"),
                       doctest::Contains("heuristic_passes"), ConfigError);
  CHECK_THROWS_WITH_AS(parse("[output]\ndirectory =\n"), doctest::Contains("directory"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse("[sweep]\nsnr_db = 1,\n"), doctest::Contains("snr_db"), ConfigError);
  CHECK_THROWS_WITH_AS(parse("[run]\nschemes = proposed_sd, zf\n"),
                       doctest::Contains("unknown scheme 'zf'"), ConfigError);
}

TEST_CASE("overrides accept bare and section-qualified keys and validate immediately") {
  SimConfig cfg;
  apply_override(cfg, "K", "7");
  CHECK(cfg.system.K == 7);
  apply_override(cfg, "system.K", "3");
  CHECK(cfg.system.K == 3);
  apply_override(cfg, "kappa", "inf");
  CHECK(std::isinf(cfg.system.kappa));
  apply_override(cfg, "fixed_delta", "auto");
  CHECK(cfg.run.fixed_delta == 0.0);
  apply_override(cfg, "schemes", "heuristic");
  REQUIRE(cfg.run.schemes.size() == 1);
  CHECK(cfg.run.schemes[0] == SchemeId::heuristic);
  apply_override(cfg, " num_drops ", " 12 ");
  CHECK(cfg.sweep.num_drops == 12);

  CHECK_THROWS_WITH_AS(apply_override(cfg, "bogus", "1"), doctest::Contains("unknown key 'bogus'"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(apply_override(cfg, "run.bogus", "1"),
                       doctest::Contains("unknown key 'run.bogus'"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "K", "0"), ConfigError);      // range
  CHECK_THROWS_AS(apply_override(cfg, "L", "five"), ConfigError);   // format
}

TEST_CASE("canonical serialization is total and order-stable") {
  SimConfig cfg;
  const std::string text = canonical_config(cfg);
  CHECK(text.find("system.m_h=4\n") != std::string::npos);
  CHECK(text.find("system.kappa=5\n") != std::string::npos);
  CHECK(text.find("sweep.snr_db=0,5,10,15,20,25,30,35\n") != std::string::npos);
  CHECK(text.find("run.schemes=infinite_res,unaware,proposed_sd,half_aware,heuristic\n") !=
        std::string::npos);
  CHECK(text.find("run.sd_node_budget=1000000\n") != std::string::npos);
  CHECK(text.find("run.heuristic_passes=1\n") != std::string::npos);
  CHECK(text.find("output.directory=.\n") != std::string::npos);
  CHECK(text.find("output.emit_plot=true\n") != std::string::npos);
  // Field order: system, sweep, run, output.
  CHECK(text.find("system.m_h=") < text.find("sweep.snr_db="));
  CHECK(text.find("sweep.snr_db=") < text.find("run.iterations="));
  CHECK(text.find("run.iterations=") < text.find("output.directory="));
  CHECK(canonical_config(SimConfig{}) == text);
}

TEST_CASE("the config hash changes exactly when a field changes") {
  const SimConfig base;
  const std::string h0 = config_hash(base);
  CHECK(h0.size() == 16);
  for (const char c : h0) CHECK(std::isxdigit(static_cast<unsigned char>(c)));
  CHECK(config_hash(SimConfig{}) == h0);

  const auto differs = [&](void (*mutate)(SimConfig&)) {
    SimConfig cfg;
    mutate(cfg);
    return config_hash(cfg) != h0;
  };
  CHECK(differs([](SimConfig& c) { c.system.m_h = 8; }));
  CHECK(differs([](SimConfig& c) { c.system.m_v = 2; }));
  CHECK(differs([](SimConfig& c) { c.system.K = 3; }));
  CHECK(differs([](SimConfig& c) { c.system.L = 4; }));
  CHECK(differs([](SimConfig& c) { c.system.kappa = 5.5; }));
  CHECK(differs([](SimConfig& c) { c.system.asd_deg = 12.0; }));
  CHECK(differs([](SimConfig& c) { c.system.d_h = 0.25; }));
  CHECK(differs([](SimConfig& c) { c.system.d_v = 0.25; }));
  CHECK(differs([](SimConfig& c) { c.sweep.snr_db = {0.0}; }));
  CHECK(differs([](SimConfig& c) { c.sweep.num_drops = 51; }));
  CHECK(differs([](SimConfig& c) { c.sweep.seed = 2; }));
  CHECK(differs([](SimConfig& c) { c.run.iterations = 11; }));
  CHECK(differs([](SimConfig& c) { c.run.schemes = {SchemeId::unaware}; }));
  CHECK(differs([](SimConfig& c) { c.run.sd_node_budget = 999; }));
  CHECK(differs([](SimConfig& c) { c.run.lambda_tol = 1e-7; }));
  CHECK(differs([](SimConfig& c) { c.run.power_tol = 1e-7; }));
  CHECK(differs([](SimConfig& c) { c.run.fixed_delta = 0.5; }));
  CHECK(differs([](SimConfig& c) { c.run.heuristic_passes = 0; }));
  CHECK(differs([](SimConfig& c) { c.output.directory = "elsewhere"; }));
  CHECK(differs([](SimConfig& c) { c.output.emit_plot = false; }));
}

TEST_CASE("config files load from disk and missing paths are reported") {
  const std::string path = "qprecode_test_config.ini";
  {
    std::ofstream out(path);
    out << "[system]\nK = 2\n[sweep]\nseed = 5\n";
  }
  const SimConfig cfg = load_config_file(path);
  CHECK(cfg.system.K == 2);
  CHECK(cfg.sweep.seed == 5);
  std::remove(path.c_str());

  CHECK_THROWS_WITH_AS(load_config_file("definitely_missing.ini"),
                       doctest::Contains("cannot open config file: definitely_missing.ini"),
                       IoError);
}
