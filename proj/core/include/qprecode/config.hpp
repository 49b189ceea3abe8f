#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "qprecode/schemes.hpp"

namespace qprecode {

struct SystemConfig {
  int m_h = 4;
  int m_v = 4;
  int K = 4;
  int L = 8;
  double kappa = 5.0;  // may be +infinity ("inf" in the config file)
  double asd_deg = 10.0;
  double d_h = 0.5;
  double d_v = 0.5;
  int M() const { return m_h * m_v; }
};

struct SweepSpec {
  std::vector<double> snr_db = {0, 5, 10, 15, 20, 25, 30, 35};
  int num_drops = 50;
  std::uint64_t seed = 1;
};

struct RunSpec {
  int iterations = 10;
  std::vector<SchemeId> schemes = all_schemes();
  std::uint64_t sd_node_budget = 1'000'000;
  double lambda_tol = 1e-6;
  double power_tol = 1e-8;
  double fixed_delta = 0.0;     // 0 = derive the step from the SNR point ("auto")
  int heuristic_passes = 1;     // 0 = refine until a sweep changes nothing
};

struct OutputSpec {
  std::string directory = ".";
  bool emit_plot = true;
};

// Flat INI-style config: sections [system], [sweep], [run], [output], keys as
// named in the structs above. Unknown sections or keys are configuration
// errors. Lists are comma-separated; kappa accepts "inf"; fixed_delta accepts
// "auto".
struct SimConfig {
  SystemConfig system;
  SweepSpec sweep;
  RunSpec run;
  OutputSpec output;
};

SimConfig parse_config(std::istream& in);
SimConfig load_config_file(const std::string& path);

// Applies one "key=value" override; key may be bare (all key names are
// unique across sections) or section-qualified as "section.key".
void apply_override(SimConfig& cfg, std::string_view key, std::string_view value);

// Throws ConfigError on out-of-range fields. parse/load/apply call this.
void validate(const SimConfig& cfg);

// Fixed-order dump of every field with full precision; two configs serialize
// identically iff every field matches.
std::string canonical_config(const SimConfig& cfg);

// FNV-1a 64-bit hash of canonical_config, as 16 hex digits.
std::string config_hash(const SimConfig& cfg);

}  // namespace qprecode
