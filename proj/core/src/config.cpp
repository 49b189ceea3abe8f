#include "qprecode/config.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>

#include "qprecode/errors.hpp"

namespace qprecode {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, const char* expected) {
  throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key) + " (" +
                    expected + " expected)");
}

int parse_int(std::string_view key, std::string_view value) {
  const std::string s(value);
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size() || s.empty() || errno == ERANGE ||
      v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    bad_value(key, value, "integer");
  }
  return static_cast<int>(v);
}

std::uint64_t parse_u64(std::string_view key, std::string_view value) {
  const std::string s(value);
  if (s.empty() || s[0] == '-') bad_value(key, value, "unsigned integer");
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size() || errno == ERANGE) bad_value(key, value, "unsigned integer");
  return static_cast<std::uint64_t>(v);
}

double parse_double(std::string_view key, std::string_view value, bool allow_inf = false) {
  const std::string s(value);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || s.empty()) bad_value(key, value, "number");
  if (!allow_inf && !std::isfinite(v)) bad_value(key, value, "finite number");
  if (std::isnan(v)) bad_value(key, value, "number");
  return v;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  bad_value(key, value, "boolean");
}

std::vector<std::string_view> split_list(std::string_view value) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (start <= value.size()) {
    const std::size_t comma = value.find(',', start);
    const std::size_t end = (comma == std::string_view::npos) ? value.size() : comma;
    parts.push_back(trim(value.substr(start, end - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return parts;
}

std::vector<double> parse_double_list(std::string_view key, std::string_view value) {
  std::vector<double> out;
  for (const auto part : split_list(value)) {
    if (part.empty()) bad_value(key, value, "comma-separated numbers");
    out.push_back(parse_double(key, part));
  }
  return out;
}

std::vector<SchemeId> parse_scheme_list(std::string_view key, std::string_view value) {
  std::vector<SchemeId> out;
  for (const auto part : split_list(value)) {
    if (part.empty()) bad_value(key, value, "comma-separated scheme names");
    out.push_back(scheme_from_string(std::string(part)));
  }
  return out;
}

void apply_keyed(SimConfig& cfg, std::string_view section, std::string_view key,
                 std::string_view value) {
  if (section == "system") {
    if (key == "m_h") cfg.system.m_h = parse_int(key, value);
    else if (key == "m_v") cfg.system.m_v = parse_int(key, value);
    else if (key == "K") cfg.system.K = parse_int(key, value);
    else if (key == "L") cfg.system.L = parse_int(key, value);
    else if (key == "kappa") {
      cfg.system.kappa = (value == "inf") ? std::numeric_limits<double>::infinity()
                                          : parse_double(key, value, /*allow_inf=*/true);
    } else if (key == "asd_deg") cfg.system.asd_deg = parse_double(key, value);
    else if (key == "d_h") cfg.system.d_h = parse_double(key, value);
    else if (key == "d_v") cfg.system.d_v = parse_double(key, value);
    else throw ConfigError("unknown key 'system." + std::string(key) + "'");
  } else if (section == "sweep") {
    if (key == "snr_db") cfg.sweep.snr_db = parse_double_list(key, value);
    else if (key == "num_drops") cfg.sweep.num_drops = parse_int(key, value);
    else if (key == "seed") cfg.sweep.seed = parse_u64(key, value);
    else throw ConfigError("unknown key 'sweep." + std::string(key) + "'");
  } else if (section == "run") {
    if (key == "iterations") cfg.run.iterations = parse_int(key, value);
    else if (key == "schemes") cfg.run.schemes = parse_scheme_list(key, value);
    else if (key == "sd_node_budget") cfg.run.sd_node_budget = parse_u64(key, value);
    else if (key == "lambda_tol") cfg.run.lambda_tol = parse_double(key, value);
    else if (key == "power_tol") cfg.run.power_tol = parse_double(key, value);
    else if (key == "fixed_delta") {
      cfg.run.fixed_delta = (value == "auto") ? 0.0 : parse_double(key, value);
    } else if (key == "heuristic_passes") cfg.run.heuristic_passes = parse_int(key, value);
    else throw ConfigError("unknown key 'run." + std::string(key) + "'");
  } else if (section == "output") {
    if (key == "directory") cfg.output.directory = std::string(value);
    else if (key == "emit_plot") cfg.output.emit_plot = parse_bool(key, value);
    else throw ConfigError("unknown key 'output." + std::string(key) + "'");
  } else {
    throw ConfigError("unknown section '" + std::string(section) + "'");
  }
}

std::string_view section_for_key(std::string_view key) {
  static const struct {
    std::string_view key;
    std::string_view section;
  } table[] = {
      {"m_h", "system"},       {"m_v", "system"},        {"K", "system"},
      {"L", "system"},         {"kappa", "system"},      {"asd_deg", "system"},
      {"d_h", "system"},       {"d_v", "system"},        {"snr_db", "sweep"},
      {"num_drops", "sweep"},  {"seed", "sweep"},        {"iterations", "run"},
      {"schemes", "run"},      {"sd_node_budget", "run"}, {"lambda_tol", "run"},
      {"power_tol", "run"},    {"fixed_delta", "run"},   {"heuristic_passes", "run"},
      {"directory", "output"}, {"emit_plot", "output"},
  };
  for (const auto& row : table) {
    if (row.key == key) return row.section;
  }
  throw ConfigError("unknown key '" + std::string(key) + "'");
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

SimConfig parse_config(std::istream& in) {
  SimConfig cfg;
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = trim(line);
    if (s.empty() || s.front() == '#' || s.front() == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') {
        throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
      }
      section = std::string(trim(s.substr(1, s.size() - 2)));
      if (section != "system" && section != "sweep" && section != "run" && section != "output") {
        throw ConfigError("line " + std::to_string(lineno) + ": unknown section '" + section +
                          "'");
      }
      continue;
    }
    const std::size_t eq = s.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
    }
    if (section.empty()) {
      throw ConfigError("line " + std::to_string(lineno) + ": key outside of a section");
    }
    const std::string_view key = trim(s.substr(0, eq));
    const std::string_view value = trim(s.substr(eq + 1));
    try {
      apply_keyed(cfg, section, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  validate(cfg);
  return cfg;
}

SimConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  return parse_config(in);
}

void apply_override(SimConfig& cfg, std::string_view key, std::string_view value) {
  const std::string_view k = trim(key);
  const std::string_view v = trim(value);
  const std::size_t dot = k.find('.');
  if (dot != std::string_view::npos) {
    apply_keyed(cfg, k.substr(0, dot), k.substr(dot + 1), v);
  } else {
    apply_keyed(cfg, section_for_key(k), k, v);
  }
  validate(cfg);
}

void validate(const SimConfig& cfg) {
  const auto& sys = cfg.system;
  if (sys.m_h < 1 || sys.m_v < 1) throw ConfigError("array dimensions must be at least 1");
  if (sys.K < 1) throw ConfigError("K must be at least 1");
  if (sys.L < 2 || (sys.L & (sys.L - 1)) != 0) {
    throw ConfigError("L must be a power of two and at least 2");
  }
  if (!(sys.kappa >= 0.0)) throw ConfigError("kappa must be >= 0 (or inf)");
  if (!(sys.asd_deg > 0.0) || !(sys.asd_deg < 45.0)) {
    throw ConfigError("asd_deg must lie in (0, 45)");
  }
  if (!(sys.d_h > 0.0) || !std::isfinite(sys.d_h) || !(sys.d_v > 0.0) ||
      !std::isfinite(sys.d_v)) {
    throw ConfigError("antenna spacings must be positive and finite");
  }
  if (cfg.sweep.snr_db.empty()) throw ConfigError("snr_db must list at least one point");
  for (const double v : cfg.sweep.snr_db) {
    if (!std::isfinite(v)) throw ConfigError("snr_db entries must be finite");
  }
  if (cfg.sweep.num_drops < 1) throw ConfigError("num_drops must be at least 1");
  if (cfg.run.iterations < 1) throw ConfigError("iterations must be at least 1");
  if (cfg.run.schemes.empty()) throw ConfigError("schemes must list at least one scheme");
  if (!(cfg.run.lambda_tol > 0.0) || !std::isfinite(cfg.run.lambda_tol)) {
    throw ConfigError("lambda_tol must be positive");
  }
  if (!(cfg.run.power_tol >= 0.0) || !std::isfinite(cfg.run.power_tol)) {
    throw ConfigError("power_tol must be >= 0");
  }
  if (!(cfg.run.fixed_delta >= 0.0) || !std::isfinite(cfg.run.fixed_delta)) {
    throw ConfigError("fixed_delta must be >= 0 (0 = auto)");
  }
  if (cfg.run.heuristic_passes < 0) {
    throw ConfigError("heuristic_passes must be >= 0 (0 = until stable)");
  }
  if (cfg.output.directory.empty()) throw ConfigError("output directory must not be empty");
}

std::string canonical_config(const SimConfig& cfg) {
  std::ostringstream out;
  out << "system.m_h=" << cfg.system.m_h << '\n';
  out << "system.m_v=" << cfg.system.m_v << '\n';
  out << "system.K=" << cfg.system.K << '\n';
  out << "system.L=" << cfg.system.L << '\n';
  out << "system.kappa=" << fmt_double(cfg.system.kappa) << '\n';
  out << "system.asd_deg=" << fmt_double(cfg.system.asd_deg) << '\n';
  out << "system.d_h=" << fmt_double(cfg.system.d_h) << '\n';
  out << "system.d_v=" << fmt_double(cfg.system.d_v) << '\n';
  out << "sweep.snr_db=";
  for (std::size_t i = 0; i < cfg.sweep.snr_db.size(); ++i) {
    if (i) out << ',';
    out << fmt_double(cfg.sweep.snr_db[i]);
  }
  out << '\n';
  out << "sweep.num_drops=" << cfg.sweep.num_drops << '\n';
  out << "sweep.seed=" << cfg.sweep.seed << '\n';
  out << "run.iterations=" << cfg.run.iterations << '\n';
  out << "run.schemes=";
  for (std::size_t i = 0; i < cfg.run.schemes.size(); ++i) {
    if (i) out << ',';
    out << to_string(cfg.run.schemes[i]);
  }
  out << '\n';
  out << "run.sd_node_budget=" << cfg.run.sd_node_budget << '\n';
  out << "run.lambda_tol=" << fmt_double(cfg.run.lambda_tol) << '\n';
  out << "run.power_tol=" << fmt_double(cfg.run.power_tol) << '\n';
  out << "run.fixed_delta=" << fmt_double(cfg.run.fixed_delta) << '\n';
  out << "run.heuristic_passes=" << cfg.run.heuristic_passes << '\n';
  out << "output.directory=" << cfg.output.directory << '\n';
  out << "output.emit_plot=" << (cfg.output.emit_plot ? "true" : "false") << '\n';
  return out.str();
}

std::string config_hash(const SimConfig& cfg) {
  const std::string text = canonical_config(cfg);
  std::uint64_t h = 14695981039346656037ull;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace qprecode
