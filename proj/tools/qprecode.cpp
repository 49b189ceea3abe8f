#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "qprecode/channel.hpp"
#include "qprecode/config.hpp"
#include "qprecode/errors.hpp"
#include "qprecode/ils.hpp"
#include "qprecode/oracles.hpp"
#include "qprecode/quantizer.hpp"
#include "qprecode/rng.hpp"
#include "qprecode/schemes.hpp"
#include "qprecode/sweep.hpp"
#include "qprecode/version.hpp"
#include "qprecode/wmmse.hpp"

namespace {

using namespace qprecode;

// One CLI flag per config key; a flag that was given overrides the file.
struct OverrideSet {
  std::map<std::string, std::string> values;
  std::vector<std::pair<std::string, CLI::Option*>> opts;
};

void add_override_flags(CLI::App* cmd, OverrideSet& set) {
  static const char* keys[] = {
      "m_h",        "m_v",        "K",           "L",           "kappa",
      "asd_deg",    "d_h",        "d_v",         "snr_db",      "num_drops",
      "seed",       "iterations", "schemes",     "sd_node_budget", "lambda_tol",
      "power_tol",  "fixed_delta", "heuristic_passes", "directory", "emit_plot",
  };
  for (const char* key : keys) {
    CLI::Option* opt = cmd->add_option(std::string("--") + key, set.values[key],
                                       std::string("override config key ") + key);
    set.opts.emplace_back(key, opt);
  }
}

SimConfig make_config(const std::string& config_path, const OverrideSet& set,
                      const std::string& out_dir) {
  SimConfig cfg = config_path.empty() ? SimConfig{} : load_config_file(config_path);
  for (const auto& [key, opt] : set.opts) {
    if (opt->count() > 0) apply_override(cfg, key, set.values.at(key));
  }
  if (!out_dir.empty()) apply_override(cfg, "directory", out_dir);
  validate(cfg);
  return cfg;
}

std::string join_args(int argc, char** argv) {
  std::string cmd;
  for (int i = 0; i < argc; ++i) {
    if (i) cmd += ' ';
    cmd += argv[i];
  }
  return cmd;
}

int cmd_sweep(const SimConfig& cfg, const std::string& command) {
  const SweepResult result = run_sweep(cfg);
  std::filesystem::create_directories(cfg.output.directory);
  const std::string dir = cfg.output.directory;
  emit_csv(result, dir + "/sweep.csv");
  if (cfg.output.emit_plot) emit_plot(result, dir + "/sweep.svg");
  write_run_meta(cfg, &result, command, dir + "/run_meta");

  std::printf("%8s  %-14s %12s %12s %6s\n", "snr_db", "scheme", "mean_rate", "stderr", "drops");
  for (const auto& cell : result.cells) {
    std::printf("%8.2f  %-14s %12.4f %12.4f %6d\n", cell.snr_db,
                std::string(to_string(cell.scheme)).c_str(), cell.mean, cell.stderr_,
                cell.num_drops);
  }
  if (!result.exclusion_log.empty()) {
    std::printf("%zu evaluations excluded (see run_meta)\n", result.exclusion_log.size());
  }
  std::printf("wrote %s/sweep.csv%s and %s/run_meta\n", dir.c_str(),
              cfg.output.emit_plot ? ", sweep.svg" : "", dir.c_str());
  return 0;
}

int cmd_converge(const SimConfig& cfg, double snr_db, std::uint64_t drop_seed,
                 const std::string& command) {
  const auto rows = run_convergence_trace(cfg, snr_db, drop_seed);
  std::filesystem::create_directories(cfg.output.directory);
  const std::string dir = cfg.output.directory;
  emit_convergence_csv(rows, dir + "/converge.csv");
  write_run_meta(cfg, nullptr, command, dir + "/run_meta");

  std::printf("%9s %16s %12s\n", "iteration", "objective", "sum_rate");
  for (const auto& row : rows) {
    std::printf("%9d %16.8f %12.6f\n", row.iteration, row.objective, row.sum_rate);
  }
  std::printf("wrote %s/converge.csv and %s/run_meta\n", dir.c_str(), dir.c_str());
  return 0;
}

bool report(const char* name, bool ok) {
  std::printf("selftest: %-38s %s\n", name, ok ? "PASS" : "FAIL");
  return ok;
}

int cmd_selftest() {
  bool all = true;
  {
    const QuantCodebook cb = build_codebook(4, 0.5);
    bool ok = cb.labels.size() == 4 && cb.thresholds.size() == 3;
    for (std::size_t z = 0; ok && z < cb.labels.size(); ++z) {
      ok = std::abs(cb.labels[z] - 0.5 * (static_cast<double>(z) - 1.5)) < 1e-15;
    }
    ok = ok && quantize_real(0.24, cb) == cb.labels[2] && quantize_real(-10.0, cb) == cb.labels[0];
    all &= report("codebook structure", ok);
  }
  {
    const double step = optimal_step_size(2, 1.0);
    all &= report("two-level optimal step",
                  std::abs(step - 2.0 * std::sqrt(2.0 / std::numbers::pi)) < 1e-6);
  }
  {
    const QuantCodebook cb = build_codebook(8, optimal_step_size(8, 1.0));
    const double closed = expected_distortion(cb, 1.0);
    const double quad = quantizer_distortion(cb, 1.0);
    all &= report("distortion closed form vs quadrature", std::abs(closed - quad) < 1e-9);
  }
  {
    bool ok = true;
    auto rng = derive_stream(7, 1);
    std::normal_distribution<double> normal(0.0, 1.0);
    const QuantCodebook cb = build_codebook(4, 0.7);
    for (int trial = 0; trial < 5 && ok; ++trial) {
      const int n = 4;
      IlsInstance inst;
      inst.G = MatR::Zero(n, n);
      for (int i = 0; i < n; ++i) {
        inst.G(i, i) = std::abs(normal(rng)) + 0.5;
        for (int j = i + 1; j < n; ++j) inst.G(i, j) = normal(rng);
      }
      inst.c = VecR::NullaryExpr(n, [&](Eigen::Index) { return normal(rng); });
      inst.alphabet = cb.labels;
      const IlsSolution fast = sesd_solve(inst);
      const IlsSolution slow = exhaustive_ils(inst);
      ok = fast.residual == slow.residual && fast.point_index == slow.point_index;
    }
    all &= report("sphere decoder vs exhaustive search", ok);
  }
  {
    auto rng = derive_stream(7, 2);
    const int K = 2, M = 2;
    MatC H(K, M);
    for (int k = 0; k < K; ++k) {
      for (int m = 0; m < M; ++m) H(k, m) = cnormal(rng);
    }
    const double q = 4.0;
    const QuantCodebook cb = build_codebook(4, optimal_step_size(4, q / (2.0 * K * M)));
    const PrecodingMatrix P0 = wf_init(H, q, 1.0);
    VecC beta(K);
    VecR d(K);
    for (int k = 0; k < K; ++k) {
      beta(k) = receiver_gain(H, P0.entries, 1.0, k);
      d(k) = ue_weight(H, P0.entries, 1.0, k);
    }
    const PrecodingMatrix P = solve_quantized_subproblem(H, beta, d, q, cb);
    const bool ok = in_codebook(P.entries, cb) && P.entries.squaredNorm() <= q * (1.0 + 1e-12);
    all &= report("quantized subproblem feasibility", ok);
  }
  {
    auto rng = derive_stream(7, 3);
    MatC H(2, 3), P(3, 2);
    for (int i = 0; i < H.size(); ++i) H.data()[i] = cnormal(rng);
    for (int i = 0; i < P.size(); ++i) P.data()[i] = cnormal(rng);
    const double a = scaled_sum_rate(H, P, 1.0, 2.0);
    const double b = scaled_sum_rate(H, MatC(3.0 * P), 1.0, 2.0);
    all &= report("sum rate scale invariance", std::abs(a - b) < 1e-12);
  }
  std::printf("selftest: %s\n", all ? "all checks passed" : "FAILURES detected");
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fronthaul-quantized multiuser precoding simulator"};
  app.set_version_flag("--version", std::string(qprecode::version));
  app.require_subcommand(1);

  std::string sweep_config, sweep_out;
  OverrideSet sweep_set;
  CLI::App* sweep = app.add_subcommand("sweep", "Monte Carlo sum-rate sweep over SNR");
  sweep->add_option("--config", sweep_config, "INI config file")->check(CLI::ExistingFile);
  sweep->add_option("--out", sweep_out, "output directory (overrides output.directory)");
  add_override_flags(sweep, sweep_set);

  std::string conv_config, conv_out;
  double conv_snr = 20.0;
  std::uint64_t conv_seed = 1;
  OverrideSet conv_set;
  CLI::App* conv = app.add_subcommand("converge", "per-iteration trace of the sphere-decoder scheme");
  conv->add_option("--config", conv_config, "INI config file")->check(CLI::ExistingFile);
  conv->add_option("--out", conv_out, "output directory (overrides output.directory)");
  conv->add_option("--snr", conv_snr, "SNR point in dB");
  conv->add_option("--drop-seed", conv_seed, "seed for the single channel drop");
  add_override_flags(conv, conv_set);

  CLI::App* selftest = app.add_subcommand("selftest", "quick internal consistency checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sweep->parsed()) {
      return cmd_sweep(make_config(sweep_config, sweep_set, sweep_out), join_args(argc, argv));
    }
    if (conv->parsed()) {
      return cmd_converge(make_config(conv_config, conv_set, conv_out), conv_snr, conv_seed,
                          join_args(argc, argv));
    }
    if (selftest->parsed()) return cmd_selftest();
  } catch (const qprecode::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
