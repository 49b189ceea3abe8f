#include "qprecode/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Core>

#include "qprecode/errors.hpp"
#include "qprecode/quantizer.hpp"
#include "qprecode/rng.hpp"
#include "qprecode/schemes.hpp"
#include "qprecode/version.hpp"
#include "qprecode/wmmse.hpp"

namespace qprecode {

namespace {

struct SnrPoint {
  double snr_db = 0.0;
  double q = 1.0;
  QuantCodebook cb;
};

std::vector<SnrPoint> snr_points(const SimConfig& cfg) {
  std::vector<double> snrs = cfg.sweep.snr_db;
  std::sort(snrs.begin(), snrs.end());
  std::vector<SnrPoint> points;
  points.reserve(snrs.size());
  for (const double s : snrs) {
    SnrPoint p;
    p.snr_db = s;
    p.q = std::pow(10.0, s / 10.0);
    double delta = cfg.run.fixed_delta;
    if (!(delta > 0.0)) {
      // Per-real-dimension variance when the budget is spread evenly over the
      // M*K complex entries.
      delta = optimal_step_size(cfg.system.L, p.q / (2.0 * cfg.system.K * cfg.system.M()));
    }
    p.cb = build_codebook(cfg.system.L, delta);
    points.push_back(std::move(p));
  }
  return points;
}

ArrayGeometry geometry_of(const SimConfig& cfg) {
  ArrayGeometry g;
  g.m_h = cfg.system.m_h;
  g.m_v = cfg.system.m_v;
  g.d_h = cfg.system.d_h;
  g.d_v = cfg.system.d_v;
  return g;
}

ChannelRealization default_channel(std::mt19937_64& rng, const SimConfig& cfg) {
  const UeDrop drop = random_drop(rng, cfg.system.K);
  const double asd = cfg.system.asd_deg * std::numbers::pi / 180.0;
  return sample_channel(rng, drop, cfg.system.kappa, geometry_of(cfg), asd);
}

int resolve_workers(int num_drops) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  unsigned cap = hw;
  if (const char* env = std::getenv("QPRECODE_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) {
      cap = static_cast<unsigned>(std::min<unsigned long>(v, cap));
    }
  }
  return static_cast<int>(std::min(cap, static_cast<unsigned>(std::max(num_drops, 1))));
}

double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmtg(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

SweepResult run_sweep(const SimConfig& cfg, const ChannelProvider& provider) {
  validate(cfg);
  const int D = cfg.sweep.num_drops;
  const auto& schemes = cfg.run.schemes;
  const int C = static_cast<int>(schemes.size());
  const std::vector<SnrPoint> points = snr_points(cfg);
  const int S = static_cast<int>(points.size());
  const std::size_t slots = static_cast<std::size_t>(D) * S * C;

  std::vector<double> rates(slots, std::numeric_limits<double>::quiet_NaN());
  std::vector<std::string> failure(slots);
  std::vector<double> wall(C, 0.0);
  double max_pw_err = 0.0;
  std::mutex merge_mu;

  std::atomic<int> next{0};
  auto work = [&]() {
    std::vector<double> local_wall(C, 0.0);
    double local_pw = 0.0;
    for (;;) {
      const int d = next.fetch_add(1);
      if (d >= D) break;
      auto rng = derive_stream(cfg.sweep.seed, static_cast<std::uint64_t>(d));
      ChannelRealization ch;
      std::string ch_err;
      try {
        ch = provider ? provider(rng, cfg, d) : default_channel(rng, cfg);
      } catch (const std::exception& e) {
        ch_err = e.what();
      }
      for (int s = 0; s < S; ++s) {
        SchemeConfig sc;
        sc.q = points[s].q;
        sc.N0 = 1.0;
        sc.iterations = cfg.run.iterations;
        sc.codebook = points[s].cb;
        sc.sd.node_budget = cfg.run.sd_node_budget;
        sc.sd.lambda_tol = cfg.run.lambda_tol;
        sc.sd.power_tol = cfg.run.power_tol;
        sc.heuristic_passes = cfg.run.heuristic_passes;
        for (int c = 0; c < C; ++c) {
          const std::size_t slot = (static_cast<std::size_t>(d) * S + s) * C + c;
          if (!ch_err.empty()) {
            failure[slot] = ch_err;
            continue;
          }
          const auto t0 = std::chrono::steady_clock::now();
          try {
            const PrecodingMatrix P = run_scheme(schemes[c], ch.H, sc);
            rates[slot] = scaled_sum_rate(ch.H, P.entries, 1.0, sc.q);
            const double tr = P.entries.squaredNorm();
            const double alpha = std::sqrt(sc.q / tr);
            const MatC scaled = alpha * P.entries;
            local_pw = std::max(local_pw,
                                std::abs(scaled.squaredNorm() - sc.q) / sc.q);
          } catch (const std::exception& e) {
            failure[slot] = e.what();
          }
          const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
          local_wall[c] += dt.count();
        }
      }
    }
    const std::lock_guard<std::mutex> lock(merge_mu);
    for (int c = 0; c < C; ++c) wall[c] += local_wall[c];
    max_pw_err = std::max(max_pw_err, local_pw);
  };

  const int workers = resolve_workers(D);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  SweepResult res;
  res.seed = cfg.sweep.seed;
  res.config_hash = config_hash(cfg);
  res.scheme_wall_seconds = wall;
  res.max_power_rel_error = max_pw_err;

  for (int d = 0; d < D; ++d) {
    for (int s = 0; s < S; ++s) {
      for (int c = 0; c < C; ++c) {
        const std::size_t slot = (static_cast<std::size_t>(d) * S + s) * C + c;
        if (!failure[slot].empty()) {
          res.exclusion_log.push_back("drop " + std::to_string(d) + ", snr " +
                                      fmtg(points[s].snr_db) + " dB, " +
                                      std::string(to_string(schemes[c])) + ": " + failure[slot]);
        }
      }
    }
  }
  if (res.exclusion_log.size() * 20 > slots) {
    std::string msg = std::to_string(res.exclusion_log.size()) + " of " +
                      std::to_string(slots) + " evaluations failed (over 5%); first failure: " +
                      res.exclusion_log.front();
    throw NumericError(msg);
  }

  std::vector<double> xs, devs;
  xs.reserve(D);
  devs.reserve(D);
  for (int s = 0; s < S; ++s) {
    for (int c = 0; c < C; ++c) {
      xs.clear();
      int excluded = 0;
      for (int d = 0; d < D; ++d) {
        const std::size_t slot = (static_cast<std::size_t>(d) * S + s) * C + c;
        if (failure[slot].empty()) xs.push_back(rates[slot]);
        else ++excluded;
      }
      if (xs.empty()) {
        throw NumericError("every drop failed at snr " + fmtg(points[s].snr_db) + " dB for " +
                           std::string(to_string(schemes[c])));
      }
      const double mean = pairwise_sum(xs.data(), xs.size()) / static_cast<double>(xs.size());
      double se = 0.0;
      if (xs.size() > 1) {
        devs.clear();
        for (const double x : xs) devs.push_back((x - mean) * (x - mean));
        const double var =
            pairwise_sum(devs.data(), devs.size()) / static_cast<double>(xs.size() - 1);
        se = std::sqrt(var / static_cast<double>(xs.size()));
      }
      SweepCell cell;
      cell.snr_db = points[s].snr_db;
      cell.scheme = schemes[c];
      cell.mean = mean;
      cell.stderr_ = se;
      cell.num_drops = static_cast<int>(xs.size());
      cell.exclusions = excluded;
      res.cells.push_back(cell);
    }
  }
  return res;
}

void emit_csv(const SweepResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "snr_db,scheme,mean_sum_rate,stderr,num_drops\n";
  for (const auto& cell : result.cells) {
    out << fmt17(cell.snr_db) << ',' << to_string(cell.scheme) << ',' << fmt17(cell.mean) << ','
        << fmt17(cell.stderr_) << ',' << cell.num_drops << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

std::vector<ConvergenceRow> run_convergence_trace(const SimConfig& cfg, double snr_db,
                                                  std::uint64_t drop_seed) {
  validate(cfg);
  const double q = std::pow(10.0, snr_db / 10.0);
  double delta = cfg.run.fixed_delta;
  if (!(delta > 0.0)) {
    delta = optimal_step_size(cfg.system.L, q / (2.0 * cfg.system.K * cfg.system.M()));
  }
  const QuantCodebook cb = build_codebook(cfg.system.L, delta);

  auto rng = derive_stream(drop_seed, 0);
  const ChannelRealization ch = default_channel(rng, cfg);

  SdOptions sd;
  sd.node_budget = cfg.run.sd_node_budget;
  sd.lambda_tol = cfg.run.lambda_tol;
  sd.power_tol = cfg.run.power_tol;
  WmmseRunConfig wc;
  wc.q = q;
  wc.N0 = 1.0;
  wc.iterations = cfg.run.iterations;
  wc.codebook = cb;
  const auto solver = [&cb, &sd](const MatC& H, const VecC& beta, const VecR& d, double qq) {
    return solve_quantized_subproblem(H, beta, d, qq, cb, sd);
  };
  const WmmseState state = run_wmmse(ch.H, wc, solver);

  std::vector<ConvergenceRow> rows;
  rows.reserve(state.objective_trace.size());
  for (std::size_t i = 0; i < state.objective_trace.size(); ++i) {
    rows.push_back({static_cast<int>(i), state.objective_trace[i], state.sum_rate_trace[i]});
  }
  return rows;
}

void emit_convergence_csv(const std::vector<ConvergenceRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "iteration,objective,sum_rate\n";
  for (const auto& row : rows) {
    out << row.iteration << ',' << fmt17(row.objective) << ',' << fmt17(row.sum_rate) << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

void write_run_meta(const SimConfig& cfg, const SweepResult* result, const std::string& command,
                    const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "command: " << command << '\n';
  out << "config_hash: " << config_hash(cfg) << '\n';
  out << "seed: " << cfg.sweep.seed << '\n';
  out << "qprecode_version: " << version << '\n';
  out << "eigen_version: " << EIGEN_WORLD_VERSION << '.' << EIGEN_MAJOR_VERSION << '.'
      << EIGEN_MINOR_VERSION << '\n';
#ifdef __VERSION__
  out << "compiler: " << __VERSION__ << '\n';
#endif
  if (result) {
    std::size_t evaluations = 0;
    for (const auto& cell : result->cells) {
      evaluations += static_cast<std::size_t>(cell.num_drops) + cell.exclusions;
    }
    out << "evaluations: " << evaluations << '\n';
    out << "exclusions: " << result->exclusion_log.size() << '\n';
    out << "max_power_rel_error: " << fmt17(result->max_power_rel_error) << '\n';
    for (std::size_t c = 0; c < cfg.run.schemes.size() && c < result->scheme_wall_seconds.size();
         ++c) {
      out << "wall_seconds." << to_string(cfg.run.schemes[c]) << ": "
          << fmtg(result->scheme_wall_seconds[c]) << '\n';
    }
    for (const auto& line : result->exclusion_log) out << "exclusion: " << line << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace qprecode
