#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "qprecode/channel.hpp"
#include "qprecode/config.hpp"

namespace qprecode {

struct SweepCell {
  double snr_db = 0.0;
  SchemeId scheme = SchemeId::infinite_res;
  double mean = 0.0;
  double stderr_ = 0.0;
  int num_drops = 0;   // drops contributing after exclusions
  int exclusions = 0;
};

struct SweepResult {
  std::vector<SweepCell> cells;  // snr ascending, schemes in config order
  std::uint64_t seed = 0;
  std::string config_hash;
  std::vector<std::string> exclusion_log;
  std::vector<double> scheme_wall_seconds;  // aligned with config scheme order
  // Largest relative |tr(P_hat P_hat^H) - q| / q over every reported rate.
  double max_power_rel_error = 0.0;
};

// Test injection point: replaces the random drop+channel generation for a
// given drop index. The rng passed in is that drop's derived substream.
using ChannelProvider =
    std::function<ChannelRealization(std::mt19937_64& rng, const SimConfig& cfg, int drop)>;

// Paired Monte Carlo sweep: one channel per drop, every scheme evaluated at
// every SNR on that same realization. SNR enters as q = 10^(snr/10) with
// N0 = 1; the codebook step is derived per SNR from optimal_step_size(L,
// q/(2KM)) unless run.fixed_delta is set. Drops are distributed over a worker
// pool (capped by QPRECODE_THREADS); aggregation uses pairwise summation in
// drop order, so results do not depend on the worker count. Failed
// evaluations are excluded and logged; more than 5% exclusions fail the run.
SweepResult run_sweep(const SimConfig& cfg, const ChannelProvider& provider = {});

// Header `snr_db,scheme,mean_sum_rate,stderr,num_drops`, one row per cell,
// 17 significant digits, byte-deterministic.
void emit_csv(const SweepResult& result, const std::string& path);

// Standalone SVG: SNR on x, mean sum rate on y, one polyline per scheme with
// markers and a legend. Empty result -> DomainError.
void emit_plot(const SweepResult& result, const std::string& path);

struct ConvergenceRow {
  int iteration = 0;
  double objective = 0.0;
  double sum_rate = 0.0;
};

// One seeded drop at one SNR; the per-iteration trace of the sphere-decoder
// scheme (row 0 = quantized WF initializer, rows 1..N after each iteration).
std::vector<ConvergenceRow> run_convergence_trace(const SimConfig& cfg, double snr_db,
                                                  std::uint64_t drop_seed);

// Header `iteration,objective,sum_rate`.
void emit_convergence_csv(const std::vector<ConvergenceRow>& rows, const std::string& path);

// Key/value metadata: config hash, seed, versions, exclusions, wall times.
// `result` may be null (converge mode).
void write_run_meta(const SimConfig& cfg, const SweepResult* result, const std::string& command,
                    const std::string& path);

}  // namespace qprecode
