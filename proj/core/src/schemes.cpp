#include "qprecode/schemes.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "qprecode/errors.hpp"
#include "qprecode/wmmse.hpp"

namespace qprecode {

SchemeId scheme_from_string(std::string_view name) {
  if (name == "infinite_res") return SchemeId::infinite_res;
  if (name == "unaware") return SchemeId::unaware;
  if (name == "proposed_sd") return SchemeId::proposed_sd;
  if (name == "half_aware") return SchemeId::half_aware;
  if (name == "heuristic") return SchemeId::heuristic;
  throw ConfigError("unknown scheme '" + std::string(name) + "'");
}

std::string_view to_string(SchemeId id) {
  switch (id) {
    case SchemeId::infinite_res: return "infinite_res";
    case SchemeId::unaware: return "unaware";
    case SchemeId::proposed_sd: return "proposed_sd";
    case SchemeId::half_aware: return "half_aware";
    case SchemeId::heuristic: return "heuristic";
  }
  throw ConfigError("invalid scheme id");
}

const std::vector<SchemeId>& all_schemes() {
  static const std::vector<SchemeId> ids = {SchemeId::infinite_res, SchemeId::unaware,
                                            SchemeId::proposed_sd, SchemeId::half_aware,
                                            SchemeId::heuristic};
  return ids;
}

GiOrdering gi_ordering(const MatC& H, const MatC& P_hat) {
  const int K = static_cast<int>(H.rows());
  if (P_hat.cols() != K) throw ConfigError("precoder/channel UE count mismatch");
  const MatC G = H * P_hat;
  GiOrdering out;
  out.gi_values.resize(K);
  for (int k = 0; k < K; ++k) {
    double gi = 0.0;
    for (int i = 0; i < K; ++i) {
      if (i != k) gi += std::norm(G(i, k));
    }
    out.gi_values(k) = gi;
  }
  out.ue_order.resize(K);
  std::iota(out.ue_order.begin(), out.ue_order.end(), 0);
  std::stable_sort(out.ue_order.begin(), out.ue_order.end(),
                   [&out](int a, int b) { return out.gi_values(a) > out.gi_values(b); });
  return out;
}

PrecodingMatrix infinite_res_precoder(const MatC& H, const SchemeConfig& cfg) {
  WmmseRunConfig rc;
  rc.q = cfg.q;
  rc.N0 = cfg.N0;
  rc.iterations = cfg.iterations;
  return run_wmmse(H, rc, [](const MatC& h, const VecC& beta, const VecR& d, double q) {
           return infinite_res_subproblem(h, beta, d, q);
         })
      .precoder;
}

PrecodingMatrix unaware_precoder(const MatC& H, const SchemeConfig& cfg) {
  const PrecodingMatrix W = infinite_res_precoder(H, cfg);
  return quantize_matrix(W.entries, cfg.codebook);
}

PrecodingMatrix proposed_sd_precoder(const MatC& H, const SchemeConfig& cfg) {
  WmmseRunConfig rc;
  rc.q = cfg.q;
  rc.N0 = cfg.N0;
  rc.iterations = cfg.iterations;
  rc.codebook = cfg.codebook;
  const SdOptions sd = cfg.sd;
  const QuantCodebook cb = cfg.codebook;
  return run_wmmse(H, rc,
                   [&sd, &cb](const MatC& h, const VecC& beta, const VecR& d, double q) {
                     return solve_quantized_subproblem(h, beta, d, q, cb, sd);
                   })
      .precoder;
}

PrecodingMatrix half_aware_precoder(const MatC& H, const SchemeConfig& cfg) {
  if (cfg.iterations < 1) throw ConfigError("iteration count must be >= 1");
  MatC P;
  if (cfg.iterations == 1) {
    P = wf_init(H, cfg.q, cfg.N0).entries;
  } else {
    WmmseRunConfig rc;
    rc.q = cfg.q;
    rc.N0 = cfg.N0;
    rc.iterations = cfg.iterations - 1;
    P = run_wmmse(H, rc, [](const MatC& h, const VecC& beta, const VecR& d, double q) {
          return infinite_res_subproblem(h, beta, d, q);
        }).precoder.entries;
  }
  const int K = static_cast<int>(H.rows());
  VecC beta(K);
  VecR d(K);
  for (int k = 0; k < K; ++k) {
    beta(k) = receiver_gain(H, P, cfg.N0, k);
    d(k) = ue_weight(H, P, cfg.N0, k);
  }
  return solve_quantized_subproblem(H, beta, d, cfg.q, cfg.codebook, cfg.sd);
}

namespace {

int second_nearest_index(double v, int nearest, const QuantCodebook& cb) {
  if (nearest == 0) return 1;
  if (nearest == cb.levels - 1) return cb.levels - 2;
  return v >= cb.labels[static_cast<std::size_t>(nearest)] ? nearest + 1 : nearest - 1;
}

}  // namespace

PrecodingMatrix heuristic_precoder(const MatC& H, const SchemeConfig& cfg) {
  const QuantCodebook& cb = cfg.codebook;
  const PrecodingMatrix W = infinite_res_precoder(H, cfg);
  PrecodingMatrix out = quantize_matrix(W.entries, cb);
  MatC& P = out.entries;
  const int M = static_cast<int>(P.rows());

  double best_rate = scaled_sum_rate(H, P, cfg.N0, cfg.q);
  const int max_passes = (cfg.heuristic_passes > 0) ? cfg.heuristic_passes : 1000;
  for (int pass = 0; pass < max_passes; ++pass) {
    const double alpha = std::sqrt(cfg.q / P.squaredNorm());
    const GiOrdering gi = gi_ordering(H, alpha * P);
    bool changed = false;
    for (int k : gi.ue_order) {
      for (int m = 0; m < M; ++m) {
        const cxd w = W.entries(m, k);
        const int r1 = quantize_index(w.real(), cb);
        const int i1 = quantize_index(w.imag(), cb);
        const int r2 = second_nearest_index(w.real(), r1, cb);
        const int i2 = second_nearest_index(w.imag(), i1, cb);
        const int cand[4][2] = {{r1, i1}, {r2, i1}, {r1, i2}, {r2, i2}};
        const cxd before = P(m, k);
        cxd best_entry = before;
        for (const auto& c : cand) {
          const cxd value(cb.labels[static_cast<std::size_t>(c[0])],
                          cb.labels[static_cast<std::size_t>(c[1])]);
          P(m, k) = value;
          const double rate = scaled_sum_rate(H, P, cfg.N0, cfg.q);
          if (rate > best_rate) {
            best_rate = rate;
            best_entry = value;
          }
        }
        P(m, k) = best_entry;
        if (best_entry != before) changed = true;
      }
    }
    if (!changed) break;
  }
  return out;
}

PrecodingMatrix run_scheme(SchemeId id, const MatC& H, const SchemeConfig& cfg) {
  switch (id) {
    case SchemeId::infinite_res: return infinite_res_precoder(H, cfg);
    case SchemeId::unaware: return unaware_precoder(H, cfg);
    case SchemeId::proposed_sd: return proposed_sd_precoder(H, cfg);
    case SchemeId::half_aware: return half_aware_precoder(H, cfg);
    case SchemeId::heuristic: return heuristic_precoder(H, cfg);
  }
  throw ConfigError("invalid scheme id");
}

}  // namespace qprecode
