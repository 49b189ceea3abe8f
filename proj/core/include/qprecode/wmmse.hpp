#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "qprecode/precoding.hpp"
#include "qprecode/types.hpp"

namespace qprecode {

// Diagonal effective weight matrix D with [D]_kk = sqrt(d_k) * beta_k.
struct EffectiveWeights {
  VecC D_diag;
  VecR d;
  MatC matrix() const { return MatC(D_diag.asDiagonal()); }
};

EffectiveWeights effective_weights(const VecC& beta, const VecR& d);

// |h_k^T p_k|^2 / (sum_{i != k} |h_k^T p_i|^2 + N0), with h_k^T = row k of H.
double sinr(const MatC& H, const MatC& P, double N0, int k);

// MMSE receiver gain: (h_k^T p_k)^* / (sum_i |h_k^T p_i|^2 + N0), sum over all i.
cxd receiver_gain(const MatC& H, const MatC& P, double N0, int k);

// Detection MSE at gain beta_k:
// |beta_k|^2 (sum_i |h_k^T p_i|^2 + N0) - 2 Re(beta_k h_k^T p_k) + 1.
double mse(const MatC& H, const MatC& P, cxd beta_k, double N0, int k);

// Optimal auxiliary weight: 1 + sinr_k. Always >= 1.
double ue_weight(const MatC& H, const MatC& P, double N0, int k);

// Sum rate of the power-normalized precoder P_hat = alpha*P with
// alpha = sqrt(q / tr(P P^H)): sum_k log2(1 + sinr_k(P_hat)).
// Invariant under positive scaling of P. Zero precoder -> DomainError.
double scaled_sum_rate(const MatC& H, const MatC& P, double N0, double q);

// Regularized channel-inversion initializer P = H^H (H H^H + (K*N0/q) I)^{-1}.
PrecodingMatrix wf_init(const MatC& H, double q, double N0);

// Exact minimizer of sum_k d_k e_k(P, beta_k) subject to tr(P P^H) <= q:
// P(lambda) = (H^H D^H D H + lambda I)^{-1} H^H D^H sqrt(diag(d)) with
// lambda = 0 when the minimum-norm unconstrained solution is feasible,
// otherwise lambda > 0 from bisection so that tr(P P^H) = q (always
// returning a feasible iterate, power never above q).
PrecodingMatrix infinite_res_subproblem(const MatC& H, const VecC& beta, const VecR& d, double q);

// Pluggable P-update: given the channel and current (beta, d), return the next
// precoder under the power budget q.
using SubproblemSolver =
    std::function<PrecodingMatrix(const MatC& H, const VecC& beta, const VecR& d, double q)>;

struct WmmseState {
  PrecodingMatrix precoder;
  VecC gains;    // matched to the returned precoder
  VecR weights;  // matched to the returned precoder
  std::vector<double> objective_trace;  // length iterations+1, entry 0 at the initial precoder
  std::vector<double> sum_rate_trace;   // same indexing
};

struct WmmseRunConfig {
  double q = 1.0;
  double N0 = 1.0;
  int iterations = 10;
  // When set, the initial precoder is the quantized WF initializer and the
  // returned precoder is the best-objective iterate seen (the discrete
  // subproblem is approximate, so the trace need not be monotone).
  std::optional<QuantCodebook> codebook;
  // Optional early stop on relative objective change; off by default so that
  // iteration-indexed traces are reproducible.
  bool early_stop = false;
  double early_stop_rel_tol = 1e-6;
};

// Block-coordinate loop: per iteration, beta <- receiver_gain, d <- ue_weight,
// P <- solver(H, beta, d, q). After the initial precoder and after every
// iteration the objective sum_k (d_k e_k - log2 d_k) and the scaled sum rate
// are recorded, both evaluated at gains/weights matched to the recorded
// precoder. Solver failures are rethrown as SolverError with the iteration
// index in the message.
WmmseState run_wmmse(const MatC& H, const WmmseRunConfig& cfg, const SubproblemSolver& solver);

}  // namespace qprecode
