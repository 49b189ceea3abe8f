#include "qprecode/wmmse.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qprecode/errors.hpp"

namespace qprecode {

namespace {

void check_dims(const MatC& H, const MatC& P, double N0, int k) {
  if (H.cols() != P.rows()) throw ConfigError("channel/precoder dimension mismatch");
  if (k < 0 || k >= H.rows() || k >= P.cols()) throw ConfigError("UE index out of range");
  if (!(N0 > 0.0)) throw ConfigError("noise power must be positive");
}

}  // namespace

EffectiveWeights effective_weights(const VecC& beta, const VecR& d) {
  if (beta.size() != d.size()) throw ConfigError("gain/weight length mismatch");
  EffectiveWeights ew;
  ew.d = d;
  ew.D_diag.resize(beta.size());
  for (Eigen::Index k = 0; k < beta.size(); ++k) {
    if (!(d(k) > 0.0)) throw DomainError("weights must be positive");
    ew.D_diag(k) = std::sqrt(d(k)) * beta(k);
  }
  return ew;
}

double sinr(const MatC& H, const MatC& P, double N0, int k) {
  check_dims(H, P, N0, k);
  const Eigen::RowVectorXcd y = H.row(k) * P;
  const double sig = std::norm(y(k));
  double intf = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (i != k) intf += std::norm(y(i));
  }
  return sig / (intf + N0);
}

cxd receiver_gain(const MatC& H, const MatC& P, double N0, int k) {
  check_dims(H, P, N0, k);
  const Eigen::RowVectorXcd y = H.row(k) * P;
  double total = N0;
  for (Eigen::Index i = 0; i < y.size(); ++i) total += std::norm(y(i));
  return std::conj(y(k)) / total;
}

double mse(const MatC& H, const MatC& P, cxd beta_k, double N0, int k) {
  check_dims(H, P, N0, k);
  const Eigen::RowVectorXcd y = H.row(k) * P;
  double total = N0;
  for (Eigen::Index i = 0; i < y.size(); ++i) total += std::norm(y(i));
  return std::norm(beta_k) * total - 2.0 * std::real(beta_k * y(k)) + 1.0;
}

double ue_weight(const MatC& H, const MatC& P, double N0, int k) {
  return 1.0 + sinr(H, P, N0, k);
}

double scaled_sum_rate(const MatC& H, const MatC& P, double N0, double q) {
  if (!(q > 0.0)) throw ConfigError("power budget must be positive");
  const double tr = P.squaredNorm();
  if (tr == 0.0) throw DomainError("zero precoder has no power-normalized rate");
  const double alpha = std::sqrt(q / tr);
  const MatC P_hat = alpha * P;
  double rate = 0.0;
  for (Eigen::Index k = 0; k < H.rows(); ++k) {
    rate += std::log2(1.0 + sinr(H, P_hat, N0, static_cast<int>(k)));
  }
  return rate;
}

PrecodingMatrix wf_init(const MatC& H, double q, double N0) {
  if (!(q > 0.0) || !(N0 > 0.0)) throw ConfigError("q and N0 must be positive");
  const Eigen::Index K = H.rows();
  MatC A = H * H.adjoint();
  A.diagonal().array() += K * N0 / q;
  Eigen::LLT<MatC> llt(A);
  if (llt.info() != Eigen::Success) throw NumericError("initializer Gram matrix not positive definite");
  PrecodingMatrix out;
  out.entries = llt.solve(H).adjoint();
  out.constrained = false;
  return out;
}

PrecodingMatrix infinite_res_subproblem(const MatC& H, const VecC& beta, const VecR& d, double q) {
  if (!(q > 0.0)) throw ConfigError("power budget must be positive");
  const EffectiveWeights ew = effective_weights(beta, d);
  const Eigen::Index K = H.rows();
  const Eigen::Index M = H.cols();
  const MatC DH = ew.D_diag.asDiagonal() * H;
  MatC S = MatC::Zero(K, K);
  for (Eigen::Index k = 0; k < K; ++k) S(k, k) = std::sqrt(d(k));

  // Minimum-norm least-squares solution; the lambda = 0 point even when DH is
  // rank-deficient.
  Eigen::CompleteOrthogonalDecomposition<MatC> cod(DH);
  MatC P0 = cod.solve(S);
  PrecodingMatrix out;
  out.constrained = false;
  if (P0.squaredNorm() <= q) {
    out.entries = std::move(P0);
    return out;
  }

  const MatC A = DH.adjoint() * DH;
  const MatC B = DH.adjoint() * S;
  const auto solve_at = [&](double lambda) -> MatC {
    MatC V = A;
    V.diagonal().array() += lambda;
    Eigen::LLT<MatC> llt(V);
    if (llt.info() != Eigen::Success) {
      throw NumericError("regularized Gram matrix not positive definite");
    }
    return llt.solve(B);
  };

  double hi = 1.0;
  MatC P_hi = solve_at(hi);
  int doublings = 0;
  while (P_hi.squaredNorm() > q) {
    hi *= 2.0;
    P_hi = solve_at(hi);
    if (++doublings > 60) throw NumericError("power bisection failed to bracket the budget");
  }
  double lo = 0.0;
  double t_hi = P_hi.squaredNorm();
  for (int it = 0; it < 200; ++it) {
    if (std::abs(t_hi - q) <= 1e-12 * q || hi - lo <= 1e-13 * hi) break;
    const double mid = 0.5 * (lo + hi);
    MatC P_mid = solve_at(mid);
    const double t_mid = P_mid.squaredNorm();
    if (t_mid <= q) {
      hi = mid;
      t_hi = t_mid;
      P_hi = std::move(P_mid);
    } else {
      lo = mid;
    }
  }
  out.entries = std::move(P_hi);
  return out;
}

WmmseState run_wmmse(const MatC& H, const WmmseRunConfig& cfg, const SubproblemSolver& solver) {
  if (cfg.iterations < 1) throw ConfigError("iteration count must be >= 1");
  if (!solver) throw ConfigError("subproblem solver must be set");
  const int K = static_cast<int>(H.rows());

  PrecodingMatrix P = wf_init(H, cfg.q, cfg.N0);
  if (cfg.codebook) P = quantize_matrix(P.entries, *cfg.codebook);

  WmmseState st;
  st.objective_trace.reserve(cfg.iterations + 1);
  st.sum_rate_trace.reserve(cfg.iterations + 1);

  const bool keep_best = cfg.codebook.has_value();
  double best_obj = std::numeric_limits<double>::infinity();
  PrecodingMatrix best_P;
  VecC best_beta;
  VecR best_d;

  for (int t = 0;; ++t) {
    VecC beta(K);
    VecR d(K);
    for (int k = 0; k < K; ++k) {
      beta(k) = receiver_gain(H, P.entries, cfg.N0, k);
      d(k) = ue_weight(H, P.entries, cfg.N0, k);
    }
    double obj = 0.0;
    for (int k = 0; k < K; ++k) {
      obj += d(k) * mse(H, P.entries, beta(k), cfg.N0, k) - std::log2(d(k));
    }
    st.objective_trace.push_back(obj);
    st.sum_rate_trace.push_back(scaled_sum_rate(H, P.entries, cfg.N0, cfg.q));

    if (!keep_best || obj < best_obj) {
      best_obj = obj;
      best_P = P;
      best_beta = beta;
      best_d = d;
    }
    if (t == cfg.iterations) break;
    if (cfg.early_stop && t >= 1) {
      const double prev = st.objective_trace[t - 1];
      if (std::abs(obj - prev) <= cfg.early_stop_rel_tol * std::max(std::abs(prev), 1e-300)) break;
    }
    try {
      P = solver(H, beta, d, cfg.q);
    } catch (const Error& e) {
      throw SolverError("subproblem solver failed at iteration " + std::to_string(t + 1) + ": " +
                        e.what());
    }
  }

  st.precoder = std::move(best_P);
  st.gains = std::move(best_beta);
  st.weights = std::move(best_d);
  return st;
}

}  // namespace qprecode
