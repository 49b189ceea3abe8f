#pragma once

#include <cstdint>

#include "qprecode/ils.hpp"
#include "qprecode/precoding.hpp"
#include "qprecode/quantizer.hpp"
#include "qprecode/types.hpp"

namespace qprecode {

// Brute-force references for tests and `qprecode selftest`. Correctness
// anchors, not performance code.

struct OracleBudget {
  std::uint64_t max_points = 1'000'000;
};

// Full enumeration of alphabet^n in the solver's zig-zag depth-first order
// with the same tie rule (first minimal leaf wins). Refuses instances whose
// L^n exceeds the budget.
IlsSolution exhaustive_ils(const IlsInstance& inst, const OracleBudget& budget = {});

// The per-UE Lagrangian objective sum_k d_k e_k(P, beta_k) evaluated
// literally from the MSE expansion (used to compare solver and oracle).
double weighted_mse_objective(const MatC& H, const VecC& beta, const VecR& d, double N0,
                              const MatC& P);

// Global minimizer of sum_k d_k e_k over ALL codebook matrices with
// tr(P P^H) <= q, by full enumeration of (L^2)^(M*K) candidates. Empty
// feasible set -> DomainError; budget exceeded -> OracleBudgetError.
PrecodingMatrix exhaustive_p3(const MatC& H, const VecC& beta, const VecR& d, double N0, double q,
                              const QuantCodebook& cb, const OracleBudget& budget = {});

// E[(X - Q(X))^2] for X ~ Normal(0, variance) by adaptive Simpson quadrature
// per quantizer interval (absolute tolerance ~1e-10); independent of the
// closed-form moments used by optimal_step_size.
double quantizer_distortion(const QuantCodebook& cb, double variance);

}  // namespace qprecode
