#pragma once

#include <cstdint>
#include <vector>

#include "qprecode/errors.hpp"
#include "qprecode/precoding.hpp"
#include "qprecode/quantizer.hpp"
#include "qprecode/types.hpp"
#include "qprecode/wmmse.hpp"

namespace qprecode {

// min_x || c - G x ||^2 with every component of x drawn from the same finite
// real alphabet. G is upper-triangular with strictly positive diagonal.
struct IlsInstance {
  MatR G;
  VecR c;
  std::vector<double> alphabet;  // strictly increasing
};

struct IlsSolution {
  std::vector<int> point_index;  // alphabet index per dimension
  VecR point;                    // the labels themselves
  double residual = 0.0;         // || c - G point ||^2
  std::uint64_t nodes_visited = 0;
};

// Search ran out of its node budget. The best leaf found so far (if any)
// rides along so the caller can keep going with it.
class NodeBudgetError : public Error {
 public:
  NodeBudgetError(const std::string& msg, std::uint64_t nodes, bool has_incumbent,
                  IlsSolution incumbent)
      : Error(msg),
        nodes(nodes),
        has_incumbent(has_incumbent),
        incumbent(std::move(incumbent)) {}
  std::uint64_t nodes;
  bool has_incumbent;
  IlsSolution incumbent;
};

// Per-UE integer least-squares instance for the quantized precoder update at
// a given multiplier lambda. With V = H^H D^H D H + lambda I = Gc^H Gc
// (complex Cholesky) and f_k^T = row k of sqrt(diag(d)) D H, the complex
// system (Gc, c_k = Gc^{-H} conj(f_k)) is expanded to 2M real dimensions via
// [Re; Im] stacking and re-triangularized by QR with a positive diagonal.
// The instance objective ||c - G x||^2 differs from the per-UE Lagrangian
// term x^H V x - 2 Re(f_k^T x) only by the constant c^H c.
IlsInstance build_per_ue_instance(const MatC& H, const EffectiveWeights& ew, double lambda,
                                  int ue_index, const QuantCodebook& cb);

// Exact global minimizer by depth-first search with Schnorr-Euchner zig-zag
// candidate ordering and radius pruning; the initial radius is infinite so
// the first leaf is the Babai point. nodes_visited counts candidate
// evaluations. node_budget 0 means unlimited; exceeding a budget throws
// NodeBudgetError carrying the incumbent.
IlsSolution sesd_solve(const IlsInstance& inst, std::uint64_t node_budget = 0);

// Same search seeded with a known alphabet point as the initial incumbent
// (re-costed on this instance). Used to chain solves across nearby lambdas;
// the returned minimum value matches the cold start, though among exactly
// tied minimizers the warm point wins.
IlsSolution sesd_solve_warm(const IlsInstance& inst, const std::vector<int>& warm_index,
                            std::uint64_t node_budget = 0);

struct SdOptions {
  std::uint64_t node_budget = 0;  // per sesd call; 0 = unlimited
  double lambda_tol = 1e-6;       // bisection stops when width < lambda_tol * lambda_max
  double power_tol = 1e-8;        // reserved band around q when comparing powers
  int max_bisect = 50;
};

// Quantized P-update: per-UE SESD solves assembled over a Lagrangian
// bisection on lambda. Returns the feasible iterate (tr(P P^H) <= q) with the
// highest power among those visited; when even the minimum-magnitude codebook
// matrix is infeasible the codebook step is mis-scaled -> ConfigError.
PrecodingMatrix solve_quantized_subproblem(const MatC& H, const VecC& beta, const VecR& d,
                                           double q, const QuantCodebook& cb,
                                           const SdOptions& opt = {});

}  // namespace qprecode
