#include "qprecode/ils.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace qprecode {

namespace {

void validate_instance(const IlsInstance& inst) {
  const Eigen::Index n = inst.c.size();
  if (n < 1) throw ConfigError("ILS instance must have at least one dimension");
  if (inst.G.rows() != n || inst.G.cols() != n) {
    throw ConfigError("ILS matrix must be square and match the target length");
  }
  if (inst.alphabet.empty()) throw ConfigError("ILS alphabet must be non-empty");
  for (std::size_t t = 0; t + 1 < inst.alphabet.size(); ++t) {
    if (!(inst.alphabet[t] < inst.alphabet[t + 1])) {
      throw ConfigError("ILS alphabet must be strictly increasing");
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(inst.G(i, i) > 0.0)) throw ConfigError("ILS matrix diagonal must be strictly positive");
    for (Eigen::Index j = 0; j < i; ++j) {
      if (inst.G(i, j) != 0.0) throw ConfigError("ILS matrix must be upper-triangular");
    }
  }
  if (!inst.G.allFinite() || !inst.c.allFinite()) {
    throw DomainError("ILS instance contains non-finite values");
  }
  for (double a : inst.alphabet) {
    if (!std::isfinite(a)) throw DomainError("ILS alphabet contains non-finite values");
  }
}

// Depth-first Schnorr-Euchner enumeration over alphabet^n. Levels run from
// n-1 (a single unknown) down to 0; at each level candidates are visited in
// zig-zag order around the conditional center, so per-level partial distances
// are non-decreasing and a pruned candidate prunes the rest of its level.
struct Search {
  int n = 0;
  int L = 0;
  std::vector<double> g;    // row-major copy of G
  std::vector<double> cv;   // c
  std::vector<double> lab;  // alphabet
  std::vector<double> mid;  // label midpoints, size L-1
  std::uint64_t budget = 0;
  std::uint64_t nodes = 0;

  std::vector<int> z;       // current label index per level
  std::vector<int> jump;    // next zig-zag displacement per level
  std::vector<int> used;    // in-range candidates consumed per level
  std::vector<double> xi;   // interference of fixed levels above, per level
  std::vector<double> acc;  // partial squared distance accumulated above level i

  double best = std::numeric_limits<double>::infinity();
  std::vector<int> best_z;
  bool has_best = false;
};

// Index of the label nearest to rho; exactly-between values take the upper
// label, matching the quantizer's half-open threshold convention.
int nearest_index(const Search& s, double rho) {
  const auto it = std::upper_bound(s.mid.begin(), s.mid.end(), rho);
  return static_cast<int>(it - s.mid.begin());
}

// First candidate at a freshly entered level: Babai index, outward step
// toward the side the center leans to.
void enter_level(Search& s, int i) {
  const double* row = s.g.data() + static_cast<std::size_t>(i) * s.n;
  double sum = 0.0;
  for (int j = i + 1; j < s.n; ++j) sum += row[j] * s.lab[s.z[j]];
  s.xi[i] = sum;
  const double rho = (s.cv[i] - sum) / row[i];
  const int z0 = nearest_index(s, rho);
  s.z[i] = z0;
  s.jump[i] = (rho >= s.lab[z0]) ? 1 : -1;
  s.used[i] = 1;
}

// Next in-range zig-zag candidate at level i; false once all L are consumed.
// The (position, jump) pair walks the full integer zig-zag sequence, skipping
// positions outside [0, L).
bool advance(Search& s, int i) {
  if (s.used[i] >= s.L) return false;
  int zz = s.z[i];
  int j = s.jump[i];
  do {
    zz += j;
    j = -j - (j > 0 ? 1 : -1);
  } while (zz < 0 || zz >= s.L);
  s.z[i] = zz;
  s.jump[i] = j;
  ++s.used[i];
  return true;
}

// Residual of a fixed point through the same per-level recurrence the search
// uses, so a warm incumbent is comparable bit for bit.
double path_residual(const Search& s, const std::vector<int>& z) {
  double acc = 0.0;
  for (int i = s.n - 1; i >= 0; --i) {
    const double* row = s.g.data() + static_cast<std::size_t>(i) * s.n;
    double sum = 0.0;
    for (int j = i + 1; j < s.n; ++j) sum += row[j] * s.lab[z[j]];
    const double err = s.cv[i] - sum - row[i] * s.lab[z[i]];
    const double t = err * err;
    acc = acc + t;
  }
  return acc;
}

IlsSolution to_solution(const Search& s) {
  IlsSolution sol;
  sol.point_index = s.best_z;
  sol.point.resize(s.n);
  for (int i = 0; i < s.n; ++i) sol.point(i) = s.lab[s.best_z[i]];
  sol.residual = s.best;
  sol.nodes_visited = s.nodes;
  return sol;
}

IlsSolution sesd_core(const IlsInstance& inst, std::uint64_t budget, const std::vector<int>* warm) {
  validate_instance(inst);
  Search s;
  s.n = static_cast<int>(inst.c.size());
  s.L = static_cast<int>(inst.alphabet.size());
  s.budget = budget;
  s.g.resize(static_cast<std::size_t>(s.n) * s.n);
  for (int i = 0; i < s.n; ++i) {
    for (int j = 0; j < s.n; ++j) s.g[static_cast<std::size_t>(i) * s.n + j] = inst.G(i, j);
  }
  s.cv.assign(inst.c.data(), inst.c.data() + s.n);
  s.lab = inst.alphabet;
  s.mid.resize(s.L - 1);
  for (int t = 0; t + 1 < s.L; ++t) s.mid[t] = 0.5 * (s.lab[t] + s.lab[t + 1]);
  s.z.assign(s.n, 0);
  s.jump.assign(s.n, 1);
  s.used.assign(s.n, 0);
  s.xi.assign(s.n, 0.0);
  s.acc.assign(s.n, 0.0);

  if (warm != nullptr) {
    if (static_cast<int>(warm->size()) != s.n) {
      throw ConfigError("warm-start point has the wrong length");
    }
    for (int idx : *warm) {
      if (idx < 0 || idx >= s.L) throw ConfigError("warm-start index outside the alphabet");
    }
    s.best = path_residual(s, *warm);
    s.best_z = *warm;
    s.has_best = true;
  }

  int i = s.n - 1;
  s.acc[i] = 0.0;
  bool entering = true;
  while (true) {
    if (entering) {
      enter_level(s, i);
      entering = false;
    } else if (!advance(s, i)) {
      if (++i == s.n) break;
      continue;
    }
    const double* row = s.g.data() + static_cast<std::size_t>(i) * s.n;
    const double err = s.cv[i] - s.xi[i] - row[i] * s.lab[s.z[i]];
    const double t = err * err;
    ++s.nodes;
    if (s.budget != 0 && s.nodes > s.budget) {
      throw NodeBudgetError(
          "sphere decoder exceeded its node budget of " + std::to_string(s.budget), s.nodes,
          s.has_best, s.has_best ? to_solution(s) : IlsSolution{});
    }
    const double val = s.acc[i] + t;
    if (val >= s.best) {
      // Candidates at this level only get farther from the center.
      if (++i == s.n) break;
      continue;
    }
    if (i == 0) {
      s.best = val;
      s.best_z = s.z;
      s.has_best = true;
      if (++i == s.n) break;
      continue;
    }
    s.acc[i - 1] = val;
    --i;
    entering = true;
  }
  return to_solution(s);
}

}  // namespace

IlsSolution sesd_solve(const IlsInstance& inst, std::uint64_t node_budget) {
  return sesd_core(inst, node_budget, nullptr);
}

IlsSolution sesd_solve_warm(const IlsInstance& inst, const std::vector<int>& warm_index,
                            std::uint64_t node_budget) {
  return sesd_core(inst, node_budget, &warm_index);
}

namespace {

// Shared factorization of V = A + lambda*I (A = (DH)^H DH) into the real
// upper-triangular system all UEs of one lambda evaluation use. Qt carries
// the diagonal sign fix, so G = R has a strictly positive diagonal.
struct RealFactor {
  MatR R;
  MatR Qt;
  MatC Lc;  // complex lower Cholesky factor of V
  Eigen::Index M = 0;
};

RealFactor make_factor(const MatC& A, double lambda) {
  const Eigen::Index M = A.rows();
  MatC V = A;
  V.diagonal().array() += lambda;
  Eigen::LLT<MatC> llt(V);
  if (llt.info() != Eigen::Success) {
    throw NumericError("quantized-subproblem Gram matrix not positive definite; use lambda > 0");
  }
  RealFactor fac;
  fac.M = M;
  fac.Lc = llt.matrixL();
  const MatC Gc = fac.Lc.adjoint();
  const Eigen::Index n = 2 * M;
  MatR Gr(n, n);
  Gr.topLeftCorner(M, M) = Gc.real();
  Gr.topRightCorner(M, M) = -Gc.imag();
  Gr.bottomLeftCorner(M, M) = Gc.imag();
  Gr.bottomRightCorner(M, M) = Gc.real();
  Eigen::HouseholderQR<MatR> qr(Gr);
  MatR R = qr.matrixQR().triangularView<Eigen::Upper>();
  MatR Q = qr.householderQ();
  MatR Qt = Q.transpose();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (R(i, i) == 0.0) throw NumericError("rank-deficient real expansion");
    if (R(i, i) < 0.0) {
      R.row(i) = -R.row(i);
      Qt.row(i) = -Qt.row(i);
    }
  }
  fac.R = std::move(R);
  fac.Qt = std::move(Qt);
  return fac;
}

VecR make_target(const RealFactor& fac, const VecC& f) {
  const VecC cc = fac.Lc.triangularView<Eigen::Lower>().solve(f.conjugate());
  VecR cr(2 * fac.M);
  cr.head(fac.M) = cc.real();
  cr.tail(fac.M) = cc.imag();
  return fac.Qt * cr;
}

// Row k of sqrt(diag(d)) * D * H, as a column vector.
VecC weighted_row(const MatC& H, const EffectiveWeights& ew, int k) {
  return (std::sqrt(ew.d(k)) * ew.D_diag(k)) * H.row(k).transpose();
}

}  // namespace

IlsInstance build_per_ue_instance(const MatC& H, const EffectiveWeights& ew, double lambda,
                                  int ue_index, const QuantCodebook& cb) {
  if (lambda < 0.0 || !std::isfinite(lambda)) throw ConfigError("lambda must be finite and >= 0");
  if (ue_index < 0 || ue_index >= H.rows()) throw ConfigError("UE index out of range");
  if (ew.D_diag.size() != H.rows()) throw ConfigError("weight/channel dimension mismatch");
  const MatC DH = ew.D_diag.asDiagonal() * H;
  const MatC A = DH.adjoint() * DH;
  const RealFactor fac = make_factor(A, lambda);
  IlsInstance inst;
  inst.G = fac.R;
  inst.c = make_target(fac, weighted_row(H, ew, ue_index));
  inst.alphabet = cb.labels;
  return inst;
}

PrecodingMatrix solve_quantized_subproblem(const MatC& H, const VecC& beta, const VecR& d,
                                           double q, const QuantCodebook& cb,
                                           const SdOptions& opt) {
  if (!(q > 0.0)) throw ConfigError("power budget must be positive");
  const EffectiveWeights ew = effective_weights(beta, d);
  const int K = static_cast<int>(H.rows());
  const int M = static_cast<int>(H.cols());
  const MatC DH = ew.D_diag.asDiagonal() * H;
  const MatC A = DH.adjoint() * DH;
  std::vector<VecC> f(K);
  for (int k = 0; k < K; ++k) f[k] = weighted_row(H, ew, k);

  std::vector<std::vector<int>> warm(K);
  const auto solve_at = [&](double lambda) -> std::pair<MatC, double> {
    const RealFactor fac = make_factor(A, lambda);
    MatC P(M, K);
    for (int k = 0; k < K; ++k) {
      IlsInstance inst;
      inst.G = fac.R;
      inst.c = make_target(fac, f[k]);
      inst.alphabet = cb.labels;
      IlsSolution sol;
      try {
        sol = warm[k].empty() ? sesd_solve(inst, opt.node_budget)
                              : sesd_solve_warm(inst, warm[k], opt.node_budget);
      } catch (const NodeBudgetError& e) {
        if (!e.has_incumbent) throw;
        sol = e.incumbent;
      }
      warm[k] = sol.point_index;
      for (int m = 0; m < M; ++m) P(m, k) = cxd(sol.point(m), sol.point(M + m));
    }
    const double power = P.squaredNorm();
    return {std::move(P), power};
  };

  const auto as_result = [&](MatC P) {
    PrecodingMatrix out;
    out.entries = std::move(P);
    out.constrained = true;
    out.codebook = cb;
    return out;
  };

  // Unconstrained (or minimally regularized) point first.
  std::pair<MatC, double> cur;
  try {
    cur = solve_at(0.0);
  } catch (const NumericError&) {
    const double lam_min = 1e-8 * A.trace().real() / M;
    cur = solve_at(lam_min);
  }
  if (cur.second <= q) return as_result(std::move(cur.first));

  double hi = 1.0;
  int doublings = 0;
  std::pair<MatC, double> at_hi = solve_at(hi);
  while (at_hi.second > q) {
    hi *= 2.0;
    at_hi = solve_at(hi);
    if (++doublings > 60) {
      throw ConfigError(
          "power budget unreachable even for the smallest-magnitude codebook matrix; "
          "the codebook step is mis-scaled for this q");
    }
  }
  const double lambda_max = hi;
  double lo = 0.0;
  MatC best_P = std::move(at_hi.first);
  double best_power = at_hi.second;
  for (int it = 0; it < opt.max_bisect; ++it) {
    if (hi - lo < opt.lambda_tol * lambda_max) break;
    if (q - best_power <= opt.power_tol * q) break;
    const double mid = 0.5 * (lo + hi);
    std::pair<MatC, double> at_mid = solve_at(mid);
    if (at_mid.second <= q) {
      hi = mid;
      if (at_mid.second > best_power) {
        best_power = at_mid.second;
        best_P = std::move(at_mid.first);
      }
    } else {
      lo = mid;
    }
  }
  return as_result(std::move(best_P));
}

}  // namespace qprecode
