#include "qprecode/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "qprecode/errors.hpp"

namespace qprecode {

namespace {

// Candidate enumeration state for the reference search. Matches the solver's
// zig-zag order and arithmetic expression-for-expression so that residuals
// and tie winners agree exactly, but enumerates the whole tree.
struct FullSearch {
  int n = 0;
  int L = 0;
  std::vector<double> g;  // row-major
  std::vector<double> cv;
  std::vector<double> lab;
  std::vector<double> mid;
  std::vector<int> z;
  std::vector<int> best_z;
  double best = std::numeric_limits<double>::infinity();
  std::uint64_t nodes = 0;

  void rec(int i, double acc) {
    const double* row = g.data() + static_cast<std::size_t>(i) * n;
    double sum = 0.0;
    for (int j = i + 1; j < n; ++j) sum += row[j] * lab[z[j]];
    const double rho = (cv[i] - sum) / row[i];
    const auto it = std::upper_bound(mid.begin(), mid.end(), rho);
    const int z0 = static_cast<int>(it - mid.begin());
    int zz = z0;
    int jmp = (rho >= lab[z0]) ? 1 : -1;
    for (int used = 0; used < L; ++used) {
      if (used > 0) {
        do {
          zz += jmp;
          jmp = -jmp - (jmp > 0 ? 1 : -1);
        } while (zz < 0 || zz >= L);
      }
      z[i] = zz;
      const double err = cv[i] - sum - row[i] * lab[zz];
      const double t = err * err;
      ++nodes;
      const double val = acc + t;
      if (i == 0) {
        if (val < best) {
          best = val;
          best_z = z;
        }
      } else {
        rec(i - 1, val);
      }
    }
  }
};

void check_enumeration_size(double base, int exponent, std::uint64_t max_points,
                            const char* what) {
  long double points = 1.0L;
  for (int i = 0; i < exponent; ++i) {
    points *= base;
    if (points > static_cast<long double>(max_points)) {
      throw OracleBudgetError(std::string(what) + " enumeration exceeds the oracle budget of " +
                              std::to_string(max_points) + " points");
    }
  }
}

}  // namespace

IlsSolution exhaustive_ils(const IlsInstance& inst, const OracleBudget& budget) {
  const int n = static_cast<int>(inst.c.size());
  const int L = static_cast<int>(inst.alphabet.size());
  if (n < 1 || inst.G.rows() != n || inst.G.cols() != n || L < 1) {
    throw ConfigError("malformed ILS instance");
  }
  for (int i = 0; i < n; ++i) {
    if (!(inst.G(i, i) > 0.0)) throw ConfigError("ILS matrix diagonal must be strictly positive");
  }
  check_enumeration_size(L, n, budget.max_points, "ILS");

  FullSearch fs;
  fs.n = n;
  fs.L = L;
  fs.g.resize(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) fs.g[static_cast<std::size_t>(i) * n + j] = inst.G(i, j);
  }
  fs.cv.assign(inst.c.data(), inst.c.data() + n);
  fs.lab = inst.alphabet;
  fs.mid.resize(L - 1);
  for (int t = 0; t + 1 < L; ++t) fs.mid[t] = 0.5 * (fs.lab[t] + fs.lab[t + 1]);
  fs.z.assign(n, 0);
  fs.rec(n - 1, 0.0);

  IlsSolution sol;
  sol.point_index = fs.best_z;
  sol.point.resize(n);
  for (int i = 0; i < n; ++i) sol.point(i) = fs.lab[fs.best_z[i]];
  sol.residual = fs.best;
  sol.nodes_visited = fs.nodes;
  return sol;
}

double weighted_mse_objective(const MatC& H, const VecC& beta, const VecR& d, double N0,
                              const MatC& P) {
  const int K = static_cast<int>(H.rows());
  const int M = static_cast<int>(H.cols());
  double obj = 0.0;
  for (int k = 0; k < K; ++k) {
    double sum_sq = 0.0;
    cxd direct(0.0, 0.0);
    for (int i = 0; i < static_cast<int>(P.cols()); ++i) {
      cxd y(0.0, 0.0);
      for (int m = 0; m < M; ++m) y += H(k, m) * P(m, i);
      sum_sq += std::norm(y);
      if (i == k) direct = y;
    }
    const double e =
        std::norm(beta(k)) * (sum_sq + N0) - 2.0 * std::real(beta(k) * direct) + 1.0;
    obj += d(k) * e;
  }
  return obj;
}

PrecodingMatrix exhaustive_p3(const MatC& H, const VecC& beta, const VecR& d, double N0, double q,
                              const QuantCodebook& cb, const OracleBudget& budget) {
  if (!(q >= 0.0)) throw ConfigError("power budget must be >= 0");
  const int K = static_cast<int>(H.rows());
  const int M = static_cast<int>(H.cols());
  const int L = cb.levels;
  const int entries = M * K;
  check_enumeration_size(static_cast<double>(L) * L, entries, budget.max_points, "precoder");

  // Odometer over M*K complex entries, digit = ri + L*ii, entry (m, k) at
  // position m + M*k, least-significant digit first.
  std::vector<int> digit(entries, 0);
  MatC P(M, K);
  for (int e = 0; e < entries; ++e) P(e % M, e / M) = cxd(cb.labels[0], cb.labels[0]);

  double best = std::numeric_limits<double>::infinity();
  MatC best_P;
  bool any_feasible = false;
  while (true) {
    double power = 0.0;
    for (int e = 0; e < entries; ++e) power += std::norm(P(e % M, e / M));
    if (power <= q) {
      const double obj = weighted_mse_objective(H, beta, d, N0, P);
      if (obj < best) {
        best = obj;
        best_P = P;
        any_feasible = true;
      }
    }
    int e = 0;
    while (e < entries) {
      if (++digit[e] < L * L) break;
      digit[e] = 0;
      P(e % M, e / M) = cxd(cb.labels[0], cb.labels[0]);
      ++e;
    }
    if (e == entries) break;
    const int ri = digit[e] % L;
    const int ii = digit[e] / L;
    P(e % M, e / M) = cxd(cb.labels[static_cast<std::size_t>(ri)],
                          cb.labels[static_cast<std::size_t>(ii)]);
  }
  if (!any_feasible) {
    throw DomainError("no codebook matrix satisfies the power constraint");
  }
  PrecodingMatrix out;
  out.entries = std::move(best_P);
  out.constrained = true;
  out.codebook = cb;
  return out;
}

namespace {

double normal_pdf_sigma(double x, double sigma) {
  static const double inv_sqrt_2pi = 0.3989422804014326779;
  const double u = x / sigma;
  return inv_sqrt_2pi / sigma * std::exp(-0.5 * u * u);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fb, double fm, double whole, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, fm, flm, left, 0.5 * eps, depth - 1) +
         adaptive_simpson(f, m, b, fm, fb, frm, right, 0.5 * eps, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double eps) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fb, fm, whole, eps, 48);
}

}  // namespace

double quantizer_distortion(const QuantCodebook& cb, double variance) {
  if (!(variance > 0.0)) throw ConfigError("variance must be positive");
  const double sigma = std::sqrt(variance);
  // Tails beyond 12 sigma past the outermost thresholds are negligible at the
  // 1e-10 absolute target.
  const double span = 12.0 * sigma;
  double total = 0.0;
  for (int z = 0; z < cb.levels; ++z) {
    const double l = cb.labels[static_cast<std::size_t>(z)];
    const double a = (z == 0) ? std::min(cb.thresholds.front(), -span) - span
                              : cb.thresholds[static_cast<std::size_t>(z - 1)];
    const double b = (z == cb.levels - 1) ? std::max(cb.thresholds.back(), span) + span
                                          : cb.thresholds[static_cast<std::size_t>(z)];
    const auto f = [l, sigma](double x) {
      return (x - l) * (x - l) * normal_pdf_sigma(x, sigma);
    };
    total += integrate(f, a, b, 1e-11 / cb.levels);
  }
  return total;
}

}  // namespace qprecode
