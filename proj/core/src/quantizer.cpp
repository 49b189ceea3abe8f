#include "qprecode/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qprecode/errors.hpp"

namespace qprecode {

namespace {

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

double normal_pdf(double x) {
  static const double inv_sqrt_2pi = 0.3989422804014326779;
  return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.70710678118654752440); }

// E[(X - l)^2 ; a <= X < b] for X ~ N(0,1):
// (1 + l^2)(Phi(b) - Phi(a)) - (b phi(b) - a phi(a)) - 2 l (phi(a) - phi(b)).
// Infinite endpoints contribute zero to the phi terms.
double interval_moment(double a, double b, double l) {
  const double pa = std::isinf(a) ? 0.0 : normal_pdf(a);
  const double pb = std::isinf(b) ? 0.0 : normal_pdf(b);
  const double ca = std::isinf(a) ? (a < 0 ? 0.0 : 1.0) : normal_cdf(a);
  const double cb = std::isinf(b) ? (b < 0 ? 0.0 : 1.0) : normal_cdf(b);
  const double bpb = std::isinf(b) ? 0.0 : b * pb;
  const double apa = std::isinf(a) ? 0.0 : a * pa;
  return (1.0 + l * l) * (cb - ca) - (bpb - apa) - 2.0 * l * (pa - pb);
}

// Distortion of the L-level uniform quantizer with step delta at unit variance.
double unit_distortion(int levels, double delta) {
  double total = 0.0;
  for (int z = 0; z < levels; ++z) {
    const double l = delta * (z - (levels - 1) / 2.0);
    const double a = (z == 0) ? -std::numeric_limits<double>::infinity()
                              : delta * (z - levels / 2.0);
    const double b = (z == levels - 1) ? std::numeric_limits<double>::infinity()
                                       : delta * (z + 1 - levels / 2.0);
    total += interval_moment(a, b, l);
  }
  return total;
}

}  // namespace

QuantCodebook build_codebook(int levels, double step) {
  if (!is_power_of_two(levels) || levels < 2) {
    throw ConfigError("codebook levels must be a power of two >= 2, got " +
                      std::to_string(levels));
  }
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw ConfigError("codebook step must be positive and finite");
  }
  QuantCodebook cb;
  cb.step = step;
  cb.levels = levels;
  cb.labels.resize(levels);
  cb.thresholds.resize(levels - 1);
  for (int z = 0; z < levels; ++z) {
    cb.labels[z] = step * (z - (levels - 1) / 2.0);
  }
  for (int z = 1; z < levels; ++z) {
    cb.thresholds[z - 1] = step * (z - levels / 2.0);
  }
  return cb;
}

int quantize_index(double v, const QuantCodebook& cb) {
  if (!std::isfinite(v)) throw DomainError("quantizer input must be finite");
  // Half-open intervals [tau_z, tau_{z+1}): the index is the number of
  // thresholds <= v, which upper_bound gives directly.
  const auto it = std::upper_bound(cb.thresholds.begin(), cb.thresholds.end(), v);
  return static_cast<int>(it - cb.thresholds.begin());
}

double quantize_real(double v, const QuantCodebook& cb) {
  return cb.labels[static_cast<std::size_t>(quantize_index(v, cb))];
}

std::complex<double> quantize_scalar(std::complex<double> v, const QuantCodebook& cb) {
  return {quantize_real(v.real(), cb), quantize_real(v.imag(), cb)};
}

double expected_distortion(const QuantCodebook& cb, double variance) {
  if (!(variance > 0.0)) throw ConfigError("variance must be positive");
  // Scale change X = sigma * Y: distortion(sigma^2; delta) =
  // sigma^2 * distortion(1; delta/sigma).
  const double sigma = std::sqrt(variance);
  return variance * unit_distortion(cb.levels, cb.step / sigma);
}

double optimal_step_size(int levels, double variance) {
  if (!is_power_of_two(levels) || levels < 2) {
    throw ConfigError("codebook levels must be a power of two >= 2, got " +
                      std::to_string(levels));
  }
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw ConfigError("variance must be positive and finite");
  }
  // Golden-section search at unit variance on [lo, hi], then scale by sigma.
  const double inv_phi = 0.6180339887498948482;
  double lo = 1e-6;
  double hi = 4.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = unit_distortion(levels, x1);
  double f2 = unit_distortion(levels, x2);
  while (hi - lo > 1e-9) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = unit_distortion(levels, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = unit_distortion(levels, x2);
    }
  }
  const double delta = 0.5 * (lo + hi);
  const double d_star = unit_distortion(levels, delta);
  if (!(d_star <= unit_distortion(levels, 1e-6) && d_star <= unit_distortion(levels, 4.0))) {
    throw NumericError("step-size search failed to bracket a minimum");
  }
  return std::sqrt(variance) * delta;
}

}  // namespace qprecode
