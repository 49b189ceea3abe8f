#pragma once

#include <complex>
#include <vector>

namespace qprecode {

// Symmetric uniform scalar quantizer applied independently to real and
// imaginary parts. labels[z] = step*(z - (levels-1)/2); thresholds are the
// midpoints between adjacent labels. The complex alphabet is the Cartesian
// product labels x labels.
struct QuantCodebook {
  double step = 0.0;
  int levels = 0;
  std::vector<double> labels;      // size levels, strictly increasing, symmetric about 0
  std::vector<double> thresholds;  // size levels-1, thresholds[z-1] = step*(z - levels/2)
};

// levels must be a power of two >= 2; step > 0.
QuantCodebook build_codebook(int levels, double step);

// Index of the label whose interval [tau_z, tau_{z+1}) contains v.
// Intervals are half-open: a value equal to a threshold maps to the upper
// interval. The extreme intervals extend to +-infinity (saturation).
int quantize_index(double v, const QuantCodebook& cb);

// Nearest-label quantization of one real value (via quantize_index).
double quantize_real(double v, const QuantCodebook& cb);

// Real and imaginary parts quantized independently; result is in the complex
// alphabet. Non-finite input -> DomainError.
std::complex<double> quantize_scalar(std::complex<double> v, const QuantCodebook& cb);

// Step size minimizing E[(X - Q(X))^2] for X ~ Normal(0, variance), found by
// golden-section search on the closed-form per-interval Gaussian moments at
// unit variance and scaled by sqrt(variance). The variance argument is per
// real dimension.
double optimal_step_size(int levels, double variance);

// E[(X - Q(X))^2] for X ~ Normal(0, variance), evaluated in closed form from
// the Gaussian CDF/PDF per interval. The quadrature-based reference lives in
// oracles.hpp.
double expected_distortion(const QuantCodebook& cb, double variance);

}  // namespace qprecode
