#pragma once

#include <random>
#include <vector>

#include "qprecode/types.hpp"

namespace qprecode {

// Uniform planar array, m_h x m_v elements, spacings in wavelengths.
// Element (a, b) with a = 0..m_h-1, b = 0..m_v-1 maps to index a*m_v + b.
struct ArrayGeometry {
  int m_h = 1;
  int m_v = 1;
  double d_h = 0.5;
  double d_v = 0.5;
  int size() const { return m_h * m_v; }
};

// Per-drop UE geometry; elevations are identically zero.
struct UeDrop {
  VecR azimuths;
  VecR elevations;
};

// One channel realization: K x M matrix H whose row k is the (unconjugated)
// transpose of UE k's channel vector, so received symbols are rows of H*P.
struct ChannelRealization {
  MatC H;
  UeDrop drop;
  std::vector<MatC> correlations;  // one Hermitian PSD M x M matrix per UE, unit diagonal
};

// Array response for a planar wavefront from (azimuth, elevation):
// entry (a, b) = exp(j*2*pi*(a*d_h*cos(el)*sin(az) + b*d_v*sin(el))).
// All entries have unit modulus.
VecC upa_los_vector(double azimuth, double elevation, const ArrayGeometry& geom);

// Gaussian local-scattering spatial correlation around the given azimuth with
// angular standard deviation asd (radians, 0 < asd < pi/4):
//   [R_az]_{a,a'} = exp(j*2*pi*d_h*(a-a')*sin(az)) * exp(-(asd^2/2)*(2*pi*d_h*(a-a')*cos(az))^2)
// extended to the full array as R_az kron (all-ones m_v x m_v), matching the
// zero-elevation-spread assumption. Unit diagonal, Hermitian, PSD.
MatC local_scattering_correlation(double azimuth, double asd, const ArrayGeometry& geom);

// K azimuths i.i.d. uniform on [-pi, pi); elevations zero.
UeDrop random_drop(std::mt19937_64& rng, int K);

// Rician fading per UE:
//   row k = sqrt(kappa/(kappa+1)) * los_k^T + sqrt(1/(kappa+1)) * (R_k^{1/2} w_k)^T
// with w_k ~ CN(0, I). R_k^{1/2} comes from an eigendecomposition with
// negative eigenvalues clipped at zero. Per-entry second moment is 1.
// kappa may be +infinity (pure LoS; consumes no Gaussian draws).
ChannelRealization sample_channel(std::mt19937_64& rng, const UeDrop& drop, double kappa,
                                  const ArrayGeometry& geom, double asd);

}  // namespace qprecode
