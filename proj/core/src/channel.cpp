#include "qprecode/channel.hpp"

#include <cmath>
#include <numbers>

#include "qprecode/errors.hpp"
#include "qprecode/rng.hpp"

namespace qprecode {

namespace {

void check_geometry(const ArrayGeometry& geom) {
  if (geom.m_h < 1 || geom.m_v < 1) throw ConfigError("array must have at least one element");
  if (!(geom.d_h > 0.0) || !(geom.d_v > 0.0)) throw ConfigError("antenna spacings must be positive");
}

// Hermitian square root with negative eigenvalues clipped at zero.
MatC psd_sqrt(const MatC& R) {
  Eigen::SelfAdjointEigenSolver<MatC> es(R);
  if (es.info() != Eigen::Success) throw NumericError("correlation eigendecomposition failed");
  VecR ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = ev(i) > 0.0 ? std::sqrt(ev(i)) : 0.0;
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

VecC upa_los_vector(double azimuth, double elevation, const ArrayGeometry& geom) {
  check_geometry(geom);
  if (!std::isfinite(azimuth) || !std::isfinite(elevation)) {
    throw DomainError("angles must be finite");
  }
  const double two_pi = 2.0 * std::numbers::pi;
  VecC a(geom.size());
  for (int ah = 0; ah < geom.m_h; ++ah) {
    for (int bv = 0; bv < geom.m_v; ++bv) {
      const double phase = two_pi * (ah * geom.d_h * std::cos(elevation) * std::sin(azimuth) +
                                     bv * geom.d_v * std::sin(elevation));
      a(ah * geom.m_v + bv) = cxd(std::cos(phase), std::sin(phase));
    }
  }
  return a;
}

MatC local_scattering_correlation(double azimuth, double asd, const ArrayGeometry& geom) {
  check_geometry(geom);
  if (!(asd > 0.0) || !(asd < std::numbers::pi / 4.0)) {
    throw ConfigError("angular standard deviation must lie in (0, pi/4) radians");
  }
  const double two_pi = 2.0 * std::numbers::pi;
  MatC r_az(geom.m_h, geom.m_h);
  for (int a = 0; a < geom.m_h; ++a) {
    for (int ap = 0; ap < geom.m_h; ++ap) {
      const double u = two_pi * geom.d_h * (a - ap);
      const double phase = u * std::sin(azimuth);
      const double damp = std::exp(-0.5 * asd * asd * (u * std::cos(azimuth)) * (u * std::cos(azimuth)));
      r_az(a, ap) = damp * cxd(std::cos(phase), std::sin(phase));
    }
  }
  // R = R_az kron (all-ones m_v x m_v) in element order a*m_v + b.
  const int m = geom.size();
  MatC R(m, m);
  for (int a = 0; a < geom.m_h; ++a) {
    for (int b = 0; b < geom.m_v; ++b) {
      for (int ap = 0; ap < geom.m_h; ++ap) {
        for (int bp = 0; bp < geom.m_v; ++bp) {
          R(a * geom.m_v + b, ap * geom.m_v + bp) = r_az(a, ap);
        }
      }
    }
  }
  return R;
}

UeDrop random_drop(std::mt19937_64& rng, int K) {
  if (K < 1) throw ConfigError("need at least one UE");
  std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
  UeDrop drop;
  drop.azimuths.resize(K);
  drop.elevations = VecR::Zero(K);
  for (int k = 0; k < K; ++k) drop.azimuths(k) = u(rng);
  return drop;
}

ChannelRealization sample_channel(std::mt19937_64& rng, const UeDrop& drop, double kappa,
                                  const ArrayGeometry& geom, double asd) {
  check_geometry(geom);
  if (std::isnan(kappa) || kappa < 0.0) throw ConfigError("Rician factor must be >= 0");
  const int K = static_cast<int>(drop.azimuths.size());
  const int M = geom.size();
  ChannelRealization ch;
  ch.H.resize(K, M);
  ch.drop = drop;
  ch.correlations.reserve(K);
  const bool pure_los = std::isinf(kappa);
  const double w_los = pure_los ? 1.0 : std::sqrt(kappa / (kappa + 1.0));
  const double w_nlos = pure_los ? 0.0 : std::sqrt(1.0 / (kappa + 1.0));
  for (int k = 0; k < K; ++k) {
    const VecC los = upa_los_vector(drop.azimuths(k), drop.elevations(k), geom);
    MatC R = local_scattering_correlation(drop.azimuths(k), asd, geom);
    ch.correlations.push_back(R);
    if (pure_los) {
      ch.H.row(k) = los.transpose();
      continue;
    }
    const MatC root = psd_sqrt(R);
    VecC w(M);
    for (int m = 0; m < M; ++m) w(m) = cnormal(rng);
    ch.H.row(k) = (w_los * los + w_nlos * (root * w)).transpose();
  }
  return ch;
}

}  // namespace qprecode
