#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>

#include "qprecode/channel.hpp"
#include "qprecode/errors.hpp"
#include "qprecode/rng.hpp"

using namespace qprecode;

namespace {

constexpr double pi = std::numbers::pi;

ArrayGeometry geom(int m_h, int m_v, double d_h = 0.5, double d_v = 0.5) {
  ArrayGeometry g;
  g.m_h = m_h;
  g.m_v = m_v;
  g.d_h = d_h;
  g.d_v = d_v;
  return g;
}

// E[exp(j*u*(sin(az) + delta*cos(az)))] for delta ~ N(0, asd^2) by Simpson
// integration; the linearized-phase expectation the correlation model encodes.
cxd linearized_expectation(double u, double az, double asd) {
  const double lo = -8.0 * asd;
  const double hi = 8.0 * asd;
  const int n = 4000;  // even
  const double h = (hi - lo) / n;
  auto f = [&](double delta) {
    const double phase = u * (std::sin(az) + delta * std::cos(az));
    const double w = std::exp(-0.5 * delta * delta / (asd * asd)) /
                     (asd * std::sqrt(2.0 * pi));
    return cxd(std::cos(phase) * w, std::sin(phase) * w);
  };
  cxd acc = f(lo) + f(hi);
  for (int i = 1; i < n; ++i) {
    acc += f(lo + i * h) * ((i % 2) ? 4.0 : 2.0);
  }
  return acc * (h / 3.0);
}

}  // namespace

TEST_CASE("boresight steering vector is all ones") {
  const VecC a = upa_los_vector(0.0, 0.0, geom(4, 4));
  REQUIRE(a.size() == 16);
  for (int i = 0; i < a.size(); ++i) {
    CHECK(a(i).real() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(a(i).imag() == doctest::Approx(0.0).epsilon(1e-15));
  }
}

TEST_CASE("endfire steering alternates sign along the horizontal axis") {
  const ArrayGeometry g = geom(4, 2);
  const VecC a = upa_los_vector(pi / 2.0, 0.0, g);
  for (int ah = 0; ah < g.m_h; ++ah) {
    for (int bv = 0; bv < g.m_v; ++bv) {
      const cxd want = (ah % 2) ? cxd(-1.0, 0.0) : cxd(1.0, 0.0);
      const cxd got = a(ah * g.m_v + bv);
      CHECK(std::abs(got - want) < 1e-12);
    }
  }
}

TEST_CASE("steering entries have unit modulus and squared norm M") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-pi, pi);
  for (int trial = 0; trial < 50; ++trial) {
    const ArrayGeometry g = geom(1 + trial % 4, 1 + (trial / 4) % 4);
    const VecC a = upa_los_vector(u(rng), 0.3 * u(rng), g);
    for (int i = 0; i < a.size(); ++i) {
      CHECK(std::abs(std::abs(a(i)) - 1.0) < 1e-14);
    }
    CHECK(a.squaredNorm() == doctest::Approx(g.size()).epsilon(1e-13));
  }
}

TEST_CASE("element order is horizontal-major") {
  // With a nonzero elevation the vertical index contributes its own phase.
  const ArrayGeometry g = geom(2, 3);
  const double az = 0.7;
  const double el = 0.4;
  const VecC a = upa_los_vector(az, el, g);
  const double h_step = 2.0 * pi * g.d_h * std::cos(el) * std::sin(az);
  const double v_step = 2.0 * pi * g.d_v * std::sin(el);
  for (int ah = 0; ah < 2; ++ah) {
    for (int bv = 0; bv < 3; ++bv) {
      const double phase = ah * h_step + bv * v_step;
      CHECK(std::abs(a(ah * 3 + bv) - cxd(std::cos(phase), std::sin(phase))) < 1e-12);
    }
  }
}

TEST_CASE("adjacent-element correlation magnitude matches the closed form") {
  const double asd = 10.0 * pi / 180.0;
  const MatC R = local_scattering_correlation(0.0, asd, geom(4, 1));
  const double want = std::exp(-0.5 * asd * asd * pi * pi);
  CHECK(want == doctest::Approx(0.8605).epsilon(5e-4));
  for (int a = 0; a + 1 < 4; ++a) {
    CHECK(std::abs(R(a, a + 1)) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("correlation entries match the linearized-phase expectation") {
  for (const double az : {0.0, 0.6, -1.2}) {
    for (const double asd : {0.05, 0.1745}) {
      const ArrayGeometry g = geom(3, 1);
      const MatC R = local_scattering_correlation(az, asd, g);
      for (int a = 0; a < 3; ++a) {
        for (int ap = 0; ap < 3; ++ap) {
          const double u = 2.0 * pi * g.d_h * (a - ap);
          const cxd want = linearized_expectation(u, az, asd);
          CHECK(std::abs(R(a, ap) - want) < 1e-6);
        }
      }
    }
  }
}

TEST_CASE("vanishing angular spread degenerates to the steering outer product") {
  const double az = 0.9;
  const ArrayGeometry g = geom(4, 2);
  const MatC R = local_scattering_correlation(az, 1e-8, g);
  const VecC a = upa_los_vector(az, 0.0, g);
  const MatC want = a * a.adjoint();
  CHECK((R - want).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("correlation matrices are Hermitian, unit-diagonal, PSD") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> uaz(-pi, pi);
  std::uniform_real_distribution<double> uasd(pi / 180.0, pi / 6.0);
  for (int trial = 0; trial < 100; ++trial) {
    const ArrayGeometry g = geom(1 + trial % 4, 1 + (trial / 4) % 4);
    const MatC R = local_scattering_correlation(uaz(rng), uasd(rng), g);
    CHECK((R - R.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    for (int i = 0; i < R.rows(); ++i) {
      CHECK(std::abs(R(i, i) - cxd(1.0, 0.0)) < 1e-12);
    }
    Eigen::SelfAdjointEigenSolver<MatC> es(0.5 * (R + R.adjoint()));
    REQUIRE(es.info() == Eigen::Success);
    CHECK(es.eigenvalues().minCoeff() >= -1e-8);
  }
}

TEST_CASE("angular spread outside (0, pi/4) is rejected") {
  CHECK_THROWS_AS(local_scattering_correlation(0.0, 0.0, geom(2, 2)), ConfigError);
  CHECK_THROWS_AS(local_scattering_correlation(0.0, -0.1, geom(2, 2)), ConfigError);
  CHECK_THROWS_AS(local_scattering_correlation(0.0, pi / 4.0, geom(2, 2)), ConfigError);
}

TEST_CASE("random drops: shape, range, determinism, mean") {
  auto rng = derive_stream(42, 0);
  const UeDrop drop = random_drop(rng, 4);
  REQUIRE(drop.azimuths.size() == 4);
  REQUIRE(drop.elevations.size() == 4);
  CHECK(drop.elevations.cwiseAbs().maxCoeff() == 0.0);
  for (int k = 0; k < 4; ++k) {
    CHECK(drop.azimuths(k) >= -pi);
    CHECK(drop.azimuths(k) < pi);
  }

  auto rng2 = derive_stream(42, 0);
  const UeDrop again = random_drop(rng2, 4);
  CHECK(drop.azimuths == again.azimuths);

  auto rng3 = derive_stream(7, 0);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n / 4; ++i) {
    const UeDrop d = random_drop(rng3, 4);
    sum += d.azimuths.sum();
  }
  CHECK(std::abs(sum / n) < 0.02);

  CHECK_THROWS_AS(random_drop(rng3, 0), ConfigError);
}

TEST_CASE("pure line-of-sight channel is deterministic") {
  const ArrayGeometry g = geom(2, 2);
  auto rng = derive_stream(1, 0);
  UeDrop drop = random_drop(rng, 3);
  const double inf = std::numeric_limits<double>::infinity();

  auto rng_a = derive_stream(100, 0);
  auto rng_b = derive_stream(200, 0);  // different stream: draws must not matter
  const ChannelRealization a = sample_channel(rng_a, drop, inf, g, 0.1745);
  const ChannelRealization b = sample_channel(rng_b, drop, inf, g, 0.1745);
  CHECK(a.H == b.H);
  for (int k = 0; k < 3; ++k) {
    const VecC los = upa_los_vector(drop.azimuths(k), 0.0, g);
    CHECK((a.H.row(k).transpose() - los).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("channel determinism under a fixed seed") {
  const ArrayGeometry g = geom(4, 2);
  for (const double kappa : {0.0, 5.0}) {
    auto rng_a = derive_stream(9, 3);
    auto rng_b = derive_stream(9, 3);
    const UeDrop drop_a = random_drop(rng_a, 4);
    const UeDrop drop_b = random_drop(rng_b, 4);
    const ChannelRealization a = sample_channel(rng_a, drop_a, kappa, g, 0.1745);
    const ChannelRealization b = sample_channel(rng_b, drop_b, kappa, g, 0.1745);
    CHECK(a.H == b.H);
  }
}

TEST_CASE("single-element array gives i.i.d. unit-variance Rayleigh entries") {
  // With M = 1 the correlation matrix is exactly [1], so kappa = 0 entries are
  // plain CN(0, 1).
  const ArrayGeometry g = geom(1, 1);
  auto rng = derive_stream(21, 0);
  UeDrop drop;
  drop.azimuths = VecR::Zero(2);
  drop.elevations = VecR::Zero(2);
  double acc = 0.0;
  const int draws = 50000;
  for (int i = 0; i < draws; ++i) {
    const ChannelRealization ch = sample_channel(rng, drop, 0.0, g, 0.1745);
    acc += ch.H.squaredNorm();
  }
  const double per_entry = acc / (2.0 * draws);
  CHECK(per_entry == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("Rician entries keep unit second moment") {
  const ArrayGeometry g = geom(2, 2);
  auto rng = derive_stream(22, 0);
  double acc = 0.0;
  std::int64_t entries = 0;
  const int draws = 25000;
  for (int i = 0; i < draws; ++i) {
    const UeDrop drop = random_drop(rng, 1);
    const ChannelRealization ch = sample_channel(rng, drop, 5.0, g, 0.1745);
    acc += ch.H.squaredNorm();
    entries += ch.H.size();
  }
  CHECK(acc / static_cast<double>(entries) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("realization carries per-UE correlation matrices") {
  const ArrayGeometry g = geom(2, 3);
  auto rng = derive_stream(5, 0);
  const UeDrop drop = random_drop(rng, 2);
  const ChannelRealization ch = sample_channel(rng, drop, 5.0, g, 0.1745);
  REQUIRE(ch.correlations.size() == 2);
  for (const MatC& R : ch.correlations) {
    CHECK(R.rows() == 6);
    CHECK((R - R.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK(ch.H.allFinite());
  CHECK(ch.H.rows() == 2);
  CHECK(ch.H.cols() == 6);

  CHECK_THROWS_AS(sample_channel(rng, drop, -1.0, g, 0.1745), ConfigError);
  CHECK_THROWS_AS(sample_channel(rng, drop, std::nan(""), g, 0.1745), ConfigError);
}
