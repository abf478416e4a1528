#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "pluri/error.hpp"
#include "pluri/volume.hpp"

using namespace pluri;

namespace {

PolyMap mono1(cplx c, int e) { return PolyMap(1, {{0, {e}, c}}); }

IntegrationConfig cfg(long samples, std::uint64_t seed = 42, int workers = 1) {
  IntegrationConfig c;
  c.samples = samples;
  c.seed = seed;
  c.workers = workers;
  return c;
}

// Agreement within k standard errors plus a small absolute floor.
bool close(const IntegralEstimate& e, double expect, double k = 4.0) {
  return std::abs(e.value() - expect) <= k * e.std_error() + 1e-12;
}

}  // namespace

TEST_CASE("integrate_ball on closed forms") {
  const IntegralEstimate one = integrate_ball([](const CVec&) { return 1.0; }, 2, 0.5, cfg(1000));
  CHECK(one.value() == doctest::Approx(0.0625).epsilon(1e-14));
  CHECK(one.std_error() == 0.0);

  // |z|^2 over the unit ball of C^n has mean n / (n + 1).
  for (int n = 1; n <= 3; ++n) {
    const IntegralEstimate e = integrate_ball([](const CVec& z) { return z.squaredNorm(); }, n, 1.0, cfg(200000));
    CHECK(close(e, double(n) / (n + 1)));
    CHECK(e.std_error() < 2e-3);
  }

  CHECK_THROWS_AS(integrate_ball([](const CVec&) { return 1.0; }, 1, 0.0, cfg(10)), Error);
  CHECK_THROWS_AS(integrate_ball([](const CVec&) { return 1.0; }, 1, 0.5, cfg(0)), Error);
}

TEST_CASE("non-finite integrand is reported with its point") {
  try {
    integrate_ball([](const CVec& z) { return z[0].real() > 0.5 ? std::nan("") : 1.0; }, 1, 1.0, cfg(10000));
    FAIL("expected IntegrandNonFinite");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IntegrandNonFinite);
    REQUIRE(e.witness());
    CHECK((*e.witness())[0].real() > 0.5);
  }
}

TEST_CASE("generalized volume examples") {
  const PHMap id = PHMap::holomorphic(PolyMap::identity(1));
  CHECK(generalized_volume(id, 0.5, cfg(10000)).value() == doctest::Approx(0.25).epsilon(1e-12));
  const PHMap twice = PHMap::holomorphic(scale(PolyMap::identity(1), 2.0));
  CHECK(generalized_volume(twice, 0.5, cfg(10000)).value() == doctest::Approx(1.0).epsilon(1e-12));
  const PHMap shear(PolyMap::identity(1), mono1(0.5, 1));
  // The open ball only: r = 1 is outside the domain of the estimator.
  const double rr = 0.999;
  CHECK(generalized_volume(shear, rr, cfg(10000)).value() == doctest::Approx(0.75 * rr * rr).epsilon(1e-12));
  CHECK_THROWS_AS(generalized_volume(shear, 1.0, cfg(10)), Error);
  CHECK(real_volume(shear, 0.5, cfg(10000)).value() == doctest::Approx(0.1875).epsilon(1e-12));

  const PHMap quad = PHMap::holomorphic(add(PolyMap::identity(1), mono1(0.25, 2)));
  const double ref = oracle::polar_quadrature_disk([](cplx z) { return std::norm(1.0 + 0.5 * z); }, rr, 2000, 512);
  CHECK(ref == doctest::Approx(rr * rr + std::pow(rr, 4) / 8.0).epsilon(1e-6));
  CHECK(close(generalized_volume(quad, rr, cfg(200000)), ref));
}

TEST_CASE("planar generalized volume matches polar quadrature") {
  // h = z, g = z^2 / 2: integrand 1 - |z|^2.
  const PHMap f(PolyMap::identity(1), mono1(0.5, 2));
  for (double r : {0.3, 0.7, 0.99}) {
    const double ref = oracle::polar_quadrature_disk([](cplx z) { return 1.0 - std::norm(z); }, r, 2000, 64);
    CHECK(ref == doctest::Approx(r * r - r * r * r * r / 2.0).epsilon(1e-6));
    CHECK(close(generalized_volume(f, r, cfg(100000)), ref));
  }
}

TEST_CASE("estimates are deterministic and independent of worker count") {
  const PHMap f(PolyMap::identity(2), PolyMap(2, {{0, {1, 1}, 0.3}, {1, {2, 0}, cplx(0, 0.2)}}));
  const IntegralEstimate a = generalized_volume(f, 0.8, cfg(50000, 7, 1));
  const IntegralEstimate b = generalized_volume(f, 0.8, cfg(50000, 7, 1));
  const IntegralEstimate c = generalized_volume(f, 0.8, cfg(50000, 7, 4));
  CHECK(a.value() == b.value());
  CHECK(a.value() == c.value());
  CHECK(a.std_error() == c.std_error());
  CHECK(generalized_volume(f, 0.8, cfg(50000, 8, 1)).value() != a.value());
}

TEST_CASE("the profile is monotone and bounded") {
  const PHMap f(PolyMap::identity(1), mono1(0.5, 2));
  const VolumeProfile p = sup_generalized_volume(f, cfg(50000), 10);
  REQUIRE(p.radii.size() == 10);
  CHECK(!p.diverged);
  for (std::size_t k = 1; k < p.values.size(); ++k) {
    CHECK(p.radii[k] > p.radii[k - 1]);
    CHECK(p.values[k].value() >= p.values[k - 1].value() - 3.0 * p.values[k].std_error());
  }
  CHECK(std::abs(p.sup_estimate - 0.5) < 0.01);
}

TEST_CASE("omega at or above one is a hypothesis violation") {
  const PHMap f(PolyMap::identity(1), mono1(1.0, 2));  // ||omega|| = 2|z|
  try {
    generalized_volume(f, 0.9, cfg(10000));
    FAIL("expected HypothesisViolated");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::HypothesisViolated);
    REQUIRE(e.witness());
    CHECK(2.0 * std::abs((*e.witness())[0]) >= 1.0);
  }
  CHECK_NOTHROW(generalized_volume(f, 0.45, cfg(10000)));
}

TEST_CASE("area inequality holds on random maps with Dg(0) = 0") {
  std::mt19937_64 rng(41);
  for (int n = 1; n <= 2; ++n)
    for (int t = 0; t < 4; ++t) {
      const PolyMap h = add(PolyMap::identity(n), oracle::random_poly(n, 3, 2, 3, 0.1, rng));
      const PolyMap g = oracle::random_poly(n, 3, 2, 3, 0.15, rng);
      const PHMap f(h, g);
      for (double r : {0.3, 0.6}) {
        const VolumeInequality v = volume_inequality_check(f, r, cfg(20000, 100 + t));
        CHECK(v.pass);
        CHECK(!v.hard_violation);
        CHECK(v.k_r_pow_n == doctest::Approx(std::pow((1 + r) / (1 - r), n)));
        CHECK(v.difference <= 0.0);
      }
    }
}
