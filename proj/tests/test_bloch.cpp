#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "pluri/bloch.hpp"
#include "pluri/error.hpp"
#include "pluri/volume.hpp"

using namespace pluri;

namespace {

const double kSqrt5 = std::sqrt(5.0);
const double kSqrt2 = std::sqrt(2.0);
const double kPi = std::numbers::pi;

PolyMap mono1(cplx c, int e) { return PolyMap(1, {{0, {e}, c}}); }

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::Internal;
}

// Written out independently of the library.
double ru_ref(int n, double a, double v) {
  const double psi0 = (11.0 + 5.0 * kSqrt5) / 2.0;
  return a * kPi * (kSqrt5 - 1.0) * (3.0 - 2.0 * kSqrt2) / (8.0 * v * std::pow(psi0, n));
}

double rc_ref(int n, double a, double v) {
  const double psi0 = (11.0 + 5.0 * kSqrt5) / 2.0;
  return a * a * kPi * (kSqrt5 - 1.0) * (3.0 - 2.0 * kSqrt2) /
         (16.0 * std::pow(v, (4.0 * n - 1.0) / (2.0 * n)) * std::pow(psi0, (4.0 * n - 1.0) / 2.0));
}

}  // namespace

TEST_CASE("constants") {
  const BlochConstants c = constants();
  CHECK(c.psi0 == doctest::Approx(11.09017).epsilon(1e-6));
  CHECK(std::abs(c.psi0 - (11.0 + 5.0 * kSqrt5) / 2.0) < 1e-14);
  CHECK(std::abs(c.r0 - 0.6180340) < 1e-7);
  CHECK(std::abs(c.t_star - 0.5857864) < 1e-7);
  CHECK(std::abs(c.nu_max - 0.1715729) < 1e-7);
  CHECK(std::abs(nu(c.t_star) - c.nu_max) < 1e-15);
}

TEST_CASE("psi") {
  const BlochConstants c = constants();
  CHECK(psi(0.5) == doctest::Approx(12.0).epsilon(1e-15));
  CHECK(std::abs(psi(c.r0) - c.psi0) < 1e-12);
  CHECK(std::abs(psi_argmin_numeric() - c.r0) < 1e-6);
  CHECK(kind_of([] { psi(0.0); }) == ErrorKind::DomainError);
  CHECK(kind_of([] { psi(1.0); }) == ErrorKind::DomainError);

  for (int i = 1; i < 1000; ++i) {
    const double r = i / 1000.0;
    CHECK(psi(r) >= c.psi0 - 1e-12);
    if (std::abs(r - c.r0) > 0.01) CHECK(psi(r) > c.psi0 + 1e-6);
    const double t = i / 1000.0;
    CHECK(nu(t) <= c.nu_max + 1e-15);
    if (std::abs(t - c.t_star) > 0.01) CHECK(nu(t) < c.nu_max - 1e-6);
  }
}

TEST_CASE("radii examples") {
  const BlochRadii r = landau_bloch_radii({1, 1.0, 1.0});
  CHECK(r.ru == doctest::Approx(7.5096e-3).epsilon(1e-4));
  CHECK(r.rc == doctest::Approx(1.1275e-3).epsilon(1e-4));
  CHECK(std::abs(r.ru - ru_ref(1, 1.0, 1.0)) < 1e-15);
  CHECK(std::abs(r.rc - rc_ref(1, 1.0, 1.0)) < 1e-15);
  CHECK(std::abs(r.ru - r.r0 * r.t_star * r.rho_at_t_star) < 1e-12);

  const BlochInputs cap{1, 8.0 * 1.0 * constants().psi0 / kPi, 1.0};
  CHECK(cap.alpha_cap() == doctest::Approx(cap.alpha).epsilon(1e-15));
  CHECK(landau_bloch_radii(cap).ru == doctest::Approx((kSqrt5 - 1.0) * (3.0 - 2.0 * kSqrt2)).epsilon(1e-12));
  CHECK(std::abs(0.21208 - (kSqrt5 - 1.0) * (3.0 - 2.0 * kSqrt2)) < 1e-5);

  for (int n = 1; n <= 3; ++n)
    for (double v : {0.5, 1.0, 3.0})
      for (double a : {0.01, 0.3, 1.0}) {
        const BlochInputs in{n, a, v};
        if (a > in.alpha_cap()) continue;
        const BlochRadii b = landau_bloch_radii(in);
        CHECK(std::abs(b.ru - ru_ref(n, a, v)) <= 1e-13 * b.ru);
        CHECK(std::abs(b.rc - rc_ref(n, a, v)) <= 1e-13 * b.rc);
        CHECK(b.ru > 0.0);
        CHECK(b.ru < 1.0);
        CHECK(b.rc > 0.0);
        CHECK(b.rc <= b.ru);
      }
}

TEST_CASE("cap and domain rejection") {
  const double cap = BlochInputs{2, 1.0, 0.5}.alpha_cap();
  CHECK(cap == doctest::Approx(8.0 * 0.5 * std::pow(constants().psi0, 2) / kPi));
  try {
    landau_bloch_radii({2, cap * 1.01, 0.5});
    FAIL("expected HypothesisViolated");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::HypothesisViolated);
    CHECK(e.stage() == "cap");
    CHECK(std::string(e.what()).find("admissible maximum") != std::string::npos);
  }
  CHECK(kind_of([] { landau_bloch_radii({1, 0.0, 1.0}); }) == ErrorKind::DomainError);
  CHECK(kind_of([] { landau_bloch_radii({1, 1.0, -1.0}); }) == ErrorKind::DomainError);
  CHECK(kind_of([] { landau_bloch_radii({0, 1.0, 1.0}); }) == ErrorKind::DomainError);
}

TEST_CASE("scaling laws") {
  for (int n = 1; n <= 3; ++n) {
    const BlochRadii base = landau_bloch_radii({n, 0.2, 1.0});
    const BlochRadii a2 = landau_bloch_radii({n, 0.4, 1.0});
    const BlochRadii v2 = landau_bloch_radii({n, 0.2, 2.0});
    CHECK(a2.ru / base.ru == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(a2.rc / base.rc == doctest::Approx(4.0).epsilon(1e-13));
    CHECK(v2.ru / base.ru == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(v2.rc / base.rc == doctest::Approx(std::pow(2.0, -(4.0 * n - 1.0) / (2.0 * n))).epsilon(1e-13));
  }
}

TEST_CASE("rho table consistency") {
  for (int n = 1; n <= 3; ++n) {
    const BlochInputs in{n, 0.7, 1.3};
    const BlochRadii b = landau_bloch_radii(in);
    REQUIRE(b.t_grid.size() == 1000);
    REQUIRE(b.rho_at_t.size() == 1000);
    double best = 0.0;
    for (std::size_t i = 0; i < b.t_grid.size(); ++i) {
      CHECK(b.t_grid[i] == doctest::Approx(i / 1000.0));
      CHECK(std::abs(b.rho_at_t[i] - rho(in, b.t_grid[i])) <= 1e-15 * b.rho_at_t[i]);
      best = std::max(best, b.t_grid[i] * b.rho_at_t[i]);
    }
    CHECK(std::abs(b.ru - b.r0 * best) <= 1e-6 * b.ru);
    CHECK(b.m0 == doctest::Approx(std::pow(1.3, 1.0 / (2 * n)) * std::sqrt(constants().psi0)));
  }
}

TEST_CASE("growth bound") {
  const PHMap id = PHMap::holomorphic(PolyMap::identity(1));
  const PointVerdict v0 = growth_bound_check(id, 1.0, 0.5, {CVec::Zero(1)});
  CHECK(v0.pass);
  CHECK(v0.worst_ratio == doctest::Approx(1.0 / 12.0));

  const PHMap f(PolyMap::identity(1), mono1(0.25, 2));
  IntegrationConfig cfg;
  cfg.samples = 50000;
  const double vol = sup_generalized_volume(f, cfg, 10).sup_estimate;
  const PointVerdict v = growth_bound_check(f, vol, 0.7, ball_grid(1, 0.69, 1000, 5));
  CHECK(v.pass);
  CHECK(v.points == 1000);
  CHECK(v.witnesses.empty());

  CHECK(kind_of([&] { growth_bound_check(f, vol, 0.5, {CVec::Constant(1, 0.6)}); }) ==
        ErrorKind::PreconditionViolated);
  const PHMap shifted(add(PolyMap::identity(1), PolyMap(1, {{0, {0}, 0.1}})), PolyMap::zero(1));
  CHECK(kind_of([&] { growth_bound_check(shifted, 1.0, 0.5, {CVec::Zero(1)}); }) == ErrorKind::HypothesisViolated);
  const PHMap linear_g(PolyMap::identity(1), mono1(0.2, 1));
  CHECK(kind_of([&] { growth_bound_check(linear_g, 1.0, 0.5, {CVec::Zero(1)}); }) ==
        ErrorKind::HypothesisViolated);

  // A V far below the true volume must produce witnesses.
  const PointVerdict bad = growth_bound_check(f, 1e-6, 0.7, ball_grid(1, 0.69, 100, 5));
  CHECK(!bad.pass);
  CHECK(!bad.witnesses.empty());
  CHECK(bad.lhs.size() == bad.witnesses.size());
  CHECK(bad.lhs[0] > bad.rhs[0]);
}

TEST_CASE("Schwarz bound on omega") {
  const std::vector<CVec> grid = ball_grid(2, 0.99, 1000, 3);
  CHECK(schwarz_omega_check(PHMap::holomorphic(PolyMap::identity(2)), grid).pass);

  const PHMap eq(PolyMap::identity(1), mono1(0.5, 2));
  const PointVerdict v = schwarz_omega_check(eq, ball_grid(1, 0.99, 1000, 3));
  CHECK(v.pass);
  CHECK(v.worst_ratio == doctest::Approx(1.0).epsilon(1e-12));

  const PHMap lin(PolyMap::identity(1), mono1(1.0, 1));
  CHECK(kind_of([&] { schwarz_omega_check(lin, {CVec::Zero(1)}); }) == ErrorKind::HypothesisViolated);
  const PHMap big(PolyMap::identity(1), mono1(1.0, 2));
  CHECK(kind_of([&] { schwarz_omega_check(big, {CVec::Zero(1)}); }) == ErrorKind::HypothesisViolated);

  std::mt19937_64 rng(51);
  for (int n = 1; n <= 3; ++n) {
    const PHMap f(PolyMap::identity(n), oracle::random_poly(n, 3, 2, 2, 0.1, rng));
    if (sampled_sup_omega(f, 2000, 1) >= 0.95) continue;
    CHECK(schwarz_omega_check(f, ball_grid(n, 0.99, 500, 9)).pass);
  }
}

TEST_CASE("bounded-map bounds") {
  const std::vector<CVec> grid = ball_grid(1, 0.99, 1000, 4);
  const PHMap half = PHMap::holomorphic(scale(PolyMap::identity(1), 0.5));
  CHECK(bounded_map_bound_check(half, grid).pass);
  const PHMap id = PHMap::holomorphic(PolyMap::identity(1));
  const PointVerdict at0 = bounded_map_bound_check(id, {CVec::Zero(1)});
  CHECK(at0.pass);
  CHECK(at0.worst_ratio == doctest::Approx(kPi / 4.0));
  const PHMap mixed(scale(PolyMap::identity(1), 0.5), mono1(0.125, 2));
  const PointVerdict v = bounded_map_bound_check(mixed, grid);
  CHECK(v.pass);
  CHECK(v.points == 1000);

  const PHMap big = PHMap::holomorphic(scale(PolyMap::identity(1), 2.0));
  CHECK(kind_of([&] { bounded_map_bound_check(big, grid); }) == ErrorKind::HypothesisViolated);
}

TEST_CASE("ball_grid is seeded and inside the ball") {
  const auto a = ball_grid(3, 0.4, 200, 11), b = ball_grid(3, 0.4, 200, 11);
  REQUIRE(a.size() == 200);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i] == b[i]);
    CHECK(a[i].norm() < 0.4);
  }
}
