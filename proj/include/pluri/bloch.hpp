#pragma once

// Closed-form Landau-Bloch constants and radii, and pointwise checks of the
// growth, Schwarz and bounded-map inequalities they rest on.

#include <cstdint>
#include <optional>
#include <vector>

#include "pluri/pmap.hpp"

namespace pluri {

struct BlochConstants {
  double psi0;    // (11 + 5 sqrt5) / 2, minimum of psi
  double r0;      // (sqrt5 - 1) / 2, minimiser of psi
  double t_star;  // 2 - sqrt2, maximiser of nu
  double nu_max;  // 3 - 2 sqrt2
};

BlochConstants constants();

/// psi(r) = (1 + r) / (r^2 (1 - r)); DomainError outside (0, 1).
double psi(double r);

/// nu(t) = t (1 - t) / (2 - t).
double nu(double t);

struct BlochInputs {
  int n = 1;
  double alpha = 0.0;   // |det J_f(0)|
  double volume = 0.0;  // sup of the generalized volume

  /// 8 V psi0^n / pi, the largest admissible alpha.
  double alpha_cap() const;
};

struct BlochRadii {
  double psi0 = 0.0;
  double r0 = 0.0;
  double t_star = 0.0;
  double nu_max = 0.0;
  double m0 = 0.0;                 // V^{1/2n} sqrt(psi0)
  std::vector<double> t_grid;      // t = i / 1000, i = 0..999
  std::vector<double> rho_at_t;    // rho(t) on t_grid
  double rho_at_t_star = 0.0;
  double ru = 0.0;                 // univalence radius
  double rc = 0.0;                 // covered radius
};

/// rho(t) = alpha pi (1 - t) / (4 V psi0^n (2 - t)).
double rho(const BlochInputs& in, double t);

/// Throws HypothesisViolated when alpha exceeds the cap (message carries the cap),
/// DomainError for non-positive inputs.
BlochRadii landau_bloch_radii(const BlochInputs& in);

/// Argmin of psi over (0.01, 0.99): dense grid followed by golden-section refinement.
double psi_argmin_numeric();

struct PointVerdict {
  bool pass = true;
  long points = 0;
  double slack = 0.0;
  std::vector<CVec> witnesses;     // failing grid points, in grid order
  std::vector<double> lhs;         // the checked quantity at each witness
  std::vector<double> rhs;         // its bound at each witness
  double worst_ratio = 0.0;        // max of lhs / rhs over the grid
};

/// `count` seeded uniform points of B(radius).
std::vector<CVec> ball_grid(int n, double radius, long count, std::uint64_t seed);

/// Largest ||omega|| over `count` seeded points of B(1) and of its boundary
/// sphere scaled by 1 - 1e-6. Throws HypothesisViolated if Dh is singular at one of them.
double sampled_sup_omega(const PHMap& f, long count, std::uint64_t seed);

/// Lambda_f(z)^{2n} <= K_r^n V / (r - ||z||)^{2n} at each grid point.
/// Preconditions f(0) = 0, Dg(0) = 0, sampled sup ||omega|| < 1 (HypothesisViolated)
/// and ||z|| < r for every grid point (PreconditionViolated).
PointVerdict growth_bound_check(const PHMap& f, double volume, double r, const std::vector<CVec>& grid,
                                std::uint64_t seed = 42);

/// ||omega(z)|| <= ||z|| + 1e-9 at each grid point. Requires Dg(0) = 0 and
/// sampled sup ||omega|| < 1.
PointVerdict schwarz_omega_check(const PHMap& f, const std::vector<CVec>& grid, std::uint64_t seed = 42);

/// Lambda_f(z) <= (4/pi) / (1 - ||z||^2), and when f(0) = 0 also
/// ||f(z)|| <= (4/pi) arctan ||z||. Requires the image of a dense sample of
/// the ball to stay in the closed unit ball.
PointVerdict bounded_map_bound_check(const PHMap& f, const std::vector<CVec>& grid, std::uint64_t seed = 42);

}  // namespace pluri
