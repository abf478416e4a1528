#pragma once

// Sampling-based geometric verification. Every check here is a falsification
// attempt: a clean verdict means no counterexample was found at the stated
// sample count, never a proof.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pluri/bloch.hpp"
#include "pluri/pmap.hpp"
#include "pluri/volume.hpp"

namespace pluri {

enum class ScanStatus { NoViolation, Violation };

const char* to_string(ScanStatus s);

struct ScanWitness {
  std::string kind;            // "collision", "local" or "uncovered-target"
  long index = -1;             // work item that produced it
  CVec z1;                     // collision: first point; local: the point; covering: the target
  CVec z2;                     // collision: second point; covering: best in-domain iterate
  double image_distance = 0.0; // collision: ||f(z1) - f(z2)||
  double point_distance = 0.0; // collision: ||z1 - z2||
  double det_j = 0.0;          // local: real Jacobian determinant at z1
  bool dh_singular = false;    // local: Dh(z1) singular, i.e. a hypothesis failure rather than a fold
  double residual = 0.0;       // covering: best in-domain residual
  std::optional<CVec> outside_preimage;  // covering: a preimage found outside the domain
};

struct ScanVerdict {
  ScanStatus status = ScanStatus::NoViolation;
  std::optional<ScanWitness> witness;
  long samples = 0;
  double tol = 0.0;
  std::uint64_t seed = 0;
  long reached = 0;  // covering only: targets reached

  /// "no counterexample found at N samples" or "violation found at N samples".
  std::string statement() const;
};

struct NewtonOptions {
  int max_iterations = 200;
  int max_halvings = 20;
  double residual_tol = 1e-13;
  double escape_radius = 10.0;
};

struct NewtonResult {
  CVec z;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Damped Newton on the real 2n-dimensional system f(z) = target.
NewtonResult newton_solve(const PHMap& f, const CVec& target, CVec start, const NewtonOptions& opts = {});

struct UnivalenceConfig {
  double radius = 1.0;
  long pairs = 20000;
  std::uint64_t seed = 42;
  double tol = 1e-9;
  int workers = 1;
};

/// Pairs are sampled uniformly in B(radius), plus a near-diagonal batch of
/// pairs/10 with separations stratified on a log scale over [10 tol, 0.1 radius].
/// A pair is a collision when ||f(z1) - f(z2)|| <= tol and ||z1 - z2|| >= 100 tol;
/// besides the direct test each pair seeds a Newton search for a second
/// preimage of f(z1) starting from z2. Points with det J <= 0 are local violations.
ScanVerdict univalence_scan(const PHMap& f, const UnivalenceConfig& cfg);

struct CoveringConfig {
  double domain_radius = 1.0;
  double target_radius = 0.5;
  long targets = 1000;
  std::uint64_t seed = 42;
  int workers = 1;
  int starts = 32;
  double residual_tol = 1e-9;
};

/// Each target w uniform in B(target_radius) must have a Newton preimage z
/// with ||z|| < domain_radius and residual < residual_tol from one of the
/// deterministic multistart points. The witness is the hardest unreached target.
ScanVerdict covering_check(const PHMap& f, const CoveringConfig& cfg);

struct ConnectivityEstimate {
  double m_hat = 1.0;
  double epsilon = 0.0;
  long pairs_checked = 0;
  double boundary_rho = 1.0;
  int points = 0;
  int k_neighbors = 0;
  std::vector<Eigen::VectorXd> path_witness;  // graph path of the maximising pair
  double path_length = 0.0;
  double chord = 0.0;
};

/// epsilon-graph estimate of the linear-connectivity constant of a point cloud:
/// epsilon = 2 * median k-NN distance, M_hat = max of graph distance over
/// Euclidean distance on a seeded batch of pairs. Throws GraphDisconnected.
ConnectivityEstimate connectivity_of_cloud(const std::vector<Eigen::VectorXd>& cloud, int k_neighbors,
                                           std::uint64_t seed, long pair_budget = 10000);

struct ConnectivityConfig {
  double domain_radius = 1.0;
  int grid_points = 1500;
  int k_neighbors = 10;
  std::uint64_t seed = 42;
  long pair_budget = 10000;
  double boundary_rho = 0.95;  // samples come from B(boundary_rho * domain_radius)
};

/// Image (in real coordinates) of a uniform sample of the domain ball.
std::vector<Eigen::VectorXd> image_cloud(const PHMap& f, double radius, int count, std::uint64_t seed);

ConnectivityEstimate connectivity_estimate(const PHMap& f, const ConnectivityConfig& cfg);

struct LandauBlochConfig {
  IntegrationConfig volume{200000, 42, 1};
  int budget = 12;
  long pairs = 100000;
  long targets = 1000;
  double tol = 1e-9;
};

struct LandauBlochReport {
  double alpha = 0.0;
  VolumeProfile profile;
  double volume = 0.0;
  double alpha_cap = 0.0;
  BlochRadii radii;
  ScanVerdict univalence;
  ScanVerdict covering;
  bool pass = false;
};

/// alpha = |det J_f(0)|, V from the radius schedule, cap check, closed-form
/// radii, univalence scan on B(R_u), covering check of B(R_c) from B(R_u).
/// Throws HypothesisViolated tagged with the failing stage.
LandauBlochReport landau_bloch_verify(const PHMap& f, const LandauBlochConfig& cfg);

}  // namespace pluri
