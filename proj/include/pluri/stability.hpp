#pragma once

// Perturbation families f_A = h + conj(g) A and F_A = h + g A, the collision
// witness transfer between them, and the shear-construction verifier.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pluri/geomverify.hpp"

namespace pluri {

enum class PerturbationKind { GeneralContraction, UnitNorm, UnimodularDiagonal, ContractionDiagonal };

const char* to_string(PerturbationKind kind);
/// Accepts the names produced by to_string; ValidationError otherwise.
PerturbationKind perturbation_kind_from_string(const std::string& name);

class Perturbation {
 public:
  /// Throws ValidationError unless the matrix satisfies the kind's invariant:
  /// contractions have op_norm <= 1 + 1e-12, unit-norm has |op_norm - 1| <= 1e-12,
  /// diagonal kinds have exactly zero off-diagonal entries (and unit-modulus
  /// entries for unimodular-diagonal).
  Perturbation(PerturbationKind kind, CMat matrix);

  PerturbationKind kind() const noexcept { return kind_; }
  const CMat& matrix() const noexcept { return matrix_; }
  int n() const noexcept { return matrix_.n(); }

 private:
  PerturbationKind kind_;
  CMat matrix_;
};

/// h + conj(g) A, stored as the pair (h, g conj(A)).
PHMap perturb_conjugated(const PolyMap& h, const PolyMap& g, const Perturbation& a);

/// h + g A.
PolyMap perturb_holomorphic(const PolyMap& h, const PolyMap& g, const Perturbation& a);

/// h - g.
PolyMap shear_counterpart(const PHMap& f);

/// general-contraction: random matrix rescaled to a norm uniform in (0, 1];
/// unit-norm: rescaled to norm 1; unimodular-diagonal: e^{i theta_j} with
/// theta_j uniform in [0, 2 pi); contraction-diagonal: lambda_j uniform in the closed disk.
Perturbation sample_perturbation(PerturbationKind kind, int n, std::uint64_t seed);

/// C = (A + D)(I + conj(A) D)^{-1} for diagonal A with |lambda_j| <= 1 - 1e-9
/// and unimodular diagonal D. Throws DegenerateDenominator if some
/// |1 + conj(lambda_j) e^{i theta_j}| < 1e-9.
CMat moebius_diagonal(const Perturbation& a, const Perturbation& d);

struct TransferResult {
  Perturbation a;
  double residual;  // ||f_A(z1) - f_A(z2)||
  std::vector<double> theta;
};

/// Turns a collision of h + g A0 at (z1, z2) into a collision of
/// h + conj(g) A with A = conj(A0) conj(B)^2, B = diag(e^{-i theta_j}),
/// theta_j = arg(h_j(z1) - h_j(z2)) (0 where that difference vanishes).
/// Throws NotACollision, or Case1Unsupported when h(z1) = h(z2).
TransferResult transfer_collision(const PolyMap& h, const PolyMap& g, const Perturbation& a0, const CVec& z1,
                                  const CVec& z2);

/// M (1 + C) / (1 - (1 + 2M) C). Throws PreconditionViolated when C >= 1/(2M + 1)
/// and DomainError when M < 1 or C < 0.
double mprime(double m, double c);

struct StabilityEntry {
  long index = 0;
  Perturbation a;
  ScanVerdict conjugated;   // f_A = h + conj(g) A
  ScanVerdict holomorphic;  // F_A = h + g A
};

struct StabilityReport {
  PerturbationKind kind = PerturbationKind::UnitNorm;
  std::vector<StabilityEntry> entries;
  long violations = 0;
  bool pass = true;
};

/// Perturbation 0 is always the identity; the rest are sampled from `kind`
/// with per-index substreams of cfg.seed. Each A gets its own scan seed.
StabilityReport stability_scan(const PolyMap& h, const PolyMap& g, PerturbationKind kind, long num_perturbations,
                               const UnivalenceConfig& cfg);

enum class ShearPart { I, II };
enum class ShearStatus { Pass, Fail, NotApplicable };

const char* to_string(ShearStatus s);

struct ShearConfig {
  UnivalenceConfig scan;
  ConnectivityConfig connectivity;
  long omega_grid = 1000;
  double omega_radius = 0.95;
  double slack = 1.15;
};

struct ShearReport {
  ShearPart part = ShearPart::I;
  ShearStatus status = ShearStatus::Fail;
  ScanVerdict base_scan;  // F = h - g (part I) or f (part II)
  double c = 0.0;         // max ||omega|| on the grid
  ConnectivityEstimate m_hat;
  double bound = 0.0;     // 1 / (2 M_hat + 1)
  std::optional<double> m_prime;
  std::optional<ScanVerdict> perturbed_scan;
  std::optional<ConnectivityEstimate> m_hat_perturbed;
};

/// Part I: F = h - g univalent and C < 1/(2M+1) should give f_A univalent with
/// M'-linearly connected image. Part II: the same with the roles of f and
/// F_A = h - g A exchanged. Uses the sampled M_hat, a lower estimate of M.
/// Throws HypothesisViolated (stage "precondition") when the base map fails its scan.
ShearReport shear_verify(const PHMap& f, ShearPart part, const Perturbation& a, const ShearConfig& cfg);

/// f_k(z) = (k z1, z2 / k, z3, ..., zn) with g = 0.
PHMap counterexample_family(int k, int n);

}  // namespace pluri
