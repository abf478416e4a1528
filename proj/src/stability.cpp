#include "pluri/stability.hpp"

#include <cmath>
#include <numbers>

#include "pluri/bloch.hpp"
#include "pluri/error.hpp"
#include "pluri/sampling.hpp"

namespace pluri {

namespace {

constexpr double kNormTol = 1e-12;

struct KindName {
  PerturbationKind kind;
  const char* name;
};

constexpr KindName kKindNames[] = {
    {PerturbationKind::GeneralContraction, "general-contraction"},
    {PerturbationKind::UnitNorm, "unit-norm"},
    {PerturbationKind::UnimodularDiagonal, "unimodular-diagonal"},
    {PerturbationKind::ContractionDiagonal, "contraction-diagonal"},
};

bool is_diagonal_kind(PerturbationKind k) {
  return k == PerturbationKind::UnimodularDiagonal || k == PerturbationKind::ContractionDiagonal;
}

}  // namespace

const char* to_string(PerturbationKind kind) {
  for (const auto& kn : kKindNames)
    if (kn.kind == kind) return kn.name;
  return "unknown";
}

PerturbationKind perturbation_kind_from_string(const std::string& name) {
  for (const auto& kn : kKindNames)
    if (name == kn.name) return kn.kind;
  throw Error(ErrorKind::ValidationError, "unknown perturbation kind '" + name + "'");
}

Perturbation::Perturbation(PerturbationKind kind, CMat matrix) : kind_(kind), matrix_(std::move(matrix)) {
  const double norm = op_norm(matrix_);
  const std::string label = to_string(kind);
  if (is_diagonal_kind(kind) && !matrix_.is_diagonal())
    throw Error(ErrorKind::ValidationError, label + " perturbation must be diagonal");
  switch (kind) {
    case PerturbationKind::GeneralContraction:
    case PerturbationKind::ContractionDiagonal:
      if (norm > 1.0 + kNormTol)
        throw Error(ErrorKind::ValidationError, label + " perturbation has norm " + std::to_string(norm) + " > 1");
      break;
    case PerturbationKind::UnitNorm:
      if (std::abs(norm - 1.0) > kNormTol)
        throw Error(ErrorKind::ValidationError, "unit-norm perturbation has norm " + std::to_string(norm));
      break;
    case PerturbationKind::UnimodularDiagonal:
      for (int j = 0; j < matrix_.n(); ++j)
        if (std::abs(std::abs(matrix_(j, j)) - 1.0) > kNormTol)
          throw Error(ErrorKind::ValidationError, "unimodular-diagonal entry " + std::to_string(j) + " is not unimodular");
      break;
  }
}

PHMap perturb_conjugated(const PolyMap& h, const PolyMap& g, const Perturbation& a) {
  if (h.n() != g.n() || h.n() != a.n()) throw Error(ErrorKind::DimensionMismatch, "perturb: dimensions disagree");
  return PHMap(h, linear_combine(PolyMap::zero(g.n()), g, a.matrix().conj(), 1));
}

PolyMap perturb_holomorphic(const PolyMap& h, const PolyMap& g, const Perturbation& a) {
  if (h.n() != g.n() || h.n() != a.n()) throw Error(ErrorKind::DimensionMismatch, "perturb: dimensions disagree");
  return linear_combine(h, g, a.matrix(), 1);
}

PolyMap shear_counterpart(const PHMap& f) { return add(f.h(), f.g(), -1); }

Perturbation sample_perturbation(PerturbationKind kind, int n, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorKind::DimensionMismatch, "dimension must be >= 1");
  Rng rng = make_stream(seed, 0x70657274ULL);
  switch (kind) {
    case PerturbationKind::GeneralContraction: {
      const double target = 1.0 - uniform01(rng);  // in (0, 1]
      return {kind, random_cmat(n, rng, target)};
    }
    case PerturbationKind::UnitNorm:
      return {kind, random_cmat(n, rng, 1.0)};
    case PerturbationKind::UnimodularDiagonal: {
      std::vector<cplx> d;
      for (int j = 0; j < n; ++j) d.push_back(std::polar(1.0, 2.0 * std::numbers::pi * uniform01(rng)));
      return {kind, CMat::diagonal(d)};
    }
    case PerturbationKind::ContractionDiagonal: {
      std::vector<cplx> d;
      for (int j = 0; j < n; ++j) {
        const double r = std::sqrt(uniform01(rng));
        d.push_back(std::polar(r, 2.0 * std::numbers::pi * uniform01(rng)));
      }
      return {kind, CMat::diagonal(d)};
    }
  }
  throw Error(ErrorKind::Internal, "unhandled perturbation kind");
}

CMat moebius_diagonal(const Perturbation& a, const Perturbation& d) {
  if (a.n() != d.n()) throw Error(ErrorKind::DimensionMismatch, "moebius_diagonal: dimensions disagree");
  if (!a.matrix().is_diagonal() || !d.matrix().is_diagonal())
    throw Error(ErrorKind::PreconditionViolated, "moebius_diagonal needs diagonal matrices");
  std::vector<cplx> out;
  for (int j = 0; j < a.n(); ++j) {
    const cplx lam = a.matrix()(j, j);
    const cplx e = d.matrix()(j, j);
    if (std::abs(lam) > 1.0 - 1e-9)
      throw Error(ErrorKind::PreconditionViolated, "moebius_diagonal needs |lambda_j| <= 1 - 1e-9");
    if (std::abs(std::abs(e) - 1.0) > kNormTol)
      throw Error(ErrorKind::PreconditionViolated, "moebius_diagonal needs a unimodular D");
    const cplx den = 1.0 + std::conj(lam) * e;
    if (std::abs(den) < 1e-9) throw Error(ErrorKind::DegenerateDenominator, "1 + conj(lambda) e^{i theta} vanishes");
    out.push_back((lam + e) / den);
  }
  return CMat::diagonal(out);
}

TransferResult transfer_collision(const PolyMap& h, const PolyMap& g, const Perturbation& a0, const CVec& z1,
                                  const CVec& z2) {
  const int n = h.n();
  if (g.n() != n || a0.n() != n || z1.size() != n || z2.size() != n)
    throw Error(ErrorKind::DimensionMismatch, "transfer_collision: dimensions disagree");
  const PolyMap big_f = perturb_holomorphic(h, g, a0);
  const double gap = (eval_poly(big_f, z1) - eval_poly(big_f, z2)).norm();
  if ((z1 - z2).norm() == 0.0 || gap > 1e-9)
    throw Error(ErrorKind::NotACollision, "(z1, z2) is not a collision of h + g A0 (gap " + std::to_string(gap) + ")");

  const CVec d = eval_poly(h, z1) - eval_poly(h, z2);
  if (d.norm() <= 1e-12)
    throw Error(ErrorKind::Case1Unsupported, "h(z1) = h(z2); the transfer needs h to separate the pair");

  std::vector<double> theta(static_cast<std::size_t>(n), 0.0);
  std::vector<cplx> b_conj_sq;
  for (int j = 0; j < n; ++j) {
    if (std::abs(d[j]) > 1e-12 * std::max(1.0, d.norm())) theta[static_cast<std::size_t>(j)] = std::arg(d[j]);
    b_conj_sq.push_back(std::polar(1.0, 2.0 * theta[static_cast<std::size_t>(j)]));
  }
  const CMat a_mat = a0.matrix().conj() * CMat::diagonal(b_conj_sq);
  Perturbation a(a0.kind(), a_mat);
  const PHMap fa = perturb_conjugated(h, g, a);
  const double residual = (eval_ph(fa, z1) - eval_ph(fa, z2)).norm();
  return {std::move(a), residual, std::move(theta)};
}

double mprime(double m, double c) {
  if (!(m >= 1.0) || !(c >= 0.0) || !std::isfinite(m) || !std::isfinite(c))
    throw Error(ErrorKind::DomainError, "mprime needs M >= 1 and C >= 0");
  const double bound = 1.0 / (2.0 * m + 1.0);
  if (c >= bound)
    throw Error(ErrorKind::PreconditionViolated,
                "C = " + std::to_string(c) + " is not below 1/(2M+1) = " + std::to_string(bound));
  return m * (1.0 + c) / (1.0 - (1.0 + 2.0 * m) * c);
}

StabilityReport stability_scan(const PolyMap& h, const PolyMap& g, PerturbationKind kind, long num_perturbations,
                               const UnivalenceConfig& cfg) {
  if (num_perturbations < 1) throw Error(ErrorKind::PreconditionViolated, "num_perturbations must be >= 1");
  if (h.n() != g.n()) throw Error(ErrorKind::DimensionMismatch, "h and g dimensions disagree");
  const int n = h.n();
  StabilityReport rep;
  rep.kind = kind;
  for (long i = 0; i < num_perturbations; ++i) {
    Perturbation a = i == 0 ? Perturbation(kind, CMat::identity(n))
                            : sample_perturbation(kind, n, substream_seed(cfg.seed, 0x1000 + static_cast<std::uint64_t>(i)));
    UnivalenceConfig c = cfg;
    c.seed = substream_seed(cfg.seed, static_cast<std::uint64_t>(i));
    StabilityEntry e{i, a, univalence_scan(perturb_conjugated(h, g, a), c),
                     univalence_scan(PHMap::holomorphic(perturb_holomorphic(h, g, a)), c)};
    if (e.conjugated.status == ScanStatus::Violation || e.holomorphic.status == ScanStatus::Violation) ++rep.violations;
    rep.entries.push_back(std::move(e));
  }
  rep.pass = rep.violations == 0;
  return rep;
}

const char* to_string(ShearStatus s) {
  switch (s) {
    case ShearStatus::Pass: return "pass";
    case ShearStatus::Fail: return "fail";
    case ShearStatus::NotApplicable: return "not-applicable";
  }
  return "unknown";
}

ShearReport shear_verify(const PHMap& f, ShearPart part, const Perturbation& a, const ShearConfig& cfg) {
  if (a.n() != f.n()) throw Error(ErrorKind::DimensionMismatch, "perturbation dimension differs from the map");
  if (op_norm(a.matrix()) > 1.0 + kNormTol) throw Error(ErrorKind::PreconditionViolated, "shear_verify needs ||A|| <= 1");

  ShearReport rep;
  rep.part = part;
  const PHMap base = part == ShearPart::I ? PHMap::holomorphic(shear_counterpart(f)) : f;
  rep.base_scan = univalence_scan(base, cfg.scan);
  if (rep.base_scan.status == ScanStatus::Violation) {
    std::optional<std::vector<cplx>> w;
    if (rep.base_scan.witness) w = std::vector<cplx>(rep.base_scan.witness->z1.data(),
                                                     rep.base_scan.witness->z1.data() + f.n());
    throw Error(ErrorKind::HypothesisViolated,
                part == ShearPart::I ? "F = h - g is not univalent on the scan" : "f is not univalent on the scan",
                "precondition", std::move(w));
  }

  const auto grid = ball_grid(f.n(), cfg.omega_radius, cfg.omega_grid, cfg.scan.seed);
  try {
    rep.c = op_norm(omega(f, CVec::Zero(f.n())));
    for (const auto& z : grid) rep.c = std::max(rep.c, op_norm(omega(f, z)));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DhSingular) throw;
    throw Error(ErrorKind::HypothesisViolated, "Dh is singular on the dilatation grid", "omega", e.witness());
  }

  rep.m_hat = connectivity_estimate(base, cfg.connectivity);
  rep.bound = 1.0 / (2.0 * rep.m_hat.m_hat + 1.0);
  if (rep.c >= rep.bound) {
    rep.status = ShearStatus::NotApplicable;
    return rep;
  }
  rep.m_prime = mprime(rep.m_hat.m_hat, rep.c);

  const PHMap perturbed = part == ShearPart::I ? perturb_conjugated(f.h(), f.g(), a)
                                               : PHMap::holomorphic(linear_combine(f.h(), f.g(), a.matrix(), -1));
  rep.perturbed_scan = univalence_scan(perturbed, cfg.scan);
  rep.m_hat_perturbed = connectivity_estimate(perturbed, cfg.connectivity);
  const bool ok = rep.perturbed_scan->status == ScanStatus::NoViolation &&
                  rep.m_hat_perturbed->m_hat <= cfg.slack * *rep.m_prime;
  rep.status = ok ? ShearStatus::Pass : ShearStatus::Fail;
  return rep;
}

PHMap counterexample_family(int k, int n) {
  if (n < 2) throw Error(ErrorKind::DomainError, "the counterexample family needs n >= 2");
  if (k < 1) throw Error(ErrorKind::DomainError, "k must be >= 1");
  std::vector<cplx> d(static_cast<std::size_t>(n), cplx(1.0));
  d[0] = static_cast<double>(k);
  d[1] = 1.0 / static_cast<double>(k);
  return PHMap::holomorphic(PolyMap::linear(CMat::diagonal(d)));
}

}  // namespace pluri
