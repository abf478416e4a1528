#include "pluri/bloch.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pluri/error.hpp"
#include "pluri/sampling.hpp"

namespace pluri {

namespace {

const double kSqrt5 = std::sqrt(5.0);
const double kSqrt2 = std::numbers::sqrt2;

constexpr double kHypothesisTol = 1e-12;

void require_hypotheses(const PHMap& f, bool need_f0, std::uint64_t seed, const char* stage) {
  const CVec origin = CVec::Zero(f.n());
  if (need_f0 && eval_ph(f, origin).norm() > kHypothesisTol)
    throw Error(ErrorKind::HypothesisViolated, "f(0) != 0", stage);
  if (op_norm(d_poly(f.g(), origin)) > kHypothesisTol)
    throw Error(ErrorKind::HypothesisViolated, "Dg(0) != 0", stage);
  const double sup = sampled_sup_omega(f, 1000, seed);
  if (sup >= 1.0)
    throw Error(ErrorKind::HypothesisViolated, "sampled sup of ||omega|| is " + std::to_string(sup) + " >= 1", stage);
}

void record(PointVerdict& v, const CVec& z, double lhs, double rhs) {
  v.pass = false;
  v.witnesses.push_back(z);
  v.lhs.push_back(lhs);
  v.rhs.push_back(rhs);
}

}  // namespace

BlochConstants constants() {
  return {(11.0 + 5.0 * kSqrt5) / 2.0, (kSqrt5 - 1.0) / 2.0, 2.0 - kSqrt2, 3.0 - 2.0 * kSqrt2};
}

double psi(double r) {
  if (!(r > 0.0 && r < 1.0)) throw Error(ErrorKind::DomainError, "psi is defined on (0, 1)");
  return (1.0 + r) / (r * r * (1.0 - r));
}

double nu(double t) { return t * (1.0 - t) / (2.0 - t); }

double BlochInputs::alpha_cap() const { return 8.0 * volume * std::pow(constants().psi0, n) / std::numbers::pi; }

double rho(const BlochInputs& in, double t) {
  const double psi0 = constants().psi0;
  return in.alpha * std::numbers::pi * (1.0 - t) / (4.0 * in.volume * std::pow(psi0, in.n) * (2.0 - t));
}

BlochRadii landau_bloch_radii(const BlochInputs& in) {
  if (in.n < 1) throw Error(ErrorKind::DomainError, "n must be >= 1");
  if (!(in.alpha > 0.0) || !(in.volume > 0.0) || !std::isfinite(in.alpha) || !std::isfinite(in.volume))
    throw Error(ErrorKind::DomainError, "alpha and V must be positive and finite");
  const double cap = in.alpha_cap();
  if (in.alpha > cap * (1.0 + 1e-12))
    throw Error(ErrorKind::HypothesisViolated,
                "alpha = " + std::to_string(in.alpha) + " exceeds the admissible maximum 8 V psi0^n / pi = " +
                    std::to_string(cap),
                "cap");

  const auto c = constants();
  const double n = in.n;
  BlochRadii out;
  out.psi0 = c.psi0;
  out.r0 = c.r0;
  out.t_star = c.t_star;
  out.nu_max = c.nu_max;
  out.m0 = std::pow(in.volume, 1.0 / (2.0 * n)) * std::sqrt(c.psi0);
  for (int i = 0; i < 1000; ++i) {
    const double t = i / 1000.0;
    out.t_grid.push_back(t);
    out.rho_at_t.push_back(rho(in, t));
  }
  out.rho_at_t_star = rho(in, c.t_star);

  const double common = std::numbers::pi * (kSqrt5 - 1.0) * (3.0 - 2.0 * kSqrt2);
  out.ru = in.alpha * common / (8.0 * in.volume * std::pow(c.psi0, n));
  out.rc = in.alpha * in.alpha * common /
           (16.0 * std::pow(in.volume, (4.0 * n - 1.0) / (2.0 * n)) * std::pow(c.psi0, (4.0 * n - 1.0) / 2.0));

  const double via_rho = c.r0 * c.t_star * out.rho_at_t_star;
  if (std::abs(via_rho - out.ru) > 1e-12 * std::max(1.0, out.ru))
    throw Error(ErrorKind::Internal, "R_u closed form disagrees with r0 t* rho(t*)");
  return out;
}

double psi_argmin_numeric() {
  double best_r = 0.01, best = psi(0.01);
  const int steps = 9800;
  const double h = (0.99 - 0.01) / steps;
  for (int i = 1; i <= steps; ++i) {
    const double r = 0.01 + i * h;
    const double v = psi(r);
    if (v < best) {
      best = v;
      best_r = r;
    }
  }
  double a = std::max(0.01, best_r - h), b = std::min(0.99, best_r + h);
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
  double f1 = psi(x1), f2 = psi(x2);
  while (b - a > 1e-12) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = psi(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = psi(x2);
    }
  }
  return 0.5 * (a + b);
}

std::vector<CVec> ball_grid(int n, double radius, long count, std::uint64_t seed) {
  Rng rng = make_stream(seed, 0x67726964ULL);
  std::vector<CVec> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) pts.push_back(sample_ball(n, radius, rng));
  return pts;
}

double sampled_sup_omega(const PHMap& f, long count, std::uint64_t seed) {
  Rng rng = make_stream(seed, 0x6f6d656761ULL);
  double sup = 0.0;
  for (long i = 0; i < 2 * count; ++i) {
    const CVec z = (i % 2 == 0) ? sample_ball(f.n(), 1.0, rng) : CVec(sample_sphere(f.n(), rng) * (1.0 - 1e-6));
    try {
      sup = std::max(sup, op_norm(omega(f, z)));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DhSingular) throw;
      throw Error(ErrorKind::HypothesisViolated, "Dh is singular at a sampled point", "omega", e.witness());
    }
  }
  return sup;
}

PointVerdict growth_bound_check(const PHMap& f, double volume, double r, const std::vector<CVec>& grid,
                                std::uint64_t seed) {
  if (!(r > 0.0 && r < 1.0)) throw Error(ErrorKind::DomainError, "r must lie in (0, 1)");
  for (const auto& z : grid)
    if (z.size() != f.n() || !(z.norm() < r))
      throw Error(ErrorKind::PreconditionViolated, "every grid point must lie in B(r)");
  require_hypotheses(f, true, seed, "growth");
  const int n = f.n();
  const double kr = (1.0 + r) / (1.0 - r);
  PointVerdict v;
  v.slack = 1e-9;
  for (const auto& z : grid) {
    const double lam = lambda_extremes(f, z).first;
    const double lhs = std::pow(lam, 2.0 * n);
    const double rhs = std::pow(kr, n) * volume / std::pow(r - z.norm(), 2.0 * n);
    v.worst_ratio = std::max(v.worst_ratio, lhs / rhs);
    if (lhs > rhs * (1.0 + v.slack)) record(v, z, lhs, rhs);
    ++v.points;
  }
  return v;
}

PointVerdict schwarz_omega_check(const PHMap& f, const std::vector<CVec>& grid, std::uint64_t seed) {
  for (const auto& z : grid)
    if (z.size() != f.n() || !(z.norm() < 1.0))
      throw Error(ErrorKind::PreconditionViolated, "every grid point must lie in the unit ball");
  require_hypotheses(f, false, seed, "schwarz");
  PointVerdict v;
  v.slack = 1e-9;
  for (const auto& z : grid) {
    const double lhs = op_norm(omega(f, z));
    const double rhs = z.norm();
    if (rhs > 0.0) v.worst_ratio = std::max(v.worst_ratio, lhs / rhs);
    if (lhs > rhs + v.slack) record(v, z, lhs, rhs);
    ++v.points;
  }
  return v;
}

PointVerdict bounded_map_bound_check(const PHMap& f, const std::vector<CVec>& grid, std::uint64_t seed) {
  for (const auto& z : grid)
    if (z.size() != f.n() || !(z.norm() < 1.0))
      throw Error(ErrorKind::PreconditionViolated, "every grid point must lie in the unit ball");
  const int n = f.n();
  Rng rng = make_stream(seed, 0x626f756e64ULL);
  for (long i = 0; i < 8000; ++i) {
    const CVec z = (i % 2 == 0) ? sample_ball(n, 1.0, rng) : CVec(sample_sphere(n, rng) * (1.0 - 1e-9));
    if (eval_ph(f, z).norm() > 1.0 + kHypothesisTol) {
      std::vector<cplx> w(z.data(), z.data() + n);
      throw Error(ErrorKind::HypothesisViolated, "image leaves the closed unit ball", "bounded", std::move(w));
    }
  }
  const bool centred = eval_ph(f, CVec::Zero(n)).norm() <= kHypothesisTol;
  const double c = 4.0 / std::numbers::pi;
  PointVerdict v;
  v.slack = 1e-9;
  for (const auto& z : grid) {
    const double rz = z.norm();
    const double lam = lambda_extremes(f, z).first;
    const double bound = c / (1.0 - rz * rz);
    v.worst_ratio = std::max(v.worst_ratio, lam / bound);
    if (lam > bound + v.slack) record(v, z, lam, bound);
    if (centred) {
      const double val = eval_ph(f, z).norm();
      const double b2 = c * std::atan(rz);
      if (b2 > 0.0) v.worst_ratio = std::max(v.worst_ratio, val / b2);
      if (val > b2 + v.slack) record(v, z, val, b2);
    }
    ++v.points;
  }
  return v;
}

}  // namespace pluri
