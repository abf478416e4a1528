#include "pluri/pmap.hpp"

#include <cmath>
#include <numbers>

#include "pluri/error.hpp"
#include "pluri/sampling.hpp"

namespace pluri {

PHMap::PHMap(PolyMap h, PolyMap g) : h_(std::move(h)), g_(std::move(g)) {
  if (h_.n() != g_.n()) throw Error(ErrorKind::DimensionMismatch, "h and g must have the same dimension");
}

PHMap PHMap::holomorphic(PolyMap h) {
  const int n = h.n();
  return PHMap(std::move(h), PolyMap::zero(n));
}

CVec eval_ph(const PHMap& f, const CVec& z) { return eval_poly(f.h(), z) + eval_poly(f.g(), z).conjugate(); }

namespace {

CMat omega_from(const CMat& dh, const CMat& dg, const CVec& z) {
  if (min_gain(dh) <= kSingularThreshold) {
    std::vector<cplx> w(z.data(), z.data() + z.size());
    throw Error(ErrorKind::DhSingular, "Dh is singular at the evaluation point", {}, std::move(w));
  }
  return dg * inverse(dh);
}

Eigen::MatrixXd assemble_real(const CMat& dh, const CMat& dg) {
  const int n = dh.n();
  Eigen::MatrixXd j(2 * n, 2 * n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const cplx dz = dh(r, c);
      const cplx dzbar = std::conj(dg(r, c));
      const cplx dx = dz + dzbar;
      const cplx dy = cplx(0.0, 1.0) * (dz - dzbar);
      j(r, c) = dx.real();
      j(r, n + c) = dy.real();
      j(n + r, c) = dx.imag();
      j(n + r, n + c) = dy.imag();
    }
  return j;
}

double det_from(const CMat& dh, const CMat& w) {
  const cplx ddh = determinant(dh);
  const cplx inner = determinant(CMat::identity(dh.n()) - w * w.conj());
  const double scale = std::max(1.0, std::abs(inner));
  if (std::abs(inner.imag()) > 1e-10 * scale)
    throw Error(ErrorKind::Internal, "block determinant has a non-negligible imaginary part");
  return std::norm(ddh) * inner.real();
}

// Directional differential theta -> P theta + Q conj(theta).
struct Differential {
  Eigen::MatrixXcd p;
  Eigen::MatrixXcd q;

  CVec apply(const CVec& t) const { return p * t + q * t.conjugate(); }
  // Adjoint under the real inner product Re<a, b>.
  CVec adjoint(const CVec& w) const { return p.adjoint() * w + (q.adjoint() * w).conjugate(); }
};

std::vector<CVec> fixed_directions(int n) {
  std::vector<CVec> dirs;
  const cplx i(0.0, 1.0);
  for (int k = 0; k < n && dirs.size() < 64; ++k)
    for (int m = 0; m < 8 && dirs.size() < 64; ++m) {
      CVec v = CVec::Zero(n);
      v[k] = std::exp(i * (std::numbers::pi * m / 4.0));
      dirs.push_back(v);
    }
  for (std::uint64_t t = 0; dirs.size() < 64; ++t) {
    CVec v(n);
    std::uint64_t code = t;
    for (int k = 0; k < n; ++k) {
      v[k] = std::exp(i * (std::numbers::pi / 2.0 * static_cast<double>(code % 4))) / std::sqrt(double(n));
      code /= 4;
    }
    dirs.push_back(v);
  }
  return dirs;
}

struct RawScan {
  double max_val, min_val;
  CVec argmax, argmin;
};

RawScan raw_scan(const Differential& d, int n, long samples, std::uint64_t seed) {
  RawScan s{-1.0, std::numeric_limits<double>::infinity(), CVec::Zero(n), CVec::Zero(n)};
  auto visit = [&](const CVec& t) {
    const double v = d.apply(t).norm();
    if (v > s.max_val) {
      s.max_val = v;
      s.argmax = t;
    }
    if (v < s.min_val) {
      s.min_val = v;
      s.argmin = t;
    }
  };
  for (const auto& t : fixed_directions(n)) visit(t);
  Rng rng(substream_seed(seed, 0));
  for (long i = 0; i < samples; ++i) visit(sample_sphere(n, rng));
  return s;
}

// Power iteration on shift*I + sign*L^T L starting at t; returns ||L t|| at the end.
double polish(const Differential& d, CVec t, double shift, double sign) {
  double last = -1.0;
  for (int it = 0; it < 4000; ++it) {
    CVec next = sign * d.adjoint(d.apply(t)) + shift * t;
    const double norm = next.norm();
    if (norm == 0.0) break;
    t = next / norm;
    const double val = d.apply(t).squaredNorm();
    if (std::abs(val - last) <= 1e-17 * std::max(shift, val)) break;
    last = val;
  }
  return d.apply(t).norm();
}

Differential differential(const PHMap& f, const CVec& z) {
  return {d_poly(f.h(), z).mat(), d_poly(f.g(), z).mat().conjugate()};
}

}  // namespace

CMat omega(const PHMap& f, const CVec& z) { return omega_from(d_poly(f.h(), z), d_poly(f.g(), z), z); }

Eigen::MatrixXd real_jacobian(const PHMap& f, const CVec& z) {
  return assemble_real(d_poly(f.h(), z), d_poly(f.g(), z));
}

double det_jacobian(const PHMap& f, const CVec& z) {
  const CMat dh = d_poly(f.h(), z);
  const CMat dg = d_poly(f.g(), z);
  return det_from(dh, omega_from(dh, dg, z));
}

std::pair<double, double> lambda_extremes(const PHMap& f, const CVec& z) {
  const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXd>(real_jacobian(f, z)).singularValues();
  return {s[0], s[s.size() - 1]};
}

std::pair<double, double> sphere_sample_extremes(const PHMap& f, const CVec& z, long samples, std::uint64_t seed) {
  const auto s = raw_scan(differential(f, z), f.n(), samples, seed);
  return {s.max_val, s.min_val};
}

std::pair<double, double> sphere_scan_extremes(const PHMap& f, const CVec& z, long samples, std::uint64_t seed) {
  const Differential d = differential(f, z);
  const auto s = raw_scan(d, f.n(), samples, seed);
  const double top = std::max(s.max_val, polish(d, s.argmax, 0.0, 1.0));
  const double shift = top * top;
  const double bottom = std::min(s.min_val, polish(d, s.argmin, shift, -1.0));
  return {top, bottom};
}

DerivPack derivs(const PHMap& f, const CVec& z) {
  const CMat dh = d_poly(f.h(), z);
  const CMat dg = d_poly(f.g(), z);
  CMat w = omega_from(dh, dg, z);
  const double det = det_from(dh, w);
  const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXd>(assemble_real(dh, dg)).singularValues();
  return {z, dh, dg, std::move(w), s[0], s[s.size() - 1], det};
}

}  // namespace pluri
