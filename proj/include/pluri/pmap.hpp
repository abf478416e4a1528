#pragma once

// Pluriharmonic maps f = h + conj(g) and their first-order calculus.
//
// Real coordinates are ordered (x_1..x_n, y_1..y_n) for z = x + iy, and the
// image likewise (Re f_1..Re f_n, Im f_1..Im f_n).

#include <cstdint>
#include <utility>

#include "pluri/holomap.hpp"

namespace pluri {

class PHMap {
 public:
  PHMap(PolyMap h, PolyMap g);
  /// A holomorphic map viewed as pluriharmonic with g = 0.
  static PHMap holomorphic(PolyMap h);

  int n() const noexcept { return h_.n(); }
  const PolyMap& h() const noexcept { return h_; }
  const PolyMap& g() const noexcept { return g_; }

 private:
  PolyMap h_;
  PolyMap g_;
};

struct DerivPack {
  CVec z;
  CMat dh;
  CMat dg;
  CMat omega;          // Dg [Dh]^{-1}
  double lambda_big;   // largest stretch of the real differential
  double lambda_small; // smallest stretch
  double det_j;        // real Jacobian determinant
};

CVec eval_ph(const PHMap& f, const CVec& z);

/// Dg(z) [Dh(z)]^{-1}; throws DhSingular when min_gain(Dh(z)) <= 1e-12.
CMat omega(const PHMap& f, const CVec& z);

/// 2n x 2n real Jacobian of (Re f, Im f) with respect to (x, y), assembled
/// from the Wirtinger derivatives Df = Dh and conj-derivative conj(Dg).
Eigen::MatrixXd real_jacobian(const PHMap& f, const CVec& z);

/// |det Dh|^2 det(I - omega conj(omega)). Throws DhSingular, and Internal if
/// the block determinant carries an imaginary part above 1e-10.
double det_jacobian(const PHMap& f, const CVec& z);

/// (largest, smallest) singular values of the real Jacobian.
std::pair<double, double> lambda_extremes(const PHMap& f, const CVec& z);

/// max/min of ||Dh theta + conj(Dg) conj(theta)|| over `samples` uniform
/// directions of the complex unit sphere plus 64 fixed axis/diagonal
/// directions, each extreme then polished by power iteration carried out on
/// the same complex expression. Never exceeds the true extremes.
std::pair<double, double> sphere_scan_extremes(const PHMap& f, const CVec& z, long samples, std::uint64_t seed);

/// Raw sampled extremes without polishing (monotone in `samples`).
std::pair<double, double> sphere_sample_extremes(const PHMap& f, const CVec& z, long samples, std::uint64_t seed);

/// Throws DhSingular when Dh(z) is singular.
DerivPack derivs(const PHMap& f, const CVec& z);

}  // namespace pluri
