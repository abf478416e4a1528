#pragma once

// Dense complex n x n matrices: operator norm, minimal gain, determinant and
// inverse. Backed by Eigen; the wrapper keeps the square/finite invariants.

#include <complex>
#include <optional>
#include <span>

#include <Eigen/Dense>

#include "pluri/sampling.hpp"

namespace pluri {

using cplx = std::complex<double>;

/// Below this minimal gain a matrix is treated as singular.
inline constexpr double kSingularThreshold = 1e-12;

class CMat {
 public:
  /// Validating constructor: square, n >= 1, every entry finite.
  explicit CMat(Eigen::MatrixXcd m);

  static CMat identity(int n);
  static CMat zero(int n);
  static CMat diagonal(std::span<const cplx> entries);
  /// Row-major entry list of length n*n.
  static CMat from_row_major(int n, std::span<const cplx> entries);

  int n() const noexcept { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXcd& mat() const noexcept { return m_; }
  cplx operator()(int i, int j) const { return m_(i, j); }

  bool is_diagonal() const;

  CMat transpose() const { return unchecked(m_.transpose()); }
  CMat conj() const { return unchecked(m_.conjugate()); }
  CMat adjoint() const { return unchecked(m_.adjoint()); }

  friend CMat operator*(const CMat& a, const CMat& b) { return unchecked(a.m_ * b.m_); }
  friend CMat operator+(const CMat& a, const CMat& b) { return unchecked(a.m_ + b.m_); }
  friend CMat operator-(const CMat& a, const CMat& b) { return unchecked(a.m_ - b.m_); }
  friend CMat operator*(cplx s, const CMat& a) { return unchecked(s * a.m_); }

 private:
  struct NoCheck {};
  CMat(Eigen::MatrixXcd m, NoCheck) : m_(std::move(m)) {}
  static CMat unchecked(Eigen::MatrixXcd m) { return CMat(std::move(m), NoCheck{}); }

  Eigen::MatrixXcd m_;
};

/// Largest singular value (zero matrix gives 0).
double op_norm(const CMat& a);

/// Smallest singular value; 0 iff singular.
double min_gain(const CMat& a);

/// Both extremes from a single decomposition: (largest, smallest).
std::pair<double, double> singular_extremes(const CMat& a);

cplx determinant(const CMat& a);

/// Throws Error(Singular) when min_gain(a) <= kSingularThreshold.
CMat inverse(const CMat& a);

/// Entries with real and imaginary parts uniform on [-1, 1]; when target_norm
/// is given the matrix is rescaled to that operator norm.
CMat random_cmat(int n, Rng& rng, std::optional<double> target_norm = std::nullopt);

}  // namespace pluri
