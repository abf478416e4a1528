#pragma once

// Sparse polynomial holomorphic maps C^n -> C^n.

#include <span>
#include <vector>

#include "pluri/cmatrix.hpp"

namespace pluri {

/// Largest exponent allowed on any single variable.
inline constexpr int kMaxDegreePerVariable = 16;

struct Monomial {
  int component = 0;           // output coordinate this term contributes to
  std::vector<int> exponents;  // multi-index, one entry per variable
  cplx coefficient{};

  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// A polynomial map held in canonical form: terms sorted by
/// (component, exponents), duplicate keys merged, zero coefficients dropped.
class PolyMap {
 public:
  /// Validates and canonicalises. Throws DimensionMismatch for bad shapes and
  /// ValidationError for negative/over-cap exponents or non-finite coefficients.
  PolyMap(int n, std::vector<Monomial> terms);

  static PolyMap zero(int n) { return PolyMap(n, {}); }
  static PolyMap identity(int n);
  /// z -> (A^T z), i.e. the row-covector map z -> z*A.
  static PolyMap linear(const CMat& a);

  int n() const noexcept { return n_; }
  std::span<const Monomial> terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }
  int max_exponent() const noexcept { return max_exponent_; }

  friend bool operator==(const PolyMap&, const PolyMap&) = default;

 private:
  int n_;
  std::vector<Monomial> terms_;
  int max_exponent_ = 0;
};

CVec eval_poly(const PolyMap& p, const CVec& z);

/// Jacobian DP(z), entry (j,k) = dP_j/dz_k, by the power rule.
CMat d_poly(const PolyMap& p, const CVec& z);

/// R = P + sign * (Q * A) where Q * A is the row-covector product
/// (sum_k Q_k A_{k,j})_j. Hence DR = DP + sign * A^T DQ.
PolyMap linear_combine(const PolyMap& p, const PolyMap& q, const CMat& a, int sign);

/// Termwise P + sign * Q.
PolyMap add(const PolyMap& p, const PolyMap& q, int sign = 1);

PolyMap scale(const PolyMap& p, cplx s);

}  // namespace pluri
