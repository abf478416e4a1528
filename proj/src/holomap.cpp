#include "pluri/holomap.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pluri/error.hpp"

namespace pluri {

namespace {

bool key_less(const Monomial& a, const Monomial& b) {
  if (a.component != b.component) return a.component < b.component;
  return a.exponents < b.exponents;
}

bool same_key(const Monomial& a, const Monomial& b) {
  return a.component == b.component && a.exponents == b.exponents;
}

void check_point(const PolyMap& p, const CVec& z) {
  if (z.size() != p.n())
    throw Error(ErrorKind::DimensionMismatch,
                "point has length " + std::to_string(z.size()) + ", map dimension is " + std::to_string(p.n()));
}

// powers[k][e] = z_k^e for e <= max exponent
std::vector<std::vector<cplx>> power_table(const CVec& z, int max_exp) {
  std::vector<std::vector<cplx>> pw(static_cast<std::size_t>(z.size()));
  for (Eigen::Index k = 0; k < z.size(); ++k) {
    auto& row = pw[static_cast<std::size_t>(k)];
    row.resize(static_cast<std::size_t>(max_exp) + 1);
    row[0] = 1.0;
    for (int e = 1; e <= max_exp; ++e) row[static_cast<std::size_t>(e)] = row[static_cast<std::size_t>(e - 1)] * z[k];
  }
  return pw;
}

}  // namespace

PolyMap::PolyMap(int n, std::vector<Monomial> terms) : n_(n) {
  if (n < 1) throw Error(ErrorKind::DimensionMismatch, "PolyMap dimension must be >= 1");
  for (const auto& t : terms) {
    if (t.component < 0 || t.component >= n)
      throw Error(ErrorKind::DimensionMismatch, "monomial component " + std::to_string(t.component) + " outside [0, n)");
    if (static_cast<int>(t.exponents.size()) != n)
      throw Error(ErrorKind::DimensionMismatch, "monomial exponent list length " + std::to_string(t.exponents.size()) +
                                                    " differs from n = " + std::to_string(n));
    for (int e : t.exponents) {
      if (e < 0) throw Error(ErrorKind::ValidationError, "negative exponent");
      if (e > kMaxDegreePerVariable)
        throw Error(ErrorKind::ValidationError,
                    "exponent " + std::to_string(e) + " exceeds the per-variable cap of " + std::to_string(kMaxDegreePerVariable));
    }
    if (!std::isfinite(t.coefficient.real()) || !std::isfinite(t.coefficient.imag()))
      throw Error(ErrorKind::ValidationError, "non-finite coefficient");
  }
  std::stable_sort(terms.begin(), terms.end(), key_less);
  for (auto& t : terms) {
    if (!terms_.empty() && same_key(terms_.back(), t))
      terms_.back().coefficient += t.coefficient;
    else
      terms_.push_back(std::move(t));
  }
  std::erase_if(terms_, [](const Monomial& t) { return t.coefficient == cplx{}; });
  for (const auto& t : terms_)
    for (int e : t.exponents) max_exponent_ = std::max(max_exponent_, e);
}

PolyMap PolyMap::identity(int n) {
  std::vector<Monomial> terms;
  for (int j = 0; j < n; ++j) {
    std::vector<int> e(static_cast<std::size_t>(n), 0);
    e[static_cast<std::size_t>(j)] = 1;
    terms.push_back({j, std::move(e), 1.0});
  }
  return PolyMap(n, std::move(terms));
}

PolyMap PolyMap::linear(const CMat& a) {
  return linear_combine(PolyMap::zero(a.n()), PolyMap::identity(a.n()), a, 1);
}

CVec eval_poly(const PolyMap& p, const CVec& z) {
  check_point(p, z);
  CVec out = CVec::Zero(p.n());
  if (p.empty()) return out;
  const auto pw = power_table(z, p.max_exponent());
  for (const auto& t : p.terms()) {
    cplx term = t.coefficient;
    for (std::size_t k = 0; k < t.exponents.size(); ++k)
      if (t.exponents[k] != 0) term *= pw[k][static_cast<std::size_t>(t.exponents[k])];
    out[t.component] += term;
  }
  return out;
}

CMat d_poly(const PolyMap& p, const CVec& z) {
  check_point(p, z);
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(p.n(), p.n());
  if (p.empty()) return CMat(std::move(d));
  const auto pw = power_table(z, p.max_exponent());
  const std::size_t n = static_cast<std::size_t>(p.n());
  for (const auto& t : p.terms()) {
    for (std::size_t k = 0; k < n; ++k) {
      const int ek = t.exponents[k];
      if (ek == 0) continue;
      cplx term = t.coefficient * static_cast<double>(ek);
      for (std::size_t m = 0; m < n; ++m) {
        const int em = (m == k) ? ek - 1 : t.exponents[m];
        if (em != 0) term *= pw[m][static_cast<std::size_t>(em)];
      }
      d(t.component, static_cast<Eigen::Index>(k)) += term;
    }
  }
  return CMat(std::move(d));
}

PolyMap linear_combine(const PolyMap& p, const PolyMap& q, const CMat& a, int sign) {
  if (p.n() != q.n() || p.n() != a.n())
    throw Error(ErrorKind::DimensionMismatch, "linear_combine operands have different dimensions");
  if (sign != 1 && sign != -1) throw Error(ErrorKind::PreconditionViolated, "sign must be +1 or -1");
  std::vector<Monomial> terms(p.terms().begin(), p.terms().end());
  const double s = sign;
  for (const auto& t : q.terms())
    for (int j = 0; j < q.n(); ++j) {
      const cplx c = a(t.component, j);
      if (c != cplx{}) terms.push_back({j, t.exponents, s * t.coefficient * c});
    }
  return PolyMap(p.n(), std::move(terms));
}

PolyMap add(const PolyMap& p, const PolyMap& q, int sign) {
  return linear_combine(p, q, CMat::identity(p.n()), sign);
}

PolyMap scale(const PolyMap& p, cplx s) {
  std::vector<Monomial> terms(p.terms().begin(), p.terms().end());
  for (auto& t : terms) t.coefficient *= s;
  return PolyMap(p.n(), std::move(terms));
}

}  // namespace pluri
