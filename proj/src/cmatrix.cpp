#include "pluri/cmatrix.hpp"

#include <cmath>

#include "pluri/error.hpp"

namespace pluri {

namespace {

Eigen::VectorXd singular_values(const Eigen::MatrixXcd& m) {
  if (m.rows() == 1) {
    Eigen::VectorXd s(1);
    s[0] = std::abs(m(0, 0));
    return s;
  }
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues();
}

}  // namespace

CMat::CMat(Eigen::MatrixXcd m) : m_(std::move(m)) {
  if (m_.rows() < 1 || m_.rows() != m_.cols())
    throw Error(ErrorKind::DimensionMismatch, "CMat must be square with n >= 1");
  for (Eigen::Index i = 0; i < m_.size(); ++i) {
    const cplx v = m_.data()[i];
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw Error(ErrorKind::ValidationError, "CMat entries must be finite");
  }
}

CMat CMat::identity(int n) { return CMat(Eigen::MatrixXcd::Identity(n, n)); }

CMat CMat::zero(int n) { return CMat(Eigen::MatrixXcd::Zero(n, n)); }

CMat CMat::diagonal(std::span<const cplx> entries) {
  const auto n = static_cast<Eigen::Index>(entries.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = entries[static_cast<std::size_t>(i)];
  return CMat(std::move(m));
}

CMat CMat::from_row_major(int n, std::span<const cplx> entries) {
  if (n < 1 || entries.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
    throw Error(ErrorKind::DimensionMismatch, "matrix entry list must have n*n elements");
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = entries[static_cast<std::size_t>(i * n + j)];
  return CMat(std::move(m));
}

bool CMat::is_diagonal() const {
  for (int i = 0; i < n(); ++i)
    for (int j = 0; j < n(); ++j)
      if (i != j && m_(i, j) != cplx{}) return false;
  return true;
}

double op_norm(const CMat& a) { return singular_values(a.mat())[0]; }

double min_gain(const CMat& a) {
  const auto s = singular_values(a.mat());
  return s[s.size() - 1];
}

std::pair<double, double> singular_extremes(const CMat& a) {
  const auto s = singular_values(a.mat());
  return {s[0], s[s.size() - 1]};
}

cplx determinant(const CMat& a) {
  const auto& m = a.mat();
  switch (a.n()) {
    case 1:
      return m(0, 0);
    case 2:
      return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    default:
      return m.partialPivLu().determinant();
  }
}

CMat inverse(const CMat& a) {
  if (min_gain(a) <= kSingularThreshold)
    throw Error(ErrorKind::Singular, "matrix is singular (minimal gain below 1e-12)");
  if (a.n() == 1) return CMat(Eigen::MatrixXcd::Constant(1, 1, 1.0 / a(0, 0)));
  return CMat(a.mat().fullPivLu().inverse());
}

CMat random_cmat(int n, Rng& rng, std::optional<double> target_norm) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double re = u(rng);
      const double im = u(rng);
      m(i, j) = {re, im};
    }
  CMat out(std::move(m));
  if (target_norm) {
    const double norm = op_norm(out);
    if (norm > 0.0) out = cplx(*target_norm / norm) * out;
  }
  return out;
}

}  // namespace pluri
