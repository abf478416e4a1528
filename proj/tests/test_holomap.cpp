#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "pluri/error.hpp"
#include "pluri/holomap.hpp"

using namespace pluri;

namespace {

CVec vec(std::initializer_list<cplx> v) {
  CVec z(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (cplx c : v) z[k++] = c;
  return z;
}

// P(z) = (z1^2, z1 z2)
PolyMap square_and_product() {
  return PolyMap(2, {{0, {2, 0}, 1.0}, {1, {1, 1}, 1.0}});
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::Internal;
}

}  // namespace

TEST_CASE("eval_poly examples") {
  const CVec z = eval_poly(PolyMap::identity(2), vec({0.1, cplx(0.0, 0.2)}));
  CHECK(z[0] == cplx(0.1));
  CHECK(z[1] == cplx(0.0, 0.2));

  const CVec w = eval_poly(square_and_product(), vec({cplx(1, 1), 2.0}));
  CHECK(std::abs(w[0] - cplx(0, 2)) < 1e-15);
  CHECK(std::abs(w[1] - cplx(2, 2)) < 1e-15);

  CHECK(eval_poly(PolyMap::zero(3), vec({1.0, 2.0, 3.0})).norm() == 0.0);
  CHECK(kind_of([] { eval_poly(PolyMap::identity(2), vec({1.0})); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("d_poly examples") {
  const CMat id = d_poly(PolyMap::identity(3), vec({0.3, -0.1, cplx(0, 0.5)}));
  CHECK(op_norm(id - CMat::identity(3)) == 0.0);

  const CMat d = d_poly(square_and_product(), vec({cplx(1, 1), 2.0}));
  CHECK(std::abs(d(0, 0) - cplx(2, 2)) < 1e-15);
  CHECK(d(0, 1) == cplx{});
  CHECK(std::abs(d(1, 0) - cplx(2)) < 1e-15);
  CHECK(std::abs(d(1, 1) - cplx(1, 1)) < 1e-15);
  CHECK(kind_of([] { d_poly(PolyMap::identity(2), vec({1.0, 2.0, 3.0})); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("d_poly matches finite differences on random cubics") {
  std::mt19937_64 rng(21);
  for (int n = 1; n <= 3; ++n)
    for (int t = 0; t < 50; ++t) {
      const PolyMap p = oracle::random_poly(n, 8, 0, 3, 1.0, rng);
      const CVec z = oracle::random_point(n, 0.9, rng);
      const Eigen::MatrixXcd diff = d_poly(p, z).mat() - oracle::fd_dpoly(p, z);
      CHECK(diff.cwiseAbs().maxCoeff() <= 1e-7);
    }
}

TEST_CASE("first-order Taylor remainder is quadratic") {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 20; ++t) {
    const PolyMap p = oracle::random_poly(2, 6, 1, 3, 1.0, rng);
    const CVec z = oracle::random_point(2, 0.8, rng);
    const CVec dir = oracle::random_point(2, 1.0, rng).normalized();
    std::vector<double> c;
    for (double s : {1e-3, 1e-4}) {
      const CVec dz = s * dir;
      const double rem = (eval_poly(p, z + dz) - eval_poly(p, z) - d_poly(p, z).mat() * dz).norm();
      c.push_back(rem / (s * s));
    }
    CHECK(c[1] == doctest::Approx(c[0]).epsilon(0.05));
  }
}

TEST_CASE("canonical form") {
  const PolyMap p(2, {{1, {0, 1}, 2.0}, {0, {1, 0}, 1.0}, {1, {0, 1}, cplx(0, 1)}, {0, {2, 0}, 0.0}});
  REQUIRE(p.terms().size() == 2);
  CHECK(p.terms()[0].component == 0);
  CHECK(p.terms()[1].coefficient == cplx(2, 1));

  // Cancelling duplicates disappear entirely.
  const PolyMap q(1, {{0, {3}, 1.0}, {0, {3}, -1.0}});
  CHECK(q.empty());

  std::mt19937_64 rng(23);
  const PolyMap r = oracle::random_poly(3, 20, 0, 4, 1.0, rng);
  std::vector<Monomial> shuffled(r.terms().begin(), r.terms().end());
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  CHECK(PolyMap(3, shuffled) == r);
  CHECK(PolyMap(3, std::vector<Monomial>(r.terms().begin(), r.terms().end())) == r);
}

TEST_CASE("validation") {
  CHECK(kind_of([] { PolyMap(2, {{2, {1, 0}, 1.0}}); }) == ErrorKind::DimensionMismatch);
  CHECK(kind_of([] { PolyMap(2, {{0, {1}, 1.0}}); }) == ErrorKind::DimensionMismatch);
  CHECK(kind_of([] { PolyMap(1, {{0, {-1}, 1.0}}); }) == ErrorKind::ValidationError);
  CHECK(kind_of([] { PolyMap(1, {{0, {kMaxDegreePerVariable + 1}, 1.0}}); }) == ErrorKind::ValidationError);
  CHECK(kind_of([] { PolyMap(1, {{0, {1}, cplx(std::nan(""), 0.0)}}); }) == ErrorKind::ValidationError);
  CHECK_NOTHROW(PolyMap(1, {{0, {kMaxDegreePerVariable}, 1.0}}));
}

TEST_CASE("linear_combine examples") {
  std::mt19937_64 rng(24);
  const PolyMap h = oracle::random_poly(2, 6, 1, 3, 1.0, rng);
  const PolyMap g = oracle::random_poly(2, 6, 1, 3, 1.0, rng);
  CHECK(linear_combine(h, g, CMat::identity(2), -1) == add(h, g, -1));
  CHECK(linear_combine(h, g, CMat::zero(2), 1) == h);
  CHECK(linear_combine(h, g, CMat::zero(2), -1) == h);

  const std::vector<cplx> d{cplx(0, 1), -1.0};
  const PolyMap r = linear_combine(PolyMap::zero(2), PolyMap::identity(2), CMat::diagonal(d), 1);
  CHECK(r == PolyMap(2, {{0, {1, 0}, cplx(0, 1)}, {1, {0, 1}, -1.0}}));
}

TEST_CASE("linear_combine derivative identity") {
  std::mt19937_64 rng(25);
  auto srng = make_stream(25, 0);
  for (int n = 1; n <= 3; ++n)
    for (int t = 0; t < 30; ++t) {
      const PolyMap p = oracle::random_poly(n, 6, 0, 3, 1.0, rng);
      const PolyMap q = oracle::random_poly(n, 6, 0, 3, 1.0, rng);
      const CMat a = random_cmat(n, srng);
      const CVec z = oracle::random_point(n, 0.9, rng);
      for (int sign : {1, -1}) {
        const PolyMap r = linear_combine(p, q, a, sign);
        const Eigen::MatrixXcd expect = d_poly(p, z).mat() + double(sign) * a.mat().transpose() * d_poly(q, z).mat();
        CHECK((d_poly(r, z).mat() - expect).cwiseAbs().maxCoeff() <= 1e-14 * std::max(1.0, expect.norm()));
        const CVec val = eval_poly(p, z) + double(sign) * (eval_poly(q, z).transpose() * a.mat()).transpose();
        CHECK((eval_poly(r, z) - val).norm() <= 1e-13);
      }
    }
  CHECK_THROWS_AS(linear_combine(PolyMap::zero(2), PolyMap::zero(2), CMat::identity(3), 1), Error);
}

TEST_CASE("scale and linear") {
  const PolyMap p = scale(PolyMap::identity(2), cplx(0, 2));
  CHECK(eval_poly(p, vec({1.0, 1.0}))[1] == cplx(0, 2));
  CHECK(scale(PolyMap::identity(2), 0.0).empty());
  const std::vector<cplx> e{1.0, 2.0, 3.0, 4.0};
  const CMat a = CMat::from_row_major(2, e);
  // Row-covector convention: (z * A)_j = sum_k z_k A_kj.
  const CVec w = eval_poly(PolyMap::linear(a), vec({1.0, 10.0}));
  CHECK(w[0] == cplx(31.0));
  CHECK(w[1] == cplx(42.0));
}
