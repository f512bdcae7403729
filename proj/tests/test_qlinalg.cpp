#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "loopgauge/qlinalg.hpp"

using namespace loopgauge;

namespace {

CMat random_cmat(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> nd(0.0, 1.0);
  CMat m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = Complex(nd(rng), nd(rng));
  return m;
}

Mat4 random_mat4(std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Mat4 m;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m(r, c) = nd(rng);
  return m;
}

}  // namespace

TEST_CASE("pauli basis") {
  CHECK((pauli(0) - Mat2c::Identity()).norm() == doctest::Approx(0.0));
  Mat2c z;
  z << 1, 0, 0, -1;
  CHECK((pauli(3) - z).norm() == doctest::Approx(0.0));
  for (int i = 0; i < 4; ++i) {
    CHECK((pauli(i) - pauli(i).adjoint()).norm() < 1e-15);
    for (int j = 0; j < 4; ++j) {
      const Complex tr = (Mat2c(pauli(i)) * Mat2c(pauli(j))).trace();
      CHECK(std::abs(tr - (i == j ? 2.0 : 0.0)) < 1e-15);
    }
  }
  CHECK_THROWS_AS(pauli(4), Error);
}

TEST_CASE("kron identities") {
  const CMat i4 = kron(pauli(0), pauli(0));
  CHECK((i4 - CMat::Identity(4, 4)).norm() < 1e-15);

  CMat zz = kron(pauli(3), pauli(3));
  CMat want = CMat::Zero(4, 4);
  want(0, 0) = 1;
  want(1, 1) = -1;
  want(2, 2) = -1;
  want(3, 3) = 1;
  CHECK((zz - want).norm() < 1e-15);

  // Mixed-product identity against direct multiplication.
  std::mt19937_64 rng(11);
  for (int i = 0; i < 20; ++i) {
    const CMat a = random_cmat(rng, 2), b = random_cmat(rng, 2);
    const CMat c = random_cmat(rng, 2), d = random_cmat(rng, 2);
    const CMat lhs = kron(a, b) * kron(c, d);
    const CMat rhs = kron(CMat(a * c), CMat(b * d));
    CHECK((lhs - rhs).norm() < 1e-12 * rhs.norm());
  }
}

TEST_CASE("partial trace") {
  // |000><000| keeping (0,1) -> |00><00|
  CMat rho = CMat::Zero(8, 8);
  rho(0, 0) = 1.0;
  CMat red = partial_trace(rho, {0, 1});
  CHECK(std::abs(red(0, 0) - 1.0) < 1e-15);
  CHECK(red.norm() == doctest::Approx(1.0));

  // GHZ marginal: (|00><00| + |11><11|)/2, frozen from the projector sums.
  CMat ghz = CMat::Zero(8, 8);
  ghz(0, 0) = ghz(7, 7) = 0.5;
  ghz(0, 7) = ghz(7, 0) = 0.5;
  CMat m = partial_trace(ghz, {0, 1});
  CMat want = CMat::Zero(4, 4);
  want(0, 0) = want(3, 3) = 0.5;
  CHECK((m - want).norm() < 1e-15);

  // Trace preservation and factor order on random states.
  std::mt19937_64 rng(12);
  for (int i = 0; i < 10; ++i) {
    CMat g = random_cmat(rng, 8);
    CMat r = g * g.adjoint();
    r /= r.trace();
    const CMat ab = partial_trace(r, {0, 1});
    CHECK(std::abs(ab.trace() - Complex(1.0)) < 1e-12);
    const CMat ba = partial_trace(r, {1, 0});
    // Swapping the pair transposes the tensor factors.
    for (int i1 = 0; i1 < 2; ++i1)
      for (int j1 = 0; j1 < 2; ++j1)
        for (int i2 = 0; i2 < 2; ++i2)
          for (int j2 = 0; j2 < 2; ++j2)
            CHECK(std::abs(ab(2 * i1 + i2, 2 * j1 + j2) -
                           ba(2 * i2 + i1, 2 * j2 + j1)) < 1e-13);
  }

  CHECK_THROWS_AS(partial_trace(rho, {0, 0}), Error);
  CHECK_THROWS_AS(partial_trace(rho, {0, 5}), Error);
}

TEST_CASE("partial trace of product states") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 10; ++i) {
    CMat a = random_cmat(rng, 2);
    CMat b = random_cmat(rng, 2);
    CMat c = random_cmat(rng, 2);
    CMat ra = a * a.adjoint();
    ra /= ra.trace();
    CMat rb = b * b.adjoint();
    rb /= rb.trace();
    CMat rc = c * c.adjoint();
    rc /= rc.trace();
    const CMat full = kron(kron(ra, rb), rc);
    CHECK((partial_trace(full, {0, 1}) - kron(ra, rb)).norm() < 1e-13);
    CHECK((partial_trace(full, {2, 0}) - kron(rc, ra)).norm() < 1e-13);
  }
}

TEST_CASE("eig_real4 basics") {
  const EigenSystem4 id = eig_real4(Mat4::Identity());
  for (int k = 0; k < 4; ++k)
    CHECK(std::abs(id.values(k) - Complex(1.0)) < 1e-14);
  CHECK(!id.defect_flag);

  Mat4 d = Mat4::Zero();
  d.diagonal() << 4, 3, 2, 1;
  const EigenSystem4 ed = eig_real4(d);
  Eigen::Vector4d got = ed.values.real();
  std::sort(got.data(), got.data() + 4, std::greater<double>());
  CHECK((got - Eigen::Vector4d(4, 3, 2, 1)).norm() < 1e-13);
  for (int k = 0; k < 4; ++k)
    CHECK(std::abs(ed.vectors.col(k).norm() - 1.0) < 1e-12);
}

TEST_CASE("eig_real4 reconstruction on random matrices") {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 50; ++i) {
    const Mat4 m = random_mat4(rng);
    const EigenSystem4 es = eig_real4(m);
    if (es.defect_flag) continue;
    const Mat4c p = es.vectors;
    const Mat4c d = es.values.asDiagonal();
    const Mat4c rec = p * d * p.inverse();
    CHECK((rec - m.cast<Complex>()).norm() < 1e-10 * std::max(1.0, m.norm()));
  }
}

TEST_CASE("eig_real4 flags Jordan blocks") {
  Mat4 j = Mat4::Identity();
  j(0, 1) = 1.0;  // 2x2 Jordan block at eigenvalue 1
  const EigenSystem4 es = eig_real4(j);
  CHECK(es.defect_flag);
  CHECK(es.vector_condition > 1e8);
}

TEST_CASE("principal_sqrt4") {
  CHECK((principal_sqrt4(Mat4::Identity()) - Mat4::Identity()).norm() < 1e-14);

  Mat4 d = Mat4::Zero();
  d.diagonal() << 4, 9, 16, 25;
  Mat4 want = Mat4::Zero();
  want.diagonal() << 2, 3, 4, 5;
  CHECK((principal_sqrt4(d) - want).norm() < 1e-13);

  std::mt19937_64 rng(15);
  std::normal_distribution<double> nd(0.0, 1.0);
  // Random SPD.
  for (int i = 0; i < 25; ++i) {
    const Mat4 g = random_mat4(rng);
    const Mat4 spd = g * g.transpose() + 0.1 * Mat4::Identity();
    const Mat4 x = principal_sqrt4(spd);
    CHECK((x * x - spd).norm() < 1e-9 * spd.norm());
  }
  // Random defective upper-triangular with positive diagonal.
  for (int i = 0; i < 25; ++i) {
    Mat4 t = Mat4::Zero();
    t(0, 0) = t(1, 1) = 1.5;  // repeated eigenvalue with coupling
    t(0, 1) = 2.0 + nd(rng) * 0.1;
    t(2, 2) = 0.7;
    t(3, 3) = 2.2;
    t(0, 2) = nd(rng);
    t(1, 3) = nd(rng);
    const Mat4 x = principal_sqrt4(t);
    CHECK((x * x - t).norm() < 1e-9 * t.norm());
  }

  Mat4 neg = Mat4::Identity();
  neg(2, 2) = -1.0;
  CHECK_THROWS_AS(principal_sqrt4(neg), Error);
  Mat4 sing = Mat4::Identity();
  sing(3, 3) = 0.0;
  CHECK_THROWS_AS(principal_sqrt4(sing), Error);
}

TEST_CASE("hermitian_eig reconstruction") {
  std::mt19937_64 rng(16);
  for (int n : {4, 8}) {
    for (int i = 0; i < 20; ++i) {
      CMat g = random_cmat(rng, n);
      const CMat h = 0.5 * (g + g.adjoint());
      const HermitianEig he = hermitian_eig(h);
      const CMat rec = he.vectors *
                       he.values.cast<Complex>().asDiagonal() *
                       he.vectors.adjoint();
      CHECK((rec - h).norm() < 1e-11 * std::max(1.0, h.norm()));
      CHECK((he.vectors.adjoint() * he.vectors - CMat::Identity(n, n)).norm() <
            1e-12);
    }
  }
  CMat not_herm = CMat::Zero(2, 2);
  not_herm(0, 1) = 1.0;
  CHECK_THROWS_AS(hermitian_eig(not_herm), Error);
}
