#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "loopgauge/verification.hpp"

using namespace loopgauge;

namespace {

Mat4 z_boost(double phi) {
  Mat4 b = Mat4::Identity();
  b(0, 0) = b(3, 3) = std::cosh(phi);
  b(0, 3) = b(3, 0) = std::sinh(phi);
  return b;
}

}  // namespace

TEST_CASE("corr_matrix anchors") {
  Mat4 want = Mat4::Zero();
  want.diagonal() << 0.5, -0.5, -0.5, -0.5;
  CHECK((corr_matrix(catalog("bell_psi_minus")).s - want).norm() < 1e-14);

  const DensityMatrix mixed{2, CMat::Identity(4, 4) / 4.0};
  Mat4 want_mixed = Mat4::Zero();
  want_mixed(0, 0) = 0.5;
  CHECK((corr_matrix(mixed).s - want_mixed).norm() < 1e-15);

  Mat4 want_werner = Mat4::Zero();
  want_werner.diagonal() << 0.5, -1.0 / 6.0, -1.0 / 6.0, -1.0 / 6.0;
  CHECK((corr_matrix(catalog("werner_third")).s - want_werner).norm() < 1e-14);
}

TEST_CASE("corr_matrix is linear in the state") {
  std::mt19937_64 rng(21);
  const DensityMatrix a = random_density(rng, 2);
  const DensityMatrix b = random_density(rng, 2);
  const DensityMatrix m = mix({{0.3, a}, {0.7, b}});
  const Mat4 lhs = corr_matrix(m).s;
  const Mat4 rhs = 0.3 * corr_matrix(a).s + 0.7 * corr_matrix(b).s;
  CHECK((lhs - rhs).norm() < 1e-13);
}

TEST_CASE("local-operation covariance") {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 20; ++i) {
    const DensityMatrix rho = random_density(rng, 2);
    const LocalOp a = random_unimodular(rng);
    const LocalOp b = random_unimodular(rng);
    const DensityMatrix moved = apply_local(rho, {a, b}, false);
    const Mat4 lhs = corr_matrix(moved).s;
    const Mat4 rhs = sl2_to_lorentz(a).m * corr_matrix(rho).s *
                     sl2_to_lorentz(b).m.transpose();
    CHECK((lhs - rhs).norm() < 1e-9 * std::max(1.0, rhs.norm()));
  }
}

TEST_CASE("density_from_corr") {
  CorrelationMatrix singlet;
  singlet.s.setZero();
  singlet.s.diagonal() << 0.5, -0.5, -0.5, -0.5;
  CHECK((density_from_corr(singlet).rho - catalog("bell_psi_minus").rho)
            .norm() < 1e-14);

  CorrelationMatrix mixed;
  mixed.s.setZero();
  mixed.s(0, 0) = 0.5;
  CHECK((density_from_corr(mixed).rho - CMat::Identity(4, 4) / 4.0).norm() <
        1e-15);

  std::mt19937_64 rng(23);
  for (int i = 0; i < 20; ++i) {
    const DensityMatrix rho = random_density(rng, 2);
    const CorrelationMatrix s = corr_matrix(rho);
    CHECK((density_from_corr(s).rho - rho.rho).norm() < 1e-12);
    CHECK((corr_matrix(density_from_corr(s)).s - s.s).norm() < 1e-13);
  }

  // Negative Bell weight: not a physical correlation matrix.
  CorrelationMatrix bad;
  bad.s.setZero();
  bad.s.diagonal() << 0.5, -0.5, -0.5, 0.5;
  CHECK_THROWS_AS(density_from_corr(bad), Error);
}

TEST_CASE("sl2_to_lorentz closed forms") {
  CHECK((sl2_to_lorentz(LocalOp{}).m - Mat4::Identity()).norm() < 1e-15);

  const double phi = 0.8;
  Mat2c boost2;
  boost2 << std::exp(phi / 2), 0.0, 0.0, std::exp(-phi / 2);
  CHECK((sl2_to_lorentz(make_unimodular(boost2)).m - z_boost(phi)).norm() <
        1e-13);

  const double theta = 0.7;
  Mat2c rot = Mat2c::Identity() * std::cos(theta / 2);
  rot -= Complex(0, std::sin(theta / 2)) * Mat2c(pauli(3));
  Mat4 want = Mat4::Identity();
  want(1, 1) = want(2, 2) = std::cos(theta);
  want(1, 2) = -std::sin(theta);
  want(2, 1) = std::sin(theta);
  CHECK((sl2_to_lorentz(make_unimodular(rot)).m - want).norm() < 1e-13);

  Mat2c not_unimodular = 2.0 * Mat2c::Identity();
  CHECK_THROWS_AS(sl2_to_lorentz(LocalOp{not_unimodular, true}), Error);
}

TEST_CASE("the pure-state gauge matches its closed form") {
  // A = [[0, -sqrt(a/b)], [sqrt(b/a), 0]] maps to the displayed U_a with
  // entries 1/(2ab) and (b^2 - a^2)/(2ab).
  const double a = 0.6, b = 0.8;
  Mat2c op;
  op << 0.0, -std::sqrt(a / b), std::sqrt(b / a), 0.0;
  const Mat4 u = sl2_to_lorentz(make_unimodular(op)).m;
  Mat4 want = Mat4::Zero();
  want(0, 0) = 1.0 / (2 * a * b);
  want(0, 3) = (b * b - a * a) / (2 * a * b);
  want(1, 1) = -1.0;
  want(2, 2) = 1.0;
  want(3, 0) = (a * a - b * b) / (2 * a * b);
  want(3, 3) = -1.0 / (2 * a * b);
  CHECK((u - want).norm() < 1e-13);
  CHECK(is_lorentz(u).proper_orthochronous());
}

TEST_CASE("lorentz_to_sl2") {
  const LocalOp id = lorentz_to_sl2(LorentzMatrix{Mat4::Identity()});
  CHECK((id.m - Mat2c::Identity()).norm() < 1e-12);

  const double phi = 1.1;
  const LocalOp boosted = lorentz_to_sl2(LorentzMatrix{z_boost(phi)});
  Mat2c want;
  want << std::exp(phi / 2), 0.0, 0.0, std::exp(-phi / 2);
  CHECK((boosted.m - want).norm() < 1e-10);

  std::mt19937_64 rng(24);
  for (int i = 0; i < 200; ++i) {
    const LocalOp a = random_unimodular(rng);
    const LocalOp back = lorentz_to_sl2(sl2_to_lorentz(a));
    const double direct = (back.m - a.m).norm();
    const double flipped = (back.m + a.m).norm();
    CHECK(std::min(direct, flipped) < 1e-10);
  }

  Mat4 junk = Mat4::Identity();
  junk(1, 2) = 0.5;
  CHECK_THROWS_AS(lorentz_to_sl2(LorentzMatrix{junk}), Error);
}

TEST_CASE("is_lorentz classification") {
  const LorentzCheck id = is_lorentz(Mat4::Identity());
  CHECK(id.proper_orthochronous());

  // eta preserves the metric but is improper.
  const LorentzCheck eta = is_lorentz(minkowski_eta());
  CHECK(eta.metric_ok);
  CHECK(!eta.proper);
  CHECK(eta.orthochronous);

  std::mt19937_64 rng(25);
  for (int i = 0; i < 20; ++i) {
    const Mat4 u = sl2_to_lorentz(random_unimodular(rng)).m;
    CHECK(is_lorentz(u).proper_orthochronous());
    // eta U^T eta = U^{-1}
    const Mat4& e = minkowski_eta();
    CHECK((e * u.transpose() * e * u - Mat4::Identity()).norm() < 1e-10);
  }
}

TEST_CASE("concurrence") {
  CHECK(concurrence_wootters(catalog("bell_psi_minus")) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(concurrence_wootters(DensityMatrix{2, CMat::Identity(4, 4) / 4.0}) <
        1e-12);
  CHECK(concurrence_wootters(catalog("werner_third")) < 1e-12);

  CHECK(concurrence_from_sigma(Vec4(0.5, -0.5, -0.5, -0.5)) ==
        doctest::Approx(1.0));
  CHECK(concurrence_from_sigma(
            Vec4(0.5, -1.0 / 6.0, -1.0 / 6.0, -1.0 / 6.0)) == 0.0);
}

TEST_CASE("homomorphism property") {
  std::mt19937_64 rng(26);
  for (int i = 0; i < 50; ++i) {
    const LocalOp a = random_unimodular(rng);
    const LocalOp b = random_unimodular(rng);
    const Mat4 lhs = sl2_to_lorentz(make_unimodular(a.m * b.m)).m;
    const Mat4 rhs = sl2_to_lorentz(a).m * sl2_to_lorentz(b).m;
    CHECK((lhs - rhs).norm() < 1e-10 * std::max(1.0, rhs.norm()));
  }
}

TEST_CASE("corr json round trip") {
  std::mt19937_64 rng(27);
  CorrelationMatrix s = corr_matrix(random_density(rng, 2));
  s.qubit_a = 2;
  s.qubit_b = 0;
  const CorrelationMatrix back = corr_from_json(corr_to_json(s));
  CHECK(back.qubit_a == 2);
  CHECK(back.qubit_b == 0);
  CHECK((back.s - s.s).norm() == 0.0);
}
