#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "loopgauge/correlation.hpp"
#include "loopgauge/verification.hpp"

using namespace loopgauge;

TEST_CASE("pure_state basics") {
  CVec e0 = CVec::Zero(4);
  e0(0) = 1.0;
  const DensityMatrix dm = pure_state(e0);
  CHECK(dm.n_qubits == 2);
  CHECK(std::abs(dm.rho(0, 0) - Complex(1.0)) < 1e-15);

  CVec ghz = CVec::Zero(8);
  ghz(0) = ghz(7) = 1.0;
  const DensityMatrix g = pure_state(ghz);
  CHECK(purity(g) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(g.rho(0, 7) - Complex(0.5)) < 1e-15);

  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  CVec amps(8);
  for (int i = 0; i < 8; ++i) amps(i) = Complex(nd(rng), nd(rng));
  const DensityMatrix r = pure_state(amps);
  CHECK(std::abs(r.rho.trace() - Complex(1.0)) < 1e-12);
  const auto eig = hermitian_eig(r.rho);
  int rank = 0;
  for (int i = 0; i < 8; ++i)
    if (eig.values(i) > 1e-12) ++rank;
  CHECK(rank == 1);

  CHECK_THROWS_AS(pure_state(CVec::Zero(4)), Error);
}

TEST_CASE("ghz_class_state") {
  constexpr double pi = 3.14159265358979323846;
  // Standard GHZ at delta = pi/4, angles pi/2, phi = 2 pi.
  const DensityMatrix g =
      ghz_class_state(pi / 4, pi / 2, pi / 2, pi / 2, 2 * pi);
  CVec ghz = CVec::Zero(8);
  ghz(0) = ghz(7) = 1.0 / std::sqrt(2.0);
  CHECK((g.rho - CMat(ghz * ghz.adjoint())).norm() < 1e-12);

  bool warned = false;
  ghz_class_state(0.3, 0.8, 0.9, 1.0, 1.5, &warned);
  CHECK(!warned);
  ghz_class_state(1.2, 0.8, 0.9, 1.0, 1.5, &warned);  // delta out of range
  CHECK(warned);

  const DensityMatrix p =
      ghz_class_state(pi / 6, pi / 3, pi / 3, pi / 3, pi / 5);
  CHECK(purity(p) == doctest::Approx(1.0).epsilon(1e-12));
  // All three marginal correlation matrices are invertible there.
  for (auto pair : {std::pair<int, int>{1, 0}, {2, 1}, {0, 2}}) {
    const double det = corr_matrix(marginal(p, pair)).s.determinant();
    CHECK(std::abs(det) > 1e-6);
  }
}

TEST_CASE("w_class_state") {
  const double a = 1.0 / std::sqrt(3.0);
  const DensityMatrix w = w_class_state(0.0, a, a, a);
  CHECK(purity(w) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(w.rho(1, 2) - Complex(1.0 / 3.0)) < 1e-12);

  const DensityMatrix w2 = w_class_state(0.2, 0.5, 0.6, 0.55);
  CHECK(std::abs(w2.rho.trace() - Complex(1.0)) < 1e-12);

  CHECK_THROWS_AS(w_class_state(0.1, 0.0, 0.5, 0.5), Error);
}

TEST_CASE("mix") {
  const DensityMatrix bell = catalog("bell_psi_minus");
  const DensityMatrix same = mix({{1.0, bell}});
  CHECK((same.rho - bell.rho).norm() < 1e-15);

  CHECK_THROWS_AS(mix({{0.7, bell}}), Error);  // weights must sum to 1
  const DensityMatrix w3 = catalog("singlet_mixture_3q");
  CHECK_THROWS_AS(mix({{0.5, bell}, {0.5, w3}}), Error);  // dimensions

  // The singlet mixture built by hand must agree with the catalog entry.
  CVec psi = CVec::Zero(4);
  psi(1) = 1.0 / std::sqrt(2.0);
  psi(2) = -1.0 / std::sqrt(2.0);
  const CMat p = psi * psi.adjoint();
  CMat byhand = embed_pair(p, {0, 1}, 3) + embed_pair(p, {1, 2}, 3) +
                embed_pair(p, {0, 2}, 3);
  byhand /= 6.0;
  CHECK((w3.rho - byhand).norm() < 1e-15);

  // 1/2 GHZ' + 1/2 W with GHZ' = sqrt(1/3)|000> + sqrt(2/3)|111>.
  CVec ghzp = CVec::Zero(8);
  ghzp(0) = std::sqrt(1.0 / 3.0);
  ghzp(7) = std::sqrt(2.0 / 3.0);
  const DensityMatrix mixture = mix(
      {{0.5, pure_state(ghzp)}, {0.5, w_class_state(0.0, 1.0, 1.0, 1.0)}});
  CHECK((mixture.rho - catalog("ghz_w_mixture_3q").rho).norm() < 1e-14);
}

TEST_CASE("catalog") {
  const DensityMatrix psi_minus = catalog("bell_psi_minus");
  CMat want = CMat::Zero(4, 4);
  want(1, 1) = want(2, 2) = 0.5;
  want(1, 2) = want(2, 1) = -0.5;
  CHECK((psi_minus.rho - want).norm() < 1e-15);

  // p = 0 endpoint of the rank-4 family is the pure flipped-W projector.
  const double a = 1.0 / std::sqrt(3.0);
  const DensityMatrix wbar =
      catalog("rank4_family", {{"p", 0.0}, {"x", a}, {"y", a}, {"z", a}});
  CHECK(purity(wbar) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(wbar.rho(6, 6) - Complex(1.0 / 3.0)) < 1e-12);  // |110>

  const DensityMatrix r3 = catalog(
      "rank3_family",
      {{"p", 0.4}, {"x", 0.5}, {"y", 0.4}, {"z", 0.3}, {"w", std::sqrt(0.5)}});
  CHECK(std::abs(r3.rho.trace() - Complex(1.0)) < 1e-12);

  CHECK_THROWS_AS(catalog("no_such_state"), Error);
  CHECK_THROWS_AS(catalog("rank3_family", {{"p", 0.4}}), Error);
}

TEST_CASE("apply_local") {
  const DensityMatrix bell = catalog("bell_phi_plus");
  std::vector<LocalOp> ids(2);
  const DensityMatrix same = apply_local(bell, ids, true);
  CHECK((same.rho - bell.rho).norm() < 1e-14);

  // The off-diagonal filter turns alpha|00> + beta|11> into a singlet.
  const double alpha = 0.6, beta = 0.8;
  CVec psi = CVec::Zero(4);
  psi(0) = alpha;
  psi(3) = beta;
  const DensityMatrix dm = pure_state(psi);
  Mat2c a;
  a << 0.0, -std::sqrt(alpha / beta), std::sqrt(beta / alpha), 0.0;
  double weight = 0.0;
  const DensityMatrix converted =
      apply_local(dm, {make_unimodular(a), LocalOp{}}, true, &weight);
  CHECK(weight == doctest::Approx(2.0 * alpha * beta).epsilon(1e-12));
  CHECK((converted.rho - catalog("bell_psi_minus").rho).norm() < 1e-12);

  // Unimodular operations on the two qubits of a link preserve the
  // Wootters combination of the unnormalized state.
  std::mt19937_64 rng(4);
  for (int i = 0; i < 10; ++i) {
    const DensityMatrix r = random_density(rng, 2);
    const double c0 = concurrence_wootters(r);
    const DensityMatrix moved =
        apply_local(r, {random_unimodular(rng), random_unimodular(rng)}, false);
    CHECK(concurrence_wootters(moved) == doctest::Approx(c0).epsilon(1e-9));
  }

  Mat2c zero = Mat2c::Zero();
  CHECK_THROWS_AS(apply_local(bell, {LocalOp{zero, false}, LocalOp{}}, true),
                  Error);
}

TEST_CASE("marginal order swap") {
  std::mt19937_64 rng(5);
  const DensityMatrix dm = random_density(rng, 3);
  const DensityMatrix ab = marginal(dm, {0, 1});
  const DensityMatrix ba = marginal(dm, {1, 0});
  for (int i1 = 0; i1 < 2; ++i1)
    for (int j1 = 0; j1 < 2; ++j1)
      for (int i2 = 0; i2 < 2; ++i2)
        for (int j2 = 0; j2 < 2; ++j2)
          CHECK(std::abs(ab.rho(2 * i1 + i2, 2 * j1 + j2) -
                         ba.rho(2 * i2 + i1, 2 * j2 + j1)) < 1e-14);
}

TEST_CASE("state json round trip") {
  std::mt19937_64 rng(6);
  const DensityMatrix dm = random_density(rng, 3);
  const std::string path = "test_state_tmp.json";
  save_state(dm, path);
  const DensityMatrix back = load_state(path);
  CHECK(back.n_qubits == 3);
  CHECK((back.rho - dm.rho).norm() < 1e-15);
  std::remove(path.c_str());
}

TEST_CASE("catalog spec files") {
  const std::string path = "test_catalog_tmp.json";
  {
    std::ofstream out(path);
    out << R"({"catalog": "rank4_family",)"
        << R"( "params": {"p": 0.3, "x": 0.7, "y": 0.5, "z": 0.4}})";
  }
  const DensityMatrix dm = load_state(path);
  const DensityMatrix want = catalog(
      "rank4_family", {{"p", 0.3}, {"x", 0.7}, {"y", 0.5}, {"z", 0.4}});
  CHECK((dm.rho - want.rho).norm() < 1e-15);
  std::remove(path.c_str());
}

TEST_CASE("validate rejects broken inputs") {
  DensityMatrix bad{2, CMat::Identity(4, 4)};  // trace 4
  CHECK_THROWS_AS(validate(bad), Error);
  CMat nh = CMat::Identity(4, 4) / 4.0;
  nh(0, 1) = 0.3;
  CHECK_THROWS_AS(validate(DensityMatrix{2, nh}), Error);
  CMat neg = CMat::Zero(4, 4);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(validate(DensityMatrix{2, neg}), Error);
}
