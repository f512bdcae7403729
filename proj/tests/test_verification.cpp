#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "loopgauge/verification.hpp"

using namespace loopgauge;

TEST_CASE("rank3 closed forms") {
  const double p = 0.3, x = 0.7, y = 0.45, z = 0.4, w = 0.65;
  const Rank3Forms f = rank3_closed_form(p, x, y, z, w);
  const double nrm = std::sqrt(x * x + y * y + z * z + w * w);
  CHECK(f.x == doctest::Approx(x / nrm));

  // Link (b,a): diagonal pair (x, w), off pair (y, z).
  const auto eps = [&](double q) {
    return std::sqrt(p + 2.0 * (1.0 - p) * q * q);
  };
  const double xe = x / nrm, ye = y / nrm, ze = z / nrm, we = w / nrm;
  const Vec4& raw = f.links[0].sigma_raw;
  CHECK(raw(0) == doctest::Approx(0.5 * eps(we) * eps(xe) +
                                  (1 - p) * ye * ze));
  CHECK(raw(1) == doctest::Approx((1 - p) * (ye * ze + we * xe)));
  CHECK(raw(2) == doctest::Approx((1 - p) * (ye * ze - we * xe)));
  CHECK(raw(3) == doctest::Approx(0.5 * eps(we) * eps(xe) -
                                  (1 - p) * ye * ze));

  // Ordering invariant observed by the paper: s0 >= s1 >= 0.
  CHECK(raw(0) >= raw(1));
  CHECK(raw(1) >= 0.0);

  // Region I concurrence is -2 s2.
  const Rank3Forms r1 = rank3_closed_form(0.3, 0.8, 0.3, 0.25, 0.9);
  REQUIRE(r1.links[0].region == Rank3Region::I);
  CHECK(r1.links[0].concurrence ==
        doctest::Approx(-2.0 * r1.links[0].sigma_raw(2)));
  CHECK(r1.links[0].concurrence > 0.0);
}

TEST_CASE("rank3 twist prediction table") {
  // Odd region-I count: pi rotation.
  const Rank3Forms odd = rank3_closed_form(0.3, 0.8, 0.3, 0.25, 0.9);
  int n_one = 0;
  for (const auto& l : odd.links) n_one += l.region == Rank3Region::I;
  if (n_one % 2 == 1) CHECK(odd.xi_predicted == 0.0);

  // All links separable: trivial holonomy.
  const Rank3Forms all2 = rank3_closed_form(0.55, 0.4, 0.62, 0.58, 0.05);
  bool all_two = true;
  for (const auto& l : all2.links) all_two &= l.region == Rank3Region::II;
  if (all_two) {
    CHECK(all2.has_xi_prediction);
    CHECK(all2.xi_predicted == 1.0);
  }

  // Two region-I links: the remaining link's off pair fixes xi.
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  int found = 0;
  for (int i = 0; i < 400 && found < 5; ++i) {
    const Rank3Forms f = rank3_closed_form(0.1 + 0.8 * ud(rng),
                                           0.15 + 0.85 * ud(rng),
                                           0.15 + 0.85 * ud(rng),
                                           0.15 + 0.85 * ud(rng),
                                           0.15 + 0.85 * ud(rng));
    int ones = 0;
    const Rank3LinkForms* rest = nullptr;
    for (const auto& l : f.links) {
      if (l.region == Rank3Region::I)
        ++ones;
      else
        rest = &l;
    }
    if (ones != 2 || !f.has_xi_prediction) continue;
    ++found;
    const auto eps = [&](double q) {
      return std::sqrt(f.p + 2.0 * (1.0 - f.p) * q * q);
    };
    const double v0 = rest->params.v0, v1 = rest->params.v1;
    const double sgn = rest->region == Rank3Region::III ? -1.0 : 1.0;
    const double num = v0 * eps(v1) + sgn * v1 * eps(v0);
    CHECK(f.xi_predicted ==
          doctest::Approx(num * num /
                          (4 * v0 * v1 * eps(v0) * eps(v1))));
    if (rest->region == Rank3Region::III) CHECK(f.xi_predicted <= 1.0);
    if (rest->region == Rank3Region::II) CHECK(f.xi_predicted >= 1.0);
  }
  CHECK(found > 0);
}

TEST_CASE("rank4 closed forms") {
  const Rank4Forms f = rank4_closed_form(0.3, 0.8, 0.45, 0.3);
  const double nrm = std::sqrt(0.8 * 0.8 + 0.45 * 0.45 + 0.3 * 0.3);
  const double x = 0.8 / nrm, y = 0.45 / nrm, z = 0.3 / nrm;
  CHECK(f.beta[0] == doctest::Approx((1 - 0.6) * (y * y - z * z) /
                                     (y * y + z * z)));
  CHECK(f.beta[1] == doctest::Approx((1 - 0.6) * (x * x - y * y) /
                                     (x * x + y * y)));
  CHECK(f.beta[2] == doctest::Approx((1 - 0.6) * (z * z - x * x) /
                                     (z * z + x * x)));
  for (int k = 0; k < 3; ++k)
    CHECK(f.phi[k] == doctest::Approx(0.5 * std::log((1 + f.beta[k]) /
                                                     (1 - f.beta[k]))));

  // beta vanishes at p = 1/2 and the rapidity sum telescopes at p in {0,1}.
  const Rank4Forms half = rank4_closed_form(0.5, 0.8, 0.45, 0.3);
  for (double b : half.beta) CHECK(std::abs(b) < 1e-15);
  const Rank4Forms zero = rank4_closed_form(0.0, 0.8, 0.45, 0.3);
  CHECK(std::abs(zero.rapidity_sum) < 1e-14);

  // Equal amplitudes cancel pairwise.
  const Rank4Forms eq = rank4_closed_form(0.3, 0.7, 0.7, 0.4);
  CHECK(std::abs(eq.rapidity_sum) < 1e-14);
}

TEST_CASE("ghz proof gauges are unimodular and handle the corner") {
  const auto g = ghz_proof_gauges(0.55, 0.8, 1.0, 1.2, 2.0);
  for (const auto& op : g)
    CHECK(std::abs(op.m.determinant() - Complex(1.0)) < 1e-12);

  // alpha = pi/2 is a removable singularity: the corner entry becomes 0.
  constexpr double pi = 3.14159265358979323846;
  const auto g2 = ghz_proof_gauges(0.55, pi / 2, 1.0, 1.2, 2.0);
  CHECK(std::abs(g2[0].m(1, 1)) < 1e-12);
  CHECK(g2[0].m.allFinite());

  CHECK_THROWS_AS(ghz_proof_gauges(0.55, 1e-15, 1.0, 1.2, 2.0), Error);
}

TEST_CASE("w proof gauges") {
  const auto g = w_proof_gauges(0.0, 0.6, 0.55, 0.58, 10.0);
  for (const auto& op : g)
    CHECK(std::abs(op.m.determinant() - Complex(1.0)) < 1e-12);
  CHECK_THROWS_AS(w_proof_gauges(0.0, 0.0, 0.5, 0.5, 10.0), Error);
}

TEST_CASE("generators are deterministic and valid") {
  std::mt19937_64 a(99), b(99);
  const DensityMatrix da = random_density(a, 3);
  const DensityMatrix db = random_density(b, 3);
  CHECK((da.rho - db.rho).norm() == 0.0);
  validate(da);

  const DensityMatrix ghz = random_ghz_class(a);
  validate(ghz);
  CHECK(purity(ghz) == doctest::Approx(1.0).epsilon(1e-12));
  const DensityMatrix w = random_w_class(a, true);
  validate(w);
  CHECK(std::abs(w.rho(0, 0)) < 1e-14);  // w amplitude forced to zero

  const LocalOp op = random_unimodular(a);
  CHECK(std::abs(op.m.determinant() - Complex(1.0)) < 1e-12);
}

TEST_CASE("verify_catalog runs selections") {
  const auto results = verify_catalog(
      {"werner_sigma", "untwisted_mixtures", "ghz_proof_gauges"}, 7);
  REQUIRE(results.size() == 3);
  for (const auto& r : results) {
    CHECK(r.pass);
    CHECK(r.runtime_seconds >= 0.0);
    CHECK(!r.expected.empty());
  }
  CHECK_THROWS_AS(verify_catalog({"bogus_claim"}, 7), Error);

  const auto ids = claim_ids();
  for (const char* required :
       {"two_qubit_untwisted", "pure3_pi_rotation", "gauge_invariance",
        "untwisted_mixtures", "rank3_family_grid", "rank4_family_grid",
        "concurrence_consistency", "homomorphism_group_law",
        "decomposition_cross_validation", "untwist_protocol"})
    CHECK(std::find(ids.begin(), ids.end(), required) != ids.end());

  const nlohmann::json j = claims_to_json(results);
  CHECK(j.size() == 3);
  CHECK(j.at(0).contains("id"));
  CHECK(j.at(0).contains("pass"));
}
