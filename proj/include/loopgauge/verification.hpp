#pragma once

#include <array>
#include <random>

#include "loopgauge/holonomy.hpp"

namespace loopgauge {

/// Closed forms for one link of the rank-3 family (GHZ + psi mixture).
struct Rank3LinkForms {
  Rank3LinkParams params;   // amplitudes mapped onto this link
  Vec4 sigma_raw = Vec4::Zero();        // before signature correction
  Vec4 sigma_canonical = Vec4::Zero();  // sorted, homogeneous signs
  Rank3Region region = Rank3Region::unset;
  double concurrence = 0.0;
  int det_sign = 0;
};

struct Rank3Forms {
  double p = 0.0;
  double x = 0.0, y = 0.0, z = 0.0, w = 0.0;  // normalized amplitudes
  // Loop link order (b,a), (c,b), (a,c) for qubits a,b,c = 0,1,2.
  std::array<Rank3LinkForms, 3> links;
  bool has_xi_prediction = false;
  double xi_predicted = 0.0;
  std::string combo;  // realized region triple, e.g. "I,II,III"
};

Rank3Forms rank3_closed_form(double p, double x, double y, double z, double w);

/// Closed forms for the rank-4 family p|W><W| + (1-p)|Wbar><Wbar| (w = 0).
struct Rank4Forms {
  double p = 0.0;
  double x = 0.0, y = 0.0, z = 0.0;  // normalized
  std::array<double, 3> beta = {0, 0, 0};  // links ba, cb, ac
  std::array<double, 3> phi = {0, 0, 0};   // rapidities
  std::array<int, 3> det_sign = {0, 0, 0};
  std::array<double, 3> locus = {0, 0, 0};  // zero at the critical point
  int negative_det_count = 0;
  double rapidity_sum = 0.0;
  double xi = 0.0;  // cosh^2 (even count) or sinh^2 (odd count) of sum/2
};

Rank4Forms rank4_closed_form(double p, double x, double y, double z);

/// The three local operations of the pure-state proof; applying them as
/// gauges diagonalizes links (b,a) and (c,b) and leaves (a,c) diagonal
/// with signature (+,+,-,+).
std::array<LocalOp, 3> ghz_proof_gauges(double delta, double alpha,
                                        double beta, double gamma, double phi);

/// W-state proof gauges with the finite quasi-distillation parameter n
/// standing in for the projective limit.
std::array<LocalOp, 3> w_proof_gauges(double w, double x, double y, double z,
                                      double n);

// Seeded generators shared by the verification catalog and the tests.
// max_condition bounds the singular-value ratio (boost strength).
LocalOp random_unimodular(std::mt19937_64& rng, double max_condition = 20.0);
DensityMatrix random_density(std::mt19937_64& rng, int n_qubits);
DensityMatrix random_ghz_class(std::mt19937_64& rng);
DensityMatrix random_w_class(std::mt19937_64& rng, bool force_w_zero);

struct ClaimResult {
  std::string id;
  std::string expected;
  std::string computed;
  double tolerance = 0.0;
  bool pass = false;
  double runtime_seconds = 0.0;
  std::string detail;
  nlohmann::json grid;  // evaluated parameter points, for reproducibility
};

/// Runs the named claims (all when the selection is empty). Deterministic
/// for a fixed seed.
std::vector<ClaimResult> verify_catalog(
    const std::vector<std::string>& selection = {}, uint64_t seed = 7);

std::vector<std::string> claim_ids();

nlohmann::json claims_to_json(const std::vector<ClaimResult>& results);

}  // namespace loopgauge
