#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "loopgauge/qlinalg.hpp"

#include <json.hpp>

namespace loopgauge {

/// n-qubit density matrix. Qubit 0 is the leftmost tensor factor and the
/// most significant bit of basis labels.
struct DensityMatrix {
  int n_qubits = 0;
  CMat rho;
};

/// Ensures Hermiticity (1e-12), unit trace (1e-12) and positivity
/// (smallest eigenvalue >= -1e-10). Throws on violation.
void validate(const DensityMatrix& dm);

double purity(const DensityMatrix& dm);

/// A single-qubit operation; unimodular ones are checked for det = 1.
struct LocalOp {
  Mat2c m = Mat2c::Identity();
  bool unimodular = true;
};

LocalOp make_unimodular(const Mat2c& m);

DensityMatrix pure_state(const CVec& amplitudes);

/// GHZ-class pure state c_d|000> + s_d e^{i phi}|f_a f_b f_c| with
/// |f_x> = cos(angle)|0> + sin(angle)|1>. Angle-range violations set
/// *range_warning instead of failing.
DensityMatrix ghz_class_state(double delta, double alpha, double beta,
                              double gamma, double phi,
                              bool* range_warning = nullptr);

/// W-class pure state w|000> + x|001> + y|010> + z|100| (normalized).
/// x, y, z must be strictly positive.
DensityMatrix w_class_state(double w, double x, double y, double z);

DensityMatrix mix(const std::vector<std::pair<double, DensityMatrix>>& parts);

/// Named states used throughout: bell_psi_minus, bell_psi_plus,
/// bell_phi_minus, bell_phi_plus, werner_third, singlet_mixture_3q,
/// ghz_w_mixture_3q, rank3_family (p,x,y,z,w), rank4_family (p,x,y,z[,w]).
DensityMatrix catalog(const std::string& name,
                      const std::map<std::string, double>& params = {});

/// Conjugates by the per-qubit operations (one entry per qubit). When
/// renormalize is set the result is divided by its trace, which is written
/// to *weight when given.
DensityMatrix apply_local(const DensityMatrix& dm,
                          const std::vector<LocalOp>& ops, bool renormalize,
                          double* weight = nullptr);

/// Two-qubit marginal; pair order fixes the tensor factor order.
DensityMatrix marginal(const DensityMatrix& dm, std::pair<int, int> pair);

/// Embeds a two-qubit operator on qubits `pair` of an n-qubit register,
/// identity elsewhere.
CMat embed_pair(const CMat& op4, std::pair<int, int> pair, int n_qubits);

void to_json(nlohmann::json& j, const DensityMatrix& dm);
void from_json(const nlohmann::json& j, DensityMatrix& dm);

DensityMatrix load_state(const std::string& path);
void save_state(const DensityMatrix& dm, const std::string& path);

}  // namespace loopgauge
