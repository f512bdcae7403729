#pragma once

#include "loopgauge/states.hpp"

namespace loopgauge {

/// Hilbert-Schmidt representation of a two-qubit link:
/// S_ij = tr[(pauli_i (x) pauli_j) rho] / 2. S00 = 1/2 for normalized rho.
struct CorrelationMatrix {
  Mat4 s = Mat4::Zero();
  int qubit_a = 0;
  int qubit_b = 1;
};

/// Element of SO+(1,3) (checked where it matters, not on construction).
struct LorentzMatrix {
  Mat4 m = Mat4::Identity();
};

struct LorentzCheck {
  double metric_defect = 0.0;  // ||U eta U^T - eta||_F
  double det = 0.0;
  double time_time = 0.0;      // U(0,0)
  bool metric_ok = false;
  bool proper = false;
  bool orthochronous = false;
  bool proper_orthochronous() const {
    return metric_ok && proper && orthochronous;
  }
};

/// diag{1,-1,-1,-1}
const Mat4& minkowski_eta();

/// Unitary change of basis between the magic (Bell) basis and the
/// computational product basis; fixes the axis order 0..3 everywhere.
const Mat4c& magic_basis();

CorrelationMatrix corr_matrix(const DensityMatrix& rho_ab);

/// Inverse Hilbert-Schmidt map. Checks positivity; when renormalize is set
/// the result is scaled to unit trace (for inputs with S00 != 1/2).
DensityMatrix density_from_corr(const CorrelationMatrix& s,
                                bool renormalize = false);

/// Image of a unimodular 2x2 operation in SO+(1,3). Computed through two
/// independent formulas (Pauli traces and the magic-basis conjugation) that
/// must agree to 1e-12 relative.
LorentzMatrix sl2_to_lorentz(const LocalOp& a);

/// Preimage of a proper orthochronous Lorentz matrix under the double
/// cover, canonicalized so the first nonzero entry (row-major) has
/// nonnegative real part, then nonnegative imaginary part.
LocalOp lorentz_to_sl2(const LorentzMatrix& u);

LorentzCheck is_lorentz(const Mat4& u, double tolerance = 1e-10);

/// Throws unless u is proper orthochronous at the given tolerance.
void require_lorentz(const Mat4& u, double tolerance = 1e-9);

/// Wootters concurrence of a two-qubit state.
double concurrence_wootters(const DensityMatrix& rho);

/// max{0, -(s0+s1+s2+s3)} for a canonical-signature sigma.
double concurrence_from_sigma(const Vec4& sigma);

nlohmann::json corr_to_json(const CorrelationMatrix& s);
CorrelationMatrix corr_from_json(const nlohmann::json& j);

}  // namespace loopgauge
