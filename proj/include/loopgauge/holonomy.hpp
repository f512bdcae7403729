#pragma once

#include "loopgauge/lsvd.hpp"

namespace loopgauge {

enum class Method { eigen, iterative, sqrt };

Method method_from_string(const std::string& name);
const char* method_name(Method m);

/// Parallel transporter of a link: the Lorentz factor of the left polar
/// decomposition S = Lambda * S_sym. Lambda^{-1} S is symmetric.
struct Transporter {
  LorentzMatrix lambda;
  int qubit_a = 0;
  int qubit_b = 1;
  char side = 'L';
  Method method = Method::sqrt;
  double symmetry_defect = 0.0;  // ||Lambda^{-1} S - (Lambda^{-1} S)^T||
};

/// Transporter from the eigenproblem decomposition.
Transporter transporter_eigen(const CorrelationMatrix& s);

/// Transporter via the principal square root of S^T eta S eta. Works on
/// defective links (quasi-distillation states) where the eigenproblem
/// route has no complete eigenbasis.
Transporter transporter_sqrt(const CorrelationMatrix& s);

Transporter transporter(const CorrelationMatrix& s, Method method);

/// Lorentz singular values recovered from the route used by `method`
/// (canonical order and signs).
Vec4 sigma_of_link(const CorrelationMatrix& s, Method method);

/// Symmetrized link: side 'L' gives Lambda^{-1} S (qubit-a operation
/// absorbed), side 'R' gives S Lambda'^{-1}. Output is exactly symmetric.
CorrelationMatrix symmetrized(const CorrelationMatrix& s, char side,
                              Method method = Method::sqrt);

struct LinkReport {
  int qubit_a = 0;
  int qubit_b = 0;
  Mat4 lambda = Mat4::Identity();
  Vec4 sigma = Vec4::Zero();
  double symmetry_defect = 0.0;
};

struct TwistReport {
  std::vector<int> loop;
  double xi = 0.0;
  double xi_reversed = 0.0;
  Mat4 holonomy = Mat4::Identity();
  Vec4c eigenvalues = Vec4c::Zero();
  std::vector<LinkReport> links;
  Method method = Method::sqrt;
  bool spectrum_structure_ok = true;  // {lambda, 1/lambda} + conjugate pairing
};

/// Wilson-loop twist of the ordered qubit loop: one quarter of the trace of
/// the product of left transporters around it. Loop entries must be
/// distinct qubits of the state; adjacency (cyclic) defines the links.
TwistReport twist(const DensityMatrix& state, const std::vector<int>& loop,
                  Method method = Method::sqrt);

/// Correlation matrices of the loop's links, in product order: entry k is
/// S(q_{k+1}, q_k) with labels attached.
std::vector<CorrelationMatrix> loop_links(const DensityMatrix& state,
                                          const std::vector<int>& loop);

/// Twist evaluated directly on a link configuration (entry k chains into
/// entry k+1). This is the object the gauge group acts on.
TwistReport twist_links(const std::vector<CorrelationMatrix>& links,
                        Method method = Method::sqrt);

/// Gauge action on precomputed links: S(a,b) -> U_a S(a,b) U_b^T.
std::vector<CorrelationMatrix> gauge_transform(
    const std::vector<CorrelationMatrix>& links,
    const std::vector<LorentzMatrix>& per_qubit);

/// Gauge action on a state by per-qubit unimodular operations
/// (renormalized).
DensityMatrix gauge_transform(const DensityMatrix& state,
                              const std::vector<LocalOp>& per_qubit);

struct ProtocolStep {
  int qubit = 0;
  Mat2c op = Mat2c::Identity();
  double weight = 0.0;            // success probability of the step
  double link_symmetry_defect = 0.0;
};

struct ProtocolTrace {
  std::vector<ProtocolStep> steps;
  Mat4 final_mismatch = Mat4::Identity();  // transporter of the closing link
  Vec4c mismatch_eigenvalues = Vec4c::Zero();
  TwistReport reference;                   // twist of the untouched state
  double spectrum_match_error = 0.0;
};

/// Simulates the sequential untwisting protocol around the loop: each
/// qubit in turn receives the operation that symmetrizes its incoming
/// link (rescaled to a valid Kraus operator). The closing link's
/// transporter is the loop holonomy.
ProtocolTrace untwist_protocol(const DensityMatrix& state,
                               const std::vector<int>& loop,
                               Method method = Method::sqrt);

/// Greedy multiset matching of two complex spectra; returns the largest
/// pairing distance.
double spectra_distance(const Vec4c& a, const Vec4c& b);

/// True when the multiset is closed under inversion and conjugation at tol.
bool lorentz_spectrum_ok(const Vec4c& values, double tol = 1e-8);

nlohmann::json twist_to_json(const TwistReport& r);

}  // namespace loopgauge
