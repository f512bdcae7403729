#pragma once

#include <optional>
#include <string>
#include <vector>

#include "loopgauge/correlation.hpp"

namespace loopgauge {

/// Record of one sign correction absorbed during canonicalization:
/// a pi rotation (two spatial column flips) on side 'V' or 'W'.
struct SignatureCorrection {
  char side = 'W';
  int axis_i = 0;
  int axis_j = 0;
};

/// S = V diag(sigma) W^T with V, W in SO+(1,3), sigma in canonical form:
/// s0 > 0, spatial values sorted by magnitude (descending) and sharing the
/// sign of det S.
struct LorentzSvd {
  LorentzMatrix v;
  LorentzMatrix w;
  Vec4 sigma = Vec4::Zero();
  std::vector<SignatureCorrection> corrections;
  std::string method;
  double residual = 0.0;
};

enum class Rank3Region { I, II, III, boundary, unset };

struct LinkClass {
  int rank = 0;
  Rank3Region region = Rank3Region::unset;
  int det_sign = 0;
  bool degenerate = false;
};

/// Per-link amplitudes of the rank-3 family after mapping to the link at
/// hand: u0,u1 sit on the diagonal pair, v0,v1 on the off pair.
struct Rank3LinkParams {
  double p = 0.0;
  double u0 = 0.0, u1 = 0.0;
  double v0 = 0.0, v1 = 0.0;
};

/// Matrix rank of S from ordinary singular values (|s_i|/s_max < 1e-10
/// counts as zero). Throws typed link errors for rank < 4 when `demand_full`.
int corr_rank(const CorrelationMatrix& s, bool demand_full = false);

/// Eigenproblem route: W from S^T eta S eta, V paired through S.
LorentzSvd lorentz_svd_eigen(const CorrelationMatrix& s);

/// Rotate-and-boost depolarization route (looser tolerance).
LorentzSvd lorentz_svd_iterative(const CorrelationMatrix& s,
                                 int max_iterations = 100000);

/// Enforces the canonical conventions on a raw decomposition.
/// When s_reference is given the stored residual is measured against it,
/// otherwise against V diag(sigma) W^T of the inputs.
LorentzSvd canonicalize(Mat4 v, Vec4 sigma, Mat4 w, const std::string& method,
                        const Mat4* s_reference = nullptr);

LinkClass classify_link(const CorrelationMatrix& s,
                        const std::optional<Rank3LinkParams>& hint = {});

const char* region_name(Rank3Region r);

nlohmann::json lsvd_to_json(const LorentzSvd& d);

}  // namespace loopgauge
