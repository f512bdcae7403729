#include "loopgauge/lsvd.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace loopgauge {

namespace {

constexpr double kRankTol = 1e-10;
constexpr double kClusterTol = 1e-8;
constexpr double kGramTol = 1e-6;

int sign_of(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

struct Cluster {
  double lambda = 0.0;                       // shared eigenvalue (real)
  Eigen::Matrix<double, 4, Eigen::Dynamic> basis;  // eta-orthonormal columns
  std::vector<int> eta_signs;                // +1 timelike, -1 spacelike
};

/// Groups eigenvalues that coincide within tol (complex distance) and
/// produces an eta-orthonormal eigenbasis per group. Throws DefectiveLink
/// when no such basis exists.
std::vector<Cluster> eta_eigenbasis(const Mat4& m, const EigenSystem4& es,
                                    int qa, int qb) {
  const Mat4& eta = minkowski_eta();
  const double scale = std::max(1.0, es.values.cwiseAbs().maxCoeff());
  const double tol = kClusterTol * scale;

  // Union adjacent eigenvalues in the complex plane.
  std::vector<int> group(4);
  std::iota(group.begin(), group.end(), 0);
  auto find = [&](int i) {
    while (group[i] != i) i = group[i] = group[group[i]];
    return i;
  };
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (std::abs(es.values(i) - es.values(j)) <= tol)
        group[find(i)] = find(j);

  std::vector<Cluster> clusters;
  std::vector<bool> done(4, false);
  for (int i = 0; i < 4; ++i) {
    const int root = find(i);
    if (done[root]) continue;
    done[root] = true;
    std::vector<int> members;
    for (int j = 0; j < 4; ++j)
      if (find(j) == root) members.push_back(j);

    Complex mean = 0.0;
    for (int j : members) mean += es.values(j);
    mean /= static_cast<double>(members.size());
    if (std::abs(mean.imag()) > tol)
      throw DefectiveLink(qa, qb, "complex eigenvalue in S^T eta S eta");

    // Real span of the cluster's invariant subspace.
    Eigen::Matrix<double, 4, Eigen::Dynamic> cand(4, 2 * members.size());
    int nc = 0;
    for (int j : members) {
      Vec4c v = es.vectors.col(j);
      if (v.real().norm() > 1e-14) cand.col(nc++) = v.real();
      if (v.imag().norm() > 1e-14) cand.col(nc++) = v.imag();
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(cand.leftCols(nc),
                                          Eigen::ComputeThinU);
    const int want = static_cast<int>(members.size());
    if (svd.singularValues()(want - 1) <
        kClusterTol * svd.singularValues()(0))
      throw DefectiveLink(qa, qb, "eigenvectors do not span the eigenspace");
    Eigen::MatrixXd basis = svd.matrixU().leftCols(want);

    // Re-express the subspace through coordinate-axis projections so that
    // axis-aligned eigenspaces produce axis-aligned columns (the basis
    // within a degenerate block is free; this fixes it deterministically).
    {
      const Eigen::Matrix4d proj = basis * basis.transpose();
      std::array<int, 4> order = {0, 1, 2, 3};
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return proj(a, a) > proj(b, b);
      });
      Eigen::MatrixXd sel(4, want);
      int filled = 0;
      for (int j : order) {
        if (filled == want) break;
        Vec4 c = proj.col(j);
        for (int k = 0; k < filled; ++k) c -= sel.col(k).dot(c) * sel.col(k);
        if (c.norm() > 0.3) sel.col(filled++) = c / c.norm();
      }
      if (filled == want) basis = sel;
    }

    // Minkowski-orthonormalize via the Gram matrix of the block.
    Eigen::MatrixXd gram = basis.transpose() * eta * basis;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gs(gram);
    Cluster cl;
    cl.lambda = mean.real();
    cl.basis.resize(4, want);
    for (int c = 0; c < want; ++c) {
      const double g = gs.eigenvalues()(c);
      if (std::abs(g) < kGramTol)
        throw DefectiveLink(qa, qb,
                            "null direction: no Minkowski-orthonormal "
                            "eigenbasis at working precision");
      cl.basis.col(c) = basis * gs.eigenvectors().col(c) / std::sqrt(std::abs(g));
      cl.eta_signs.push_back(sign_of(g));
    }
    // Residual check: columns must still be eigenvectors of m.
    for (int c = 0; c < want; ++c) {
      const Vec4 b = cl.basis.col(c);
      if ((m * b - cl.lambda * b).norm() > 1e-5 * scale * b.norm())
        throw DefectiveLink(qa, qb, "eigenvector residual too large");
    }
    clusters.push_back(std::move(cl));
  }
  return clusters;
}

Mat4 so11_boost(double phi) {
  Mat4 b = Mat4::Identity();
  b(0, 0) = b(3, 3) = std::cosh(phi);
  b(0, 3) = b(3, 0) = std::sinh(phi);
  return b;
}

Mat4 spatial_rotation(const Eigen::Matrix3d& r) {
  Mat4 out = Mat4::Identity();
  out.block<3, 3>(1, 1) = r;
  return out;
}

/// Rotation taking unit vector v to +z (Rodrigues).
Eigen::Matrix3d rotation_to_z(const Vec3& v) {
  const Vec3 z(0.0, 0.0, 1.0);
  const double c = v.dot(z);
  if (c > 1.0 - 1e-14) return Eigen::Matrix3d::Identity();
  if (c < -1.0 + 1e-14) {
    Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
    r(1, 1) = r(2, 2) = -1.0;  // pi rotation about x
    return r;
  }
  const Vec3 axis = v.cross(z).normalized();
  const double angle = std::acos(std::clamp(c, -1.0, 1.0));
  return Eigen::AngleAxisd(angle, axis).toRotationMatrix();
}

}  // namespace

int corr_rank(const CorrelationMatrix& s, bool demand_full) {
  Eigen::JacobiSVD<Mat4> svd(s.s);
  const double top = svd.singularValues()(0);
  if (top <= 0.0) {
    if (demand_full)
      throw ProductStateLink(s.qubit_a, s.qubit_b, "zero correlation matrix");
    return 0;
  }
  int rank = 0;
  for (int k = 0; k < 4; ++k)
    if (svd.singularValues()(k) > kRankTol * top) ++rank;
  if (demand_full && rank == 1)
    throw ProductStateLink(s.qubit_a, s.qubit_b,
                           "product-state link (rank-1 correlations); no "
                           "parallel transporter exists");
  if (demand_full && rank < 4)
    throw RankDeficientLink(s.qubit_a, s.qubit_b,
                            "correlation matrix has rank " +
                                std::to_string(rank));
  return rank;
}

LorentzSvd canonicalize(Mat4 v, Vec4 sigma, Mat4 w, const std::string& method,
                        const Mat4* s_reference) {
  const Mat4 s_ref =
      s_reference ? *s_reference : Mat4(v * sigma.asDiagonal() * w.transpose());
  std::vector<SignatureCorrection> corrections;

  // Future-pointing time columns.
  if (v(0, 0) < 0.0) {
    v.col(0) *= -1.0;
    sigma(0) *= -1.0;
  }
  if (w(0, 0) < 0.0) {
    w.col(0) *= -1.0;
    sigma(0) *= -1.0;
  }
  if (sigma(0) <= 0.0)
    throw Error(ErrorCode::unphysical_state,
                "canonicalize: leading singular value is not positive");

  // Proper V and W.
  const bool v_improper = v.determinant() < 0.0;
  const bool w_improper = w.determinant() < 0.0;
  if (v_improper && w_improper) {
    v.col(1) *= -1.0;
    w.col(1) *= -1.0;
  } else if (v_improper) {
    v.col(1) *= -1.0;
    sigma(1) *= -1.0;
  } else if (w_improper) {
    w.col(1) *= -1.0;
    sigma(1) *= -1.0;
  }

  // Spatial order: |sigma| descending (stable).
  std::array<int, 3> order = {1, 2, 3};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(sigma(a)) > std::abs(sigma(b));
  });
  {
    Mat4 pv = v, pw = w;
    Vec4 ps = sigma;
    for (int k = 0; k < 3; ++k) {
      v.col(1 + k) = pv.col(order[k]);
      w.col(1 + k) = pw.col(order[k]);
      sigma(1 + k) = ps(order[k]);
    }
  }

  // Homogeneous spatial signs, target sign(det S).
  const int target = sign_of(s_ref.determinant());
  std::vector<int> wrong;
  for (int k = 1; k < 4; ++k)
    if (sigma(k) != 0.0 && sign_of(sigma(k)) != target) wrong.push_back(k);
  if (wrong.size() % 2 != 0)
    throw Error(ErrorCode::internal,
                "canonicalize: parity obstruction in signature correction");
  for (size_t i = 0; i + 1 < wrong.size(); i += 2) {
    w.col(wrong[i]) *= -1.0;
    w.col(wrong[i + 1]) *= -1.0;
    sigma(wrong[i]) *= -1.0;
    sigma(wrong[i + 1]) *= -1.0;
    corrections.push_back({'W', wrong[i], wrong[i + 1]});
  }

  LorentzSvd out;
  out.v = LorentzMatrix{v};
  out.w = LorentzMatrix{w};
  out.sigma = sigma;
  out.corrections = std::move(corrections);
  out.method = method;
  out.residual = (s_ref - v * sigma.asDiagonal() * w.transpose()).norm();
  return out;
}

LorentzSvd lorentz_svd_eigen(const CorrelationMatrix& sc) {
  corr_rank(sc, /*demand_full=*/true);
  const Mat4& s = sc.s;
  const Mat4& eta = minkowski_eta();

  const Mat4 mw = s.transpose() * eta * s * eta;
  const Mat4 mv = s * eta * s.transpose() * eta;
  const EigenSystem4 ew = eig_real4(mw);
  const EigenSystem4 ev = eig_real4(mv);
  if (ew.defect_flag || ev.defect_flag)
    throw DefectiveLink(sc.qubit_a, sc.qubit_b,
                        "defective eigenproblem (eigenvector condition " +
                            std::to_string(ew.vector_condition) +
                            "); use the sqrt route");

  const auto clusters = eta_eigenbasis(mw, ew, sc.qubit_a, sc.qubit_b);

  // Assemble W: the single timelike column first, spatial columns by
  // eigenvalue (descending).
  struct Col {
    double lambda;
    Vec4 w;
    int eta_sign;
  };
  std::vector<Col> cols;
  for (const auto& cl : clusters)
    for (int c = 0; c < cl.basis.cols(); ++c)
      cols.push_back({cl.lambda, cl.basis.col(c), cl.eta_signs[c]});
  int timelike = 0;
  for (const auto& c : cols) timelike += c.eta_sign > 0 ? 1 : 0;
  if (timelike != 1)
    throw DefectiveLink(sc.qubit_a, sc.qubit_b,
                        "eigenbasis signature is not (+,-,-,-)");
  std::stable_sort(cols.begin(), cols.end(), [](const Col& a, const Col& b) {
    if (a.eta_sign != b.eta_sign) return a.eta_sign > b.eta_sign;
    return a.lambda > b.lambda;
  });

  Mat4 w;
  Vec4 sigma;
  const double spatial_sign = s.determinant() > 0.0 ? 1.0 : -1.0;
  for (int k = 0; k < 4; ++k) {
    if (cols[k].lambda < -kClusterTol)
      throw Error(ErrorCode::unphysical_state,
                  "negative eigenvalue of S^T eta S eta");
    w.col(k) = cols[k].w;
    sigma(k) = (k == 0 ? 1.0 : spatial_sign) *
               std::sqrt(std::max(0.0, cols[k].lambda));
  }
  if (sigma(0) <= 0.0 || sigma.tail<3>().cwiseAbs().minCoeff() <
                             kRankTol * sigma(0))
    throw RankDeficientLink(sc.qubit_a, sc.qubit_b,
                            "vanishing Lorentz singular value");

  // V is paired through S: v_k = eta_kk S eta w_k / s_k. This reproduces
  // S = V Sigma W^T identically and lands in the eigenspaces of mv.
  Mat4 v;
  const double scale = std::max(1.0, sigma(0) * sigma(0));
  for (int k = 0; k < 4; ++k) {
    const double ek = k == 0 ? 1.0 : -1.0;
    v.col(k) = ek * (s * eta * w.col(k)) / sigma(k);
    const Vec4 res = mv * v.col(k) - cols[k].lambda * v.col(k);
    if (res.norm() > 1e-5 * scale * v.col(k).norm())
      throw Error(ErrorCode::pairing_failure,
                  "lorentz_svd_eigen: V/W eigenvalue pairing failed");
  }

  LorentzSvd out = canonicalize(v, sigma, w, "eigen", &s);
  try {
    require_lorentz(out.v.m, 1e-7);
    require_lorentz(out.w.m, 1e-7);
    if (out.residual > 1e-8 * std::max(1.0, s.norm()))
      throw Error(ErrorCode::not_lorentz,
                  "reconstruction residual " + std::to_string(out.residual));
  } catch (const Error& e) {
    // A full-rank link whose assembled factors fail the group checks is a
    // near-defective eigenproblem that slipped past the direct detectors.
    throw DefectiveLink(sc.qubit_a, sc.qubit_b,
                        std::string("eigen route unusable: ") + e.what());
  }
  return out;
}

LorentzSvd lorentz_svd_iterative(const CorrelationMatrix& sc,
                                 int max_iterations) {
  corr_rank(sc, /*demand_full=*/true);
  Mat4 s = sc.s;
  // ga, gb accumulate the applied operations: s_work = ga * S * gb^T.
  Mat4 ga = Mat4::Identity();
  Mat4 gb = Mat4::Identity();

  const double bloch_target = 1e-12;
  auto bloch_a = [&]() -> Vec3 { return s.block<3, 1>(1, 0) / s(0, 0); };
  auto bloch_b = [&]() -> Vec3 { return s.block<1, 3>(0, 1).transpose() / s(0, 0); };

  int iter = 0;
  for (; iter < max_iterations; ++iter) {
    const double na = bloch_a().norm();
    const double nb = bloch_b().norm();
    if (na < bloch_target && nb < bloch_target) break;
    if (na >= bloch_target) {
      const Vec3 b = bloch_a();
      const Mat4 r = spatial_rotation(rotation_to_z(b / b.norm()));
      const double phi = -0.5 * std::atanh(std::min(b.norm(), 0.9));
      const Mat4 step = so11_boost(phi) * r;
      s = step * s;
      ga = step * ga;
    }
    if (nb >= bloch_target) {
      const Vec3 b = bloch_b();
      const Mat4 r = spatial_rotation(rotation_to_z(b / b.norm()));
      const double phi = -0.5 * std::atanh(std::min(b.norm(), 0.9));
      const Mat4 step = so11_boost(phi) * r;
      s = s * step.transpose();
      gb = step * gb;
    }
  }
  if (iter >= max_iterations)
    throw Error(ErrorCode::no_convergence,
                "lorentz_svd_iterative: Bloch norms " +
                    std::to_string(bloch_a().norm()) + ", " +
                    std::to_string(bloch_b().norm()) + " after " +
                    std::to_string(max_iterations) + " iterations " +
                    "(link may need unbounded operations)");

  // Final spatial alignment: rotation pair from the 3x3 block's SVD.
  const Eigen::Matrix3d d = s.block<3, 3>(1, 1);
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(
      d, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d u3 = svd.matrixU();
  Eigen::Matrix3d v3 = svd.matrixV();
  Eigen::Vector3d vals = svd.singularValues();
  if (u3.determinant() < 0.0) {
    u3.col(2) *= -1.0;
    vals(2) *= -1.0;
  }
  if (v3.determinant() < 0.0) {
    v3.col(2) *= -1.0;
    vals(2) *= -1.0;
  }
  const Mat4 ra = spatial_rotation(u3.transpose());
  const Mat4 rb = spatial_rotation(v3.transpose());
  s = ra * s * rb.transpose();
  ga = ra * ga;
  gb = rb * gb;

  Vec4 sigma(s(0, 0), s(1, 1), s(2, 2), s(3, 3));
  if (sigma.tail<3>().cwiseAbs().minCoeff() < kRankTol * sigma(0))
    throw RankDeficientLink(sc.qubit_a, sc.qubit_b,
                            "vanishing Lorentz singular value");

  // S = ga^{-1} s_work gb^{-T}; group inverses via the metric.
  const Mat4& eta = minkowski_eta();
  const Mat4 v_raw = eta * ga.transpose() * eta;
  const Mat4 w_raw = eta * gb.transpose() * eta;
  LorentzSvd out = canonicalize(v_raw, sigma, w_raw, "iterative", &sc.s);
  if (out.residual > 1e-6 * std::max(1.0, sc.s.norm()))
    throw Error(ErrorCode::no_convergence,
                "lorentz_svd_iterative: residual " +
                    std::to_string(out.residual));
  return out;
}

LinkClass classify_link(const CorrelationMatrix& s,
                        const std::optional<Rank3LinkParams>& hint) {
  LinkClass out;
  out.rank = corr_rank(s);
  const double det = s.s.determinant();
  out.det_sign = sign_of(det);
  if (!hint) return out;

  const auto& h = *hint;
  const auto eps = [&](double q) {
    return std::sqrt(h.p + 2.0 * (1.0 - h.p) * q * q);
  };
  const double uu = h.u0 * h.u1;
  const double vv = h.v0 * h.v1;
  const double cutoff = eps(h.u0) * eps(h.u1) / (2.0 * (1.0 - h.p));
  const double slack1 = uu - vv;         // > 0 in region I
  const double slack2 = vv - cutoff;     // > 0 in region III
  if (std::abs(slack1) < 1e-10 || std::abs(slack2) < 1e-10) {
    out.region = Rank3Region::boundary;
    out.degenerate = true;
    return out;
  }
  if (slack1 > 0.0)
    out.region = Rank3Region::I;
  else if (slack2 > 0.0)
    out.region = Rank3Region::III;
  else
    out.region = Rank3Region::II;

  // Cross-check against the computed decomposition: region II must have
  // det S > 0 and the entangled regions det S < 0.
  const int expected = out.region == Rank3Region::II ? 1 : -1;
  if (out.rank == 4 && out.det_sign != expected)
    throw Error(ErrorCode::internal,
                "classify_link: region inequality contradicts det S");
  return out;
}

const char* region_name(Rank3Region r) {
  switch (r) {
    case Rank3Region::I: return "I";
    case Rank3Region::II: return "II";
    case Rank3Region::III: return "III";
    case Rank3Region::boundary: return "boundary";
    default: return "unset";
  }
}

nlohmann::json lsvd_to_json(const LorentzSvd& d) {
  auto mat = [](const Mat4& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < 4; ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (int c = 0; c < 4; ++c) row.push_back(m(r, c));
      rows.push_back(row);
    }
    return rows;
  };
  nlohmann::json corrections = nlohmann::json::array();
  for (const auto& c : d.corrections)
    corrections.push_back({{"side", std::string(1, c.side)},
                           {"axes", {c.axis_i, c.axis_j}}});
  return nlohmann::json{{"V", mat(d.v.m)},
                        {"W", mat(d.w.m)},
                        {"sigma", {d.sigma(0), d.sigma(1), d.sigma(2), d.sigma(3)}},
                        {"method", d.method},
                        {"residual", d.residual},
                        {"corrections", corrections}};
}

}  // namespace loopgauge
