#include "loopgauge/holonomy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace loopgauge {

namespace {

Transporter finish_transporter(Mat4 lambda, const CorrelationMatrix& s,
                               Method method) {
  require_lorentz(lambda, 1e-7);
  const Mat4& eta = minkowski_eta();
  const Mat4 sym = eta * lambda.transpose() * eta * s.s;  // Lambda^{-1} S
  Transporter out;
  out.lambda = LorentzMatrix{lambda};
  out.qubit_a = s.qubit_a;
  out.qubit_b = s.qubit_b;
  out.side = 'L';
  out.method = method;
  out.symmetry_defect = (sym - sym.transpose()).norm();
  if (out.symmetry_defect > 1e-6 * std::max(1.0, s.s.norm()))
    throw Error(ErrorCode::internal,
                "transporter does not symmetrize its link (defect " +
                    std::to_string(out.symmetry_defect) + ")");
  return out;
}

}  // namespace

Method method_from_string(const std::string& name) {
  if (name == "eigen") return Method::eigen;
  if (name == "iterative") return Method::iterative;
  if (name == "sqrt") return Method::sqrt;
  throw Error(ErrorCode::usage, "unknown method '" + name + "'");
}

const char* method_name(Method m) {
  switch (m) {
    case Method::eigen: return "eigen";
    case Method::iterative: return "iterative";
    default: return "sqrt";
  }
}

Transporter transporter_eigen(const CorrelationMatrix& s) {
  const LorentzSvd d = lorentz_svd_eigen(s);
  const Mat4& eta = minkowski_eta();
  const Mat4 lambda = d.v.m * eta * d.w.m.transpose() * eta;
  return finish_transporter(lambda, s, Method::eigen);
}

Transporter transporter_sqrt(const CorrelationMatrix& s) {
  corr_rank(s, /*demand_full=*/true);
  const Mat4& eta = minkowski_eta();
  const Mat4 m = s.s.transpose() * eta * s.s * eta;
  Mat4 x;
  try {
    x = principal_sqrt4(m);
  } catch (const Error& e) {
    throw RankDeficientLink(s.qubit_a, s.qubit_b,
                            std::string("sqrt route: ") + e.what());
  }
  Mat4 lambda = s.s * eta * x.inverse();

  // The principal root always encodes the (+,-,-,-) signature. For
  // det S > 0 the canonical signature is all-positive and the raw factor
  // is improper; compose with the reflection through the timelike
  // eigendirection of m.
  if (s.s.determinant() > 0.0) {
    const EigenSystem4 em = eig_real4(m);
    const double scale = std::max(1.0, em.values.cwiseAbs().maxCoeff());
    // The timelike direction pairs with the leading singular value, so
    // prefer the largest eigenvalue among the eta-positive eigenvectors.
    int found = -1;
    Vec4 w0;
    for (int k = 0; k < 4; ++k) {
      if (std::abs(em.values(k).imag()) > 1e-8 * scale) continue;
      const Vec4 cand = em.vectors.col(k).real();
      if (cand.norm() < 1e-8) continue;
      const double q = cand.dot(eta * cand);
      if (q <= 1e-8 * cand.squaredNorm()) continue;
      if (found < 0 || em.values(k).real() > em.values(found).real()) {
        w0 = cand / std::sqrt(q);
        found = k;
      }
    }
    if (found < 0)
      throw DefectiveLink(s.qubit_a, s.qubit_b,
                          "no timelike eigendirection available for the "
                          "signature correction (det S > 0)");
    if (w0(0) < 0.0) w0 = -w0;
    const Mat4 c = 2.0 * w0 * (eta * w0).transpose() - Mat4::Identity();
    lambda = lambda * c;
  }
  return finish_transporter(lambda, s, Method::sqrt);
}

Transporter transporter(const CorrelationMatrix& s, Method method) {
  switch (method) {
    case Method::eigen:
      return transporter_eigen(s);
    case Method::iterative: {
      const LorentzSvd d = lorentz_svd_iterative(s);
      const Mat4& eta = minkowski_eta();
      return finish_transporter(d.v.m * eta * d.w.m.transpose() * eta, s,
                                Method::iterative);
    }
    default:
      return transporter_sqrt(s);
  }
}

Vec4 sigma_of_link(const CorrelationMatrix& s, Method method) {
  if (method == Method::eigen) return lorentz_svd_eigen(s).sigma;
  if (method == Method::iterative) return lorentz_svd_iterative(s).sigma;

  corr_rank(s, /*demand_full=*/true);
  const Mat4& eta = minkowski_eta();
  const Mat4 m = s.s.transpose() * eta * s.s * eta;
  const Mat4 x = principal_sqrt4(m);
  const EigenSystem4 ex = eig_real4(x);
  Vec4 mags;
  for (int k = 0; k < 4; ++k) mags(k) = ex.values(k).real();
  std::sort(mags.data(), mags.data() + 4, std::greater<double>());
  const double spatial_sign = s.s.determinant() > 0.0 ? 1.0 : -1.0;
  Vec4 sigma;
  sigma(0) = mags(0);
  for (int k = 1; k < 4; ++k) sigma(k) = spatial_sign * mags(k);
  return sigma;
}

CorrelationMatrix symmetrized(const CorrelationMatrix& s, char side,
                              Method method) {
  const Transporter t = transporter(s, method);
  const Mat4& eta = minkowski_eta();
  const Mat4 lam_inv = eta * t.lambda.m.transpose() * eta;
  Mat4 sym;
  if (side == 'L' || side == 'l') {
    sym = lam_inv * s.s;
  } else if (side == 'R' || side == 'r') {
    // Right polar factor Lambda' = eta Lambda eta acts on qubit b.
    const Mat4 lam_right_inv = eta * lam_inv * eta;
    sym = s.s * lam_right_inv;
  } else {
    throw Error(ErrorCode::usage, "symmetrized: side must be 'L' or 'R'");
  }
  CorrelationMatrix out;
  out.s = 0.5 * (sym + sym.transpose());
  out.qubit_a = s.qubit_a;
  out.qubit_b = s.qubit_b;
  return out;
}

std::vector<CorrelationMatrix> loop_links(const DensityMatrix& state,
                                          const std::vector<int>& loop) {
  const size_t n = loop.size();
  if (n < 2) throw Error(ErrorCode::usage, "twist: loop needs >= 2 qubits");
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (loop[i] == loop[j])
        throw Error(ErrorCode::usage, "twist: repeated qubit in loop");
  std::vector<CorrelationMatrix> links;
  links.reserve(n);
  for (size_t k = 0; k < n; ++k) {
    const int from = loop[k];
    const int to = loop[(k + 1) % n];
    // Link (to, from): the first marginal factor is the qubit that
    // receives the symmetrizing operation.
    CorrelationMatrix s = corr_matrix(marginal(state, {to, from}));
    s.qubit_a = to;
    s.qubit_b = from;
    links.push_back(s);
  }
  return links;
}

TwistReport twist_links(const std::vector<CorrelationMatrix>& links,
                        Method method) {
  const size_t n = links.size();
  if (n < 2)
    throw Error(ErrorCode::usage, "twist_links: need at least two links");
  TwistReport report;
  report.method = method;
  report.loop.reserve(n);
  for (size_t k = 0; k < n; ++k) {
    report.loop.push_back(links[k].qubit_b);
    if (links[k].qubit_a != links[(k + 1) % n].qubit_b)
      throw Error(ErrorCode::usage, "twist_links: links do not chain");
  }

  Mat4 holonomy = Mat4::Identity();
  for (const CorrelationMatrix& s : links) {
    const Transporter t = transporter(s, method);
    LinkReport lr;
    lr.qubit_a = s.qubit_a;
    lr.qubit_b = s.qubit_b;
    lr.lambda = t.lambda.m;
    lr.sigma = sigma_of_link(s, method);
    lr.symmetry_defect = t.symmetry_defect;
    report.links.push_back(lr);
    holonomy = t.lambda.m * holonomy;
  }
  report.holonomy = holonomy;
  report.xi = 0.25 * holonomy.trace();
  const Mat4& eta = minkowski_eta();
  report.xi_reversed = 0.25 * (eta * holonomy.transpose() * eta).trace();
  report.eigenvalues = eig_real4(holonomy).values;
  report.spectrum_structure_ok = lorentz_spectrum_ok(report.eigenvalues);
  return report;
}

TwistReport twist(const DensityMatrix& state, const std::vector<int>& loop,
                  Method method) {
  return twist_links(loop_links(state, loop), method);
}

std::vector<CorrelationMatrix> gauge_transform(
    const std::vector<CorrelationMatrix>& links,
    const std::vector<LorentzMatrix>& per_qubit) {
  for (const auto& u : per_qubit) require_lorentz(u.m);
  std::vector<CorrelationMatrix> out;
  out.reserve(links.size());
  for (const auto& link : links) {
    if (link.qubit_a < 0 ||
        link.qubit_a >= static_cast<int>(per_qubit.size()) ||
        link.qubit_b < 0 || link.qubit_b >= static_cast<int>(per_qubit.size()))
      throw Error(ErrorCode::usage, "gauge_transform: qubit label out of range");
    CorrelationMatrix g = link;
    g.s = per_qubit[link.qubit_a].m * link.s *
          per_qubit[link.qubit_b].m.transpose();
    out.push_back(g);
  }
  return out;
}

DensityMatrix gauge_transform(const DensityMatrix& state,
                              const std::vector<LocalOp>& per_qubit) {
  return apply_local(state, per_qubit, /*renormalize=*/true);
}

ProtocolTrace untwist_protocol(const DensityMatrix& state,
                               const std::vector<int>& loop, Method method) {
  const size_t n = loop.size();
  if (n < 2)
    throw Error(ErrorCode::usage, "untwist_protocol: loop needs >= 2 qubits");

  ProtocolTrace trace;
  std::vector<CorrelationMatrix> links = loop_links(state, loop);
  trace.reference = twist_links(links, method);

  // Work on the link configuration. An operation applied to one qubit
  // transforms exactly the links ending on it; a filtering operation on
  // any other qubit would bias that link's ensemble instead (see the
  // compensating-operation remark for the physical run), so the sequential
  // bookkeeping lives here.
  const Mat4& eta = minkowski_eta();
  for (size_t k = 0; k + 1 < n; ++k) {
    const Transporter t = transporter(links[k], method);
    const Mat4 lam_inv = eta * t.lambda.m.transpose() * eta;

    // Physical operation on the link's first qubit: unimodular preimage
    // rescaled so the largest singular value is 1 (Kraus admissibility).
    const LocalOp a = lorentz_to_sl2(LorentzMatrix{lam_inv});
    Eigen::JacobiSVD<Mat2c> svd(a.m);
    const double smax = svd.singularValues()(0);
    const Mat2c kraus = a.m / smax;
    // The Hilbert-Schmidt action of K = A/smax is (1/smax^2) L(A).
    const double kraus_scale = 1.0 / (smax * smax);
    const Mat4 action = kraus_scale * lam_inv;

    const int qubit = links[k].qubit_a;
    const double s00_before = links[k].s(0, 0);
    for (auto& link : links) {
      if (link.qubit_a == qubit) link.s = action * link.s;
      if (link.qubit_b == qubit) link.s = link.s * action.transpose();
    }

    ProtocolStep step;
    step.qubit = qubit;
    step.op = kraus;
    step.weight = links[k].s(0, 0) / s00_before;
    if (!(step.weight > 1e-14))
      throw Error(ErrorCode::annihilating_operation,
                  "untwist_protocol: step on qubit " + std::to_string(qubit) +
                      " annihilates the state");
    step.link_symmetry_defect = 0.0;
    for (size_t j = 0; j <= k; ++j) {
      const Mat4& sj = links[j].s;
      step.link_symmetry_defect = std::max(
          step.link_symmetry_defect,
          (sj - sj.transpose()).norm() / std::max(1.0, sj.norm()));
    }
    if (step.link_symmetry_defect > 1e-6)
      throw Error(ErrorCode::internal,
                  "untwist_protocol: symmetrized links drifted");
    trace.steps.push_back(step);
  }

  // Closing link: its transporter is the loop holonomy in this gauge.
  const Transporter t = transporter(links[n - 1], method);
  trace.final_mismatch = t.lambda.m;
  trace.mismatch_eigenvalues = eig_real4(t.lambda.m).values;
  trace.spectrum_match_error =
      spectra_distance(trace.mismatch_eigenvalues, trace.reference.eigenvalues);
  return trace;
}

double spectra_distance(const Vec4c& a, const Vec4c& b) {
  std::array<bool, 4> used = {false, false, false, false};
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    double best = std::numeric_limits<double>::infinity();
    int pick = -1;
    for (int j = 0; j < 4; ++j) {
      if (used[j]) continue;
      const double d = std::abs(a(i) - b(j));
      if (d < best) {
        best = d;
        pick = j;
      }
    }
    used[pick] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

bool lorentz_spectrum_ok(const Vec4c& values, double tol) {
  for (int i = 0; i < 4; ++i) {
    bool has_inverse = false;
    bool has_conjugate = false;
    for (int j = 0; j < 4; ++j) {
      if (std::abs(values(i) * values(j) - Complex(1.0)) < tol)
        has_inverse = true;
      if (std::abs(values(i) - std::conj(values(j))) < tol)
        has_conjugate = true;
    }
    if (!has_inverse || !has_conjugate) return false;
  }
  return true;
}

nlohmann::json twist_to_json(const TwistReport& r) {
  auto mat = [](const Mat4& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < 4; ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int j = 0; j < 4; ++j) row.push_back(m(i, j));
      rows.push_back(row);
    }
    return rows;
  };
  nlohmann::json eig = nlohmann::json::array();
  for (int k = 0; k < 4; ++k)
    eig.push_back({r.eigenvalues(k).real(), r.eigenvalues(k).imag()});
  nlohmann::json links = nlohmann::json::array();
  for (const auto& l : r.links) {
    links.push_back({{"pair", {l.qubit_a, l.qubit_b}},
                     {"lambda", mat(l.lambda)},
                     {"sigma", {l.sigma(0), l.sigma(1), l.sigma(2), l.sigma(3)}},
                     {"symmetry_defect", l.symmetry_defect}});
  }
  return nlohmann::json{{"loop", r.loop},
                        {"xi", r.xi},
                        {"xi_reversed", r.xi_reversed},
                        {"holonomy", mat(r.holonomy)},
                        {"eigenvalues", eig},
                        {"links", links},
                        {"method", method_name(r.method)},
                        {"spectrum_structure_ok", r.spectrum_structure_ok}};
}

}  // namespace loopgauge
