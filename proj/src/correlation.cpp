#include "loopgauge/correlation.hpp"

#include <cmath>
#include <sstream>

namespace loopgauge {

const Mat4& minkowski_eta() {
  static const Mat4 eta = [] {
    Mat4 m = Mat4::Identity();
    m(1, 1) = m(2, 2) = m(3, 3) = -1.0;
    return m;
  }();
  return eta;
}

const Mat4c& magic_basis() {
  static const Mat4c t = [] {
    const Complex I(0.0, 1.0);
    Mat4c m;
    m << 1, 0, 0, 1,
         0, 1, 1, 0,
         0, I, -I, 0,
         1, 0, 0, -1;
    return Mat4c(m / std::sqrt(2.0));
  }();
  return t;
}

CorrelationMatrix corr_matrix(const DensityMatrix& rho_ab) {
  if (rho_ab.n_qubits != 2 || rho_ab.rho.rows() != 4)
    throw Error(ErrorCode::dimension_mismatch,
                "corr_matrix: expected a two-qubit state");
  CorrelationMatrix out;
  for (int i = 0; i < 4; ++i) {
    const CMat pi = pauli(i);
    for (int j = 0; j < 4; ++j) {
      const Complex v = (kron(pi, pauli(j)) * rho_ab.rho).trace();
      out.s(i, j) = 0.5 * v.real();
    }
  }
  return out;
}

DensityMatrix density_from_corr(const CorrelationMatrix& s, bool renormalize) {
  CMat rho = CMat::Zero(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      rho += 0.5 * s.s(i, j) * kron(pauli(i), pauli(j));
  double tr = rho.trace().real();
  if (renormalize) {
    if (std::abs(tr) < 1e-14)
      throw Error(ErrorCode::unphysical_state, "density_from_corr: zero trace");
    rho /= tr;
    tr = 1.0;
  } else if (std::abs(tr - 1.0) > 1e-9) {
    throw Error(ErrorCode::unphysical_state,
                "density_from_corr: trace differs from 1 (S00 != 1/2)");
  }
  const auto eig = hermitian_eig(rho);
  if (eig.values.minCoeff() < -1e-9)
    throw Error(ErrorCode::unphysical_state,
                "density_from_corr: result is not positive semidefinite");
  return DensityMatrix{2, rho};
}

LorentzMatrix sl2_to_lorentz(const LocalOp& a) {
  if (std::abs(a.m.determinant() - Complex(1.0)) > 1e-12)
    throw Error(ErrorCode::usage, "sl2_to_lorentz: det != 1");

  // Route 1: U_ij = tr(A^dag pauli_i A pauli_j) / 2.
  Mat4 u1;
  for (int i = 0; i < 4; ++i) {
    const Mat2c lhs = a.m.adjoint() * Mat2c(pauli(i)) * a.m;
    for (int j = 0; j < 4; ++j)
      u1(i, j) = 0.5 * (lhs * Mat2c(pauli(j))).trace().real();
  }

  // Route 2: U = T (A (x) A*) T^dag.
  const Mat4c k = kron(a.m, a.m.conjugate());
  const Mat4c u2c = magic_basis() * k * magic_basis().adjoint();
  if (u2c.imag().cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, u2c.norm()))
    throw Error(ErrorCode::internal,
                "sl2_to_lorentz: magic-basis image is not real");
  const Mat4 u2 = u2c.real();

  const double scale = std::max(1.0, u1.norm());
  if ((u1 - u2).norm() > 1e-12 * scale)
    throw Error(ErrorCode::internal,
                "sl2_to_lorentz: construction routes disagree");
  return LorentzMatrix{u1};
}

LocalOp lorentz_to_sl2(const LorentzMatrix& u) {
  require_lorentz(u.m);
  const Mat4c k = magic_basis().adjoint() * u.m.cast<Complex>() * magic_basis();

  // k = A (x) A^*; the reshuffle R[(i,j),(k,l)] = k[(i,k),(j,l)] is the
  // rank-one matrix vec(A) vec(A)^dag.
  Mat4c r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int l = 0; l < 2; ++l)
        for (int mth = 0; mth < 2; ++mth)
          r(2 * i + j, 2 * l + mth) = k(2 * i + l, 2 * j + mth);

  int best = 0;
  for (int d = 1; d < 4; ++d)
    if (r(d, d).real() > r(best, best).real()) best = d;
  if (r(best, best).real() <= 0.0)
    throw Error(ErrorCode::not_lorentz, "lorentz_to_sl2: degenerate image");
  const Eigen::Vector4cd a_vec = r.col(best) / std::sqrt(r(best, best).real());

  Mat2c a;
  a << a_vec(0), a_vec(1), a_vec(2), a_vec(3);
  const Complex det = a.determinant();
  if (std::abs(det) < 1e-12)
    throw Error(ErrorCode::not_lorentz, "lorentz_to_sl2: singular preimage");
  a /= std::sqrt(det);

  // Global sign: first nonzero entry gets a nonnegative real part
  // (nonnegative imaginary part as the tiebreak).
  const double tol = 1e-12 * a.cwiseAbs().maxCoeff();
  for (int idx = 0; idx < 4; ++idx) {
    const Complex e = a(idx / 2, idx % 2);
    if (std::abs(e) <= tol) continue;
    if (e.real() < -tol || (std::abs(e.real()) <= tol && e.imag() < 0.0)) a = -a;
    break;
  }

  LocalOp out{a, true};
  const Mat4 back = sl2_to_lorentz(out).m;
  if ((back - u.m).norm() > 1e-9 * std::max(1.0, u.m.norm()))
    throw Error(ErrorCode::not_lorentz,
                "lorentz_to_sl2: round trip failed, input not in SO+(1,3)");
  return out;
}

LorentzCheck is_lorentz(const Mat4& u, double tolerance) {
  LorentzCheck out;
  const Mat4& eta = minkowski_eta();
  const double scale = std::max(1.0, u.norm());
  out.metric_defect = (u * eta * u.transpose() - eta).norm();
  out.det = u.determinant();
  out.time_time = u(0, 0);
  // Error bounds grow with the matrix scale: the metric form is quadratic
  // in U and the determinant cubic in the perturbation amplification.
  out.metric_ok = out.metric_defect <= tolerance * scale * scale;
  out.proper =
      std::abs(out.det - 1.0) <= std::max(1e-9, tolerance * scale * scale * scale);
  out.orthochronous = out.time_time >= 1.0 - 1e-9 * scale;
  return out;
}

void require_lorentz(const Mat4& u, double tolerance) {
  const LorentzCheck c = is_lorentz(u, tolerance);
  if (!c.proper_orthochronous()) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << "matrix is not proper orthochronous Lorentz "
       << "(metric defect " << c.metric_defect << ", det " << c.det
       << ", U00 " << c.time_time << ")";
    throw Error(ErrorCode::not_lorentz, os.str());
  }
}

double concurrence_wootters(const DensityMatrix& rho) {
  if (rho.n_qubits != 2)
    throw Error(ErrorCode::dimension_mismatch,
                "concurrence_wootters: expected a two-qubit state");
  const CMat yy = kron(pauli(2), pauli(2));
  const CMat rho_tilde = yy * rho.rho.conjugate() * yy;
  Eigen::ComplexEigenSolver<CMat> solver(rho.rho * rho_tilde);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::no_convergence, "concurrence_wootters: eigensolver");
  Eigen::Vector4d lam;
  for (int k = 0; k < 4; ++k)
    lam(k) = std::sqrt(std::max(0.0, solver.eigenvalues()(k).real()));
  std::sort(lam.data(), lam.data() + 4, std::greater<double>());
  return std::max(0.0, lam(0) - lam(1) - lam(2) - lam(3));
}

double concurrence_from_sigma(const Vec4& sigma) {
  return std::max(0.0, -sigma.sum());
}

nlohmann::json corr_to_json(const CorrelationMatrix& s) {
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < 4; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < 4; ++c) row.push_back(s.s(r, c));
    rows.push_back(row);
  }
  return nlohmann::json{
      {"pair", {s.qubit_a, s.qubit_b}}, {"matrix", rows}};
}

CorrelationMatrix corr_from_json(const nlohmann::json& j) {
  CorrelationMatrix out;
  out.qubit_a = j.at("pair").at(0).get<int>();
  out.qubit_b = j.at("pair").at(1).get<int>();
  const auto& rows = j.at("matrix");
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out.s(r, c) = rows.at(r).at(c).get<double>();
  return out;
}

}  // namespace loopgauge
