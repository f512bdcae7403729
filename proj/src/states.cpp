#include "loopgauge/states.hpp"

#include <cmath>
#include <fstream>

namespace loopgauge {

namespace {

constexpr double kPi = 3.14159265358979323846;

CMat projector(const CVec& psi) { return psi * psi.adjoint(); }

int qubits_for_dim(Eigen::Index d) {
  int n = 0;
  while ((Eigen::Index(1) << n) < d) ++n;
  if ((Eigen::Index(1) << n) != d)
    throw Error(ErrorCode::dimension_mismatch,
                "state dimension is not a power of two");
  return n;
}

double require_param(const std::map<std::string, double>& params,
                     const std::string& key, const std::string& who) {
  auto it = params.find(key);
  if (it == params.end())
    throw Error(ErrorCode::usage, who + ": missing parameter '" + key + "'");
  return it->second;
}

}  // namespace

void validate(const DensityMatrix& dm) {
  if (dm.rho.rows() != dm.rho.cols() ||
      dm.rho.rows() != (Eigen::Index(1) << dm.n_qubits))
    throw Error(ErrorCode::dimension_mismatch, "density matrix shape mismatch");
  const double scale = std::max(1.0, dm.rho.norm());
  if ((dm.rho - dm.rho.adjoint()).norm() > 1e-12 * scale)
    throw Error(ErrorCode::unphysical_state, "density matrix not Hermitian");
  if (std::abs(dm.rho.trace() - Complex(1.0)) > 1e-12 * scale)
    throw Error(ErrorCode::unphysical_state, "density matrix trace is not 1");
  const auto eig = hermitian_eig(dm.rho);
  if (eig.values.minCoeff() < -1e-10)
    throw Error(ErrorCode::unphysical_state, "density matrix not positive");
}

double purity(const DensityMatrix& dm) {
  return (dm.rho * dm.rho).trace().real();
}

LocalOp make_unimodular(const Mat2c& m) {
  if (std::abs(m.determinant() - Complex(1.0)) > 1e-12)
    throw Error(ErrorCode::usage, "local operation is not unimodular");
  return LocalOp{m, true};
}

DensityMatrix pure_state(const CVec& amplitudes) {
  const double norm = amplitudes.norm();
  if (norm < 1e-300)
    throw Error(ErrorCode::usage, "pure_state: zero amplitude vector");
  const CVec psi = amplitudes / norm;
  DensityMatrix dm{qubits_for_dim(psi.size()), projector(psi)};
  validate(dm);
  return dm;
}

DensityMatrix ghz_class_state(double delta, double alpha, double beta,
                              double gamma, double phi, bool* range_warning) {
  const bool in_range = delta > 0.0 && delta <= kPi / 4 + 1e-12 &&
                        alpha > 0.0 && alpha <= kPi / 2 + 1e-12 &&
                        beta > 0.0 && beta <= kPi / 2 + 1e-12 &&
                        gamma > 0.0 && gamma <= kPi / 2 + 1e-12 &&
                        phi > 0.0 && phi <= 2 * kPi + 1e-12;
  if (range_warning) *range_warning = !in_range;

  Eigen::Vector2cd fa, fb, fc;
  fa << std::cos(alpha), std::sin(alpha);
  fb << std::cos(beta), std::sin(beta);
  fc << std::cos(gamma), std::sin(gamma);
  const Complex phase = std::exp(Complex(0.0, phi)) * std::sin(delta);

  CVec psi = CVec::Zero(8);
  psi(0) = std::cos(delta);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        psi(4 * a + 2 * b + c) += phase * fa(a) * fb(b) * fc(c);
  return pure_state(psi);
}

DensityMatrix w_class_state(double w, double x, double y, double z) {
  if (w < 0.0 || x <= 0.0 || y <= 0.0 || z <= 0.0)
    throw Error(ErrorCode::usage,
                "w_class_state: x, y, z must be positive and w nonnegative");
  CVec psi = CVec::Zero(8);
  psi(0) = w;  // |000>
  psi(1) = x;  // |001>
  psi(2) = y;  // |010>
  psi(4) = z;  // |100>
  return pure_state(psi);
}

DensityMatrix mix(const std::vector<std::pair<double, DensityMatrix>>& parts) {
  if (parts.empty()) throw Error(ErrorCode::usage, "mix: empty component list");
  double sum = 0.0;
  for (const auto& [wgt, dm] : parts) {
    if (wgt < 0.0) throw Error(ErrorCode::usage, "mix: negative weight");
    if (dm.rho.rows() != parts.front().second.rho.rows())
      throw Error(ErrorCode::dimension_mismatch, "mix: dimension mismatch");
    sum += wgt;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw Error(ErrorCode::usage, "mix: weights must sum to 1");
  CMat rho = CMat::Zero(parts.front().second.rho.rows(),
                        parts.front().second.rho.cols());
  for (const auto& [wgt, dm] : parts) rho += wgt * dm.rho;
  DensityMatrix out{parts.front().second.n_qubits, rho};
  validate(out);
  return out;
}

CMat embed_pair(const CMat& op4, std::pair<int, int> pair, int n_qubits) {
  if (op4.rows() != 4 || op4.cols() != 4)
    throw Error(ErrorCode::dimension_mismatch, "embed_pair: operator not 4x4");
  const int p = pair.first, q = pair.second, n = n_qubits;
  if (p == q || p < 0 || q < 0 || p >= n || q >= n)
    throw Error(ErrorCode::usage, "embed_pair: bad qubit indices");
  const Eigen::Index dim = Eigen::Index(1) << n;
  CMat out = CMat::Zero(dim, dim);
  for (Eigen::Index row = 0; row < dim; ++row) {
    const Eigen::Index ip = (row >> (n - 1 - p)) & 1;
    const Eigen::Index iq = (row >> (n - 1 - q)) & 1;
    for (Eigen::Index jp = 0; jp < 2; ++jp) {
      for (Eigen::Index jq = 0; jq < 2; ++jq) {
        Eigen::Index col = row;
        col &= ~(Eigen::Index(1) << (n - 1 - p));
        col &= ~(Eigen::Index(1) << (n - 1 - q));
        col |= jp << (n - 1 - p);
        col |= jq << (n - 1 - q);
        out(row, col) = op4(2 * ip + iq, 2 * jp + jq);
      }
    }
  }
  return out;
}

DensityMatrix catalog(const std::string& name,
                      const std::map<std::string, double>& params) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  auto bell = [&](int i0, int i3, double s0, double s3) {
    CVec psi = CVec::Zero(4);
    psi(i0) = s0 * inv_sqrt2;
    psi(i3) = s3 * inv_sqrt2;
    return pure_state(psi);
  };

  if (name == "bell_psi_minus") return bell(1, 2, 1.0, -1.0);
  if (name == "bell_psi_plus") return bell(1, 2, 1.0, 1.0);
  if (name == "bell_phi_minus") return bell(0, 3, 1.0, -1.0);
  if (name == "bell_phi_plus") return bell(0, 3, 1.0, 1.0);

  if (name == "werner_third") {
    DensityMatrix singlet = bell(1, 2, 1.0, -1.0);
    DensityMatrix out{2, CMat::Identity(4, 4) / 6.0 + singlet.rho / 3.0};
    validate(out);
    return out;
  }

  if (name == "singlet_mixture_3q") {
    CVec psi = CVec::Zero(4);
    psi(1) = inv_sqrt2;
    psi(2) = -inv_sqrt2;
    const CMat p_singlet = projector(psi);
    CMat rho = CMat::Zero(8, 8);
    rho += embed_pair(p_singlet, {0, 1}, 3);
    rho += embed_pair(p_singlet, {1, 2}, 3);
    rho += embed_pair(p_singlet, {0, 2}, 3);
    rho /= 6.0;
    DensityMatrix out{3, rho};
    validate(out);
    return out;
  }

  if (name == "ghz_w_mixture_3q") {
    CVec ghz = CVec::Zero(8);
    ghz(0) = std::sqrt(1.0 / 3.0);
    ghz(7) = std::sqrt(2.0 / 3.0);
    DensityMatrix w = w_class_state(0.0, 1.0, 1.0, 1.0);
    return mix({{0.5, pure_state(ghz)}, {0.5, w}});
  }

  if (name == "rank3_family") {
    const double p = require_param(params, "p", name);
    const double x = require_param(params, "x", name);
    const double y = require_param(params, "y", name);
    const double z = require_param(params, "z", name);
    const double w = require_param(params, "w", name);
    if (p < 0.0 || p > 1.0)
      throw Error(ErrorCode::usage, name + ": p must lie in [0,1]");
    if (x < 0.0 || y < 0.0 || z < 0.0 || w < 0.0)
      throw Error(ErrorCode::usage, name + ": amplitudes must be nonnegative");
    CVec ghz = CVec::Zero(8);
    ghz(0) = inv_sqrt2;
    ghz(7) = inv_sqrt2;
    CVec psi = CVec::Zero(8);
    psi(1) = x;  // |001>
    psi(2) = y;  // |010>
    psi(4) = z;  // |100>
    psi(7) = w;  // |111>
    return mix({{p, pure_state(ghz)}, {1.0 - p, pure_state(psi)}});
  }

  if (name == "rank4_family") {
    const double p = require_param(params, "p", name);
    const double x = require_param(params, "x", name);
    const double y = require_param(params, "y", name);
    const double z = require_param(params, "z", name);
    const double w = params.count("w") ? params.at("w") : 0.0;
    if (p < 0.0 || p > 1.0)
      throw Error(ErrorCode::usage, name + ": p must lie in [0,1]");
    CVec pw = CVec::Zero(8);
    pw(0) = w;
    pw(1) = x;
    pw(2) = y;
    pw(4) = z;
    pw /= pw.norm();
    CVec pwbar = CVec::Zero(8);
    // sigma_x on all three qubits maps basis index b to 7-b
    for (int b = 0; b < 8; ++b) pwbar(7 - b) = pw(b);
    if (p == 0.0) return pure_state(pwbar);
    if (p == 1.0) return pure_state(pw);
    return mix({{p, pure_state(pw)}, {1.0 - p, pure_state(pwbar)}});
  }

  throw Error(ErrorCode::usage, "catalog: unknown state '" + name + "'");
}

DensityMatrix apply_local(const DensityMatrix& dm,
                          const std::vector<LocalOp>& ops, bool renormalize,
                          double* weight) {
  if (static_cast<int>(ops.size()) != dm.n_qubits)
    throw Error(ErrorCode::usage, "apply_local: need one op per qubit");
  CMat big = CMat::Identity(1, 1);
  for (const LocalOp& op : ops) big = kron(big, op.m);
  CMat rho = big * dm.rho * big.adjoint();
  const double tr = rho.trace().real();
  if (weight) *weight = tr;
  if (renormalize) {
    if (tr < 1e-14)
      throw Error(ErrorCode::annihilating_operation,
                  "apply_local: operation annihilates the state");
    rho /= tr;
  }
  return DensityMatrix{dm.n_qubits, rho};
}

DensityMatrix marginal(const DensityMatrix& dm, std::pair<int, int> pair) {
  DensityMatrix out{2, partial_trace(dm.rho, pair)};
  return out;
}

void to_json(nlohmann::json& j, const DensityMatrix& dm) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < dm.rho.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < dm.rho.cols(); ++c)
      row.push_back({dm.rho(r, c).real(), dm.rho(r, c).imag()});
    rows.push_back(row);
  }
  j = nlohmann::json{{"n_qubits", dm.n_qubits}, {"matrix", rows}};
}

void from_json(const nlohmann::json& j, DensityMatrix& dm) {
  dm.n_qubits = j.at("n_qubits").get<int>();
  const auto& rows = j.at("matrix");
  const Eigen::Index dim = Eigen::Index(1) << dm.n_qubits;
  if (static_cast<Eigen::Index>(rows.size()) != dim)
    throw Error(ErrorCode::dimension_mismatch, "state file: bad row count");
  dm.rho.resize(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    const auto& row = rows.at(r);
    if (static_cast<Eigen::Index>(row.size()) != dim)
      throw Error(ErrorCode::dimension_mismatch, "state file: bad column count");
    for (Eigen::Index c = 0; c < dim; ++c)
      dm.rho(r, c) = Complex(row.at(c).at(0).get<double>(),
                             row.at(c).at(1).get<double>());
  }
}

DensityMatrix load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::usage, "cannot open state file " + path);
  nlohmann::json j;
  in >> j;
  // A catalog reference {"catalog": name, "params": {...}} is also accepted.
  if (j.contains("catalog")) {
    std::map<std::string, double> params;
    if (j.contains("params"))
      params = j.at("params").get<std::map<std::string, double>>();
    return catalog(j.at("catalog").get<std::string>(), params);
  }
  DensityMatrix dm = j.get<DensityMatrix>();
  validate(dm);
  return dm;
}

void save_state(const DensityMatrix& dm, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::usage, "cannot write state file " + path);
  nlohmann::json j = dm;
  out << j.dump(2) << "\n";
}

}  // namespace loopgauge
