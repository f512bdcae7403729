#include "loopgauge/qlinalg.hpp"

#include <limits>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

namespace loopgauge {

Mat2c pauli(int i) {
  Mat2c m;
  const Complex I(0.0, 1.0);
  switch (i) {
    case 0:
      m << 1, 0, 0, 1;
      return m;
    case 1:
      m << 0, 1, 1, 0;
      return m;
    case 2:
      m << 0, -I, I, 0;
      return m;
    case 3:
      m << 1, 0, 0, -1;
      return m;
    default:
      throw Error(ErrorCode::usage, "pauli index must be in 0..3");
  }
}

CMat kron(const CMat& a, const CMat& b) {
  const Eigen::Index rows = a.rows() * b.rows();
  const Eigen::Index cols = a.cols() * b.cols();
  if (rows > 256 || cols > 256)
    throw Error(ErrorCode::dimension_mismatch, "kron result exceeds 256x256");
  CMat out(rows, cols);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

namespace {

int qubit_count(const CMat& rho) {
  if (rho.rows() != rho.cols())
    throw Error(ErrorCode::dimension_mismatch, "matrix is not square");
  Eigen::Index d = rho.rows();
  int n = 0;
  while ((Eigen::Index(1) << n) < d) ++n;
  if ((Eigen::Index(1) << n) != d)
    throw Error(ErrorCode::dimension_mismatch,
                "matrix dimension is not a power of two");
  return n;
}

}  // namespace

CMat partial_trace(const CMat& rho, std::pair<int, int> keep) {
  const int n = qubit_count(rho);
  const int p = keep.first;
  const int q = keep.second;
  if (p == q || p < 0 || q < 0 || p >= n || q >= n)
    throw Error(ErrorCode::usage, "partial_trace: bad qubit indices");

  std::vector<int> rest;
  for (int k = 0; k < n; ++k)
    if (k != p && k != q) rest.push_back(k);

  const Eigen::Index d_rest = Eigen::Index(1) << rest.size();
  CMat out = CMat::Zero(4, 4);
  for (Eigen::Index i = 0; i < 4; ++i) {
    for (Eigen::Index j = 0; j < 4; ++j) {
      Complex acc = 0.0;
      for (Eigen::Index r = 0; r < d_rest; ++r) {
        Eigen::Index row = 0, col = 0;
        row |= ((i >> 1) & 1) << (n - 1 - p);
        row |= (i & 1) << (n - 1 - q);
        col |= ((j >> 1) & 1) << (n - 1 - p);
        col |= (j & 1) << (n - 1 - q);
        for (size_t k = 0; k < rest.size(); ++k) {
          const Eigen::Index b = (r >> (rest.size() - 1 - k)) & 1;
          row |= b << (n - 1 - rest[k]);
          col |= b << (n - 1 - rest[k]);
        }
        acc += rho(row, col);
      }
      out(i, j) = acc;
    }
  }
  return out;
}

EigenSystem4 eig_real4(const Mat4& m, double defect_threshold) {
  if (!m.allFinite())
    throw Error(ErrorCode::usage, "eig_real4: non-finite entries");
  Eigen::EigenSolver<Mat4> solver(m, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::no_convergence,
                "eig_real4: QR iteration failed to converge");
  EigenSystem4 out;
  out.values = solver.eigenvalues();
  out.vectors = solver.eigenvectors();
  Eigen::JacobiSVD<Mat4c> svd(out.vectors);
  const double smin = svd.singularValues()(3);
  const double smax = svd.singularValues()(0);
  out.vector_condition =
      smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  out.defect_flag = !(out.vector_condition < defect_threshold);
  return out;
}

namespace {

double sqrt_residual(const Mat4& x, const Mat4& m) {
  if (!x.allFinite()) return std::numeric_limits<double>::infinity();
  return (x * x - m).norm() / std::max(1.0, m.norm());
}

// A few commuting Newton steps; the start is a polynomial in m, so all
// iterates commute with m and the iteration contracts toward the principal
// root even for Jordan structure.
Mat4 newton_refine(Mat4 x, const Mat4& m) {
  Mat4 best = x;
  double best_res = sqrt_residual(x, m);
  for (int it = 0; it < 60 && best_res > 1e-15; ++it) {
    x = 0.5 * (x + x.inverse() * m);
    const double res = sqrt_residual(x, m);
    if (res < best_res) {
      best = x;
      best_res = res;
    } else if (res > 10.0 * best_res) {
      break;
    }
  }
  return best;
}

}  // namespace

Mat4 principal_sqrt4(const Mat4& m) {
  Eigen::EigenSolver<Mat4> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::no_convergence, "principal_sqrt4: eigensolver failed");
  const Vec4c lam = solver.eigenvalues();
  const double scale = lam.cwiseAbs().maxCoeff();
  for (int k = 0; k < 4; ++k) {
    if (std::abs(lam(k)) < 1e-14 * std::max(1.0, scale))
      throw Error(ErrorCode::singular_matrix, "principal_sqrt4: singular input");
    if (lam(k).real() < 0.0 &&
        std::abs(lam(k).imag()) < 1e-12 * std::max(1.0, scale))
      throw Error(ErrorCode::branch_cut,
                  "principal_sqrt4: eigenvalue on the negative real axis");
  }

  Mat4 x = m.sqrt();
  if (sqrt_residual(x, m) <= 1e-12) return x;

  // The Schur route can mis-handle a repeated eigenvalue with Jordan
  // structure. When the whole spectrum is clustered, restart from the
  // terminating nilpotent series sqrt(lam (I + A)) and polish.
  Complex mean = 0.0;
  double spread = 0.0;
  for (int k = 0; k < 4; ++k) mean += lam(k);
  mean /= 4.0;
  for (int k = 0; k < 4; ++k) spread = std::max(spread, std::abs(lam(k) - mean));
  if (mean.real() > 0.0 && spread < 1e-4 * std::max(1.0, scale)) {
    const double l = mean.real();
    const Mat4 a = m / l - Mat4::Identity();
    const Mat4 series =
        std::sqrt(l) * (Mat4::Identity() + 0.5 * a - 0.125 * a * a +
                        0.0625 * a * a * a);
    const Mat4 polished = newton_refine(series, m);
    if (sqrt_residual(polished, m) < sqrt_residual(x, m)) x = polished;
  } else {
    x = newton_refine(x, m);
  }

  if (sqrt_residual(x, m) > 1e-10)
    throw Error(ErrorCode::no_convergence,
                "principal_sqrt4: residual " +
                    std::to_string(sqrt_residual(x, m)));
  return x;
}

HermitianEig hermitian_eig(const CMat& m) {
  const double scale = std::max(1.0, m.norm());
  if ((m - m.adjoint()).norm() > 1e-9 * scale)
    throw Error(ErrorCode::usage, "hermitian_eig: input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMat> solver(m);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::no_convergence, "hermitian_eig failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

}  // namespace loopgauge
