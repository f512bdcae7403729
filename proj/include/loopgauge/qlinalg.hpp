#pragma once

#include <complex>
#include <utility>

#include <Eigen/Dense>

#include "loopgauge/errors.hpp"

namespace loopgauge {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using Mat2c = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4d;
using Mat4c = Eigen::Matrix4cd;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Vec4c = Eigen::Vector4cd;

/// Pauli basis: pauli(0) is the identity, then x, y, z.
/// tr(pauli(i) * pauli(j)) = 2 delta_ij.
Mat2c pauli(int i);

/// Kronecker product. The result dimension is capped at 256x256.
CMat kron(const CMat& a, const CMat& b);

/// Trace out every qubit except the ordered pair `keep`.
/// Qubit 0 is the leftmost tensor factor (most significant bit of the basis
/// label); keep.first becomes the first factor of the 4x4 result.
CMat partial_trace(const CMat& rho, std::pair<int, int> keep);

struct EigenSystem4 {
  Vec4c values;
  Mat4c vectors;             // unit-norm eigenvectors in columns
  double vector_condition = 0.0;
  bool defect_flag = false;  // no usable eigenbasis at the given threshold
};

/// Eigenpairs of a general (non-symmetric) real 4x4 matrix. Complex
/// conjugate pairs are allowed. defect_flag is set when the eigenvector
/// matrix condition number exceeds `defect_threshold`.
EigenSystem4 eig_real4(const Mat4& m, double defect_threshold = 1e8);

/// Principal square root of a real 4x4 matrix: the root whose spectrum
/// lies in the right half-plane. Requires an invertible input with no
/// eigenvalue on the closed negative real axis; defective inputs are fine.
Mat4 principal_sqrt4(const Mat4& m);

struct HermitianEig {
  Eigen::VectorXd values;  // ascending
  CMat vectors;
};

/// Eigendecomposition of a Hermitian matrix (input checked for Hermiticity).
HermitianEig hermitian_eig(const CMat& m);

}  // namespace loopgauge
