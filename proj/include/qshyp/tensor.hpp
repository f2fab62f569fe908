#pragma once

#include <array>
#include <cstddef>

namespace qshyp {

/// Dense 3x3 real matrix, row-major.
struct Mat3 {
  std::array<double, 9> m{};

  double& operator()(int i, int j) { return m[static_cast<std::size_t>(3 * i + j)]; }
  double operator()(int i, int j) const { return m[static_cast<std::size_t>(3 * i + j)]; }

  static Mat3 identity();
  static Mat3 diag(double a, double b, double c);

  Mat3 transpose() const;
  double trace() const;
  double frobenius_sq() const;
  bool finite() const;

  friend Mat3 operator+(const Mat3& a, const Mat3& b);
  friend Mat3 operator-(const Mat3& a, const Mat3& b);
  friend Mat3 operator*(double s, const Mat3& a);
  friend Mat3 operator*(const Mat3& a, const Mat3& b);
};

/// Number of coefficients of a symmetric traceless 3x3 matrix.
inline constexpr int kTensorComponents = 5;

/// Identifier of the basis below, written into checkpoints.
inline constexpr unsigned kBasisId = 1;

/// Symmetric traceless 3x3 matrix stored in the orthonormal basis
///
///   B1 = (e1e1 - e2e2)/sqrt2,  B2 = (2 e3e3 - e1e1 - e2e2)/sqrt6,
///   B3 = (e1e2 + e2e1)/sqrt2,  B4 = (e1e3 + e3e1)/sqrt2,
///   B5 = (e2e3 + e3e2)/sqrt2,
///
/// so that Bi:Bj = delta_ij and |M|_F^2 = sum c_i^2. Symmetry and zero trace
/// hold by construction.
struct TracelessSymTensor {
  std::array<double, kTensorComponents> c{};

  static TracelessSymTensor basis(int i);

  Mat3 to_matrix() const;

  TracelessSymTensor& operator+=(const TracelessSymTensor& o);
  TracelessSymTensor& operator-=(const TracelessSymTensor& o);
  TracelessSymTensor& operator*=(double s);

  friend TracelessSymTensor operator+(TracelessSymTensor a, const TracelessSymTensor& b) { return a += b; }
  friend TracelessSymTensor operator-(TracelessSymTensor a, const TracelessSymTensor& b) { return a -= b; }
  friend TracelessSymTensor operator*(double s, TracelessSymTensor a) { return a *= s; }
};

/// Matrix of basis element i (0-based).
Mat3 basis_matrix(int i);

/// (M + M^T)/2 - tr(M)/3 I in basis coefficients. Throws InvalidInput on
/// non-finite entries.
TracelessSymTensor project_traceless_symmetric(const Mat3& m);

/// A:B = tr(AB).
double frobenius_inner(const TracelessSymTensor& a, const TracelessSymTensor& b);

double frobenius_norm_sq(const TracelessSymTensor& a);

/// Q^2 - tr(Q^2)/3 I.
TracelessSymTensor traceless_square(const TracelessSymTensor& q);

/// tr(Q^3).
double tr_Q3(const TracelessSymTensor& q);

/// R Q R^T, re-expressed in the basis.
TracelessSymTensor conjugate(const Mat3& r, const TracelessSymTensor& q);

}  // namespace qshyp
