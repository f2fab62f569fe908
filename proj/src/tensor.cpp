#include "qshyp/tensor.hpp"

#include <cmath>
#include <stdexcept>

#include "qshyp/errors.hpp"

namespace qshyp {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
const double kInvSqrt6 = 1.0 / std::sqrt(6.0);

}  // namespace

Mat3 Mat3::identity() { return diag(1.0, 1.0, 1.0); }

Mat3 Mat3::diag(double a, double b, double c) {
  Mat3 r;
  r(0, 0) = a;
  r(1, 1) = b;
  r(2, 2) = c;
  return r;
}

Mat3 Mat3::transpose() const {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
  return r;
}

double Mat3::trace() const { return m[0] + m[4] + m[8]; }

double Mat3::frobenius_sq() const {
  double s = 0.0;
  for (double x : m) s += x * x;
  return s;
}

bool Mat3::finite() const {
  for (double x : m)
    if (!std::isfinite(x)) return false;
  return true;
}

Mat3 operator+(const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (std::size_t k = 0; k < 9; ++k) r.m[k] = a.m[k] + b.m[k];
  return r;
}

Mat3 operator-(const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (std::size_t k = 0; k < 9; ++k) r.m[k] = a.m[k] - b.m[k];
  return r;
}

Mat3 operator*(double s, const Mat3& a) {
  Mat3 r;
  for (std::size_t k = 0; k < 9; ++k) r.m[k] = s * a.m[k];
  return r;
}

Mat3 operator*(const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += a(i, k) * b(k, j);
      r(i, j) = s;
    }
  return r;
}

TracelessSymTensor TracelessSymTensor::basis(int i) {
  if (i < 0 || i >= kTensorComponents) throw InvalidInput("basis index out of range");
  TracelessSymTensor t;
  t.c[static_cast<std::size_t>(i)] = 1.0;
  return t;
}

Mat3 TracelessSymTensor::to_matrix() const {
  Mat3 r;
  r(0, 0) = kInvSqrt2 * c[0] - kInvSqrt6 * c[1];
  r(1, 1) = -kInvSqrt2 * c[0] - kInvSqrt6 * c[1];
  r(2, 2) = 2.0 * kInvSqrt6 * c[1];
  r(0, 1) = r(1, 0) = kInvSqrt2 * c[2];
  r(0, 2) = r(2, 0) = kInvSqrt2 * c[3];
  r(1, 2) = r(2, 1) = kInvSqrt2 * c[4];
  return r;
}

TracelessSymTensor& TracelessSymTensor::operator+=(const TracelessSymTensor& o) {
  for (std::size_t k = 0; k < c.size(); ++k) c[k] += o.c[k];
  return *this;
}

TracelessSymTensor& TracelessSymTensor::operator-=(const TracelessSymTensor& o) {
  for (std::size_t k = 0; k < c.size(); ++k) c[k] -= o.c[k];
  return *this;
}

TracelessSymTensor& TracelessSymTensor::operator*=(double s) {
  for (double& x : c) x *= s;
  return *this;
}

Mat3 basis_matrix(int i) { return TracelessSymTensor::basis(i).to_matrix(); }

TracelessSymTensor project_traceless_symmetric(const Mat3& m) {
  if (!m.finite()) throw InvalidInput("project_traceless_symmetric: non-finite matrix entry");
  // Coefficients are inner products with the basis; the trace part is
  // orthogonal to every Bi and drops out.
  TracelessSymTensor r;
  r.c[0] = kInvSqrt2 * (m(0, 0) - m(1, 1));
  r.c[1] = kInvSqrt6 * (2.0 * m(2, 2) - m(0, 0) - m(1, 1));
  r.c[2] = kInvSqrt2 * (m(0, 1) + m(1, 0));
  r.c[3] = kInvSqrt2 * (m(0, 2) + m(2, 0));
  r.c[4] = kInvSqrt2 * (m(1, 2) + m(2, 1));
  return r;
}

double frobenius_inner(const TracelessSymTensor& a, const TracelessSymTensor& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.c.size(); ++k) s += a.c[k] * b.c[k];
  return s;
}

double frobenius_norm_sq(const TracelessSymTensor& a) { return frobenius_inner(a, a); }

TracelessSymTensor traceless_square(const TracelessSymTensor& q) {
  const Mat3 m = q.to_matrix();
  return project_traceless_symmetric(m * m);
}

double tr_Q3(const TracelessSymTensor& q) {
  const Mat3 m = q.to_matrix();
  const Mat3 m2 = m * m;
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) s += m2(i, k) * m(k, i);
  return s;
}

TracelessSymTensor conjugate(const Mat3& r, const TracelessSymTensor& q) {
  return project_traceless_symmetric(r * q.to_matrix() * r.transpose());
}

}  // namespace qshyp
