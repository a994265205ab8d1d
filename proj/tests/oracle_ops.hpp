#pragma once

// Truncated-space operator builders for the trace oracles. Displacements are
// built by matrix exponentials of the ladder operators, deliberately not
// through the closed-form matrix elements the library uses, so agreement is
// evidence rather than tautology.

#include <Eigen/Dense>
#include <complex>
#include <unsupported/Eigen/MatrixFunctions>
#include <vector>

#include "jstomo/half_int.hpp"
#include "jstomo/hilbert.hpp"

namespace oracle_ops {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using jstomo::HalfInt;

inline Matrix annihilation(int cutoff) {
  Matrix a = Matrix::Zero(cutoff + 1, cutoff + 1);
  for (int n = 1; n <= cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

inline Matrix displacement_exp(cplx xi, int cutoff) {
  Matrix a = annihilation(cutoff);
  Matrix gen = xi * a.adjoint() - std::conj(xi) * a;
  return gen.exp();
}

inline Matrix parity(int cutoff) {
  Matrix p = Matrix::Zero(cutoff + 1, cutoff + 1);
  for (int n = 0; n <= cutoff; ++n) p(n, n) = n % 2 == 0 ? 1.0 : -1.0;
  return p;
}

inline Matrix position(int cutoff) {
  Matrix a = annihilation(cutoff);
  return (a + a.adjoint()) / std::sqrt(2.0);
}

inline Matrix momentum(int cutoff) {
  Matrix a = annihilation(cutoff);
  return (a - a.adjoint()) / cplx(0.0, std::sqrt(2.0));
}

inline Matrix kron(const Matrix& A, const Matrix& B) {
  Matrix out(A.rows() * B.rows(), A.cols() * B.cols());
  for (int i = 0; i < A.rows(); ++i)
    for (int k = 0; k < A.cols(); ++k)
      out.block(i * B.rows(), k * B.cols(), B.rows(), B.cols()) = A(i, k) * B;
  return out;
}

/// Spin-y generator in the descending-m basis (m = +j first).
inline Matrix spin_y(HalfInt j) {
  int dim = j.twice() + 1;
  Matrix sp = Matrix::Zero(dim, dim);  // raising operator
  double jj = j.value();
  for (int k = 1; k < dim; ++k) {
    double m = jj - k;  // S+|j,m> = sqrt(j(j+1)-m(m+1)) |j,m+1>
    sp(k - 1, k) = std::sqrt(jj * (jj + 1.0) - m * (m + 1.0));
  }
  return (sp - sp.adjoint()) / cplx(0.0, 2.0);
}

inline Matrix spin_z(HalfInt j) {
  int dim = j.twice() + 1;
  Matrix sz = Matrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) sz(k, k) = j.value() - k;
  return sz;
}

/// Rotation matrix exp(-i a Sz) exp(-i b Sy) exp(-i c Sz).
inline Matrix rotation(HalfInt j, const jstomo::EulerAngles& om) {
  Matrix sy = spin_y(j), sz = spin_z(j);
  Matrix ez1 = (cplx(0.0, -om.alpha) * sz).exp();
  Matrix ey = (cplx(0.0, -om.beta) * sy).exp();
  Matrix ez2 = (cplx(0.0, -om.gamma) * sz).exp();
  return ez1 * ey * ez2;
}

/// Flat two-mode indices of the sector states |j+m, j-m>, m descending.
inline std::vector<int> sector_indices(HalfInt j, int cutoff) {
  std::vector<int> idx;
  for (int m2 = j.twice(); m2 >= -j.twice(); m2 -= 2)
    idx.push_back(((j.twice() + m2) / 2) * (cutoff + 1) + (j.twice() - m2) / 2);
  return idx;
}

/// Embed a sector-supported matrix into the full two-mode space.
inline Matrix lift_sector(HalfInt j, const Matrix& block, int cutoff) {
  int dim = (cutoff + 1) * (cutoff + 1);
  Matrix out = Matrix::Zero(dim, dim);
  auto idx = sector_indices(j, cutoff);
  for (size_t a = 0; a < idx.size(); ++a)
    for (size_t b = 0; b < idx.size(); ++b)
      out(idx[a], idx[b]) = block(static_cast<int>(a), static_cast<int>(b));
  return out;
}

/// Trace against an operator supported on one sector without forming the
/// full product.
inline cplx sector_trace(HalfInt j, const Matrix& full_op, const Matrix& block,
                         int cutoff) {
  auto idx = sector_indices(j, cutoff);
  cplx tr = 0.0;
  for (size_t a = 0; a < idx.size(); ++a)
    for (size_t b = 0; b < idx.size(); ++b)
      tr += full_op(idx[b], idx[a]) * block(static_cast<int>(a), static_cast<int>(b));
  return tr;
}

}  // namespace oracle_ops
