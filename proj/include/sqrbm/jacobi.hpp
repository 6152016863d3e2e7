#pragma once

#include <Eigen/Dense>
#include <Eigen/Jacobi>

#include <cmath>
#include <stdexcept>

namespace sqrbm {

template <typename Scalar>
struct SymmetricEigen {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> values;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> vectors;  // columns
  int sweeps = 0;
};

/// Cyclic Jacobi eigendecomposition A = V diag(values) V^T of a real symmetric
/// matrix. Pairs whose off-diagonal entry is exactly zero are never rotated, so
/// a block-diagonal input keeps block-local eigenvectors with exact zeros
/// outside the block.
///
/// Converges when the off-diagonal Frobenius norm drops below
/// `tol * max(1, ||A||_F)`; throws std::runtime_error after `max_sweeps`.
template <typename Derived>
SymmetricEigen<typename Derived::Scalar> jacobi_eigen(const Eigen::MatrixBase<Derived>& input,
                                                      typename Derived::Scalar tol = 1e-13,
                                                      int max_sweeps = 100) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  if (input.rows() != input.cols()) throw std::domain_error("jacobi_eigen: matrix not square");
  Matrix a = input;
  const Eigen::Index n = a.rows();
  Matrix v = Matrix::Identity(n, n);

  const Scalar scale = std::max(Scalar(1), a.norm());
  auto off_norm = [&] {
    Scalar s(0);
    for (Eigen::Index q = 1; q < n; ++q)
      for (Eigen::Index p = 0; p < q; ++p) s += a(p, q) * a(p, q);
    return std::sqrt(Scalar(2) * s);
  };

  SymmetricEigen<Scalar> out;
  for (int sweep = 0;; ++sweep) {
    if (off_norm() <= tol * scale) {
      out.sweeps = sweep;
      break;
    }
    if (sweep == max_sweeps) throw std::runtime_error("jacobi_eigen: no convergence");
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (a(p, q) == Scalar(0)) continue;
        Eigen::JacobiRotation<Scalar> rot;
        rot.makeJacobi(a(p, p), a(p, q), a(q, q));
        a.applyOnTheLeft(p, q, rot.adjoint());
        a.applyOnTheRight(p, q, rot);
        a(p, q) = a(q, p) = Scalar(0);
        v.applyOnTheRight(p, q, rot);
      }
    }
  }
  out.values = a.diagonal();
  out.vectors = std::move(v);
  return out;
}

}  // namespace sqrbm
