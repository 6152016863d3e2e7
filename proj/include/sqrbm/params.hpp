#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace sqrbm {

/// Trainable sqRBM parameters (or a gradient of the same shape).
///   b_v   : visible biases, length N
///   b_h   : hidden longitudinal biases, length M
///   gamma : hidden transverse fields, length M
///   w     : visible-hidden couplings, N x M
/// Flattened order everywhere is b_v, b_h, gamma, then w row-major.
template <typename Scalar>
struct ParamSet {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Vector b_v;
  Vector b_h;
  Vector gamma;
  Matrix w;

  static ParamSet zeros(int n_visible, int n_hidden) {
    if (n_visible < 1 || n_hidden < 0) {
      throw std::domain_error("invalid shape (" + std::to_string(n_visible) + ", " +
                              std::to_string(n_hidden) + ")");
    }
    return {Vector::Zero(n_visible), Vector::Zero(n_hidden), Vector::Zero(n_hidden),
            Matrix::Zero(n_visible, n_hidden)};
  }

  int n_visible() const { return static_cast<int>(b_v.size()); }
  int n_hidden() const { return static_cast<int>(b_h.size()); }
  Eigen::Index size() const { return b_v.size() + b_h.size() + gamma.size() + w.size(); }

  bool same_shape(const ParamSet& o) const {
    return b_v.size() == o.b_v.size() && b_h.size() == o.b_h.size() &&
           gamma.size() == o.gamma.size() && w.rows() == o.w.rows() && w.cols() == o.w.cols();
  }

  /// Throws unless the four blocks agree on (N, M).
  void check_shape() const {
    const auto n = b_v.size();
    const auto m = b_h.size();
    if (n < 1 || gamma.size() != m || w.rows() != n || w.cols() != m) {
      throw std::domain_error("inconsistent parameter shapes");
    }
  }

  bool all_finite() const {
    return b_v.allFinite() && b_h.allFinite() && gamma.allFinite() && w.allFinite();
  }

  Vector flatten() const {
    Vector out(size());
    Eigen::Index k = 0;
    for (auto x : b_v) out[k++] = x;
    for (auto x : b_h) out[k++] = x;
    for (auto x : gamma) out[k++] = x;
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index j = 0; j < w.cols(); ++j) out[k++] = w(i, j);
    return out;
  }

  static ParamSet unflatten(int n_visible, int n_hidden, const Vector& flat) {
    ParamSet p = zeros(n_visible, n_hidden);
    if (flat.size() != p.size()) throw std::domain_error("flat parameter vector has wrong length");
    Eigen::Index k = 0;
    for (auto& x : p.b_v) x = flat[k++];
    for (auto& x : p.b_h) x = flat[k++];
    for (auto& x : p.gamma) x = flat[k++];
    for (Eigen::Index i = 0; i < p.w.rows(); ++i)
      for (Eigen::Index j = 0; j < p.w.cols(); ++j) p.w(i, j) = flat[k++];
    return p;
  }

  /// Human-readable name of flattened entry k, e.g. "w[1][0]".
  std::string entry_name(Eigen::Index k) const {
    const auto n = b_v.size();
    const auto m = b_h.size();
    if (k < n) return "b_v[" + std::to_string(k) + "]";
    k -= n;
    if (k < m) return "b_h[" + std::to_string(k) + "]";
    k -= m;
    if (k < m) return "gamma[" + std::to_string(k) + "]";
    k -= m;
    return "w[" + std::to_string(k / m) + "][" + std::to_string(k % m) + "]";
  }

  ParamSet& operator+=(const ParamSet& o) {
    b_v += o.b_v;
    b_h += o.b_h;
    gamma += o.gamma;
    w += o.w;
    return *this;
  }
  ParamSet& operator-=(const ParamSet& o) {
    b_v -= o.b_v;
    b_h -= o.b_h;
    gamma -= o.gamma;
    w -= o.w;
    return *this;
  }
  ParamSet& operator*=(Scalar s) {
    b_v *= s;
    b_h *= s;
    gamma *= s;
    w *= s;
    return *this;
  }

  friend ParamSet operator+(ParamSet a, const ParamSet& b) { return a += b; }
  friend ParamSet operator-(ParamSet a, const ParamSet& b) { return a -= b; }
  friend ParamSet operator*(Scalar s, ParamSet a) { return a *= s; }
  friend ParamSet operator*(ParamSet a, Scalar s) { return a *= s; }

  friend bool operator==(const ParamSet& a, const ParamSet& b) {
    return a.same_shape(b) && a.b_v == b.b_v && a.b_h == b.b_h && a.gamma == b.gamma &&
           a.w == b.w;
  }
};

using Params = ParamSet<double>;
/// Same layout as Params; each entry is a derivative or expectation per parameter.
using GradientVector = ParamSet<double>;

template <typename Scalar>
Scalar max_abs_diff(const ParamSet<Scalar>& a, const ParamSet<Scalar>& b) {
  if (!a.same_shape(b)) throw std::domain_error("max_abs_diff: shape mismatch");
  if (a.size() == 0) return Scalar(0);
  return (a.flatten() - b.flatten()).cwiseAbs().maxCoeff();
}

}  // namespace sqrbm
