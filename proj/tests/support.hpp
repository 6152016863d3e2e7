// Test-side oracles. None of these call into the closed forms under test.
#pragma once

#include "sqrbm/core.hpp"
#include "sqrbm/params.hpp"
#include "sqrbm/rng.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>

namespace sqrbm::testing {

inline Params random_params(int n, int m, Xoshiro256& rng, double range) {
  Params p = Params::zeros(n, m);
  for (auto& x : p.b_v) x = rng.uniform(-range, range);
  for (auto& x : p.b_h) x = rng.uniform(-range, range);
  for (auto& x : p.gamma) x = rng.uniform(-range, range);
  for (auto& x : p.w.reshaped()) x = rng.uniform(-range, range);
  return p;
}

inline VisibleDistribution random_distribution(int n, Xoshiro256& rng, bool with_zeros = false) {
  Eigen::VectorXd w(Eigen::Index{1} << n);
  for (auto& x : w) x = (with_zeros && rng.uniform01() < 0.3) ? 0.0 : 0.05 + rng.uniform01();
  if (w.sum() == 0.0) w[0] = 1.0;
  return VisibleDistribution(n, w / w.sum());
}

inline int spin(std::uint32_t index, int k) { return ((index >> k) & 1U) ? -1 : 1; }

/// Classical RBM marginal by brute-force (v, h) enumeration; gamma is ignored.
inline Eigen::VectorXd classical_rbm_marginal(const Params& p) {
  const int n = p.n_visible();
  const int m = p.n_hidden();
  Eigen::VectorXd log_w(Eigen::Index{1} << n);
  for (std::uint32_t v = 0; v < (1U << n); ++v) {
    std::vector<double> terms;
    for (std::uint32_t h = 0; h < (1U << m); ++h) {
      double e = 0.0;
      for (int i = 0; i < n; ++i) e += p.b_v[i] * spin(v, i);
      for (int j = 0; j < m; ++j) {
        e += p.b_h[j] * spin(h, j);
        for (int i = 0; i < n; ++i) e += p.w(i, j) * spin(v, i) * spin(h, j);
      }
      terms.push_back(e);
    }
    const double top = *std::max_element(terms.begin(), terms.end());
    double s = 0.0;
    for (double t : terms) s += std::exp(t - top);
    log_w[v] = top + std::log(s);
  }
  const double top = log_w.maxCoeff();
  Eigen::VectorXd out = (log_w.array() - top).exp();
  return out / out.sum();
}

/// exp(-H) / Tr exp(-H) for the one-qubit H = -(bz sz + gx sx), via Eigen.
inline Eigen::Matrix2d qubit_gibbs(double bz, double gx) {
  Eigen::Matrix2d h;
  h << -bz, -gx, -gx, bz;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(h);
  const Eigen::Vector2d e = (-(es.eigenvalues().array() - es.eigenvalues().minCoeff())).exp();
  Eigen::Matrix2d rho = es.eigenvectors() * e.asDiagonal() * es.eigenvectors().transpose();
  return rho / rho.trace();
}

inline Eigen::Matrix2d qubit_log(const Eigen::Matrix2d& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(rho);
  return es.eigenvectors() * es.eigenvalues().array().log().matrix().asDiagonal() *
         es.eigenvectors().transpose();
}

/// Central differences of f over the flattened parameters.
inline Eigen::VectorXd finite_difference(const std::function<double(const Params&)>& f,
                                         const Params& p, double step) {
  const Eigen::VectorXd x = p.flatten();
  Eigen::VectorXd g(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Eigen::VectorXd hi = x, lo = x;
    hi[k] += step;
    lo[k] -= step;
    g[k] = (f(Params::unflatten(p.n_visible(), p.n_hidden(), hi)) -
            f(Params::unflatten(p.n_visible(), p.n_hidden(), lo))) /
           (2 * step);
  }
  return g;
}

}  // namespace sqrbm::testing
