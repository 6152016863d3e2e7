#include "sqrbm/oracle.hpp"

#include "sqrbm/jacobi.hpp"
#include "sqrbm/model.hpp"

#include <cmath>

namespace sqrbm::oracle {

namespace {

int log2_dim(Eigen::Index dim) {
  int bits = 0;
  while ((Eigen::Index{1} << bits) < dim) ++bits;
  if ((Eigen::Index{1} << bits) != dim) throw std::domain_error("dimension is not a power of two");
  return bits;
}

void check_symmetric(const DenseOperator& a, const char* what) {
  if (a.rows() != a.cols()) throw std::domain_error(std::string(what) + ": not square");
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::domain_error(std::string(what) + ": not symmetric");
  }
}

// Sum of lambda log lambda over the spectrum, treating round-off negatives as 0.
double neg_entropy(const DenseOperator& rho) {
  const auto eig = jacobi_eigen(rho);
  double s = 0.0;
  for (double lambda : eig.values) {
    if (lambda > 0.0) s += lambda * std::log(lambda);
  }
  return s;
}

// Dense clamped Hamiltonian <v|H|v> on the 2^M hidden register.
DenseOperator clamped_hamiltonian(const Params& p, const SpinConfig& v) {
  const int m = p.n_hidden();
  const Eigen::Index dim = Eigen::Index{1} << m;
  DenseOperator h = DenseOperator::Zero(dim, dim);
  double visible_energy = 0.0;
  for (int i = 0; i < p.n_visible(); ++i) visible_energy -= p.b_v[i] * v[i];
  for (Eigen::Index s = 0; s < dim; ++s) {
    double e = visible_energy;
    for (int j = 0; j < m; ++j) {
      const double hj = ((s >> j) & 1) ? -1.0 : 1.0;
      double field = p.b_h[j];
      for (int i = 0; i < p.n_visible(); ++i) field += p.w(i, j) * v[i];
      e -= field * hj;
      h(s ^ (Eigen::Index{1} << j), s) -= p.gamma[j];
    }
    h(s, s) += e;
  }
  return h;
}

DenseOperator qubit_state(double mx, double mz) {
  DenseOperator r(2, 2);
  r << 0.5 * (1.0 + mz), 0.5 * mx, 0.5 * mx, 0.5 * (1.0 - mz);
  return r;
}

DenseOperator kron(const DenseOperator& a, const DenseOperator& b) {
  DenseOperator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

DenseOperator build_hamiltonian(const Params& p) {
  p.check_shape();
  const int n = p.n_visible();
  const int m = p.n_hidden();
  if (n + m > kMaxQubits) {
    throw ResourceError("dense oracle supports N+M <= " + std::to_string(kMaxQubits) + ", got " +
                        std::to_string(n + m));
  }
  const Eigen::Index dim = Eigen::Index{1} << (n + m);
  const Eigen::Index hidden_mask = (Eigen::Index{1} << m) - 1;
  DenseOperator h = DenseOperator::Zero(dim, dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    const auto v_index = static_cast<std::uint32_t>(s >> m);
    const Eigen::Index h_index = s & hidden_mask;
    const SpinConfig v{v_index, n};
    double e = 0.0;
    for (int i = 0; i < n; ++i) e -= p.b_v[i] * v[i];
    for (int j = 0; j < m; ++j) {
      const double hj = ((h_index >> j) & 1) ? -1.0 : 1.0;
      e -= p.b_h[j] * hj;
      for (int i = 0; i < n; ++i) e -= p.w(i, j) * v[i] * hj;
      h(s ^ (Eigen::Index{1} << j), s) -= p.gamma[j];
    }
    h(s, s) = e;
  }
  check_symmetric(h, "build_hamiltonian");
  return h;
}

GibbsState gibbs(const DenseOperator& h) {
  check_symmetric(h, "gibbs");
  const auto eig = jacobi_eigen(h);
  const double lambda_min = eig.values.minCoeff();
  const Eigen::VectorXd boltzmann = (-(eig.values.array() - lambda_min)).exp().matrix();
  const double z_shifted = boltzmann.sum();
  GibbsState out;
  out.log_partition = -lambda_min + std::log(z_shifted);
  out.rho = eig.vectors * (boltzmann / z_shifted).asDiagonal() * eig.vectors.transpose();
  out.log_rho = eig.vectors *
                (-(eig.values.array() + out.log_partition)).matrix().asDiagonal() *
                eig.vectors.transpose();
  return out;
}

DenseOperator gibbs_state(const DenseOperator& h) { return gibbs(h).rho; }

VisibleDistribution reduce_to_visible(const DenseOperator& rho, int n_visible) {
  const int qubits = log2_dim(rho.rows());
  if (rho.cols() != rho.rows() || n_visible < 1 || n_visible > qubits) {
    throw std::domain_error("reduce_to_visible: dimension mismatch");
  }
  const int m = qubits - n_visible;
  const Eigen::Index block = Eigen::Index{1} << m;
  Eigen::VectorXd probs(Eigen::Index{1} << n_visible);
  for (Eigen::Index v = 0; v < probs.size(); ++v) {
    const double p = rho.diagonal().segment(v * block, block).sum();
    probs[v] = (p < 0.0 && p > -1e-15) ? 0.0 : p;
  }
  return {n_visible, std::move(probs)};
}

DenseOperator conditional_hidden_state(const DenseOperator& rho, const SpinConfig& v) {
  const int qubits = log2_dim(rho.rows());
  if (v.n > qubits) throw std::domain_error("conditional_hidden_state: dimension mismatch");
  const Eigen::Index block = Eigen::Index{1} << (qubits - v.n);
  const DenseOperator b = rho.block(v.index * block, v.index * block, block, block);
  const double mass = b.trace();
  if (!(mass > 0.0)) {
    throw std::domain_error("conditional_hidden_state: configuration " + std::to_string(v.index) +
                            " has zero probability");
  }
  return b / mass;
}

DenseOperator classical_quantum_state(const VisibleDistribution& data,
                                      const std::vector<DenseOperator>& conditionals) {
  if (static_cast<Eigen::Index>(conditionals.size()) != data.size()) {
    throw std::domain_error("classical_quantum_state: need one conditional per configuration");
  }
  const Eigen::Index block = conditionals.front().rows();
  const Eigen::Index dim = block * data.size();
  DenseOperator out = DenseOperator::Zero(dim, dim);
  for (Eigen::Index v = 0; v < data.size(); ++v) {
    out.block(v * block, v * block, block, block) =
        data.probs()[v] * conditionals[static_cast<std::size_t>(v)];
  }
  return out;
}

DenseOperator matrix_log(const DenseOperator& positive_definite) {
  check_symmetric(positive_definite, "matrix_log");
  const auto eig = jacobi_eigen(positive_definite);
  if (eig.values.minCoeff() <= 0.0) throw std::domain_error("matrix_log: matrix is singular");
  return eig.vectors * eig.values.array().log().matrix().asDiagonal() * eig.vectors.transpose();
}

double quantum_relative_entropy(const DenseOperator& rho, const DenseOperator& sigma) {
  check_symmetric(rho, "quantum_relative_entropy");
  check_symmetric(sigma, "quantum_relative_entropy");
  if (rho.rows() != sigma.rows()) throw std::domain_error("quantum_relative_entropy: size mismatch");
  const auto eig = jacobi_eigen(sigma);
  const DenseOperator rotated = eig.vectors.transpose() * rho * eig.vectors;
  double cross = 0.0;
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    const double weight = rotated(k, k);
    if (eig.values[k] <= 0.0) {
      if (weight > 1e-14) {
        throw DivergenceInfinite("quantum_relative_entropy: sigma is singular on rho's support");
      }
      continue;
    }
    cross += weight * std::log(eig.values[k]);
  }
  return neg_entropy(rho) - cross;
}

double quantum_relative_entropy_with_log(const DenseOperator& rho, const DenseOperator& log_sigma) {
  if (rho.rows() != log_sigma.rows()) {
    throw std::domain_error("quantum_relative_entropy_with_log: size mismatch");
  }
  return neg_entropy(rho) - rho.cwiseProduct(log_sigma).sum();
}

GradientVector operator_expectations(const DenseOperator& state, int n_visible, int n_hidden) {
  if (state.rows() != (Eigen::Index{1} << (n_visible + n_hidden))) {
    throw std::domain_error("operator_expectations: dimension mismatch");
  }
  GradientVector out = GradientVector::zeros(n_visible, n_hidden);
  const Eigen::Index hidden_mask = (Eigen::Index{1} << n_hidden) - 1;
  for (Eigen::Index s = 0; s < state.rows(); ++s) {
    const double diag = state(s, s);
    const SpinConfig v{static_cast<std::uint32_t>(s >> n_hidden), n_visible};
    const Eigen::Index h = s & hidden_mask;
    for (int i = 0; i < n_visible; ++i) out.b_v[i] += diag * v[i];
    for (int j = 0; j < n_hidden; ++j) {
      const double hj = ((h >> j) & 1) ? -1.0 : 1.0;
      out.b_h[j] += diag * hj;
      out.gamma[j] += state(s, s ^ (Eigen::Index{1} << j));
      for (int i = 0; i < n_visible; ++i) out.w(i, j) += diag * v[i] * hj;
    }
  }
  return out;
}

GradientVector golden_thompson_bound_gradient(const Params& p, const VisibleDistribution& data) {
  const int n = p.n_visible();
  const int m = p.n_hidden();
  if (data.n_visible() != n) throw std::domain_error("golden_thompson_bound_gradient: data shape");
  const GibbsState full = gibbs(build_hamiltonian(p));

  GradientVector clamped = GradientVector::zeros(n, m);
  for (Eigen::Index vi = 0; vi < data.size(); ++vi) {
    const double pv = data.probs()[vi];
    if (pv == 0.0) continue;
    const SpinConfig v{static_cast<std::uint32_t>(vi), n};
    const DenseOperator rho_v = gibbs_state(clamped_hamiltonian(p, v));
    for (int i = 0; i < n; ++i) clamped.b_v[i] += pv * v[i];
    for (int j = 0; j < m; ++j) {
      double z = 0.0;
      double x = 0.0;
      for (Eigen::Index s = 0; s < rho_v.rows(); ++s) {
        z += rho_v(s, s) * (((s >> j) & 1) ? -1.0 : 1.0);
        x += rho_v(s, s ^ (Eigen::Index{1} << j));
      }
      clamped.b_h[j] += pv * z;
      clamped.gamma[j] += pv * x;
      for (int i = 0; i < n; ++i) clamped.w(i, j) += pv * v[i] * z;
    }
  }
  // dH/dtheta = -O_theta, so the bound's gradient is <O>_model - avg <O>_clamped.
  return operator_expectations(full.rho, n, m) - clamped;
}

std::vector<CrossCheck> cross_check(const Params& p, const Params& p_t,
                                    const VisibleDistribution& data) {
  const int n = p.n_visible();
  const int m = p.n_hidden();
  const GibbsState g = gibbs(build_hamiltonian(p));
  const GibbsState g_t = gibbs(build_hamiltonian(p_t));
  const EvaluatedModel model(p);
  const EvaluatedModel model_t(p_t);
  const VisibleDistribution oracle_marginal = reduce_to_visible(g.rho, n);

  std::vector<CrossCheck> out;
  out.push_back({"visible_marginal",
                 (oracle_marginal.probs() - model.marginal().probs()).cwiseAbs().maxCoeff()});

  {
    // log <v|Tr_H e^{-H}|v> against the unnormalized closed-form log-weight,
    // which differ by the constant M log 2.
    double dev = 0.0;
    for (Eigen::Index v = 0; v < data.size(); ++v) {
      const double oracle_lw = std::log(oracle_marginal.probs()[v]) + g.log_partition;
      const double closed = model.log_weights()[v] + m * std::log(2.0);
      dev = std::max(dev, std::abs(oracle_lw - closed));
    }
    out.push_back({"log_visible_weight", dev});
  }
  out.push_back({"log_partition", std::abs(g.log_partition - model.log_partition())});

  out.push_back({"negative_phase",
                 max_abs_diff(operator_expectations(g.rho, n, m), negative_phase(p))});

  std::vector<DenseOperator> cond(static_cast<std::size_t>(data.size()));
  std::vector<DenseOperator> cond_t(static_cast<std::size_t>(data.size()));
  double cond_dev = 0.0;
  double cre = 0.0;
  const Eigen::Index block = Eigen::Index{1} << m;
  for (Eigen::Index vi = 0; vi < data.size(); ++vi) {
    const SpinConfig v{static_cast<std::uint32_t>(vi), n};
    const auto k = static_cast<std::size_t>(vi);
    cond[k] = conditional_hidden_state(g.rho, v);
    cond_t[k] = conditional_hidden_state(g_t.rho, v);

    DenseOperator product = DenseOperator::Ones(1, 1);
    for (int j = m - 1; j >= 0; --j) {
      const HiddenLocalState h = model.hidden_state(v.index, j);
      product = kron(product, qubit_state(h.mx, h.mz));
    }
    cond_dev = std::max(cond_dev, (cond[k] - product).cwiseAbs().maxCoeff());

    const double pv = data.probs()[vi];
    if (pv > 0.0) {
      const DenseOperator log_cond =
          g.log_rho.block(vi * block, vi * block, block, block) -
          std::log(oracle_marginal.probs()[vi]) * DenseOperator::Identity(block, block);
      cre += pv * quantum_relative_entropy_with_log(cond_t[k], log_cond);
    }
  }
  out.push_back({"conditional_hidden_state", cond_dev});

  const DenseOperator mixed = classical_quantum_state(data, cond);
  out.push_back({"positive_phase",
                 max_abs_diff(operator_expectations(mixed, n, m), positive_phase(p, data))});

  out.push_back({"conditional_relative_entropy",
                 std::abs(cre - conditional_relative_entropy_term(model_t, model, data))});

  const DenseOperator target = classical_quantum_state(data, cond_t);
  const double joint_oracle = quantum_relative_entropy_with_log(target, g.log_rho);
  out.push_back(
      {"joint_objective", std::abs(joint_oracle - joint_objective(model_t, model, data))});

  const GradientVector closed_grad = negative_phase(p) - positive_phase(p, data);
  out.push_back({"golden_thompson_gradient",
                 max_abs_diff(golden_thompson_bound_gradient(p, data), closed_grad)});
  return out;
}

}  // namespace sqrbm::oracle
