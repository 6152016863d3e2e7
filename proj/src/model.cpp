#include "sqrbm/model.hpp"

#include <cmath>
#include <numbers>

namespace sqrbm {

namespace {

void check_hidden_index(const Params& p, int j) {
  if (j < 0 || j >= p.n_hidden()) {
    throw std::domain_error("hidden index " + std::to_string(j) + " out of range [0, " +
                            std::to_string(p.n_hidden()) + ")");
  }
}

void check_config(const Params& p, const SpinConfig& v) {
  if (v.n != p.n_visible()) {
    throw std::domain_error("configuration has " + std::to_string(v.n) +
                            " spins, model has " + std::to_string(p.n_visible()));
  }
}

void check_data(const Params& p, const VisibleDistribution& data) {
  if (data.n_visible() != p.n_visible()) {
    throw std::domain_error("data has n_visible=" + std::to_string(data.n_visible()) +
                            ", model has " + std::to_string(p.n_visible()));
  }
}

HiddenLocalState make_state(double b_eff, double gamma) {
  const double d = std::hypot(gamma, b_eff);
  const double r = tanh_ratio(d);
  return {b_eff, d, b_eff * r, gamma * r, gamma};
}

}  // namespace

double tanh_ratio(double d) {
  if (d < 1e-12) return 1.0;
  if (d < 1e-4) {
    const double d2 = d * d;
    return 1.0 - d2 / 3.0 + 2.0 * d2 * d2 / 15.0;
  }
  return std::tanh(d) / d;
}

double effective_field(const Params& p, const SpinConfig& v, int j) {
  check_hidden_index(p, j);
  check_config(p, v);
  double field = p.b_h[j];
  for (int i = 0; i < p.n_visible(); ++i) field += p.w(i, j) * v[i];
  return field;
}

double hidden_gap(const Params& p, const SpinConfig& v, int j) {
  return std::hypot(p.gamma[j], effective_field(p, v, j));
}

HiddenLocalState clamped_hidden_state(const Params& p, const SpinConfig& v, int j) {
  return make_state(effective_field(p, v, j), p.gamma[j]);
}

double qubit_relative_entropy(const HiddenLocalState& a, const HiddenLocalState& b) {
  // Tr rho_a log rho_a = d_a tanh d_a - log(2 cosh d_a); Tr rho_a log rho_b =
  // m_a . field_b - log(2 cosh d_b). The log 2 terms cancel.
  const double self = a.d * std::tanh(a.d) - log_cosh(a.d);
  const double cross = a.mx * b.gamma + a.mz * b.b_eff - log_cosh(b.d);
  return self - cross;
}

double log_visible_weight(const Params& p, const SpinConfig& v) {
  check_config(p, v);
  double lw = 0.0;
  for (int i = 0; i < p.n_visible(); ++i) lw += p.b_v[i] * v[i];
  for (int j = 0; j < p.n_hidden(); ++j) lw += log_cosh(hidden_gap(p, v, j));
  return lw;
}

EvaluatedModel::EvaluatedModel(const Params& p) : params_(p) {
  params_.check_shape();
  const int n = params_.n_visible();
  const int m = params_.n_hidden();
  check_enumeration_size(n);
  if (!params_.all_finite()) {
    const auto flat = params_.flatten();
    for (Eigen::Index k = 0; k < flat.size(); ++k) {
      if (!std::isfinite(flat[k])) {
        throw NumericError("non-finite parameter " + params_.entry_name(k));
      }
    }
  }

  const Eigen::Index configs = Eigen::Index{1} << n;
  b_eff_.resize(configs, m);
  gap_.resize(configs, m);
  ratio_.resize(configs, m);
  log_weights_.resize(configs);
  for (Eigen::Index v = 0; v < configs; ++v) {
    const Eigen::VectorXd s = spin_vector(static_cast<std::uint32_t>(v), n);
    b_eff_.row(v) = params_.b_h.transpose() + s.transpose() * params_.w;
    double lw = params_.b_v.dot(s);
    for (int j = 0; j < m; ++j) {
      const double d = std::hypot(params_.gamma[j], b_eff_(v, j));
      gap_(v, j) = d;
      ratio_(v, j) = tanh_ratio(d);
      lw += log_cosh(d);
    }
    log_weights_[v] = lw;
  }

  if (!log_weights_.allFinite()) throw NumericError("non-finite visible log-weight");
  // Normalizing the shifted weights directly keeps equal log-weights exactly equal.
  const double top = log_weights_.maxCoeff();
  const Eigen::VectorXd shifted = (log_weights_.array() - top).exp().matrix();
  const double total = shifted.sum();
  log_partition_ = top + std::log(total) + m * std::numbers::ln2;
  marginal_ = VisibleDistribution(n, shifted / total);
}

HiddenLocalState EvaluatedModel::hidden_state(std::uint32_t v, int j) const {
  const double b = b_eff_(v, j);
  const double g = params_.gamma[j];
  const double r = ratio_(v, j);
  return {b, gap_(v, j), b * r, g * r, g};
}

GradientVector EvaluatedModel::expectations(const Eigen::VectorXd& weights) const {
  const int n = n_visible();
  const Eigen::Index configs = log_weights_.size();
  if (weights.size() != configs) throw std::domain_error("expectations: weight vector size");

  Eigen::MatrixXd spins(configs, n);
  for (Eigen::Index v = 0; v < configs; ++v) {
    spins.row(v) = spin_vector(static_cast<std::uint32_t>(v), n).transpose();
  }
  const Eigen::MatrixXd mz = b_eff_.cwiseProduct(ratio_);

  GradientVector out;
  out.b_v = spins.transpose() * weights;
  out.b_h = mz.transpose() * weights;
  out.gamma = params_.gamma.cwiseProduct(ratio_.transpose() * weights);
  out.w = spins.transpose() * weights.asDiagonal() * mz;
  return out;
}

double conditional_relative_entropy_term(const EvaluatedModel& model_t, const EvaluatedModel& model,
                                         const VisibleDistribution& data) {
  check_data(model.params(), data);
  if (!model_t.params().same_shape(model.params())) {
    throw std::domain_error("conditional_relative_entropy_term: shape mismatch");
  }
  double total = 0.0;
  for (Eigen::Index v = 0; v < data.size(); ++v) {
    const double pv = data.probs()[v];
    if (pv == 0.0) continue;
    double per_v = 0.0;
    for (int j = 0; j < model.n_hidden(); ++j) {
      const auto idx = static_cast<std::uint32_t>(v);
      per_v += qubit_relative_entropy(model_t.hidden_state(idx, j), model.hidden_state(idx, j));
    }
    total += pv * per_v;
  }
  return total;
}

double log_partition(const Params& p) { return EvaluatedModel(p).log_partition(); }

VisibleDistribution visible_marginal(const Params& p) { return EvaluatedModel(p).marginal(); }

GradientVector positive_phase(const Params& p, const VisibleDistribution& data) {
  check_data(p, data);
  return EvaluatedModel(p).expectations(data.probs());
}

GradientVector negative_phase(const Params& p) {
  const EvaluatedModel model(p);
  return model.expectations(model.marginal().probs());
}

double conditional_relative_entropy_term(const Params& p_t, const Params& p,
                                         const VisibleDistribution& data) {
  return conditional_relative_entropy_term(EvaluatedModel(p_t), EvaluatedModel(p), data);
}

double joint_objective(const EvaluatedModel& model_t, const EvaluatedModel& model,
                       const VisibleDistribution& data) {
  return conditional_relative_entropy_term(model_t, model, data) +
         kl_divergence(data, model.marginal());
}

double joint_objective(const Params& p_t, const Params& p, const VisibleDistribution& data) {
  return joint_objective(EvaluatedModel(p_t), EvaluatedModel(p), data);
}

double joint_cross_entropy(const GradientVector& positive, const Params& p) {
  if (!positive.same_shape(p)) throw std::domain_error("joint_cross_entropy: shape mismatch");
  const double linear = p.b_v.dot(positive.b_v) + p.b_h.dot(positive.b_h) +
                        p.gamma.dot(positive.gamma) + p.w.cwiseProduct(positive.w).sum();
  return log_partition(p) - linear;
}

}  // namespace sqrbm
