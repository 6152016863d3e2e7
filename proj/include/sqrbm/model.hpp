#pragma once

#include "sqrbm/core.hpp"
#include "sqrbm/params.hpp"

#include <Eigen/Dense>

namespace sqrbm {

/// Clamped state of one hidden unit given a visible configuration.
/// The unit is a qubit in the Gibbs state of -(b_eff sz + gamma sx), whose
/// Bloch vector is (mx, 0, mz) with length tanh(d).
struct HiddenLocalState {
  double b_eff = 0.0;
  double d = 0.0;
  double mz = 0.0;
  double mx = 0.0;
  double gamma = 0.0;
};

/// tanh(d)/d with the removable singularity at d = 0 filled in.
double tanh_ratio(double d);

double effective_field(const Params& p, const SpinConfig& v, int j);
double hidden_gap(const Params& p, const SpinConfig& v, int j);
HiddenLocalState clamped_hidden_state(const Params& p, const SpinConfig& v, int j);

/// Relative entropy D(rho_a || rho_b) between two clamped single-qubit states.
double qubit_relative_entropy(const HiddenLocalState& a, const HiddenLocalState& b);

/// Unnormalized log P_{V,theta}(v): sum_i b_i v_i + sum_j log cosh D_j(v).
/// Omits the v-independent constant M log 2 carried by Tr_H exp(-H_v).
double log_visible_weight(const Params& p, const SpinConfig& v);

/// All closed-form per-configuration quantities of one parameter point,
/// evaluated once over the 2^N visible configurations.
class EvaluatedModel {
 public:
  explicit EvaluatedModel(const Params& p);

  const Params& params() const { return params_; }
  int n_visible() const { return params_.n_visible(); }
  int n_hidden() const { return params_.n_hidden(); }

  /// Rows index v, columns index hidden units.
  const Eigen::MatrixXd& effective_fields() const { return b_eff_; }
  const Eigen::MatrixXd& gaps() const { return gap_; }
  const Eigen::MatrixXd& tanh_ratios() const { return ratio_; }
  const Eigen::VectorXd& log_weights() const { return log_weights_; }

  /// log Tr exp(-H), including the M log 2 term.
  double log_partition() const { return log_partition_; }

  const VisibleDistribution& marginal() const { return marginal_; }

  HiddenLocalState hidden_state(std::uint32_t v, int j) const;

  /// Expectations of (sz_i, sz_j, sx_j, sz_i sz_j) for the visible layer
  /// distributed as `weights` and each hidden unit in its clamped state.
  GradientVector expectations(const Eigen::VectorXd& weights) const;

 private:
  Params params_;
  Eigen::MatrixXd b_eff_;
  Eigen::MatrixXd gap_;
  Eigen::MatrixXd ratio_;
  Eigen::VectorXd log_weights_;
  double log_partition_ = 0.0;
  VisibleDistribution marginal_;
};

/// Sum over v and hidden units of P_V(v) D(rho_{H|v,theta_t} || rho_{H|v,theta}).
double conditional_relative_entropy_term(const EvaluatedModel& model_t, const EvaluatedModel& model,
                                         const VisibleDistribution& data);

double log_partition(const Params& p);
VisibleDistribution visible_marginal(const Params& p);
GradientVector positive_phase(const Params& p, const VisibleDistribution& data);
GradientVector negative_phase(const Params& p);
double conditional_relative_entropy_term(const Params& p_t, const Params& p,
                                         const VisibleDistribution& data);

/// D(P_V x rho_{H|V,theta_t} || rho_{VH,theta}), as conditional term + visible KL.
double joint_objective(const Params& p_t, const Params& p, const VisibleDistribution& data);
double joint_objective(const EvaluatedModel& model_t, const EvaluatedModel& model,
                       const VisibleDistribution& data);

/// -Tr[(P_V x rho_{H|V,theta_t}) log rho_{VH,theta}] = -<theta, positive phase> + log Z.
/// Differences of this quantity between two theta equal differences of the joint objective.
double joint_cross_entropy(const GradientVector& positive, const Params& p);

}  // namespace sqrbm
