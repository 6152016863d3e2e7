#pragma once

#include "sqrbm/core.hpp"
#include "sqrbm/model.hpp"
#include "sqrbm/params.hpp"
#include "sqrbm/rng.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sqrbm {

enum class Algorithm { GD, EM };

std::string_view to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view s);

struct TrainConfig {
  double eta = 0.2;
  double epsilon = 1e-7;
  int n_epochs = 100;
  int n_epochs_m = 1000;
  Algorithm algorithm = Algorithm::EM;
  std::uint64_t seed = 0;
  double init_range = 5.0;
  /// Classical RBM baseline: transverse fields are never updated.
  bool freeze_gamma = false;

  void validate() const;
};

struct TrainRecord {
  TrainConfig config;
  int n_visible = 0;
  int n_hidden = 0;
  Params initial_params;
  Params final_params;
  double initial_kl = 0.0;
  /// Visible KL after each outer epoch.
  std::vector<double> kl_curve;
  /// EM only: inner-step count and final joint objective per outer epoch.
  std::vector<int> inner_steps_per_epoch;
  std::vector<double> joint_kl_final;
  /// EM only: joint objective at the start of each epoch's m-step followed by
  /// its value after every inner step.
  std::vector<std::vector<double>> joint_kl_trace;
  int epochs_run = 0;
  bool converged = false;
  bool failed = false;
  std::string failure;
  double wall_seconds = 0.0;

  double final_kl() const { return kl_curve.empty() ? initial_kl : kl_curve.back(); }
};

/// Draws every entry i.i.d. uniform on [-range, range] in flattened order
/// (b_v, b_h, gamma, w row-major).
Params init_params(int n_visible, int n_hidden, Xoshiro256& rng, double range);

/// theta + eta * (positive - negative), with gamma held fixed if requested.
/// Throws NumericError naming the first non-finite gradient entry.
Params apply_update(const Params& p, const GradientVector& positive, const GradientVector& negative,
                    double eta, bool freeze_gamma = false);

Params gd_step(const Params& p, const VisibleDistribution& data, double eta,
               bool freeze_gamma = false);

/// The e-projection: fixes rho_{H|V} to the model conditional at theta_t and
/// caches the data-averaged clamped statistics, which stay constant through
/// the following m-step.
class HiddenConditional {
 public:
  HiddenConditional(const Params& p_t, const VisibleDistribution& data);

  const Params& theta() const { return model_.params(); }
  const EvaluatedModel& model() const { return model_; }
  const GradientVector& positive_phase() const { return positive_; }

 private:
  EvaluatedModel model_;
  GradientVector positive_;
};

HiddenConditional e_step(const Params& p_t, const VisibleDistribution& data);

struct MStepResult {
  Params params;
  int inner_steps = 0;
  double final_joint_kl = 0.0;
  double final_visible_kl = 0.0;
  /// Joint objective at theta_t, then after each inner step.
  std::vector<double> trace;
};

/// Gradient descent on the convex m-projection objective, stopped when
/// |delta joint objective| < epsilon or after cfg.n_epochs_m steps.
MStepResult m_step(const HiddenConditional& conditional, const VisibleDistribution& data,
                   const TrainConfig& cfg);
MStepResult m_step(const Params& p_t, const VisibleDistribution& data, const TrainConfig& cfg);

/// Full training run from explicit initial parameters. Numeric failures are
/// caught; the partial record is returned with `failed` set.
TrainRecord train(const VisibleDistribution& data, const Params& initial, const TrainConfig& cfg);

/// As above, drawing the initial parameters from cfg.seed and cfg.init_range.
TrainRecord train(const VisibleDistribution& data, int n_hidden, const TrainConfig& cfg);

}  // namespace sqrbm
