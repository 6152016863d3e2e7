#include "sqrbm/training.hpp"

#include <chrono>
#include <cmath>

namespace sqrbm {

std::string_view to_string(Algorithm a) { return a == Algorithm::GD ? "gd" : "em"; }

Algorithm parse_algorithm(std::string_view s) {
  if (s == "gd" || s == "GD") return Algorithm::GD;
  if (s == "em" || s == "EM") return Algorithm::EM;
  throw std::domain_error("unknown algorithm '" + std::string(s) + "' (expected gd or em)");
}

void TrainConfig::validate() const {
  if (!(eta > 0.0)) throw std::domain_error("eta must be > 0");
  if (!(epsilon > 0.0)) throw std::domain_error("epsilon must be > 0");
  if (n_epochs < 0) throw std::domain_error("n_epochs must be >= 0");
  if (n_epochs_m < 1) throw std::domain_error("n_epochs_m must be >= 1");
  if (!(init_range >= 0.0)) throw std::domain_error("init_range must be >= 0");
}

Params init_params(int n_visible, int n_hidden, Xoshiro256& rng, double range) {
  if (!(range >= 0.0)) throw std::domain_error("init range must be >= 0");
  Params p = Params::zeros(n_visible, n_hidden);
  Eigen::VectorXd flat(p.size());
  for (auto& x : flat) x = rng.uniform(-range, range);
  return Params::unflatten(n_visible, n_hidden, flat);
}

Params apply_update(const Params& p, const GradientVector& positive, const GradientVector& negative,
                    double eta, bool freeze_gamma) {
  GradientVector step = positive - negative;
  if (freeze_gamma) step.gamma.setZero();
  if (!step.all_finite()) {
    const auto flat = step.flatten();
    for (Eigen::Index k = 0; k < flat.size(); ++k) {
      if (!std::isfinite(flat[k])) throw NumericError("non-finite gradient at " + p.entry_name(k));
    }
  }
  return p + eta * step;
}

Params gd_step(const Params& p, const VisibleDistribution& data, double eta, bool freeze_gamma) {
  return apply_update(p, positive_phase(p, data), negative_phase(p), eta, freeze_gamma);
}

namespace {

const Params& checked_against(const Params& p, const VisibleDistribution& data) {
  if (data.n_visible() != p.n_visible()) throw std::domain_error("e_step: data shape mismatch");
  return p;
}

}  // namespace

HiddenConditional::HiddenConditional(const Params& p_t, const VisibleDistribution& data)
    : model_(checked_against(p_t, data)), positive_(model_.expectations(data.probs())) {}

HiddenConditional e_step(const Params& p_t, const VisibleDistribution& data) {
  return {p_t, data};
}

MStepResult m_step(const HiddenConditional& conditional, const VisibleDistribution& data,
                   const TrainConfig& cfg) {
  cfg.validate();
  const EvaluatedModel& reference = conditional.model();
  EvaluatedModel current = reference;

  MStepResult out;
  double visible_kl = kl_divergence(data, current.marginal());
  double joint = conditional_relative_entropy_term(reference, current, data) + visible_kl;
  out.trace.push_back(joint);

  for (int step = 1; step <= cfg.n_epochs_m; ++step) {
    const GradientVector negative = current.expectations(current.marginal().probs());
    current = EvaluatedModel(apply_update(current.params(), conditional.positive_phase(), negative,
                                          cfg.eta, cfg.freeze_gamma));
    visible_kl = kl_divergence(data, current.marginal());
    const double next = conditional_relative_entropy_term(reference, current, data) + visible_kl;
    if (!std::isfinite(next)) {
      throw NumericError("m-step iterate " + std::to_string(step) + ": non-finite objective");
    }
    out.trace.push_back(next);
    out.inner_steps = step;
    const double delta = next - joint;
    joint = next;
    if (std::abs(delta) < cfg.epsilon) break;
  }
  out.params = current.params();
  out.final_joint_kl = joint;
  out.final_visible_kl = visible_kl;
  return out;
}

MStepResult m_step(const Params& p_t, const VisibleDistribution& data, const TrainConfig& cfg) {
  return m_step(e_step(p_t, data), data, cfg);
}

TrainRecord train(const VisibleDistribution& data, const Params& initial, const TrainConfig& cfg) {
  cfg.validate();
  initial.check_shape();
  if (data.n_visible() != initial.n_visible()) {
    throw std::domain_error("train: data has n_visible=" + std::to_string(data.n_visible()) +
                            ", parameters have " + std::to_string(initial.n_visible()));
  }
  const auto started = std::chrono::steady_clock::now();

  TrainRecord rec;
  rec.config = cfg;
  rec.n_visible = initial.n_visible();
  rec.n_hidden = initial.n_hidden();
  rec.initial_params = initial;
  rec.final_params = initial;

  try {
    EvaluatedModel model(initial);
    rec.initial_kl = kl_divergence(data, model.marginal());
    double previous = rec.initial_kl;
    for (int epoch = 0; epoch < cfg.n_epochs; ++epoch) {
      double kl = 0.0;
      if (cfg.algorithm == Algorithm::GD) {
        const GradientVector positive = model.expectations(data.probs());
        const GradientVector negative = model.expectations(model.marginal().probs());
        model = EvaluatedModel(
            apply_update(model.params(), positive, negative, cfg.eta, cfg.freeze_gamma));
        kl = kl_divergence(data, model.marginal());
      } else {
        const HiddenConditional conditional(model.params(), data);
        MStepResult m = m_step(conditional, data, cfg);
        model = EvaluatedModel(m.params);
        kl = m.final_visible_kl;
        rec.inner_steps_per_epoch.push_back(m.inner_steps);
        rec.joint_kl_final.push_back(m.final_joint_kl);
        rec.joint_kl_trace.push_back(std::move(m.trace));
      }
      rec.final_params = model.params();
      rec.kl_curve.push_back(kl);
      rec.epochs_run = epoch + 1;
      if (std::abs(previous - kl) < cfg.epsilon) {
        rec.converged = true;
        break;
      }
      previous = kl;
    }
  } catch (const NumericError& e) {
    rec.failed = true;
    rec.failure = e.what();
  } catch (const DivergenceInfinite& e) {
    rec.failed = true;
    rec.failure = e.what();
  }

  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return rec;
}

TrainRecord train(const VisibleDistribution& data, int n_hidden, const TrainConfig& cfg) {
  Xoshiro256 rng(cfg.seed);
  Params initial = init_params(data.n_visible(), n_hidden, rng, cfg.init_range);
  if (cfg.freeze_gamma) initial.gamma.setZero();
  return train(data, initial, cfg);
}

}  // namespace sqrbm
