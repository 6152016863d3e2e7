#include "sqrbm/experiments.hpp"

#include "sqrbm/io.hpp"
#include "sqrbm/plot.hpp"

#include <fmt/format.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace sqrbm {

namespace {

struct RunOutcome {
  bool failed = false;
  double initial_kl = 0.0;
  double final_kl = 0.0;
  std::vector<double> curve;
  long inner_steps = 0;
};

std::string series_prefix(const ExperimentResult& r) {
  return fmt::format("{}-N{}M{}/", to_string(r.plan.dataset.kind), r.plan.n_visible,
                     r.plan.n_hidden);
}

}  // namespace

std::string Variant::label() const {
  return std::string(to_string(algorithm)) + (classical ? "-rbm" : "-sqrbm");
}

Variant Variant::parse(const std::string& label) {
  const auto dash = label.find('-');
  Variant v;
  v.algorithm = parse_algorithm(label.substr(0, dash));
  if (dash != std::string::npos) {
    const std::string family = label.substr(dash + 1);
    if (family == "rbm") {
      v.classical = true;
    } else if (family != "sqrbm") {
      throw std::domain_error("unknown model family in '" + label + "'");
    }
  }
  return v;
}

void ExperimentPlan::validate() const {
  dataset.validate();
  train.validate();
  if (dataset.n != n_visible) {
    throw std::domain_error("plan: dataset n=" + std::to_string(dataset.n) +
                            " differs from n_visible=" + std::to_string(n_visible));
  }
  if (n_hidden < 0) throw std::domain_error("plan: n_hidden must be >= 0");
  if (n_runs < 1) throw std::domain_error("plan: n_runs must be >= 1");
  if (algorithms.empty()) throw std::domain_error("plan: no algorithms given");
}

std::vector<double> pad_curve(const std::vector<double>& curve, std::size_t length,
                              double fallback) {
  std::vector<double> out(curve.begin(), curve.begin() + static_cast<std::ptrdiff_t>(
                                                             std::min(length, curve.size())));
  const double fill = curve.empty() ? fallback : curve.back();
  out.resize(length, fill);
  return out;
}

ExperimentResult run_experiment(const ExperimentPlan& plan, int workers) {
  plan.validate();
  const auto started = std::chrono::steady_clock::now();
  const VisibleDistribution data = generate(plan.dataset).distribution;
  const std::size_t n_variants = plan.algorithms.size();
  const auto n_runs = static_cast<std::size_t>(plan.n_runs);
  const auto epochs = static_cast<std::size_t>(plan.train.n_epochs);

  std::vector<std::vector<RunOutcome>> outcomes(n_runs, std::vector<RunOutcome>(n_variants));
  auto run_one = [&](std::size_t r) {
    Xoshiro256 rng(plan.base_seed + r);
    const Params init = init_params(plan.n_visible, plan.n_hidden, rng, plan.train.init_range);
    for (std::size_t k = 0; k < n_variants; ++k) {
      const Variant& variant = plan.algorithms[k];
      TrainConfig cfg = plan.train;
      cfg.algorithm = variant.algorithm;
      cfg.freeze_gamma = variant.classical;
      cfg.seed = plan.base_seed + r;
      Params start = init;
      if (variant.classical) start.gamma.setZero();
      const TrainRecord rec = train(data, start, cfg);
      RunOutcome& o = outcomes[r][k];
      o.failed = rec.failed;
      o.initial_kl = rec.initial_kl;
      o.final_kl = rec.final_kl();
      o.curve = pad_curve(rec.kl_curve, epochs, rec.initial_kl);
      for (int steps : rec.inner_steps_per_epoch) o.inner_steps += steps;
    }
  };

  const int threads = std::max(1, std::min<int>(workers, plan.n_runs));
  if (threads == 1) {
    for (std::size_t r = 0; r < n_runs; ++r) run_one(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t r = next++; r < n_runs; r = next++) {
          try {
            run_one(r);
          } catch (...) {
            const std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
  }

  ExperimentResult result;
  result.plan = plan;
  for (std::size_t k = 0; k < n_variants; ++k) {
    VariantResult vr;
    vr.variant = plan.algorithms[k];
    vr.mean_curve.assign(epochs, 0.0);
    int ok = 0;
    double sum_final = 0.0;
    double sum_initial = 0.0;
    for (std::size_t r = 0; r < n_runs; ++r) {
      const RunOutcome& o = outcomes[r][k];
      if (o.failed) {
        ++vr.failed_runs;
        vr.final_kls.push_back(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      ++ok;
      vr.final_kls.push_back(o.final_kl);
      sum_final += o.final_kl;
      sum_initial += o.initial_kl;
      vr.total_inner_steps += o.inner_steps;
      for (std::size_t e = 0; e < epochs; ++e) vr.mean_curve[e] += o.curve[e];
    }
    if (ok == 0) {
      throw NumericError("experiment: every run of " + vr.variant.label() + " failed");
    }
    for (auto& x : vr.mean_curve) x /= ok;
    vr.mean_final_kl = sum_final / ok;
    vr.mean_initial_kl = sum_initial / ok;
    double ss = 0.0;
    for (double f : vr.final_kls) {
      if (!std::isnan(f)) ss += (f - vr.mean_final_kl) * (f - vr.mean_final_kl);
    }
    vr.std_final_kl = ok > 1 ? std::sqrt(ss / (ok - 1)) : 0.0;
    result.variants.push_back(std::move(vr));
  }
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

std::vector<TableRow> compare_rows(const std::vector<ExperimentResult>& results) {
  std::vector<TableRow> rows;
  for (const auto& r : results) {
    for (const auto& v : r.variants) {
      rows.push_back({std::string(to_string(r.plan.dataset.kind)), r.plan.n_visible,
                      r.plan.n_hidden, v.variant.label(), v.mean_final_kl, v.std_final_kl,
                      r.plan.n_runs, v.failed_runs, r.plan.train.n_epochs});
    }
  }
  return rows;
}

std::string compare_table(const std::vector<ExperimentResult>& results) {
  std::string out = fmt::format("{:<15} {:>3} {:>3} {:<10} {:>14} {:>12} {:>5} {:>6} {:>7}\n",
                                "dataset", "N", "M", "algorithm", "mean_final_kl", "std", "runs",
                                "failed", "epochs");
  for (const auto& row : compare_rows(results)) {
    out += fmt::format("{:<15} {:>3} {:>3} {:<10} {:>14.6e} {:>12.4e} {:>5} {:>6} {:>7}\n",
                       row.dataset, row.n_visible, row.n_hidden, row.algorithm, row.mean_final_kl,
                       row.std_final_kl, row.runs, row.failed, row.epochs);
  }
  return out;
}

std::string compare_table_csv(const std::vector<ExperimentResult>& results) {
  std::string out = "dataset,n_visible,n_hidden,algorithm,mean_final_kl,std_final_kl,runs,failed,epochs\n";
  for (const auto& row : compare_rows(results)) {
    out += fmt::format("{},{},{},{},{},{},{},{},{}\n", row.dataset, row.n_visible, row.n_hidden,
                       row.algorithm, format_double(row.mean_final_kl),
                       format_double(row.std_final_kl), row.runs, row.failed, row.epochs);
  }
  return out;
}

std::string curves_csv(const std::vector<ExperimentResult>& results) {
  std::string out = "epoch,algo,mean_kl\n";
  const bool prefixed = results.size() > 1;
  for (const auto& r : results) {
    const std::string prefix = prefixed ? series_prefix(r) : "";
    for (const auto& v : r.variants) {
      for (std::size_t e = 0; e < v.mean_curve.size(); ++e) {
        out += fmt::format("{},{}{},{}\n", e + 1, prefix, v.variant.label(),
                           format_double(v.mean_curve[e]));
      }
    }
  }
  return out;
}

void emit_curves(const std::vector<ExperimentResult>& results, const std::filesystem::path& dir) {
  write_text_file(dir / "curves.csv", curves_csv(results));
  std::vector<Series> series;
  const bool prefixed = results.size() > 1;
  for (const auto& r : results) {
    for (const auto& v : r.variants) {
      series.push_back({(prefixed ? series_prefix(r) : "") + v.variant.label(), v.mean_curve});
    }
  }
  write_text_file(dir / "curves.svg",
                  render_svg(series, "Mean KL divergence per epoch", "epoch", "KL (log scale)"));
}

}  // namespace sqrbm
