#pragma once

#include "sqrbm/datasets.hpp"
#include "sqrbm/training.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace sqrbm {

/// One trained variant: optimizer x model family.
struct Variant {
  Algorithm algorithm = Algorithm::EM;
  /// Classical RBM: transverse fields zeroed at init and frozen.
  bool classical = false;

  std::string label() const;
  static Variant parse(const std::string& label);
  friend bool operator==(const Variant&, const Variant&) = default;
};

struct ExperimentPlan {
  DatasetSpec dataset;
  int n_visible = 4;
  int n_hidden = 2;
  std::vector<Variant> algorithms{{Algorithm::EM, false}, {Algorithm::GD, false}};
  int n_runs = 20;
  std::uint64_t base_seed = 0;
  TrainConfig train;

  void validate() const;
};

struct VariantResult {
  Variant variant;
  /// Mean visible KL per epoch over non-failed runs; early-converged runs are
  /// padded with their final value. Length = train.n_epochs.
  std::vector<double> mean_curve;
  double mean_initial_kl = 0.0;
  double mean_final_kl = 0.0;
  double std_final_kl = 0.0;
  std::vector<double> final_kls;  // per run; NaN for failed runs
  int failed_runs = 0;
  long total_inner_steps = 0;
};

struct ExperimentResult {
  ExperimentPlan plan;
  std::vector<VariantResult> variants;
  double wall_seconds = 0.0;
};

/// Runs every variant on every run index with paired initial parameters
/// (seed base_seed + r). Runs execute on up to `workers` threads; the result
/// does not depend on the worker count.
ExperimentResult run_experiment(const ExperimentPlan& plan, int workers = 1);

/// Pads a curve to `length` with its last value (or `fallback` if empty).
std::vector<double> pad_curve(const std::vector<double>& curve, std::size_t length, double fallback);

struct TableRow {
  std::string dataset;
  int n_visible = 0;
  int n_hidden = 0;
  std::string algorithm;
  double mean_final_kl = 0.0;
  double std_final_kl = 0.0;
  int runs = 0;
  int failed = 0;
  int epochs = 0;
};

std::vector<TableRow> compare_rows(const std::vector<ExperimentResult>& results);
/// Fixed-width text rendering of compare_rows.
std::string compare_table(const std::vector<ExperimentResult>& results);
std::string compare_table_csv(const std::vector<ExperimentResult>& results);

/// CSV with columns epoch,algo,mean_kl. Series are labelled by variant, with
/// a dataset/shape prefix when more than one experiment is present.
std::string curves_csv(const std::vector<ExperimentResult>& results);

/// Writes curves.csv and curves.svg into `dir`.
void emit_curves(const std::vector<ExperimentResult>& results, const std::filesystem::path& dir);

}  // namespace sqrbm
