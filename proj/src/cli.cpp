#include "sqrbm/cli.hpp"

#include "sqrbm/datasets.hpp"
#include "sqrbm/experiments.hpp"
#include "sqrbm/io.hpp"
#include "sqrbm/oracle.hpp"
#include "sqrbm/plot.hpp"
#include "sqrbm/rng.hpp"
#include "sqrbm/training.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <filesystem>
#include <optional>
#include <sstream>

namespace sqrbm::cli {

namespace {

namespace fs = std::filesystem;

/// Validation failure that maps to the usage exit code.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GenDataOptions {
  std::string kind;
  int n = 0;
  int k = 8;
  double p = 0.9;
  std::uint64_t seed = 0;
  std::string out;
};

struct TrainOptions {
  std::string data;
  int n_hidden = 0;
  std::string config;
  std::optional<std::string> algo;
  std::optional<double> eta;
  std::optional<double> epsilon;
  std::optional<int> epochs;
  std::optional<int> epochs_m;
  std::optional<std::uint64_t> seed;
  std::optional<double> range;
  bool rbm = false;
  std::string out;
  std::string csv;
};

struct VerifyOptions {
  int n = 2;
  int m = 2;
  int trials = 5;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  double range = 2.0;
};

struct ExperimentOptions {
  std::string plan;
  std::string out;
  int workers = 1;
  std::optional<int> runs;
  std::optional<int> epochs;
  std::optional<int> epochs_m;
};

struct ExportOptions {
  std::string record;
  std::string csv;
  std::string svg;
};

int cmd_gen_data(const GenDataOptions& o, bool quiet, std::ostream& out) {
  DatasetSpec spec;
  try {
    spec.kind = parse_dataset_kind(o.kind);
    spec.n = o.n;
    spec.k = o.k;
    spec.p = o.p;
    spec.seed = o.seed;
    spec.validate();
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  }
  const Dataset dataset = generate(spec);
  write_json_file(o.out, json(dataset));
  if (!quiet) {
    out << fmt::format("{}: n={} support={} entropy={:.12g}\n", to_string(spec.kind), spec.n,
                       dataset.distribution.support_size(), dataset.distribution.entropy());
  }
  return kOk;
}

int cmd_train(const TrainOptions& o, bool quiet, std::ostream& out, std::ostream& err) {
  Dataset dataset;
  TrainConfig cfg;
  try {
    dataset = read_json_file(o.data).get<Dataset>();
    if (!o.config.empty()) cfg = read_json_file(o.config).get<TrainConfig>();
    if (o.algo) cfg.algorithm = parse_algorithm(*o.algo);
    if (o.eta) cfg.eta = *o.eta;
    if (o.epsilon) cfg.epsilon = *o.epsilon;
    if (o.epochs) cfg.n_epochs = *o.epochs;
    if (o.epochs_m) cfg.n_epochs_m = *o.epochs_m;
    if (o.seed) cfg.seed = *o.seed;
    if (o.range) cfg.init_range = *o.range;
    if (o.rbm) cfg.freeze_gamma = true;
    cfg.validate();
    if (o.n_hidden < 0) throw std::domain_error("--n-hidden must be >= 0");
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  } catch (const json::exception& e) {
    throw UsageError(e.what());
  }

  const TrainRecord rec = train(dataset.distribution, o.n_hidden, cfg);
  write_json_file(o.out, json(rec));
  const fs::path csv_path = o.csv.empty() ? fs::path(o.out).replace_extension(".csv") : fs::path(o.csv);
  std::ostringstream csv;
  write_record_csv(rec, csv);
  write_text_file(csv_path, csv.str());

  if (rec.failed) {
    err << "numeric failure after " << rec.epochs_run << " epochs: " << rec.failure << '\n';
    return kNumeric;
  }
  if (!quiet) {
    out << fmt::format("initial KL {:.12g}\nfinal KL {:.12g} after {} epochs{}\n", rec.initial_kl,
                       rec.final_kl(), rec.epochs_run, rec.converged ? " (converged)" : "");
  }
  return kOk;
}

int cmd_verify(const VerifyOptions& o, bool quiet, std::ostream& out, std::ostream& err) {
  if (o.n < 1 || o.m < 0 || o.n + o.m > oracle::kMaxQubits) {
    throw UsageError(fmt::format("verify needs n >= 1, m >= 0 and n + m <= {}, got n={} m={}",
                                 oracle::kMaxQubits, o.n, o.m));
  }
  if (o.trials < 0) throw UsageError("--trials must be >= 0");
  if (o.trials == 0) {
    err << "warning: --trials 0, nothing to verify\n";
    return kOk;
  }

  Xoshiro256 rng(o.seed);
  bool all_pass = true;
  std::vector<double> worst;
  std::vector<std::string> names;
  for (int t = 0; t < o.trials; ++t) {
    const Params p = init_params(o.n, o.m, rng, o.range);
    const Params p_t = init_params(o.n, o.m, rng, o.range);
    Eigen::VectorXd weights(Eigen::Index{1} << o.n);
    for (auto& x : weights) x = 1e-3 + rng.uniform01();
    const VisibleDistribution data(o.n, weights / weights.sum());

    const auto checks = oracle::cross_check(p, p_t, data);
    if (names.empty()) {
      for (const auto& c : checks) names.push_back(c.name);
      worst.assign(checks.size(), 0.0);
      if (!quiet) {
        out << fmt::format("{:<6}", "trial");
        for (const auto& name : names) out << fmt::format(" {:>12.12}", name);
        out << "  status\n";
      }
    }
    bool pass = true;
    for (std::size_t k = 0; k < checks.size(); ++k) {
      worst[k] = std::max(worst[k], checks[k].max_abs_dev);
      pass = pass && checks[k].max_abs_dev < o.tol;
    }
    all_pass = all_pass && pass;
    if (!quiet) {
      out << fmt::format("{:<6}", t);
      for (const auto& c : checks) out << fmt::format(" {:>12.3e}", c.max_abs_dev);
      out << (pass ? "  PASS\n" : "  FAIL\n");
    }
  }
  if (!quiet) {
    out << fmt::format("max deviation over {} trials (tol {:.1e}):\n", o.trials, o.tol);
    for (std::size_t k = 0; k < names.size(); ++k) {
      out << fmt::format("  {:<28} {:.3e}\n", names[k], worst[k]);
    }
    out << (all_pass ? "all checks passed\n" : "verification FAILED\n");
  }
  return all_pass ? kOk : kVerificationFailed;
}

std::vector<ExperimentPlan> read_plans(const json& j) {
  std::vector<ExperimentPlan> plans;
  if (j.contains("experiments")) {
    for (const auto& e : j.at("experiments")) plans.push_back(e.get<ExperimentPlan>());
  } else {
    plans.push_back(j.get<ExperimentPlan>());
  }
  if (plans.empty()) throw std::domain_error("plan file lists no experiments");
  return plans;
}

int cmd_experiment(const ExperimentOptions& o, bool quiet, std::ostream& out, std::ostream& err) {
  std::vector<ExperimentPlan> plans;
  json plan_json;
  try {
    plan_json = read_json_file(o.plan);
    plans = read_plans(plan_json);
    for (auto& p : plans) {
      if (o.runs) p.n_runs = *o.runs;
      if (o.epochs) p.train.n_epochs = *o.epochs;
      if (o.epochs_m) p.train.n_epochs_m = *o.epochs_m;
      p.validate();
    }
    if (o.workers < 1) throw std::domain_error("--workers must be >= 1");
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  } catch (const json::exception& e) {
    throw UsageError(e.what());
  }

  const fs::path dir(o.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  std::vector<ExperimentResult> results;
  for (const auto& p : plans) results.push_back(run_experiment(p, o.workers));

  write_text_file(dir / "table.csv", compare_table_csv(results));
  emit_curves(results, dir);
  json effective = json::array();
  for (const auto& p : plans) effective.push_back(p);
  json result_json = {{"manifest",
                       {{"tool", "sqrbm"},
                        {"version", kVersion},
                        {"prng", kPrngName},
                        {"workers", o.workers},
                        {"plan_file", plan_json},
                        {"effective_plans", effective}}},
                      {"experiments", results}};
  write_json_file(dir / "result.json", result_json);

  int failed = 0;
  for (const auto& r : results)
    for (const auto& v : r.variants) failed += v.failed_runs;
  if (failed > 0) err << "warning: " << failed << " run(s) failed numerically and were excluded\n";
  if (!quiet) out << compare_table(results);
  return kOk;
}

int cmd_export(const ExportOptions& o, bool quiet, std::ostream& out) {
  TrainRecord rec;
  try {
    rec = read_json_file(o.record).get<TrainRecord>();
  } catch (const json::exception& e) {
    throw UsageError(e.what());
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  }
  std::ostringstream csv;
  write_record_csv(rec, csv);
  write_text_file(o.csv, csv.str());
  if (!o.svg.empty()) {
    write_text_file(o.svg, render_svg({{std::string(to_string(rec.config.algorithm)), rec.kl_curve}},
                                      "KL divergence per epoch", "epoch", "KL (log scale)"));
  }
  if (!quiet) out << "wrote " << rec.kl_curve.size() << " epochs to " << o.csv << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact em and gradient-descent training of semi-quantum restricted Boltzmann machines"};
  app.name("sqrbm");
  app.set_version_flag("--version", std::string("sqrbm ") + kVersion + " (prng " + kPrngName + ")");
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("--quiet,-q", quiet, "Suppress informational output");

  GenDataOptions gen;
  auto* gen_cmd = app.add_subcommand("gen-data", "Generate a benchmark distribution");
  gen_cmd->add_option("--kind", gen.kind, "bernoulli | random-support | cardinality | parity (or A-D)")
      ->required();
  gen_cmd->add_option("--n", gen.n, "Number of bits")->required();
  gen_cmd->add_option("--k", gen.k, "Mixture components (bernoulli)");
  gen_cmd->add_option("--p", gen.p, "Alignment probability (bernoulli)");
  gen_cmd->add_option("--seed", gen.seed, "Seed");
  gen_cmd->add_option("--out", gen.out, "Output JSON file")->required();

  TrainOptions tr;
  auto* train_cmd = app.add_subcommand("train", "Train one sqRBM on a dataset file");
  train_cmd->add_option("--data", tr.data, "Dataset JSON")->required();
  train_cmd->add_option("--n-hidden", tr.n_hidden, "Hidden units")->required();
  train_cmd->add_option("--config", tr.config, "TrainConfig JSON (flags take precedence)");
  train_cmd->add_option("--algo", tr.algo, "gd | em");
  train_cmd->add_option("--eta", tr.eta, "Learning rate (default 0.2)");
  train_cmd->add_option("--epsilon", tr.epsilon, "Convergence threshold (default 1e-7)");
  train_cmd->add_option("--epochs", tr.epochs, "Outer epochs (default 100)");
  train_cmd->add_option("--epochs-m", tr.epochs_m, "Inner m-step budget (default 1000)");
  train_cmd->add_option("--seed", tr.seed, "Initialization seed (default 0)");
  train_cmd->add_option("--range", tr.range, "Init half-width (default 5)");
  train_cmd->add_flag("--rbm", tr.rbm, "Classical RBM: freeze transverse fields at 0");
  train_cmd->add_option("--out", tr.out, "Record JSON")->required();
  train_cmd->add_option("--csv", tr.csv, "Curve CSV (default: --out with .csv)");

  VerifyOptions ver;
  auto* verify_cmd = app.add_subcommand("verify", "Cross-check closed forms against the dense oracle");
  verify_cmd->add_option("--n", ver.n, "Visible units");
  verify_cmd->add_option("--m", ver.m, "Hidden units");
  verify_cmd->add_option("--trials", ver.trials, "Random parameter draws");
  verify_cmd->add_option("--seed", ver.seed, "Seed");
  verify_cmd->add_option("--tol", ver.tol, "Max absolute deviation");
  verify_cmd->add_option("--range", ver.range, "Parameter half-width");

  ExperimentOptions ex;
  auto* exp_cmd = app.add_subcommand("experiment", "Run a multi-run benchmark plan");
  exp_cmd->add_option("--plan", ex.plan, "Plan JSON")->required();
  exp_cmd->add_option("--out", ex.out, "Results directory")->required();
  exp_cmd->add_option("--workers", ex.workers, "Worker threads");
  exp_cmd->add_option("--runs", ex.runs, "Override n_runs");
  exp_cmd->add_option("--epochs", ex.epochs, "Override train.n_epochs");
  exp_cmd->add_option("--epochs-m", ex.epochs_m, "Override train.n_epochs_m");

  ExportOptions exp;
  auto* export_cmd = app.add_subcommand("export", "Export a training record as CSV / SVG");
  export_cmd->add_option("--record", exp.record, "Record JSON")->required();
  export_cmd->add_option("--csv", exp.csv, "Output CSV")->required();
  export_cmd->add_option("--svg", exp.svg, "Output SVG");

  std::vector<std::string> argv_storage{"sqrbm"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (*gen_cmd) return cmd_gen_data(gen, quiet, out);
    if (*train_cmd) return cmd_train(tr, quiet, out, err);
    if (*verify_cmd) return cmd_verify(ver, quiet, out, err);
    if (*exp_cmd) return cmd_experiment(ex, quiet, out, err);
    if (*export_cmd) return cmd_export(exp, quiet, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return kNumeric;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace sqrbm::cli
