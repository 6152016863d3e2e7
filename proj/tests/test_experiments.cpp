#include "sqrbm/experiments.hpp"
#include "sqrbm/model.hpp"
#include "sqrbm/plot.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace sqrbm;

namespace {

ExperimentPlan small_plan(DatasetKind kind, int runs, int epochs) {
  ExperimentPlan plan;
  plan.dataset.kind = kind;
  plan.dataset.n = 4;
  plan.n_visible = 4;
  plan.n_hidden = 2;
  plan.n_runs = runs;
  plan.train.n_epochs = epochs;
  return plan;
}

std::size_t count_lines(const std::string& s) { return std::count(s.begin(), s.end(), '\n'); }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("zero-epoch single run reports the initial KL") {
  auto plan = small_plan(DatasetKind::Parity, 1, 0);
  plan.base_seed = 3;
  const auto r = run_experiment(plan);
  Xoshiro256 rng(3);
  const double initial = kl_divergence(gen_parity(4), visible_marginal(init_params(4, 2, rng, 5.0)));
  for (const auto& v : r.variants) {
    CHECK(v.mean_final_kl == initial);
    CHECK(v.mean_curve.empty());
    CHECK(v.std_final_kl == 0.0);
  }
}

TEST_CASE("truncated em and GD give identical mean curves") {
  auto plan = small_plan(DatasetKind::Cardinality, 3, 20);
  plan.train.n_epochs_m = 1;
  const auto r = run_experiment(plan);
  REQUIRE(r.variants.size() == 2);
  CHECK(r.variants[0].mean_curve == r.variants[1].mean_curve);
}

TEST_CASE("curves are padded to the epoch budget") {
  CHECK(pad_curve({3.0, 2.0}, 4, 9.0) == std::vector<double>{3.0, 2.0, 2.0, 2.0});
  CHECK(pad_curve({}, 2, 9.0) == std::vector<double>{9.0, 9.0});
  auto plan = small_plan(DatasetKind::Parity, 2, 40);
  plan.train.epsilon = 1e-2;  // forces early convergence
  const auto r = run_experiment(plan);
  for (const auto& v : r.variants) CHECK(v.mean_curve.size() == 40);
}

TEST_CASE("classical variant keeps the transverse fields at zero") {
  auto plan = small_plan(DatasetKind::Parity, 2, 5);
  plan.algorithms = {Variant::parse("em-rbm"), Variant::parse("gd-sqrbm")};
  const auto r = run_experiment(plan);
  CHECK(r.variants[0].variant.classical);
  CHECK(r.variants[0].variant.label() == "em-rbm");
  CHECK_THROWS_AS(Variant::parse("em-qbm"), std::domain_error);
}

TEST_CASE("worker count does not change results") {
  auto plan = small_plan(DatasetKind::BernoulliMixture, 5, 15);
  const std::vector<ExperimentResult> one{run_experiment(plan, 1)};
  const std::vector<ExperimentResult> four{run_experiment(plan, 4)};
  CHECK(curves_csv(one) == curves_csv(four));
  CHECK(compare_table_csv(one) == compare_table_csv(four));
  CHECK(one[0].variants[0].final_kls == four[0].variants[0].final_kls);
}

TEST_CASE("compare_table shapes") {
  const auto a = run_experiment(small_plan(DatasetKind::Parity, 1, 2));
  CHECK(compare_rows({a}).size() == 2);
  CHECK(count_lines(compare_table_csv({a})) == 3);

  std::vector<ExperimentResult> all;
  for (auto kind : {DatasetKind::BernoulliMixture, DatasetKind::RandomSupport,
                    DatasetKind::Cardinality, DatasetKind::Parity}) {
    all.push_back(run_experiment(small_plan(kind, 1, 2)));
  }
  const auto rows = compare_rows(all);
  CHECK(rows.size() == 8);
  CHECK(rows[0].dataset == rows[1].dataset);
  CHECK(count_lines(compare_table(all)) == 9);

  auto one_algo = small_plan(DatasetKind::Parity, 1, 2);
  one_algo.algorithms = {Variant::parse("gd-sqrbm")};
  CHECK(compare_rows({run_experiment(one_algo)}).size() == 1);
}

TEST_CASE("curves CSV and SVG") {
  const auto r = run_experiment(small_plan(DatasetKind::BernoulliMixture, 2, 6));
  const std::string csv = curves_csv({r});
  CHECK(count_lines(csv) == 1 + 2 * 6);

  const auto dir = std::filesystem::temp_directory_path() / "sqrbm_emit_test";
  std::filesystem::create_directories(dir);
  emit_curves({r}, dir);
  CHECK(slurp(dir / "curves.csv") == csv);
  const std::string svg = slurp(dir / "curves.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("em-sqrbm") != std::string::npos);
  CHECK(svg.find("gd-sqrbm") != std::string::npos);
  std::filesystem::remove_all(dir);

  CHECK_THROWS(emit_curves({r}, "/nonexistent/sqrbm/dir"));
}

TEST_CASE("SVG rendering edge cases") {
  const std::string empty = render_svg({}, "t", "x", "y");
  CHECK(empty.find("<svg") != std::string::npos);
  CHECK(empty.find("<polyline") == std::string::npos);
  const std::string flat = render_svg({{"const", {0.5, 0.5, 0.5}}}, "t", "x", "y");
  CHECK(flat.find("<polyline") != std::string::npos);

  ExperimentResult none;
  none.plan = small_plan(DatasetKind::Parity, 1, 0);
  VariantResult v;
  none.variants.push_back(v);
  CHECK(curves_csv({none}) == "epoch,algo,mean_kl\n");
}

TEST_CASE("plan validation") {
  auto plan = small_plan(DatasetKind::Parity, 0, 5);
  CHECK_THROWS_AS(plan.validate(), std::domain_error);
  plan = small_plan(DatasetKind::Parity, 1, 5);
  plan.n_visible = 5;
  CHECK_THROWS_AS(plan.validate(), std::domain_error);
}
