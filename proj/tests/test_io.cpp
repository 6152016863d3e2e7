#include "support.hpp"

#include "sqrbm/io.hpp"

#include <doctest.h>

#include <filesystem>
#include <sstream>

using namespace sqrbm;

TEST_CASE("VisibleDistribution JSON round trip is bit exact") {
  Xoshiro256 rng(1);
  const auto d = testing::random_distribution(4, rng, true);
  const json j = d;
  CHECK(j.at("n_visible") == 4);
  CHECK(json::parse(j.dump()).get<VisibleDistribution>() == d);
}

TEST_CASE("Params JSON round trip is bit exact") {
  Xoshiro256 rng(2);
  const Params p = testing::random_params(3, 2, rng, 5.0);
  const json j = p;
  CHECK(j.at("w").size() == 3);
  CHECK(j.at("w")[0].size() == 2);
  CHECK(json::parse(j.dump()).get<Params>() == p);
  json bad = j;
  bad["b_h"] = {1.0};
  CHECK_THROWS_AS(bad.get<Params>(), std::domain_error);
}

TEST_CASE("Dataset JSON keeps Bernoulli centers") {
  DatasetSpec spec;
  spec.kind = DatasetKind::BernoulliMixture;
  spec.n = 4;
  const Dataset d = generate(spec);
  const json j = d;
  CHECK(j.at("spec").at("centers").size() == 8);
  const Dataset back = json::parse(j.dump()).get<Dataset>();
  CHECK(back.centers == d.centers);
  CHECK(back.distribution == d.distribution);
  CHECK(back.spec.p == 0.9);
}

TEST_CASE("TrainRecord JSON round trip") {
  TrainConfig cfg;
  cfg.n_epochs = 5;
  const auto rec = train(gen_parity(3), 2, cfg);
  const TrainRecord back = json::parse(json(rec).dump()).get<TrainRecord>();
  CHECK(back.kl_curve == rec.kl_curve);
  CHECK(back.final_params == rec.final_params);
  CHECK(back.inner_steps_per_epoch == rec.inner_steps_per_epoch);
  CHECK(back.config.algorithm == Algorithm::EM);

  std::ostringstream a, b;
  write_record_csv(rec, a);
  write_record_csv(back, b);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("epoch,kl,inner_steps,joint_kl_final\n", 0) == 0);
}

TEST_CASE("GD record CSV leaves em columns blank") {
  TrainConfig cfg;
  cfg.n_epochs = 2;
  cfg.algorithm = Algorithm::GD;
  std::ostringstream os;
  write_record_csv(train(gen_parity(3), 1, cfg), os);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  CHECK(line.substr(line.size() - 2) == ",,");
}

TEST_CASE("ExperimentPlan JSON accepts shape or top-level n_hidden") {
  const json j = json::parse(R"({"dataset": {"kind": "parity", "n": 4}, "n_hidden": 3,
                                  "algorithms": ["em-sqrbm", "gd-rbm"], "n_runs": 2,
                                  "train": {"n_epochs": 7}})");
  const auto plan = j.get<ExperimentPlan>();
  CHECK(plan.n_visible == 4);
  CHECK(plan.n_hidden == 3);
  CHECK(plan.algorithms.size() == 2);
  CHECK(plan.algorithms[1].classical);
  CHECK(plan.train.n_epochs == 7);
  CHECK(plan.train.eta == 0.2);
  const auto again = json::parse(json(plan).dump()).get<ExperimentPlan>();
  CHECK(again.n_hidden == 3);
  CHECK(again.algorithms == plan.algorithms);
}

TEST_CASE("file helpers surface I/O errors") {
  CHECK_THROWS_AS(read_json_file("/nonexistent/dir/x.json"), IoError);
  CHECK_THROWS_AS(write_text_file("/nonexistent/dir/x.txt", "x"), IoError);
  const auto path = std::filesystem::temp_directory_path() / "sqrbm_io_test.json";
  write_text_file(path, "{not json");
  CHECK_THROWS_AS(read_json_file(path), std::domain_error);
  std::filesystem::remove(path);
}

TEST_CASE("format_double keeps 17 significant digits") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}
