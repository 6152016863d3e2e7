#include "sqrbm/io.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <sstream>

namespace sqrbm {

namespace {

json vector_json(const Eigen::VectorXd& v) { return json(std::vector<double>(v.begin(), v.end())); }

Eigen::VectorXd vector_from(const json& j, const char* key, Eigen::Index expected) {
  const auto values = j.at(key).get<std::vector<double>>();
  if (static_cast<Eigen::Index>(values.size()) != expected) {
    throw std::domain_error(std::string("field '") + key + "' has " +
                            std::to_string(values.size()) + " entries, expected " +
                            std::to_string(expected));
  }
  return Eigen::Map<const Eigen::VectorXd>(values.data(), expected);
}

json spins_json(std::uint32_t index, int n) { return json(decode_config(index, n)); }

}  // namespace

void to_json(json& j, const VisibleDistribution& d) {
  j = json{{"n_visible", d.n_visible()}, {"probs", vector_json(d.probs())}};
}

void from_json(const json& j, VisibleDistribution& d) {
  const int n = j.at("n_visible").get<int>();
  check_enumeration_size(n);
  d = VisibleDistribution(n, vector_from(j, "probs", Eigen::Index{1} << n));
}

void to_json(json& j, const Params& p) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < p.w.rows(); ++i) {
    rows.push_back(vector_json(p.w.row(i).transpose()));
  }
  j = json{{"n_visible", p.n_visible()}, {"n_hidden", p.n_hidden()}, {"b_v", vector_json(p.b_v)},
           {"b_h", vector_json(p.b_h)},  {"gamma", vector_json(p.gamma)}, {"w", rows}};
}

void from_json(const json& j, Params& p) {
  const int n = j.at("n_visible").get<int>();
  const int m = j.at("n_hidden").get<int>();
  p = Params::zeros(n, m);
  p.b_v = vector_from(j, "b_v", n);
  p.b_h = vector_from(j, "b_h", m);
  p.gamma = vector_from(j, "gamma", m);
  const auto& rows = j.at("w");
  if (!rows.is_array() || static_cast<int>(rows.size()) != n) {
    throw std::domain_error("field 'w' must have n_visible rows");
  }
  for (int i = 0; i < n; ++i) {
    const auto row = rows[static_cast<std::size_t>(i)].get<std::vector<double>>();
    if (static_cast<int>(row.size()) != m) throw std::domain_error("row of 'w' has wrong length");
    for (int c = 0; c < m; ++c) p.w(i, c) = row[static_cast<std::size_t>(c)];
  }
}

void to_json(json& j, const DatasetSpec& s) {
  j = json{{"kind", std::string(to_string(s.kind))}, {"n", s.n}, {"seed", s.seed}};
  if (s.kind == DatasetKind::BernoulliMixture) {
    j["k"] = s.k;
    j["p"] = s.p;
  }
}

void from_json(const json& j, DatasetSpec& s) {
  s = DatasetSpec{};
  s.kind = parse_dataset_kind(j.at("kind").get<std::string>());
  s.n = j.at("n").get<int>();
  s.k = j.value("k", s.k);
  s.p = j.value("p", s.p);
  s.seed = j.value("seed", s.seed);
}

void to_json(json& j, const Dataset& d) {
  j = d.distribution;
  json spec = d.spec;
  if (d.spec.kind == DatasetKind::BernoulliMixture) {
    json centers = json::array();
    for (auto c : d.centers) centers.push_back(spins_json(c, d.spec.n));
    spec["centers"] = centers;
  }
  j["spec"] = spec;
}

void from_json(const json& j, Dataset& d) {
  d.distribution = j.get<VisibleDistribution>();
  d.centers.clear();
  if (j.contains("spec")) {
    d.spec = j.at("spec").get<DatasetSpec>();
    if (j.at("spec").contains("centers")) {
      for (const auto& c : j.at("spec").at("centers")) {
        d.centers.push_back(encode_config(c.get<std::vector<int>>()));
      }
    }
  } else {
    d.spec = DatasetSpec{};
    d.spec.n = d.distribution.n_visible();
  }
}

void to_json(json& j, const TrainConfig& c) {
  j = json{{"eta", c.eta},
           {"epsilon", c.epsilon},
           {"n_epochs", c.n_epochs},
           {"n_epochs_m", c.n_epochs_m},
           {"algorithm", std::string(to_string(c.algorithm))},
           {"seed", c.seed},
           {"init_range", c.init_range},
           {"freeze_gamma", c.freeze_gamma}};
}

void from_json(const json& j, TrainConfig& c) {
  c = TrainConfig{};
  c.eta = j.value("eta", c.eta);
  c.epsilon = j.value("epsilon", c.epsilon);
  c.n_epochs = j.value("n_epochs", c.n_epochs);
  c.n_epochs_m = j.value("n_epochs_m", c.n_epochs_m);
  if (j.contains("algorithm")) c.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
  c.seed = j.value("seed", c.seed);
  c.init_range = j.value("init_range", c.init_range);
  c.freeze_gamma = j.value("freeze_gamma", c.freeze_gamma);
}

void to_json(json& j, const TrainRecord& r) {
  j = json{{"config", r.config},
           {"shape", {{"n_visible", r.n_visible}, {"n_hidden", r.n_hidden}}},
           {"initial_kl", r.initial_kl},
           {"final_kl", r.final_kl()},
           {"kl_curve", r.kl_curve},
           {"epochs_run", r.epochs_run},
           {"converged", r.converged},
           {"failed", r.failed},
           {"wall_seconds", r.wall_seconds},
           {"initial_params", r.initial_params},
           {"final_params", r.final_params}};
  if (r.config.algorithm == Algorithm::EM) {
    j["inner_steps_per_epoch"] = r.inner_steps_per_epoch;
    j["joint_kl_final"] = r.joint_kl_final;
  }
  if (r.failed) j["failure"] = r.failure;
}

void from_json(const json& j, TrainRecord& r) {
  r = TrainRecord{};
  r.config = j.at("config").get<TrainConfig>();
  r.n_visible = j.at("shape").at("n_visible").get<int>();
  r.n_hidden = j.at("shape").at("n_hidden").get<int>();
  r.initial_kl = j.at("initial_kl").get<double>();
  r.kl_curve = j.at("kl_curve").get<std::vector<double>>();
  r.epochs_run = j.value("epochs_run", static_cast<int>(r.kl_curve.size()));
  r.converged = j.value("converged", false);
  r.failed = j.value("failed", false);
  r.failure = j.value("failure", std::string{});
  r.wall_seconds = j.value("wall_seconds", 0.0);
  r.initial_params = j.at("initial_params").get<Params>();
  r.final_params = j.at("final_params").get<Params>();
  if (j.contains("inner_steps_per_epoch")) {
    r.inner_steps_per_epoch = j.at("inner_steps_per_epoch").get<std::vector<int>>();
  }
  if (j.contains("joint_kl_final")) {
    r.joint_kl_final = j.at("joint_kl_final").get<std::vector<double>>();
  }
}

void to_json(json& j, const ExperimentPlan& p) {
  json algorithms = json::array();
  for (const auto& v : p.algorithms) algorithms.push_back(v.label());
  j = json{{"dataset", p.dataset},
           {"shape", {{"n_visible", p.n_visible}, {"n_hidden", p.n_hidden}}},
           {"algorithms", algorithms},
           {"n_runs", p.n_runs},
           {"base_seed", p.base_seed},
           {"train", p.train}};
}

void from_json(const json& j, ExperimentPlan& p) {
  p = ExperimentPlan{};
  p.dataset = j.at("dataset").get<DatasetSpec>();
  p.n_visible = p.dataset.n;
  if (j.contains("shape")) {
    const auto& shape = j.at("shape");
    p.n_visible = shape.value("n_visible", p.n_visible);
    p.n_hidden = shape.at("n_hidden").get<int>();
  } else {
    p.n_hidden = j.at("n_hidden").get<int>();
  }
  if (j.contains("algorithms")) {
    p.algorithms.clear();
    for (const auto& a : j.at("algorithms")) p.algorithms.push_back(Variant::parse(a.get<std::string>()));
  }
  p.n_runs = j.value("n_runs", p.n_runs);
  p.base_seed = j.value("base_seed", p.base_seed);
  if (j.contains("train")) p.train = j.at("train").get<TrainConfig>();
}

void to_json(json& j, const ExperimentResult& r) {
  json variants = json::array();
  for (const auto& v : r.variants) {
    json finals = json::array();
    for (double f : v.final_kls) finals.push_back(std::isnan(f) ? json(nullptr) : json(f));
    variants.push_back({{"algorithm", v.variant.label()},
                        {"mean_curve", v.mean_curve},
                        {"mean_initial_kl", v.mean_initial_kl},
                        {"mean_final_kl", v.mean_final_kl},
                        {"std_final_kl", v.std_final_kl},
                        {"final_kls", finals},
                        {"failed_runs", v.failed_runs},
                        {"total_inner_steps", v.total_inner_steps}});
  }
  j = json{{"plan", r.plan}, {"variants", variants}};
}

std::string format_double(double x) { return fmt::format("{:.17g}", x); }

void write_record_csv(const TrainRecord& r, std::ostream& os) {
  os << "epoch,kl,inner_steps,joint_kl_final\n";
  for (std::size_t e = 0; e < r.kl_curve.size(); ++e) {
    os << (e + 1) << ',' << format_double(r.kl_curve[e]) << ',';
    if (e < r.inner_steps_per_epoch.size()) {
      os << r.inner_steps_per_epoch[e] << ',' << format_double(r.joint_kl_final[e]);
    } else {
      os << ',';
    }
    os << '\n';
  }
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::domain_error(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw IoError("write failed for " + path.string());
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace sqrbm
