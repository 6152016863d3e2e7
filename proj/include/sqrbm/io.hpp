#pragma once

#include "sqrbm/core.hpp"
#include "sqrbm/datasets.hpp"
#include "sqrbm/experiments.hpp"
#include "sqrbm/params.hpp"
#include "sqrbm/training.hpp"

#include <json.hpp>

#include <filesystem>
#include <ostream>
#include <stdexcept>
#include <string>

namespace sqrbm {

using json = nlohmann::json;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// {"n_visible": N, "probs": [...]} in index order.
void to_json(json& j, const VisibleDistribution& d);
void from_json(const json& j, VisibleDistribution& d);

// {"n_visible", "n_hidden", "b_v", "b_h", "gamma", "w": [[row i], ...]}
void to_json(json& j, const Params& p);
void from_json(const json& j, Params& p);

void to_json(json& j, const DatasetSpec& s);
void from_json(const json& j, DatasetSpec& s);

/// Distribution JSON plus a "spec" block; Bernoulli mixtures also carry
/// their centers as +/-1 spin lists so they can be reused verbatim.
void to_json(json& j, const Dataset& d);
void from_json(const json& j, Dataset& d);

void to_json(json& j, const TrainConfig& c);
void from_json(const json& j, TrainConfig& c);

void to_json(json& j, const TrainRecord& r);
void from_json(const json& j, TrainRecord& r);

void to_json(json& j, const ExperimentPlan& p);
void from_json(const json& j, ExperimentPlan& p);

void to_json(json& j, const ExperimentResult& r);

/// CSV: epoch,kl,inner_steps,joint_kl_final (one row per outer epoch).
void write_record_csv(const TrainRecord& r, std::ostream& os);

std::string format_double(double x);

json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);
void write_json_file(const std::filesystem::path& path, const json& j);

}  // namespace sqrbm
