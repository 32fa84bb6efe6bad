#pragma once

#include "domainlens/feature_matrix.hpp"
#include "domainlens/model.hpp"
#include "domainlens/pipeline.hpp"

#include <span>
#include <string>
#include <string_view>

#include <json.hpp>

namespace domainlens {

inline constexpr int kModelFormatVersion = 1;

nlohmann::json to_json(const SvmHyperparams& hp);
SvmHyperparams hyperparams_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Metrics& m);
nlohmann::json to_json(const EvalReport& r);

// Plain-text table: one row per metric, one column per report, values in
// percent with one decimal; "n/a" where a metric was never defined.
std::string eval_table(std::span<const EvalReport> reports);

// {version, channels, vocab per text channel (with column maxima as norm
// stats), selected_cols, weights, bias, hyperparams, training:{seed}}.
nlohmann::json to_json(const DeployedModel& m);
// Throws Data/ModelFormat on version or shape problems.
DeployedModel deployed_model_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Dataset& ds);
Dataset dataset_from_json(const nlohmann::json& j);

// Header `domain,label,<channel>:<name>,...`, shortest round-trip doubles.
std::string feature_matrix_csv(const FeatureMatrix& X);
FeatureMatrix parse_feature_matrix_csv(std::string_view csv);

// CSV `domain,network`, one row per domain.
NetworkMap parse_network_map(std::string_view csv);
std::string network_map_csv(const NetworkMap& networks);

// Shortest decimal form that reads back to the same double.
std::string format_double(double v);

}  // namespace domainlens
