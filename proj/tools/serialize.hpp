#pragma once

// JSON forms of fits, limit constants and experiment reports. Doubles are
// written in the shortest form that parses back to the same value; NaN is
// written as null and read back as NaN.

#include <string>
#include <vector>

#include <json.hpp>

#include "grenlab/constants.hpp"
#include "grenlab/experiments.hpp"
#include "grenlab/grenander.hpp"

namespace grenlab::cli {

inline constexpr int kReportVersion = 1;

nlohmann::json fit_to_json(const ConcaveMajorant& majorant, const GrenanderEstimate& estimate);

struct ConstantsRecord {
  LimitConstants constants;
  DensityFamily density;
  std::string weight = "none";  // none | inv-sd
  ArgmaxConfig chernoff;
  std::vector<double> c_grid;
  double mean_V0 = 0.0;
  double mean_V0_se = 0.0;
  std::vector<std::string> warnings;
  std::string input_hash;
};

nlohmann::json constants_to_json(const ConstantsRecord& record);
// Throws ConfigError on a version mismatch or a malformed document.
ConstantsRecord constants_from_json(const nlohmann::json& j);

nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const nlohmann::json& j);

// Per-replication CSV: n,replication,raw,stat[,aux].
std::string report_csv(const ExperimentReport& report);

// Checks "report_version" and "kind"; throws ConfigError otherwise.
void require_version(const nlohmann::json& j, const std::string& kind);

}  // namespace grenlab::cli
