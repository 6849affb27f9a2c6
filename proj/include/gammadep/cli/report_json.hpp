#pragma once

#include "json.hpp"

#include "gammadep/data_model.hpp"
#include "gammadep/simgen.hpp"

namespace gammadep::cli {

inline constexpr int kSchemaVersion = 1;

nlohmann::json gamma_to_json(const Gamma& g);
Gamma gamma_from_json(const nlohmann::json& j);

nlohmann::json kernel_to_json(const KernelPairSpec& k);
KernelPairSpec kernel_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const TestReport& report);
/// Inverse of report_to_json. Throws PARSE on a malformed document.
TestReport report_from_json(const nlohmann::json& j);

nlohmann::json experiment_to_json(const ExperimentResult& result);
nlohmann::json population_to_json(const PopulationTriple& p);

}  // namespace gammadep::cli
