#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "riskavi/approx.hpp"
#include "riskavi/bounds.hpp"
#include "riskavi/engine.hpp"
#include "riskavi/mdp.hpp"
#include "riskavi/risk.hpp"

namespace riskavi {

using json = nlohmann::json;

json to_json(const RiskSpec& spec);
RiskSpec risk_spec_from_json(const json& j);

json to_json(const TabularMdp& mdp);
TabularMdp tabular_from_json(const json& j);

json to_json(const ValueFn& fn);
ValueFn value_fn_from_json(const json& j);

json to_json(const AviRun& run);
AviRun avi_run_from_json(const json& j);

json to_json(const BoundReport& report);
BoundReport bound_report_from_json(const json& j);
BoundInputs bound_inputs_from_json(const json& j);

/// Shortest round-trippable decimal form (17 significant digits).
std::string format_double(double v);

}  // namespace riskavi
