#pragma once

// JSON and CSV forms of ResidualReport. Doubles are written in the shortest
// decimal form that round-trips; non-finite tolerances and residuals become
// null (tol: +inf, residuals: NaN).

#include "apstruct/verify.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace apstruct {

nlohmann::json to_json(const SubmanifoldSpec& spec);
SubmanifoldSpec spec_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ResidualStat& s);
ResidualStat stat_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ResidualReport& r);
ResidualReport report_from_json(const nlohmann::json& j);

/// Header plus one row per entry: name,max_abs_err,mean_abs_err,samples,tol,pass,asserted.
/// Numbers use the same text as the JSON form.
std::string to_csv(const ResidualReport& r);

/// Number formatted exactly as in the JSON output ("null" for non-finite).
std::string json_number(double v);

}  // namespace apstruct
