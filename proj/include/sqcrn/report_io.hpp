#pragma once

#include <string>

#include "sqcrn/analysis.hpp"

namespace sqcrn {

// JSON form of an analysis report with stable key order, suitable for golden
// files. The structure is documented in docs/report-schema.json.
std::string report_to_json(const AbstractCtmc& actmc, const AnalysisReport& report);

// Human-readable narrative, one block per component in processing order.
std::string report_to_text(const AbstractCtmc& actmc, const AnalysisReport& report);

const char* component_kind_name(ComponentKind kind);

}  // namespace sqcrn
