#pragma once

#include <string>

#include "experiments.hpp"

namespace sparsedom::tools {

// json | csv | gnuplot-data. The timestamp is the only field that varies between identical runs.
std::string emit_report(const ExperimentReport& rep, const std::string& format, bool with_timestamp = true);
// Checks the fields every JSON report must carry; returns an empty string when valid.
std::string validate_report_json(const std::string& text);
ExperimentReport report_from_json_text(const std::string& text);

}  // namespace sparsedom::tools
