#pragma once

#include <string>
#include <utility>
#include <vector>

#include "irsim/engine.hpp"

namespace irsim {

enum class ReportFormat { Json, Csv };

/// Flat (metric, value) rows in a fixed order; the CSV and compare forms.
std::vector<std::pair<std::string, std::string>> report_rows(const MetricsReport& report);

/// Canonical JSON (sorted keys, two-space indent, trailing newline).
std::string report_json(const MetricsReport& report);
/// `metric,value` CSV with a header row.
std::string report_csv(const MetricsReport& report);
std::string format_report(const MetricsReport& report, ReportFormat format);

/// Side-by-side table over reports for different protocols. Throws
/// ValidationError with fewer than two reports.
std::string compare_json(const std::vector<MetricsReport>& reports);
std::string compare_csv(const std::vector<MetricsReport>& reports);
std::string format_compare(const std::vector<MetricsReport>& reports, ReportFormat format);

}  // namespace irsim
