#pragma once

#include <string>
#include <string_view>
#include <optional>
#include <vector>

#include "qentropy/scenarios.hpp"
#include "qentropy/suites.hpp"

namespace qentropy {

enum class Format { Table, Csv, Json };

std::optional<Format> parse_format(std::string_view name);

/// Labelled rows of numbers; the first output column is always "step".
struct Table {
  std::vector<std::string> columns;
  std::vector<std::string> labels;
  std::vector<std::vector<double>> rows;
};

/// 12 significant digits; magnitudes below 1e-12 print as 0.
std::string format_number(double value);

Table to_table(const ScenarioTrace& trace);

/// Table: aligned columns followed by the check list and a verdict line.
/// CSV: header row plus one row per step. JSON: array of step objects.
/// Checks only appear in the Table format.
std::string render(const Table& table, const std::vector<ScenarioCheck>& checks, Format format);

std::string render(const SuiteReport& report, Format format);

}  // namespace qentropy
