#include "qentropy/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "json.hpp"

namespace qentropy {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json json_number(double value) {
  if (!std::isfinite(value)) return nullptr;
  return std::strtod(format_number(value).c_str(), nullptr);
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

bool all_passed(const std::vector<ScenarioCheck>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

}  // namespace

std::optional<Format> parse_format(std::string_view name) {
  if (name == "table") return Format::Table;
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  return std::nullopt;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::abs(value) < 1e-12) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

Table to_table(const ScenarioTrace& trace) {
  Table t;
  t.columns = {trace.system_column, "S_lab", "S_global", "mutual_AC"};
  if (!trace.rows.empty()) {
    for (const auto& [name, _] : trace.rows.front().extra) t.columns.push_back(name);
  }
  for (const auto& row : trace.rows) {
    t.labels.push_back(row.step_label);
    std::vector<double> values = {row.s_system, row.s_lab, row.s_global, row.mutual_ac};
    for (const auto& [_, v] : row.extra) values.push_back(v);
    t.rows.push_back(std::move(values));
  }
  return t;
}

std::string render(const Table& table, const std::vector<ScenarioCheck>& checks, Format format) {
  std::ostringstream out;
  switch (format) {
    case Format::Json: {
      ordered_json rows = ordered_json::array();
      for (std::size_t r = 0; r < table.rows.size(); ++r) {
        ordered_json obj;
        obj["step"] = table.labels[r];
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
          obj[table.columns[c]] = json_number(table.rows[r][c]);
        }
        rows.push_back(std::move(obj));
      }
      out << rows.dump(2) << '\n';
      break;
    }
    case Format::Csv: {
      out << "step";
      for (const auto& c : table.columns) out << ',' << c;
      out << '\n';
      for (std::size_t r = 0; r < table.rows.size(); ++r) {
        out << table.labels[r];
        for (double v : table.rows[r]) out << ',' << format_number(v);
        out << '\n';
      }
      break;
    }
    case Format::Table: {
      std::vector<std::size_t> width(table.columns.size() + 1, 4);
      for (const auto& l : table.labels) width[0] = std::max(width[0], l.size());
      std::vector<std::vector<std::string>> cells;
      for (std::size_t c = 0; c < table.columns.size(); ++c) {
        width[c + 1] = std::max(width[c + 1], table.columns[c].size());
      }
      for (const auto& row : table.rows) {
        std::vector<std::string> line;
        for (std::size_t c = 0; c < row.size(); ++c) {
          line.push_back(format_number(row[c]));
          width[c + 1] = std::max(width[c + 1], line.back().size());
        }
        cells.push_back(std::move(line));
      }
      out << pad("step", width[0]);
      for (std::size_t c = 0; c < table.columns.size(); ++c) out << "  " << pad(table.columns[c], width[c + 1]);
      out << '\n';
      for (std::size_t r = 0; r < cells.size(); ++r) {
        out << pad(table.labels[r], width[0]);
        for (std::size_t c = 0; c < cells[r].size(); ++c) out << "  " << pad(cells[r][c], width[c + 1]);
        out << '\n';
      }
      if (!checks.empty()) {
        out << '\n';
        for (const auto& c : checks) {
          out << (c.passed ? "[pass] " : "[FAIL] ") << c.name << ": " << format_number(c.value)
              << " (tolerance " << format_number(c.tolerance) << ")\n";
        }
      }
      out << "verdict: " << (all_passed(checks) ? "pass" : "FAIL") << '\n';
      break;
    }
  }
  return out.str();
}

std::string render(const SuiteReport& report, Format format) {
  std::ostringstream out;
  const std::string name(suite_name(report.suite));
  switch (format) {
    case Format::Json: {
      ordered_json obj;
      obj["suite"] = name;
      obj["metric"] = report.metric;
      obj["instances"] = report.instances;
      obj["passed"] = report.passed;
      obj["failed"] = report.instances - report.passed;
      obj["worst"] = json_number(report.worst);
      obj["tolerance"] = report.tolerance;
      if (report.suite == Suite::Balance) obj["map_instances"] = report.variant_instances;
      obj["failures"] = report.failures;
      out << obj.dump(2) << '\n';
      break;
    }
    case Format::Csv:
      out << "suite,instances,passed,failed,worst,tolerance\n"
          << name << ',' << report.instances << ',' << report.passed << ','
          << report.instances - report.passed << ',' << format_number(report.worst) << ','
          << format_number(report.tolerance) << '\n';
      break;
    case Format::Table:
      out << "suite:     " << name << '\n'
          << "metric:    " << report.metric << '\n'
          << "instances: " << report.instances;
      if (report.suite == Suite::Balance) {
        out << " (" << report.variant_instances << " random-unitary maps)";
      }
      out << '\n'
          << "passed:    " << report.passed << '/' << report.instances << '\n'
          << "worst:     " << format_number(report.worst) << " (tolerance "
          << format_number(report.tolerance) << ")\n";
      if (!report.failures.empty()) {
        out << "failing instances:";
        for (std::size_t i = 0; i < std::min<std::size_t>(report.failures.size(), 20); ++i) {
          out << ' ' << report.failures[i];
        }
        out << '\n';
      }
      out << "verdict:   " << (report.all_passed() ? "pass" : "FAIL") << '\n';
      break;
  }
  return out.str();
}

}  // namespace qentropy
