#pragma once

#include <cstdint>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qentropy/report.hpp"
#include "qentropy/scenarios.hpp"
#include "qentropy/states.hpp"

namespace qentropy {

/// A value in a script entry: a number (real or complex), a bare identifier,
/// or a call `head(arg, ...)`. Identifiers are calls with no arguments.
struct Term {
  std::string head;
  std::vector<Term> args;
  bool is_number = false;
  Complex number{};

  static Term ident(std::string name) { return {std::move(name), {}, false, {}}; }
  static Term num(Complex value) { return {{}, {}, true, value}; }
  static Term call(std::string name, std::vector<Term> args) {
    return {std::move(name), std::move(args), false, {}};
  }

  bool operator==(const Term& other) const = default;
};

struct SystemDecl {
  std::string name;
  std::size_t dim = 2;
  bool operator==(const SystemDecl&) const = default;
};

struct InitEntry {
  std::string system;
  Term preset;
  bool operator==(const InitEntry&) const = default;
};

struct StepDecl {
  std::string label;
  Term op;
  bool operator==(const StepDecl&) const = default;
};

struct PartitionDecl {
  std::vector<std::string> a;
  std::vector<std::string> c;
  std::vector<std::string> r;
  bool operator==(const PartitionDecl&) const = default;
};

struct ReportDecl {
  std::string column;
  Term expr;
  bool operator==(const ReportDecl&) const = default;
};

struct ScenarioScript {
  std::vector<SystemDecl> systems;
  std::vector<InitEntry> init;
  std::vector<StepDecl> steps;
  PartitionDecl partition;
  std::vector<ReportDecl> reports;
  bool operator==(const ScenarioScript&) const = default;
};

struct Diagnostic {
  enum class Kind { Syntax, Semantic };

  Kind kind = Kind::Syntax;
  /// Stable machine-readable code, e.g. "syntax.expected_token" or
  /// "semantic.undeclared_system".
  std::string code;
  /// 1-based; 0 when the script did not come from text.
  std::size_t line = 0;
  std::size_t column = 0;
  std::string message;
  /// Offending identifier, when there is one.
  std::string identifier;
  /// Tokens that would have been accepted (syntax errors only).
  std::vector<std::string> expected;

  std::string to_string() const;
};

class ScriptError : public std::runtime_error {
 public:
  explicit ScriptError(Diagnostic diagnostic)
      : std::runtime_error(diagnostic.to_string()), diagnostic_(std::move(diagnostic)) {}

  const Diagnostic& diagnostic() const { return diagnostic_; }

 private:
  Diagnostic diagnostic_;
};

/// Parses and validates; throws ScriptError.
ScenarioScript parse_script(std::string_view text);
ScenarioScript parse_script(std::istream& in);

/// Canonical text form; parse_script(render_script(s)) == s for valid s.
std::string render_script(const ScenarioScript& script);

/// Semantic validation of a script built in code. Diagnostics carry no position.
void validate_script(const ScenarioScript& script);

struct ScriptRun {
  Table table;
  std::vector<ScenarioCheck> checks;

  bool passed() const;
};

/// Executes the steps on a pure global state. Non-unitary steps (noise maps,
/// measurements) are dilated: their environment or pointer ancilla joins
/// block R, so the global state stays pure and the entropy balance applies.
/// Rows: "init" followed by one row per step.
ScriptRun run_script(const ScenarioScript& script, std::uint64_t seed);

}  // namespace qentropy
