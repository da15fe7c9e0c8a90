#include <fstream>
#include <sstream>

#include "doctest.h"
#include "qentropy/errors.hpp"
#include "qentropy/script.hpp"
#include "qentropy/tolerances.hpp"
#include "script_gen.hpp"

using namespace qentropy;

namespace {

std::string read(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::ostringstream b;
  b << in.rdbuf();
  return b.str();
}

Diagnostic diagnose(std::string_view text) {
  try {
    parse_script(text);
  } catch (const ScriptError& e) {
    return e.diagnostic();
  }
  FAIL("script was accepted: " << text);
  return {};
}

const char* kMinimal =
    "[systems]\n"
    "spin = 2\n"
    "lab = 2\n"
    "[partition]\n"
    "A = lab\n"
    "C = spin\n";

double cell(const ScriptRun& run, std::size_t row, const std::string& column) {
  const auto& cols = run.table.columns;
  const auto it = std::find(cols.begin(), cols.end(), column);
  REQUIRE(it != cols.end());
  return run.table.rows[row][static_cast<std::size_t>(it - cols.begin())];
}

}  // namespace

TEST_CASE("bundled measurement script") {
  const ScenarioScript s = parse_script(read(QENTROPY_DATA_DIR "/stern_gerlach.scn"));
  const ScriptRun run = run_script(s, 0);
  REQUIRE(run.table.labels == std::vector<std::string>{"init", "measure", "invert"});
  CHECK(std::abs(cell(run, 0, "S_spin")) < 1e-9);
  CHECK(std::abs(cell(run, 1, "S_spin") - 1.0) < 1e-9);
  CHECK(std::abs(cell(run, 2, "S_spin")) < 1e-9);
  CHECK(std::abs(cell(run, 1, "mutual_AC") - 2.0) < 1e-9);
  CHECK(std::abs(cell(run, 2, "mutual_AC")) < 1e-9);
  CHECK(run.passed());
}

TEST_CASE("empty steps give one row") {
  const ScriptRun run = run_script(parse_script(std::string(kMinimal) + "[steps]\n"), 0);
  CHECK(run.table.labels == std::vector<std::string>{"init"});
  CHECK(run.table.columns.size() == 6);
  CHECK(run.passed());
}

TEST_CASE("grammar details") {
  const ScenarioScript s = parse_script(
      "\xEF\xBB\xBF# comment with non-ASCII: \xE2\x86\x92 spin\r\n"
      "[systems]   # trailing comment\r\n"
      "\tspin=2\n"
      "qutrit = 3\n"
      "[init]\n"
      "qutrit = amplitudes(1, -0.5i, 2.5e-1+1e0i)\n"
      "spin = basis(1)\n"
      "[partition]\n"
      "A = qutrit\n"
      "C = spin\n"
      "R =\n");
  REQUIRE(s.init.size() == 2);
  const Term& amps = s.init[0].preset;
  REQUIRE(amps.args.size() == 3);
  CHECK(amps.args[1].number == Complex(0, -0.5));
  CHECK(amps.args[2].number == Complex(0.25, 1.0));
  CHECK(s.partition.r.empty());
  CHECK(parse_script(render_script(s)) == s);
}

TEST_CASE("dilated steps keep the global state pure") {
  const ScenarioScript s = parse_script(
      "[systems]\nspin = 2\nlab = 3\nenv = 2\n"
      "[init]\nspin = plus\n"
      "[steps]\n"
      "noise = dephase(spin, 0.3)\n"
      "look = measure(lab, x)\n"
      "rec = cnot(spin, lab)\n"
      "mix = twirl(3, spin, env)\n"
      "scramble = haar(lab, env)\n"
      "undo = invert(scramble)\n"
      "[partition]\nA = lab\nC = spin\nR = env\n");
  const ScriptRun a = run_script(s, 5);
  const ScriptRun b = run_script(s, 5);
  CHECK(a.passed());
  CHECK(a.table.rows == b.table.rows);
  CHECK(a.table.rows.size() == 7);
  // Full dephasing at p = 0.3 leaves spin coherence 0.4: S = h((1 +- 0.4) / 2).
  const double h = -(0.7 * std::log2(0.7) + 0.3 * std::log2(0.3));
  CHECK(std::abs(cell(a, 1, "S_C") - h) < 1e-12);
  CHECK(run_script(s, 6).table.rows != a.table.rows);
}

TEST_CASE("syntax diagnostics") {
  struct Case {
    std::string text;
    std::string code;
    std::size_t line, column;
  };
  const std::vector<Case> cases = {
      {"[systems\nspin = 2\n", "syntax.expected_token", 1, 9},
      {"[stuff]\n", "syntax.unknown_section", 1, 1},
      {"[systems]\nspin = 2\n[systems]\n", "syntax.duplicate_section", 3, 1},
      {"spin = 2\n", "syntax.entry_outside_section", 1, 1},
      {"[systems]\nspin = 1.2.3\n", "syntax.invalid_number", 2, 8},
      {"[systems]\nspin = \xC3\xA9\n", "syntax.unexpected_character", 2, 8},
      {"[systems]\nspin 2\n", "syntax.expected_token", 2, 6},
      {"[systems]\nspin =\n", "syntax.expected_token", 2, 7},
      {"[systems]\nspin = 2 3\n", "syntax.expected_token", 2, 10},
      {"[init]\nspin = amplitudes(1, 2\n", "syntax.expected_token", 2, 23},
      {"[init]\nspin = amplitudes(1+2)\n", "syntax.expected_token", 2, 22},
  };
  for (const auto& c : cases) {
    CAPTURE(c.text);
    const Diagnostic d = diagnose(c.text);
    CHECK(d.kind == Diagnostic::Kind::Syntax);
    CHECK(d.code == c.code);
    CHECK(d.line == c.line);
    CHECK(d.column == c.column);
  }
  const Diagnostic d = diagnose("[systems]\nspin 2\n");
  CHECK(d.expected == std::vector<std::string>{"'='"});
  CHECK(d.to_string() == "2:6: error[syntax.expected_token]: unexpected '2' (expected '=')");
}

TEST_CASE("semantic diagnostics") {
  const std::string base = kMinimal;
  struct Case {
    std::string text;
    std::string code;
    std::string identifier;
  };
  const std::vector<Case> cases = {
      {base + "[steps]\nm = cnot(spin, ghost)\n", "semantic.undeclared_system", "ghost"},
      {base + "[init]\nghost = zero\n", "semantic.undeclared_system", "ghost"},
      {"[systems]\nspin = 2\nspin = 3\n", "semantic.duplicate_system", "spin"},
      {"[systems]\nspin = 1\n", "semantic.invalid_dimension", "spin"},
      {"[systems]\nspin = 2.5\n", "semantic.invalid_dimension", "spin"},
      {base + "[steps]\nm = teleport(spin)\n", "semantic.unknown_operation", "teleport"},
      {"[systems]\nspin = 2\nlab = 3\n[steps]\nm = h(lab)\n[partition]\nA = lab\nC = spin\n",
       "semantic.dimension_mismatch", "lab"},
      {"[systems]\nspin = 2\nlab = 3\n[steps]\nm = swap(lab, spin)\n[partition]\nA = lab\nC = spin\n",
       "semantic.dimension_mismatch", ""},
      {"[systems]\nspin = 2\nlab = 2\nextra = 2\n[partition]\nA = lab\nC = spin\n",
       "semantic.partition_not_covering", "extra"},
      {"[systems]\nspin = 2\nlab = 2\n[partition]\nA = lab, spin\nC = spin\n", "semantic.partition_overlap",
       "spin"},
      {base + "[steps]\nm = invert(later)\nlater = x(spin)\n", "semantic.undeclared_step", "later"},
      {base + "[steps]\nm = x(spin)\nm = z(spin)\n", "semantic.duplicate_label", "m"},
      {base + "[steps]\ninit = x(spin)\n", "semantic.duplicate_label", "init"},
      {base + "[init]\nspin = cat\n", "semantic.unknown_preset", "cat"},
      {base + "[reports]\nx = energy\n", "semantic.unknown_report", "energy"},
      {"[systems]\nspin = 2\n[partition]\nB = spin\n", "semantic.unknown_block", "B"},
      {"[systems]\nspin = 2\nlab = 2\n[partition]\nA = lab, spin\n", "semantic.empty_block", ""},
      {base + "[steps]\nm = cnot(spin)\n", "semantic.invalid_arguments", "cnot"},
      {base + "[steps]\nm = bitflip(spin, 1.5)\n", "semantic.invalid_arguments", ""},
      {"[partition]\n", "semantic.no_systems", ""},
      {base.substr(0, base.find("[partition]")), "semantic.partition_not_covering", ""},
  };
  for (const auto& c : cases) {
    CAPTURE(c.text);
    const Diagnostic d = diagnose(c.text);
    CHECK(d.kind == Diagnostic::Kind::Semantic);
    CHECK(d.code == c.code);
    CHECK(d.identifier == c.identifier);
  }
  const Diagnostic d = diagnose(base + "[steps]\nm = cnot(spin, ghost)\n");
  CHECK(d.line == 8);
  CHECK(d.column == 16);
  CHECK(d.message.find("ghost") != std::string::npos);
}

TEST_CASE("validation of scripts built in code") {
  ScenarioScript s = parse_script(kMinimal);
  CHECK_NOTHROW(validate_script(s));
  s.steps.push_back({"m", Term::call("cnot", {Term::ident("spin"), Term::ident("nobody")})});
  try {
    validate_script(s);
    FAIL("accepted");
  } catch (const ScriptError& e) {
    CHECK(e.diagnostic().code == "semantic.undeclared_system");
    CHECK(e.diagnostic().line == 0);
  }
  CHECK_THROWS_AS(run_script(s, 0), ScriptError);
}

TEST_CASE("round trip over generated scripts") {
  for (std::uint32_t seed = 0; seed < 200; ++seed) {
    CAPTURE(seed);
    const ScenarioScript s = testing::random_script(seed);
    CHECK_NOTHROW(validate_script(s));
    const std::string text = render_script(s);
    const ScenarioScript back = parse_script(text);
    CHECK(back == s);
    CHECK(render_script(back) == text);
  }
}

TEST_CASE("generated scripts run and balance") {
  for (std::uint32_t seed = 0; seed < 40; ++seed) {
    CAPTURE(seed);
    const ScenarioScript s = testing::random_script(seed);
    std::size_t dim = 1;
    for (const auto& sys : s.systems) dim *= sys.dim;
    for (const auto& step : s.steps) {
      const Term& op = step.op;
      if (op.head == "bitflip" || op.head == "dephase") dim *= 2;
      if (op.head == "twirl") dim *= static_cast<std::size_t>(op.args[0].number.real());
      if (op.head == "measure") {
        for (const auto& sys : s.systems)
          if (sys.name == op.args[0].head) dim *= sys.dim;
      }
    }
    if (dim > kMaxHilbertDim) {
      CHECK_THROWS_AS(run_script(s, seed), ResourceLimitError);
      continue;
    }
    const ScriptRun run = run_script(s, seed);
    CHECK(run.table.rows.size() == s.steps.size() + 1);
    CHECK(run.passed());
  }
}
