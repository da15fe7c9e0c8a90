#include "qentropy/script.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "qentropy/channels.hpp"
#include "qentropy/entropy.hpp"
#include "qentropy/errors.hpp"
#include "qentropy/gates.hpp"
#include "qentropy/ledger.hpp"
#include "qentropy/random.hpp"
#include "qentropy/tolerances.hpp"

namespace qentropy {

std::string Diagnostic::to_string() const {
  std::string out;
  if (line > 0) out += std::to_string(line) + ":" + std::to_string(column) + ": ";
  out += "error[" + code + "]: " + message;
  if (!expected.empty()) {
    out += " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i > 0) out += i + 1 == expected.size() ? " or " : ", ";
      out += expected[i];
    }
    out += ")";
  }
  return out;
}

bool ScriptRun::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

namespace {

// ---------------------------------------------------------------------------
// Located syntax tree

struct Pos {
  std::size_t line = 0;
  std::size_t column = 0;
};

struct LTerm {
  std::string head;
  std::vector<LTerm> args;
  bool is_number = false;
  Complex number{};
  Pos pos;
};

struct LEntry {
  std::string key;
  Pos key_pos;
  std::vector<LTerm> values;
};

struct LSection {
  std::string name;
  Pos pos;
  std::vector<LEntry> entries;
};

const std::vector<std::string> kSections = {"systems", "init", "steps", "partition", "reports"};

[[noreturn]] void syntax_error(Pos pos, std::string code, std::string message,
                               std::vector<std::string> expected = {}) {
  Diagnostic d;
  d.kind = Diagnostic::Kind::Syntax;
  d.code = "syntax." + code;
  d.line = pos.line;
  d.column = pos.column;
  d.message = std::move(message);
  d.expected = std::move(expected);
  throw ScriptError(std::move(d));
}

[[noreturn]] void semantic_error(Pos pos, std::string code, std::string message,
                                 std::string identifier = {}) {
  Diagnostic d;
  d.kind = Diagnostic::Kind::Semantic;
  d.code = "semantic." + code;
  d.line = pos.line;
  d.column = pos.column;
  d.message = std::move(message);
  d.identifier = std::move(identifier);
  throw ScriptError(std::move(d));
}

// ---------------------------------------------------------------------------
// Lexing and parsing, one line at a time

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return c >= '0' && c <= '9'; }

class LineParser {
 public:
  LineParser(std::string_view text, std::size_t line) : s_(text), line_(line) {}

  Pos pos() const { return {line_, i_ + 1}; }

  void skip_ws() {
    while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\t')) ++i_;
  }

  /// True at end of line or at a comment.
  bool at_end() {
    skip_ws();
    return i_ >= s_.size() || s_[i_] == '#';
  }

  char peek() {
    skip_ws();
    return i_ < s_.size() ? s_[i_] : '\0';
  }

  void expect(char c, std::vector<std::string> expected) {
    if (peek() != c) unexpected(std::move(expected));
    ++i_;
  }

  void expect_end() {
    if (!at_end()) unexpected({"end of line"});
  }

  [[noreturn]] void unexpected(std::vector<std::string> expected) {
    skip_ws();
    if (i_ >= s_.size() || s_[i_] == '#') {
      syntax_error(pos(), "expected_token", "unexpected end of line", std::move(expected));
    }
    const auto c = static_cast<unsigned char>(s_[i_]);
    if (c >= 0x80 || c < 0x20) {
      syntax_error(pos(), "unexpected_character",
                   "non-ASCII or control character outside a comment", std::move(expected));
    }
    syntax_error(pos(), "expected_token", std::string("unexpected '") + s_[i_] + "'",
                 std::move(expected));
  }

  std::string ident(const char* what) {
    skip_ws();
    if (i_ >= s_.size() || !ident_start(s_[i_])) unexpected({what});
    const std::size_t start = i_;
    while (i_ < s_.size() && ident_char(s_[i_])) ++i_;
    return std::string(s_.substr(start, i_ - start));
  }

  bool number_ahead() {
    const char c = peek();
    if (digit(c) || c == '.') return true;
    if ((c == '+' || c == '-') && i_ + 1 < s_.size()) {
      return digit(s_[i_ + 1]) || s_[i_ + 1] == '.';
    }
    return false;
  }

  LTerm item() {
    skip_ws();
    LTerm t;
    t.pos = pos();
    if (number_ahead()) {
      t.is_number = true;
      t.number = complex_literal();
      return t;
    }
    if (i_ >= s_.size() || !ident_start(s_[i_])) unexpected({"identifier", "number"});
    t.head = ident("identifier");
    if (peek() == '(') {
      ++i_;
      if (peek() != ')') {
        t.args.push_back(item());
        while (peek() == ',') {
          ++i_;
          t.args.push_back(item());
        }
      }
      expect(')', {"','", "')'"});
    }
    return t;
  }

  std::vector<LTerm> identifier_list() {
    std::vector<LTerm> out;
    if (at_end()) return out;
    auto one = [&] {
      skip_ws();
      LTerm t;
      t.pos = pos();
      t.head = ident("system name");
      out.push_back(std::move(t));
    };
    one();
    while (peek() == ',') {
      ++i_;
      one();
    }
    return out;
  }

 private:
  double real_literal() {
    const std::size_t start = i_;
    if (i_ < s_.size() && (s_[i_] == '+' || s_[i_] == '-')) ++i_;
    while (i_ < s_.size() && (digit(s_[i_]) || s_[i_] == '.')) ++i_;
    if (i_ < s_.size() && (s_[i_] == 'e' || s_[i_] == 'E')) {
      ++i_;
      if (i_ < s_.size() && (s_[i_] == '+' || s_[i_] == '-')) ++i_;
      while (i_ < s_.size() && digit(s_[i_])) ++i_;
    }
    std::string_view lit = s_.substr(start, i_ - start);
    if (!lit.empty() && lit.front() == '+') lit.remove_prefix(1);
    double value = 0;
    const auto [ptr, ec] = std::from_chars(lit.data(), lit.data() + lit.size(), value);
    if (ec != std::errc() || ptr != lit.data() + lit.size()) {
      syntax_error({line_, start + 1}, "invalid_number",
                   "malformed number '" + std::string(s_.substr(start, i_ - start)) + "'");
    }
    return value;
  }

  Complex complex_literal() {
    const double first = real_literal();
    if (i_ < s_.size() && s_[i_] == 'i') {
      ++i_;
      return {0.0, first};
    }
    if (i_ + 1 < s_.size() && (s_[i_] == '+' || s_[i_] == '-') &&
        (digit(s_[i_ + 1]) || s_[i_ + 1] == '.')) {
      const double second = real_literal();
      if (i_ >= s_.size() || s_[i_] != 'i') unexpected({"'i'"});
      ++i_;
      return {first, second};
    }
    return {first, 0.0};
  }

  std::string_view s_;
  std::size_t line_;
  std::size_t i_ = 0;
};

std::vector<LSection> parse_sections(std::string_view text) {
  std::vector<LSection> sections;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t start = 0;
  if (text.substr(0, 3) == "\xEF\xBB\xBF") start = 3;

  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    start = end + 1;

    LineParser p(line, line_no);
    if (p.at_end()) {
      if (end == text.size()) break;
      continue;
    }
    if (p.peek() == '[') {
      const Pos at = p.pos();
      p.expect('[', {"'['"});
      std::string name = p.ident("section name");
      p.expect(']', {"']'"});
      p.expect_end();
      if (std::find(kSections.begin(), kSections.end(), name) == kSections.end()) {
        syntax_error(at, "unknown_section", "unknown section [" + name + "]",
                     {"[systems]", "[init]", "[steps]", "[partition]", "[reports]"});
      }
      if (!seen.insert(name).second) {
        syntax_error(at, "duplicate_section", "section [" + name + "] appears twice");
      }
      sections.push_back({std::move(name), at, {}});
    } else {
      LEntry entry;
      entry.key_pos = p.pos();
      entry.key = p.ident("key or section header");
      if (sections.empty()) {
        syntax_error(entry.key_pos, "entry_outside_section", "entry before any section header",
                     {"section header"});
      }
      p.expect('=', {"'='"});
      const std::string& section = sections.back().name;
      if (section == "partition") {
        entry.values = p.identifier_list();
      } else {
        if (p.at_end()) p.unexpected({"value"});
        entry.values.push_back(p.item());
      }
      p.expect_end();
      sections.back().entries.push_back(std::move(entry));
    }
    if (end == text.size()) break;
  }
  return sections;
}

// ---------------------------------------------------------------------------
// Conversion between located and plain trees

Term strip(const LTerm& t) {
  Term out;
  out.head = t.head;
  out.is_number = t.is_number;
  out.number = t.number;
  for (const auto& a : t.args) out.args.push_back(strip(a));
  return out;
}

LTerm locate(const Term& t) {
  LTerm out;
  out.head = t.head;
  out.is_number = t.is_number;
  out.number = t.number;
  for (const auto& a : t.args) out.args.push_back(locate(a));
  return out;
}

LTerm ident_term(const std::string& name) {
  LTerm t;
  t.head = name;
  return t;
}

std::vector<LSection> locate(const ScenarioScript& script) {
  std::vector<LSection> out(5);
  for (std::size_t i = 0; i < 5; ++i) out[i].name = kSections[i];
  for (const auto& s : script.systems) {
    out[0].entries.push_back({s.name, {}, {locate(Term::num(static_cast<double>(s.dim)))}});
  }
  for (const auto& e : script.init) out[1].entries.push_back({e.system, {}, {locate(e.preset)}});
  for (const auto& e : script.steps) out[2].entries.push_back({e.label, {}, {locate(e.op)}});
  auto names = [](const std::vector<std::string>& v) {
    std::vector<LTerm> t;
    for (const auto& n : v) t.push_back(ident_term(n));
    return t;
  };
  out[3].entries.push_back({"A", {}, names(script.partition.a)});
  out[3].entries.push_back({"C", {}, names(script.partition.c)});
  out[3].entries.push_back({"R", {}, names(script.partition.r)});
  for (const auto& e : script.reports) out[4].entries.push_back({e.column, {}, {locate(e.expr)}});
  return out;
}

// ---------------------------------------------------------------------------
// Semantic validation

bool is_integer(const LTerm& t) {
  return t.is_number && t.number.imag() == 0 && std::floor(t.number.real()) == t.number.real();
}

class Validator {
 public:
  ScenarioScript build(const std::vector<LSection>& sections) {
    const LSection* by_name[5] = {};
    for (const auto& s : sections) {
      const auto idx = std::find(kSections.begin(), kSections.end(), s.name) - kSections.begin();
      by_name[idx] = &s;
    }
    if (!by_name[0] || by_name[0]->entries.empty()) {
      semantic_error(by_name[0] ? by_name[0]->pos : Pos{}, "no_systems",
                     "script declares no systems");
    }
    systems(*by_name[0]);
    if (by_name[1]) init(*by_name[1]);
    if (by_name[2]) steps(*by_name[2]);
    partition(by_name[3]);
    if (by_name[4]) reports(*by_name[4]);
    return std::move(out_);
  }

 private:
  void systems(const LSection& sec) {
    for (const auto& e : sec.entries) {
      const LTerm& v = e.values.front();
      if (!is_integer(v) || v.number.real() < 2 || v.number.real() > kMaxHilbertDim) {
        semantic_error(v.pos, "invalid_dimension",
                       "dimension of '" + e.key + "' must be an integer between 2 and " +
                           std::to_string(kMaxHilbertDim),
                       e.key);
      }
      if (dims_.count(e.key)) {
        semantic_error(e.key_pos, "duplicate_system", "system '" + e.key + "' declared twice", e.key);
      }
      const auto dim = static_cast<std::size_t>(v.number.real());
      dims_[e.key] = dim;
      out_.systems.push_back({e.key, dim});
    }
  }

  std::size_t system(const LTerm& t, const char* role = "system") {
    if (t.is_number || !t.args.empty()) {
      semantic_error(t.pos, "invalid_arguments", std::string("expected a ") + role + " name");
    }
    const auto it = dims_.find(t.head);
    if (it == dims_.end()) {
      semantic_error(t.pos, "undeclared_system", "undeclared system '" + t.head + "'", t.head);
    }
    return it->second;
  }

  void distinct(const std::vector<LTerm>& args, std::size_t from) {
    std::set<std::string> seen;
    for (std::size_t i = from; i < args.size(); ++i) {
      if (!seen.insert(args[i].head).second) {
        semantic_error(args[i].pos, "invalid_arguments",
                       "system '" + args[i].head + "' listed twice", args[i].head);
      }
    }
  }

  void arity(const LTerm& t, std::size_t lo, std::size_t hi) {
    if (t.args.size() < lo || t.args.size() > hi) {
      semantic_error(t.pos, "invalid_arguments",
                     "'" + t.head + "' takes " +
                         (lo == hi ? std::to_string(lo)
                                   : std::to_string(lo) + (hi == SIZE_MAX ? " or more" : "-" + std::to_string(hi))) +
                         " argument(s), got " + std::to_string(t.args.size()),
                     t.head);
    }
  }

  void qubit(const LTerm& t) {
    if (system(t) != 2) {
      semantic_error(t.pos, "dimension_mismatch", "'" + t.head + "' must be a qubit", t.head);
    }
  }

  void probability(const LTerm& t) {
    if (!t.is_number || t.number.imag() != 0 || t.number.real() < 0 || t.number.real() > 1) {
      semantic_error(t.pos, "invalid_arguments", "expected a probability in [0, 1]");
    }
  }

  void init(const LSection& sec) {
    std::set<std::string> seen;
    for (const auto& e : sec.entries) {
      const LTerm key = [&] {
        LTerm k = ident_term(e.key);
        k.pos = e.key_pos;
        return k;
      }();
      const std::size_t dim = system(key);
      if (!seen.insert(e.key).second) {
        semantic_error(e.key_pos, "duplicate_entry", "system '" + e.key + "' initialized twice", e.key);
      }
      const LTerm& v = e.values.front();
      if (v.is_number) semantic_error(v.pos, "unknown_preset", "expected a state preset");
      if (v.head == "zero" || v.head == "plus") {
        arity(v, 0, 0);
      } else if (v.head == "one") {
        arity(v, 0, 0);
      } else if (v.head == "minus") {
        arity(v, 0, 0);
        if (dim != 2) semantic_error(v.pos, "dimension_mismatch", "'minus' needs a qubit", e.key);
      } else if (v.head == "basis") {
        arity(v, 1, 1);
        const LTerm& k = v.args[0];
        if (!is_integer(k) || k.number.real() < 0 || k.number.real() >= static_cast<double>(dim)) {
          semantic_error(k.pos, "invalid_arguments",
                         "basis index must be an integer in [0, " + std::to_string(dim) + ")");
        }
      } else if (v.head == "amplitudes") {
        if (v.args.size() != dim) {
          semantic_error(v.pos, "dimension_mismatch",
                         "'" + e.key + "' has dimension " + std::to_string(dim) + " but " +
                             std::to_string(v.args.size()) + " amplitudes were given",
                         e.key);
        }
        double norm = 0;
        for (const auto& a : v.args) {
          if (!a.is_number) semantic_error(a.pos, "invalid_arguments", "amplitudes must be numbers");
          norm += std::norm(a.number);
        }
        if (norm == 0) semantic_error(v.pos, "invalid_arguments", "amplitudes are all zero");
      } else {
        semantic_error(v.pos, "unknown_preset", "unknown state preset '" + v.head + "'", v.head);
      }
      out_.init.push_back({e.key, strip(v)});
    }
  }

  void steps(const LSection& sec) {
    std::set<std::string> labels;
    for (const auto& e : sec.entries) {
      if (e.key == "init" || labels.count(e.key)) {
        semantic_error(e.key_pos, "duplicate_label",
                       "step label '" + e.key + "' is reserved or already used", e.key);
      }
      const LTerm& op = e.values.front();
      if (op.is_number) semantic_error(op.pos, "unknown_operation", "expected an operation");
      const auto& a = op.args;
      if (op.head == "x" || op.head == "z" || op.head == "h") {
        arity(op, 1, 1);
        qubit(a[0]);
      } else if (op.head == "cnot") {
        arity(op, 2, 2);
        system(a[0]);
        system(a[1]);
        distinct(a, 0);
      } else if (op.head == "swap") {
        arity(op, 2, 2);
        const auto d0 = system(a[0]);
        const auto d1 = system(a[1]);
        distinct(a, 0);
        if (d0 != d1) semantic_error(op.pos, "dimension_mismatch", "swap needs equal dimensions");
      } else if (op.head == "haar") {
        arity(op, 1, SIZE_MAX);
        for (const auto& t : a) system(t);
        distinct(a, 0);
      } else if (op.head == "bitflip" || op.head == "dephase") {
        arity(op, 2, 2);
        qubit(a[0]);
        probability(a[1]);
      } else if (op.head == "twirl") {
        arity(op, 2, SIZE_MAX);
        if (!is_integer(a[0]) || a[0].number.real() < 1 || a[0].number.real() > 64) {
          semantic_error(a[0].pos, "invalid_arguments", "branch count must be an integer in [1, 64]");
        }
        for (std::size_t i = 1; i < a.size(); ++i) system(a[i]);
        distinct(a, 1);
      } else if (op.head == "measure") {
        arity(op, 1, 2);
        system(a[0]);
        if (a.size() == 2 && (a[1].is_number || !a[1].args.empty() ||
                              (a[1].head != "z" && a[1].head != "x"))) {
          semantic_error(a[1].pos, "invalid_arguments", "measurement basis must be 'z' or 'x'");
        }
      } else if (op.head == "invert") {
        arity(op, 1, 1);
        if (a[0].is_number || !a[0].args.empty() || !labels.count(a[0].head)) {
          semantic_error(a[0].pos, "undeclared_step",
                         "'invert' must name an earlier step, got '" + a[0].head + "'", a[0].head);
        }
      } else {
        semantic_error(op.pos, "unknown_operation", "unknown operation '" + op.head + "'", op.head);
      }
      labels.insert(e.key);
      out_.steps.push_back({e.key, strip(op)});
    }
  }

  void partition(const LSection* sec) {
    if (!sec) semantic_error({}, "partition_not_covering", "script has no [partition] section");
    std::set<std::string> assigned;
    std::set<std::string> keys;
    for (const auto& e : sec->entries) {
      std::vector<std::string>* block = nullptr;
      if (e.key == "A") block = &out_.partition.a;
      if (e.key == "C") block = &out_.partition.c;
      if (e.key == "R") block = &out_.partition.r;
      if (!block) {
        semantic_error(e.key_pos, "unknown_block", "partition blocks are A, C and R", e.key);
      }
      if (!keys.insert(e.key).second) {
        semantic_error(e.key_pos, "duplicate_entry", "block " + e.key + " assigned twice", e.key);
      }
      for (const auto& t : e.values) {
        system(t);
        if (!assigned.insert(t.head).second) {
          semantic_error(t.pos, "partition_overlap",
                         "system '" + t.head + "' assigned to more than one block", t.head);
        }
        block->push_back(t.head);
      }
    }
    for (const auto& s : out_.systems) {
      if (!assigned.count(s.name)) {
        semantic_error(sec->pos, "partition_not_covering",
                       "system '" + s.name + "' is not assigned to a block", s.name);
      }
    }
    if (out_.partition.a.empty() || out_.partition.c.empty()) {
      semantic_error(sec->pos, "empty_block", "blocks A and C must both be non-empty");
    }
  }

  void reports(const LSection& sec) {
    std::set<std::string> columns;
    for (const auto& e : sec.entries) {
      if (e.key == "step" || !columns.insert(e.key).second) {
        semantic_error(e.key_pos, "duplicate_column",
                       "report column '" + e.key + "' is reserved or already used", e.key);
      }
      const LTerm& x = e.values.front();
      if (x.is_number) semantic_error(x.pos, "unknown_report", "expected a report expression");
      if (x.head == "entropy") {
        arity(x, 1, SIZE_MAX);
        for (const auto& t : x.args) system(t);
        distinct(x.args, 0);
      } else if (x.head == "mutual") {
        arity(x, 2, 2);
        system(x.args[0]);
        system(x.args[1]);
        distinct(x.args, 0);
      } else if (x.head == "block_entropy") {
        arity(x, 1, 1);
        const auto& b = x.args[0];
        if (b.is_number || !b.args.empty() || (b.head != "A" && b.head != "C" && b.head != "R")) {
          semantic_error(b.pos, "invalid_arguments", "block must be A, C or R");
        }
      } else if (x.head == "block_mutual" || x.head == "global_entropy" || x.head == "residual") {
        arity(x, 0, 0);
      } else {
        semantic_error(x.pos, "unknown_report", "unknown report expression '" + x.head + "'", x.head);
      }
      out_.reports.push_back({e.key, strip(x)});
    }
  }

  std::map<std::string, std::size_t> dims_;
  ScenarioScript out_;
};

// ---------------------------------------------------------------------------
// Rendering

std::string render_number(Complex z) {
  char buf[64];
  if (z.imag() == 0) {
    std::snprintf(buf, sizeof buf, "%.17g", z.real());
  } else if (z.real() == 0) {
    std::snprintf(buf, sizeof buf, "%.17gi", z.imag());
  } else {
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
  }
  return buf;
}

std::string render_term(const Term& t) {
  if (t.is_number) return render_number(t.number);
  if (t.args.empty()) return t.head;
  std::string out = t.head + "(";
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i > 0) out += ", ";
    out += render_term(t.args[i]);
  }
  return out + ")";
}

// ---------------------------------------------------------------------------
// Execution

struct Applied {
  ComplexMatrix unitary;
  std::vector<std::size_t> targets;
};

class Runtime {
 public:
  Runtime(const ScenarioScript& script, std::uint64_t seed) : script_(script), seed_(seed) {
    std::map<std::string, const Term*> presets;
    for (const auto& e : script.init) presets[e.system] = &e.preset;
    std::optional<PureState> psi;
    for (const auto& s : script.systems) {
      index_[s.name] = names_.size();
      names_.push_back(s.name);
      const auto it = presets.find(s.name);
      PureState local = it == presets.end() ? PureState::basis({s.dim}, 0) : preset(*it->second, s.dim);
      psi = psi ? tensor(*psi, local) : local;
    }
    psi_.emplace(std::move(*psi));
    for (const auto& s : script.systems) blocks_.push_back(block_of(s.name));
  }

  const PureState& state() const { return *psi_; }
  Partition partition() const { return Partition(blocks_); }

  void step(std::size_t index, const StepDecl& decl) {
    const Term& op = decl.op;
    Applied applied;
    if (op.head == "invert") {
      const Applied& prior = applied_.at(op.args[0].head);
      applied = {prior.unitary.adjoint(), prior.targets};
    } else if (op.head == "x" || op.head == "z" || op.head == "h") {
      applied.targets = {idx(op.args[0])};
      applied.unitary = op.head == "x" ? gates::pauli_x()
                        : op.head == "z" ? gates::pauli_z()
                                         : gates::hadamard();
    } else if (op.head == "cnot") {
      applied.targets = {idx(op.args[0]), idx(op.args[1])};
      applied.unitary = gates::controlled_shift(dim(op.args[0]), dim(op.args[1]));
    } else if (op.head == "swap") {
      applied.targets = {idx(op.args[0]), idx(op.args[1])};
      const std::size_t d = dim(op.args[0]);
      applied.unitary = ComplexMatrix::Zero(d * d, d * d);
      for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = 0; b < d; ++b) applied.unitary(b * d + a, a * d + b) = 1.0;
      }
    } else if (op.head == "haar") {
      std::size_t d = 1;
      for (const auto& t : op.args) {
        applied.targets.push_back(idx(t));
        d *= dim(t);
      }
      applied.unitary = random_unitary(d, derive_seed(seed_, index));
    } else if (op.head == "bitflip" || op.head == "dephase") {
      const double p = op.args[1].number.real();
      const ComplexMatrix flip = op.head == "bitflip" ? gates::pauli_x() : gates::pauli_z();
      const RandomUnitaryMap map({{1.0 - p, ComplexMatrix::Identity(2, 2)}, {p, flip}});
      applied = dilated(map, {idx(op.args[0])}, decl.label);
    } else if (op.head == "twirl") {
      const auto k = static_cast<std::size_t>(op.args[0].number.real());
      std::vector<std::size_t> targets;
      std::size_t d = 1;
      for (std::size_t i = 1; i < op.args.size(); ++i) {
        targets.push_back(idx(op.args[i]));
        d *= dim(op.args[i]);
      }
      applied = dilated(random_unitary_map(d, k, derive_seed(seed_, index)), targets, decl.label);
    } else if (op.head == "measure") {
      const std::size_t d = dim(op.args[0]);
      const bool fourier = op.args.size() == 2 && op.args[1].head == "x";
      const std::size_t pointer = append_ancilla(decl.label, PureState::basis({d}, 0));
      applied.targets = {idx(op.args[0]), pointer};
      applied.unitary = gates::controlled_shift(d, d);
      if (fourier) {
        const ComplexMatrix f = kron(gates::fourier(d), ComplexMatrix::Identity(d, d));
        applied.unitary = f * applied.unitary * f.adjoint();
      }
    }
    psi_.emplace(apply_local(applied.unitary, applied.targets, *psi_));
    applied_[decl.label] = std::move(applied);
  }

  double evaluate(const Term& expr, const BlockEntropies& initial) const {
    const PureState& psi = *psi_;
    if (expr.head == "entropy") {
      std::vector<std::size_t> subset;
      for (const auto& t : expr.args) subset.push_back(idx(t));
      return subsystem_entropy(psi, subset);
    }
    if (expr.head == "mutual") {
      const std::size_t x[] = {idx(expr.args[0])};
      const std::size_t y[] = {idx(expr.args[1])};
      const std::size_t xy[] = {x[0], y[0]};
      return subsystem_entropy(psi, x) + subsystem_entropy(psi, y) - subsystem_entropy(psi, xy);
    }
    const BlockEntropies blocks = block_entropies(psi, partition());
    if (expr.head == "block_entropy") {
      const auto& b = expr.args[0].head;
      return b == "A" ? blocks.a : b == "C" ? blocks.c : blocks.r;
    }
    if (expr.head == "block_mutual") return blocks.mutual();
    if (expr.head == "global_entropy") return von_neumann_entropy(psi);
    return ledger_delta(initial, blocks, "").residual;
  }

 private:
  PureState preset(const Term& t, std::size_t d) const {
    ComplexVector v = ComplexVector::Zero(d);
    if (t.head == "zero") {
      v(0) = 1;
    } else if (t.head == "one") {
      v(1) = 1;
    } else if (t.head == "plus") {
      v.setConstant(1.0 / std::sqrt(static_cast<double>(d)));
    } else if (t.head == "minus") {
      v << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
    } else if (t.head == "basis") {
      v(static_cast<Eigen::Index>(t.args[0].number.real())) = 1;
    } else {
      for (std::size_t i = 0; i < d; ++i) v(static_cast<Eigen::Index>(i)) = t.args[i].number;
      v /= v.norm();
    }
    return PureState({d}, std::move(v));
  }

  Block block_of(const std::string& name) const {
    const auto& p = script_.partition;
    if (std::find(p.a.begin(), p.a.end(), name) != p.a.end()) return Block::A;
    if (std::find(p.c.begin(), p.c.end(), name) != p.c.end()) return Block::C;
    return Block::R;
  }

  std::size_t idx(const Term& t) const { return index_.at(t.head); }
  std::size_t dim(const Term& t) const { return psi_->dims()[idx(t)]; }

  std::size_t append_ancilla(const std::string& label, const PureState& start) {
    psi_.emplace(tensor(*psi_, start));
    blocks_.push_back(Block::R);
    names_.push_back("~" + label);
    return names_.size() - 1;
  }

  Applied dilated(const RandomUnitaryMap& map, std::vector<std::size_t> targets,
                  const std::string& label) {
    const std::size_t pointer =
        append_ancilla(label, PureState({map.branches().size()}, branch_pointer(map)));
    targets.push_back(pointer);
    return {branch_controlled_unitary(map), std::move(targets)};
  }

  const ScenarioScript& script_;
  std::uint64_t seed_;
  std::vector<std::string> names_;
  std::map<std::string, std::size_t> index_;
  std::vector<Block> blocks_;
  std::optional<PureState> psi_;
  std::map<std::string, Applied> applied_;
};

std::vector<ReportDecl> default_reports() {
  return {{"S_A", Term::call("block_entropy", {Term::ident("A")})},
          {"S_C", Term::call("block_entropy", {Term::ident("C")})},
          {"S_R", Term::call("block_entropy", {Term::ident("R")})},
          {"mutual_AC", Term::ident("block_mutual")},
          {"S_global", Term::ident("global_entropy")},
          {"residual", Term::ident("residual")}};
}

}  // namespace

// ---------------------------------------------------------------------------

ScenarioScript parse_script(std::string_view text) {
  return Validator().build(parse_sections(text));
}

ScenarioScript parse_script(std::istream& in) {
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_script(text);
}

void validate_script(const ScenarioScript& script) { Validator().build(locate(script)); }

std::string render_script(const ScenarioScript& script) {
  std::ostringstream out;
  out << "[systems]\n";
  for (const auto& s : script.systems) out << s.name << " = " << s.dim << '\n';
  out << "\n[init]\n";
  for (const auto& e : script.init) out << e.system << " = " << render_term(e.preset) << '\n';
  out << "\n[steps]\n";
  for (const auto& e : script.steps) out << e.label << " = " << render_term(e.op) << '\n';
  out << "\n[partition]\n";
  auto block = [&](const char* key, const std::vector<std::string>& names) {
    out << key << " =";
    for (std::size_t i = 0; i < names.size(); ++i) out << (i == 0 ? " " : ", ") << names[i];
    out << '\n';
  };
  block("A", script.partition.a);
  block("C", script.partition.c);
  block("R", script.partition.r);
  out << "\n[reports]\n";
  for (const auto& e : script.reports) out << e.column << " = " << render_term(e.expr) << '\n';
  return out.str();
}

ScriptRun run_script(const ScenarioScript& script, std::uint64_t seed) {
  validate_script(script);
  Runtime rt(script, seed);
  const BlockEntropies initial = block_entropies(rt.state(), rt.partition());
  const auto reports = script.reports.empty() ? default_reports() : script.reports;

  ScriptRun run;
  for (const auto& r : reports) run.table.columns.push_back(r.column);
  double max_global = 0;
  double max_residual = 0;
  auto record = [&](const std::string& label) {
    std::vector<double> row;
    for (const auto& r : reports) row.push_back(rt.evaluate(r.expr, initial));
    run.table.labels.push_back(label);
    run.table.rows.push_back(std::move(row));
    const BlockEntropies now = block_entropies(rt.state(), rt.partition());
    const LedgerRecord rec = ledger_delta(initial, now, label);
    max_global = std::max(max_global, von_neumann_entropy(rt.state()));
    max_residual = std::max({max_residual, std::abs(rec.residual), rec.purification_gap});
  };

  record("init");
  for (std::size_t i = 0; i < script.steps.size(); ++i) {
    rt.step(i, script.steps[i]);
    record(script.steps[i].label);
  }
  run.checks.push_back({"global entropy stays 0", max_global, 1e-9, max_global <= 1e-9});
  run.checks.push_back(
      {"entropy balance residual", max_residual, tol::balance, max_residual <= tol::balance});
  return run;
}

}  // namespace qentropy
