#pragma once

// The .lfw spec language: one field block followed by set and function
// definitions and directives, parsed into a located AST, printed back in
// canonical form, and executed into a JSON report.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lfw/json.hpp"

namespace lfw {

struct SourceLoc {
  int line = 1;
  int column = 1;
};

class SpecError : public std::runtime_error {
 public:
  enum class Kind { Syntax, UnknownIdentifier, Redefinition, FieldRedefinition, MissingField, Type };

  SpecError(Kind kind, SourceLoc loc, const std::string& message, std::vector<std::string> expected = {});

  Kind kind() const { return kind_; }
  SourceLoc loc() const { return loc_; }
  const std::string& message() const { return message_; }
  /// Tokens that would have been accepted, for syntax errors.
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  Kind kind_;
  SourceLoc loc_;
  std::string message_;
  std::vector<std::string> expected_;
};

std::string to_string(SpecError::Kind k);

struct SetExpr {
  enum class Op { Integers, Units, Ref, Ball, Shell, Union, Inter, Diff, Scale, Translate };
  Op op = Op::Integers;
  SourceLoc loc;
  /// Identifier for Ref, element literal for Ball and Translate.
  std::string text;
  long number = 0;
  std::vector<SetExpr> args;

  /// Structural equality; locations are ignored.
  bool operator==(const SetExpr& o) const;
};

struct StepCell {
  SetExpr where;
  /// Cyclotomic value literal.
  std::string value;
  SourceLoc loc;

  bool operator==(const StepCell& o) const { return where == o.where && value == o.value; }
};

struct FnExpr {
  enum class Op { Indicator, Step, Ref };
  Op op = Op::Ref;
  SourceLoc loc;
  std::string name;
  std::vector<SetExpr> set;  // operand of Indicator
  std::vector<StepCell> cells;

  bool operator==(const FnExpr& o) const { return op == o.op && name == o.name && set == o.set && cells == o.cells; }
};

struct FieldBlock {
  SourceLoc loc;
  unsigned p = 0;
  unsigned c = 1;
  std::vector<unsigned> modulus;

  bool operator==(const FieldBlock& o) const { return p == o.p && c == o.c && modulus == o.modulus; }
};

struct Directive {
  enum class Verb { Set, Fn, Check, Bound, Construct, Scaling, Solve, Simulate };
  Verb verb = Verb::Set;
  SourceLoc loc;
  /// Name bound by set, fn, construct, scaling and solve.
  std::string name;
  /// Check kind, bound kind, construct kind or simulate kind.
  std::string op;
  /// "multi" or "super" for simulate parseval.
  std::string mode;
  std::vector<std::vector<std::string>> lists;
  std::vector<SetExpr> sets;
  std::vector<FnExpr> fns;
  std::vector<long> ints;
  /// Optional keyword arguments.
  std::map<std::string, long> options;

  bool operator==(const Directive& o) const;
};

struct SpecDocument {
  FieldBlock field;
  std::vector<Directive> statements;

  bool operator==(const SpecDocument& o) const { return field == o.field && statements == o.statements; }
};

/// Parses and resolves names; throws SpecError.
SpecDocument parse_spec(std::string_view text);

/// Canonical text; parse_spec(print_spec(d)) == d.
std::string print_spec(const SpecDocument& doc);
std::string print_directive(const Directive& d);

struct RunOptions {
  /// Seed for simulate directives without their own.
  std::uint64_t seed = 0;
  /// Restrict execution to these verbs; definitions always run.
  std::set<Directive::Verb> only;
};

struct Report {
  Json json;
  std::string text;
  bool passed = true;
};

/// Executes the statements in order. A failing statement is reported and
/// later statements that do not depend on it still run.
Report run(const SpecDocument& doc, const RunOptions& options = {});

FieldConfigPtr make_field(const FieldBlock& f);

/// Values bound by the definitions of a document, in definition order.
struct Bindings {
  FieldConfigPtr field;
  std::vector<std::pair<std::string, std::vector<ClopenSet>>> sets;
  std::vector<std::pair<std::string, StepFunction>> fns;
};

Bindings evaluate_definitions(const SpecDocument& doc);

}  // namespace lfw
