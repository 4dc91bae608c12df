#include "lfw/spec.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <variant>

namespace lfw {

SpecError::SpecError(Kind kind, SourceLoc loc, const std::string& message, std::vector<std::string> expected)
    : std::runtime_error(to_string(kind) + " at " + std::to_string(loc.line) + ":" + std::to_string(loc.column) +
                         ": " + message),
      kind_(kind),
      loc_(loc),
      message_(message),
      expected_(std::move(expected)) {}

std::string to_string(SpecError::Kind k) {
  switch (k) {
    case SpecError::Kind::Syntax: return "syntax error";
    case SpecError::Kind::UnknownIdentifier: return "unknown identifier";
    case SpecError::Kind::Redefinition: return "redefinition";
    case SpecError::Kind::FieldRedefinition: return "field redefinition";
    case SpecError::Kind::MissingField: return "missing field block";
    case SpecError::Kind::Type: return "type error";
  }
  return "error";
}

bool SetExpr::operator==(const SetExpr& o) const {
  return op == o.op && text == o.text && number == o.number && args == o.args;
}

bool Directive::operator==(const Directive& o) const {
  return verb == o.verb && name == o.name && op == o.op && mode == o.mode && lists == o.lists && sets == o.sets &&
         fns == o.fns && ints == o.ints && options == o.options;
}

FieldConfigPtr make_field(const FieldBlock& f) { return FieldConfig::make(f.p, f.c, f.modulus); }

namespace {

// Lexing.

enum class Tok { Ident, Int, Sym, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  long value = 0;
  SourceLoc loc;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::Int: return "integer " + t.text;
    default: return "'" + t.text + "'";
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  const Token& peek() {
    if (!peeked_) peeked_ = lex();
    return *peeked_;
  }

  Token take() {
    Token t = peek();
    peeked_.reset();
    return t;
  }

  // Text up to the first top-level stop character, whitespace removed.
  std::pair<std::string, SourceLoc> raw_until(std::string_view stops, const std::string& what) {
    if (peeked_) throw std::logic_error("raw capture after lookahead");
    skip_blank();
    const SourceLoc start = here();
    std::string out;
    int depth = 0;
    while (pos_ < src_.size()) {
      const char ch = src_[pos_];
      if (ch == '\n' || ch == '#') break;
      if (depth == 0 && stops.find(ch) != std::string_view::npos) break;
      if (ch == '(' || ch == '[' || ch == '{') ++depth;
      if (ch == ')' || ch == ']' || ch == '}') {
        if (depth == 0) break;
        --depth;
      }
      if (!std::isspace(static_cast<unsigned char>(ch))) out += ch;
      advance();
    }
    if (out.empty()) throw SpecError(SpecError::Kind::Syntax, start, "expected " + what, {what});
    return {out, start};
  }

 private:
  SourceLoc here() const { return {line_, col_}; }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_blank() {
    while (pos_ < src_.size()) {
      const char ch = src_[pos_];
      if (ch == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        advance();
      } else {
        break;
      }
    }
  }

  Token lex() {
    skip_blank();
    Token t;
    t.loc = here();
    if (pos_ >= src_.size()) return t;
    const char ch = src_[pos_];
    auto is_word = [](char x) { return std::isalnum(static_cast<unsigned char>(x)) || x == '_'; };
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      t.kind = Tok::Ident;
      while (pos_ < src_.size()) {
        const char x = src_[pos_];
        if (is_word(x) || (x == '-' && pos_ + 1 < src_.size() && is_word(src_[pos_ + 1]))) {
          t.text += x;
          advance();
        } else {
          break;
        }
      }
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(ch)) ||
        (ch == '-' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      t.kind = Tok::Int;
      t.text += ch;
      advance();
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        t.text += src_[pos_];
        advance();
      }
      try {
        t.value = std::stol(t.text);
      } catch (const std::out_of_range&) {
        throw SpecError(SpecError::Kind::Syntax, t.loc, "integer out of range");
      }
      return t;
    }
    if (ch == '.' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '.') {
      t.kind = Tok::Sym;
      t.text = "..";
      advance();
      advance();
      return t;
    }
    if (std::string_view("()[]{},=*").find(ch) != std::string_view::npos) {
      t.kind = Tok::Sym;
      t.text = std::string(1, ch);
      advance();
      return t;
    }
    throw SpecError(SpecError::Kind::Syntax, t.loc, std::string("unexpected character '") + ch + "'");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  std::optional<Token> peeked_;
};

// Parsing.

enum class SymKind { Set, Fn, Group };

const std::set<std::string>& reserved_words() {
  static const std::set<std::string> words{
      "field", "set",   "fn",    "check", "bound",     "construct", "scaling",   "solve", "simulate", "O",
      "ball",  "shell", "union", "inter", "diff",      "scale",     "translate", "indicator", "step"};
  return words;
}

const std::vector<std::string> kSetListChecks{"multiwavelet", "pf-multiwavelet", "superwavelet", "pf-superwavelet"};
const std::vector<std::string> kFnListChecks{"frame", "super-general"};
const std::vector<std::string> kSetChecks{"dilation", "packing", "tiling"};
const std::vector<std::string> kFnChecks{"translates", "orthonormal-translates"};
const std::vector<std::string> kCheckKinds{"multiwavelet", "pf-multiwavelet", "superwavelet", "pf-superwavelet",
                                           "frame",        "super-general",   "dilation",     "packing",
                                           "tiling",       "translates",      "orthonormal-translates",
                                           "equivalent",   "mra",             "joint-fold"};
const std::vector<std::string> kBoundKinds{"decomposability", "extendability", "inv-norm"};
const std::vector<std::string> kConstructKinds{"shannon", "annulus", "scaled-shannon", "shell-super", "missing-component"};

bool among(const std::vector<std::string>& v, const std::string& s) { return std::find(v.begin(), v.end(), s) != v.end(); }

class Parser {
 public:
  explicit Parser(std::string_view text) : lx_(text) {}

  SpecDocument parse() {
    bool have_field = false;
    while (lx_.peek().kind != Tok::End) {
      const Token& t = lx_.peek();
      if (t.kind != Tok::Ident) syntax(t, {"field", "set", "fn", "check", "bound", "construct", "scaling", "solve", "simulate"});
      if (t.text == "field") {
        if (have_field) throw SpecError(SpecError::Kind::FieldRedefinition, t.loc, "field block already given");
        parse_field();
        have_field = true;
        continue;
      }
      if (!have_field) throw SpecError(SpecError::Kind::MissingField, t.loc, "the field block must come first");
      doc_.statements.push_back(parse_statement());
    }
    if (!have_field) throw SpecError(SpecError::Kind::MissingField, lx_.peek().loc, "no field block");
    return std::move(doc_);
  }

 private:
  [[noreturn]] void syntax(const Token& t, std::vector<std::string> expected) {
    std::string msg = "unexpected " + describe(t) + ", expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) msg += (i ? " | " : "") + expected[i];
    throw SpecError(SpecError::Kind::Syntax, t.loc, msg, std::move(expected));
  }

  Token expect_sym(const std::string& s) {
    const Token& t = lx_.peek();
    if (t.kind != Tok::Sym || t.text != s) syntax(t, {"'" + s + "'"});
    return lx_.take();
  }

  bool accept_sym(const std::string& s) {
    const Token& t = lx_.peek();
    if (t.kind == Tok::Sym && t.text == s) {
      lx_.take();
      return true;
    }
    return false;
  }

  Token expect_word(const std::string& w) {
    const Token& t = lx_.peek();
    if (t.kind != Tok::Ident || t.text != w) syntax(t, {w});
    return lx_.take();
  }

  Token expect_ident(const std::string& what) {
    const Token& t = lx_.peek();
    if (t.kind != Tok::Ident) syntax(t, {what});
    return lx_.take();
  }

  Token expect_one_of(const std::vector<std::string>& words) {
    const Token& t = lx_.peek();
    if (t.kind != Tok::Ident || !among(words, t.text)) syntax(t, words);
    return lx_.take();
  }

  long expect_int() {
    const Token& t = lx_.peek();
    if (t.kind != Tok::Int) syntax(t, {"integer"});
    return lx_.take().value;
  }

  void parse_field() {
    FieldBlock f;
    f.loc = expect_word("field").loc;
    expect_sym("{");
    bool have_p = false;
    std::set<std::string> seen;
    do {
      const Token key = expect_one_of({"p", "c", "modulus"});
      if (!seen.insert(key.text).second) throw SpecError(SpecError::Kind::Syntax, key.loc, "duplicate " + key.text);
      expect_sym("=");
      if (key.text == "modulus") {
        expect_sym("[");
        do {
          const long v = expect_int();
          if (v < 0) throw SpecError(SpecError::Kind::Syntax, key.loc, "negative modulus coefficient");
          f.modulus.push_back(static_cast<unsigned>(v));
        } while (accept_sym(","));
        expect_sym("]");
      } else {
        const long v = expect_int();
        if (v <= 0) throw SpecError(SpecError::Kind::Syntax, key.loc, key.text + " must be positive");
        (key.text == "p" ? f.p : f.c) = static_cast<unsigned>(v);
        have_p = have_p || key.text == "p";
      }
    } while (accept_sym(","));
    expect_sym("}");
    if (!have_p) throw SpecError(SpecError::Kind::Syntax, f.loc, "field block needs p", {"p"});
    try {
      field_ = make_field(f);
    } catch (const std::exception& e) {
      throw SpecError(SpecError::Kind::Syntax, f.loc, std::string("invalid field: ") + e.what());
    }
    doc_.field = std::move(f);
  }

  void declare(const Token& name, SymKind kind) {
    if (reserved_words().count(name.text) != 0) {
      throw SpecError(SpecError::Kind::Syntax, name.loc, "'" + name.text + "' is a reserved word");
    }
    if (!symbols_.emplace(name.text, kind).second) {
      throw SpecError(SpecError::Kind::Redefinition, name.loc, "'" + name.text + "' is already defined");
    }
  }

  SymKind lookup(const Token& name) const {
    const auto it = symbols_.find(name.text);
    if (it == symbols_.end()) {
      throw SpecError(SpecError::Kind::UnknownIdentifier, name.loc, "'" + name.text + "' is not defined");
    }
    return it->second;
  }

  std::string element_literal(const std::string& stops) {
    auto [text, loc] = lx_.raw_until(stops, "element");
    try {
      parse_element(field_, text);
    } catch (const std::exception& e) {
      throw SpecError(SpecError::Kind::Syntax, loc, "bad element '" + text + "': " + e.what());
    }
    return text;
  }

  std::string value_literal() {
    auto [text, loc] = lx_.raw_until(")", "value");
    try {
      parse_cyclo(field_->p(), field_->c(), text);
    } catch (const std::exception& e) {
      throw SpecError(SpecError::Kind::Syntax, loc, "bad value '" + text + "': " + e.what());
    }
    return text;
  }

  SetExpr parse_set() {
    static const std::vector<std::string> expected{"O", "O*", "ball", "shell", "union", "inter",
                                                   "diff", "scale", "translate", "set name"};
    const Token& t = lx_.peek();
    if (t.kind != Tok::Ident) syntax(t, expected);
    const Token w = lx_.take();
    SetExpr e;
    e.loc = w.loc;
    if (w.text == "O") {
      e.op = accept_sym("*") ? SetExpr::Op::Units : SetExpr::Op::Integers;
    } else if (w.text == "ball") {
      e.op = SetExpr::Op::Ball;
      expect_sym("(");
      e.text = element_literal(",");
      expect_sym(",");
      e.number = expect_int();
      expect_sym(")");
    } else if (w.text == "shell") {
      e.op = SetExpr::Op::Shell;
      expect_sym("(");
      e.number = expect_int();
      expect_sym(")");
    } else if (w.text == "union" || w.text == "inter" || w.text == "diff") {
      e.op = w.text == "union" ? SetExpr::Op::Union : w.text == "inter" ? SetExpr::Op::Inter : SetExpr::Op::Diff;
      expect_sym("(");
      do {
        e.args.push_back(parse_set());
      } while (accept_sym(","));
      expect_sym(")");
    } else if (w.text == "scale") {
      e.op = SetExpr::Op::Scale;
      expect_sym("(");
      e.args.push_back(parse_set());
      expect_sym(",");
      e.number = expect_int();
      expect_sym(")");
    } else if (w.text == "translate") {
      e.op = SetExpr::Op::Translate;
      expect_sym("(");
      e.args.push_back(parse_set());
      expect_sym(",");
      e.text = element_literal(")");
      expect_sym(")");
    } else if (reserved_words().count(w.text) != 0) {
      syntax(w, expected);
    } else {
      if (lookup(w) == SymKind::Fn) throw SpecError(SpecError::Kind::Type, w.loc, "'" + w.text + "' is a function, not a set");
      e.op = SetExpr::Op::Ref;
      e.text = w.text;
    }
    return e;
  }

  FnExpr parse_fn() {
    const Token& t = lx_.peek();
    if (t.kind != Tok::Ident) syntax(t, {"indicator", "step", "function name"});
    const Token w = lx_.take();
    FnExpr f;
    f.loc = w.loc;
    if (w.text == "indicator") {
      f.op = FnExpr::Op::Indicator;
      expect_sym("(");
      f.set.push_back(parse_set());
      expect_sym(")");
    } else if (w.text == "step") {
      f.op = FnExpr::Op::Step;
      expect_sym("{");
      if (!accept_sym("}")) {
        do {
          StepCell c;
          c.loc = expect_sym("(").loc;
          c.where = parse_set();
          expect_sym(",");
          c.value = value_literal();
          expect_sym(")");
          f.cells.push_back(std::move(c));
        } while (accept_sym(","));
        expect_sym("}");
      }
    } else if (reserved_words().count(w.text) != 0) {
      syntax(w, {"indicator", "step", "function name"});
    } else {
      lookup(w);
      f.op = FnExpr::Op::Ref;
      f.name = w.text;
    }
    return f;
  }

  std::vector<std::string> parse_list(bool functions_allowed) {
    std::vector<std::string> out;
    expect_sym("[");
    if (accept_sym("]")) return out;
    do {
      const Token name = expect_ident("name");
      if (lookup(name) == SymKind::Fn && !functions_allowed) {
        throw SpecError(SpecError::Kind::Type, name.loc, "'" + name.text + "' is a function, not a set");
      }
      out.push_back(name.text);
    } while (accept_sym(","));
    expect_sym("]");
    return out;
  }

  void parse_options(Directive& d, const std::vector<std::string>& keys) {
    while (lx_.peek().kind == Tok::Ident && among(keys, lx_.peek().text)) {
      const Token k = lx_.take();
      if (d.options.count(k.text) != 0 || (k.text == "target" && !d.sets.empty())) {
        throw SpecError(SpecError::Kind::Syntax, k.loc, "duplicate option " + k.text);
      }
      if (k.text == "target") {
        d.sets.push_back(parse_set());
      } else {
        d.options[k.text] = expect_int();
      }
    }
  }

  Directive parse_statement() {
    const Token verb = lx_.take();
    Directive d;
    d.loc = verb.loc;
    if (verb.text == "set") {
      d.verb = Directive::Verb::Set;
      const Token name = expect_ident("name");
      expect_sym("=");
      d.sets.push_back(parse_set());
      d.name = name.text;
      declare(name, SymKind::Set);
    } else if (verb.text == "fn") {
      d.verb = Directive::Verb::Fn;
      const Token name = expect_ident("name");
      expect_sym("=");
      d.fns.push_back(parse_fn());
      d.name = name.text;
      declare(name, SymKind::Fn);
    } else if (verb.text == "check") {
      d.verb = Directive::Verb::Check;
      d.op = expect_one_of(kCheckKinds).text;
      if (among(kSetListChecks, d.op)) {
        d.lists.push_back(parse_list(false));
      } else if (among(kFnListChecks, d.op)) {
        d.lists.push_back(parse_list(true));
      } else if (among(kSetChecks, d.op)) {
        d.sets.push_back(parse_set());
      } else if (among(kFnChecks, d.op)) {
        d.fns.push_back(parse_fn());
      } else if (d.op == "equivalent") {
        d.lists.push_back(parse_list(true));
        d.lists.push_back(parse_list(true));
      } else if (d.op == "mra") {
        d.sets.push_back(parse_set());
        d.sets.push_back(parse_set());
      } else {
        d.lists.push_back(parse_list(false));
        expect_word("target");
        d.sets.push_back(parse_set());
      }
    } else if (verb.text == "bound") {
      d.verb = Directive::Verb::Bound;
      d.op = expect_one_of(kBoundKinds).text;
      d.fns.push_back(parse_fn());
    } else if (verb.text == "construct") {
      d.verb = Directive::Verb::Construct;
      const Token name = expect_ident("name");
      expect_sym("=");
      d.op = expect_one_of(kConstructKinds).text;
      if (d.op != "shannon") {
        expect_sym("(");
        d.ints.push_back(expect_int());
        expect_sym(")");
      }
      d.name = name.text;
      declare(name, SymKind::Group);
    } else if (verb.text == "scaling") {
      d.verb = Directive::Verb::Scaling;
      const Token name = expect_ident("name");
      expect_sym("=");
      d.sets.push_back(parse_set());
      expect_word("depth");
      d.ints.push_back(expect_int());
      d.name = name.text;
      declare(name, SymKind::Set);
    } else if (verb.text == "solve") {
      d.verb = Directive::Verb::Solve;
      const Token name = expect_ident("name");
      expect_sym("=");
      expect_word("complement");
      d.lists.push_back(parse_list(false));
      expect_word("shells");
      d.ints.push_back(expect_int());
      expect_sym("..");
      d.ints.push_back(expect_int());
      expect_word("max-scale");
      d.ints.push_back(expect_int());
      parse_options(d, {"target", "nodes", "time-ms"});
      d.name = name.text;
      declare(name, SymKind::Set);
    } else if (verb.text == "simulate") {
      d.verb = Directive::Verb::Simulate;
      d.op = expect_one_of({"parseval", "gram"}).text;
      if (d.op == "parseval") {
        d.mode = expect_one_of({"multi", "super"}).text;
        d.lists.push_back(parse_list(true));
        expect_word("window");
        d.ints.push_back(expect_int());
        expect_sym(",");
        d.ints.push_back(expect_int());
        parse_options(d, {"trials", "seed"});
      } else {
        d.lists.push_back(parse_list(true));
        expect_word("at");
        for (int pair = 0; pair < 2; ++pair) {
          expect_sym("(");
          d.ints.push_back(expect_int());
          expect_sym(",");
          d.ints.push_back(expect_int());
          expect_sym(")");
        }
      }
    } else {
      syntax(verb, {"set", "fn", "check", "bound", "construct", "scaling", "solve", "simulate"});
    }
    return d;
  }

  Lexer lx_;
  SpecDocument doc_;
  FieldConfigPtr field_;
  std::map<std::string, SymKind> symbols_;
};

// Printing.

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::string print_set(const SetExpr& e) {
  std::vector<std::string> args;
  for (const auto& a : e.args) args.push_back(print_set(a));
  switch (e.op) {
    case SetExpr::Op::Integers: return "O";
    case SetExpr::Op::Units: return "O*";
    case SetExpr::Op::Ref: return e.text;
    case SetExpr::Op::Ball: return "ball(" + e.text + ", " + std::to_string(e.number) + ")";
    case SetExpr::Op::Shell: return "shell(" + std::to_string(e.number) + ")";
    case SetExpr::Op::Union: return "union(" + join(args, ", ") + ")";
    case SetExpr::Op::Inter: return "inter(" + join(args, ", ") + ")";
    case SetExpr::Op::Diff: return "diff(" + join(args, ", ") + ")";
    case SetExpr::Op::Scale: return "scale(" + args.at(0) + ", " + std::to_string(e.number) + ")";
    case SetExpr::Op::Translate: return "translate(" + args.at(0) + ", " + e.text + ")";
  }
  return "";
}

std::string print_fn(const FnExpr& f) {
  switch (f.op) {
    case FnExpr::Op::Indicator: return "indicator(" + print_set(f.set.at(0)) + ")";
    case FnExpr::Op::Ref: return f.name;
    case FnExpr::Op::Step: {
      std::vector<std::string> cells;
      for (const auto& c : f.cells) cells.push_back("(" + print_set(c.where) + ", " + c.value + ")");
      return "step{" + join(cells, ", ") + "}";
    }
  }
  return "";
}

std::string print_list(const std::vector<std::string>& names) { return "[" + join(names, ", ") + "]"; }

}  // namespace

SpecDocument parse_spec(std::string_view text) { return Parser(text).parse(); }

std::string print_directive(const Directive& d) {
  std::string s;
  auto opt = [&](const std::string& key) {
    if (const auto it = d.options.find(key); it != d.options.end()) s += " " + key + " " + std::to_string(it->second);
  };
  switch (d.verb) {
    case Directive::Verb::Set: return "set " + d.name + " = " + print_set(d.sets.at(0));
    case Directive::Verb::Fn: return "fn " + d.name + " = " + print_fn(d.fns.at(0));
    case Directive::Verb::Check:
      s = "check " + d.op;
      for (const auto& l : d.lists) s += " " + print_list(l);
      if (d.op == "joint-fold") return s + " target " + print_set(d.sets.at(0));
      for (const auto& e : d.sets) s += " " + print_set(e);
      for (const auto& f : d.fns) s += " " + print_fn(f);
      return s;
    case Directive::Verb::Bound: return "bound " + d.op + " " + print_fn(d.fns.at(0));
    case Directive::Verb::Construct:
      s = "construct " + d.name + " = " + d.op;
      if (!d.ints.empty()) s += "(" + std::to_string(d.ints[0]) + ")";
      return s;
    case Directive::Verb::Scaling:
      return "scaling " + d.name + " = " + print_set(d.sets.at(0)) + " depth " + std::to_string(d.ints.at(0));
    case Directive::Verb::Solve:
      s = "solve " + d.name + " = complement " + print_list(d.lists.at(0)) + " shells " + std::to_string(d.ints.at(0)) +
          ".." + std::to_string(d.ints.at(1)) + " max-scale " + std::to_string(d.ints.at(2));
      if (!d.sets.empty()) s += " target " + print_set(d.sets[0]);
      opt("nodes");
      opt("time-ms");
      return s;
    case Directive::Verb::Simulate:
      if (d.op == "parseval") {
        s = "simulate parseval " + d.mode + " " + print_list(d.lists.at(0)) + " window " + std::to_string(d.ints.at(0)) +
            ", " + std::to_string(d.ints.at(1));
        opt("trials");
        opt("seed");
        return s;
      }
      return "simulate gram " + print_list(d.lists.at(0)) + " at (" + std::to_string(d.ints.at(0)) + ", " +
             std::to_string(d.ints.at(1)) + ") (" + std::to_string(d.ints.at(2)) + ", " + std::to_string(d.ints.at(3)) +
             ")";
  }
  return s;
}

std::string print_spec(const SpecDocument& doc) {
  std::string out = "field { p = " + std::to_string(doc.field.p) + ", c = " + std::to_string(doc.field.c);
  if (!doc.field.modulus.empty()) {
    std::vector<std::string> m;
    for (unsigned v : doc.field.modulus) m.push_back(std::to_string(v));
    out += ", modulus = [" + join(m, ", ") + "]";
  }
  out += " }\n";
  for (const auto& d : doc.statements) out += print_directive(d) + "\n";
  return out;
}

// Running.

namespace {

class DependencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Env {
  FieldConfigPtr field;
  std::map<std::string, std::vector<ClopenSet>> sets;
  std::map<std::string, StepFunction> fns;
  std::map<std::string, std::string> failed;
  std::vector<std::string> order;

  void require_ok(const std::string& name) const {
    if (const auto it = failed.find(name); it != failed.end()) {
      throw DependencyError("depends on '" + name + "', which failed: " + it->second);
    }
  }

  const std::vector<ClopenSet>& group(const std::string& name) const {
    require_ok(name);
    return sets.at(name);
  }

  ClopenSet set(const std::string& name) const {
    const auto& g = group(name);
    if (g.size() != 1) throw std::invalid_argument("'" + name + "' names " + std::to_string(g.size()) + " sets");
    return g.front();
  }

  ClopenSet eval(const SetExpr& e) const {
    switch (e.op) {
      case SetExpr::Op::Integers: return ClopenSet::integers(field);
      case SetExpr::Op::Units: return ClopenSet::units(field);
      case SetExpr::Op::Ref: return set(e.text);
      case SetExpr::Op::Ball: return ClopenSet::of_ball(Ball(parse_element(field, e.text), static_cast<int>(e.number)));
      case SetExpr::Op::Shell: return ClopenSet::shell(field, static_cast<int>(e.number));
      case SetExpr::Op::Union: {
        // A group name inside union() contributes all of its sets.
        std::vector<ClopenSet> parts;
        for (const auto& a : e.args) {
          if (a.op == SetExpr::Op::Ref) {
            const auto& g = group(a.text);
            parts.insert(parts.end(), g.begin(), g.end());
          } else {
            parts.push_back(eval(a));
          }
        }
        return cs_union_all(field, parts);
      }
      case SetExpr::Op::Inter:
      case SetExpr::Op::Diff: {
        ClopenSet acc = eval(e.args.at(0));
        for (std::size_t i = 1; i < e.args.size(); ++i) {
          acc = e.op == SetExpr::Op::Inter ? cs_intersect(acc, eval(e.args[i])) : cs_subtract(acc, eval(e.args[i]));
        }
        return acc;
      }
      case SetExpr::Op::Scale: return cs_scale(eval(e.args.at(0)), static_cast<int>(e.number));
      case SetExpr::Op::Translate: return cs_translate(eval(e.args.at(0)), parse_element(field, e.text));
    }
    throw std::logic_error("unhandled set expression");
  }

  StepFunction eval(const FnExpr& f) const {
    switch (f.op) {
      case FnExpr::Op::Indicator: return StepFunction::indicator(eval(f.set.at(0)));
      case FnExpr::Op::Ref: {
        require_ok(f.name);
        if (const auto it = fns.find(f.name); it != fns.end()) return it->second;
        return StepFunction::indicator(set(f.name));
      }
      case FnExpr::Op::Step: {
        std::vector<Cell> cells;
        for (const auto& c : f.cells) {
          const CycloScalar v = parse_cyclo(field->p(), field->c(), c.value);
          const ClopenSet where = eval(c.where);
          for (const auto& b : where.balls()) cells.emplace_back(b, v);
        }
        return StepFunction::accumulate(field, cells);
      }
    }
    throw std::logic_error("unhandled function expression");
  }

  std::vector<ClopenSet> set_list(const std::vector<std::string>& names) const {
    std::vector<ClopenSet> out;
    for (const auto& n : names) {
      const auto& g = group(n);
      out.insert(out.end(), g.begin(), g.end());
    }
    return out;
  }

  std::vector<StepFunction> fn_list(const std::vector<std::string>& names) const {
    std::vector<StepFunction> out;
    for (const auto& n : names) {
      require_ok(n);
      if (const auto it = fns.find(n); it != fns.end()) {
        out.push_back(it->second);
      } else {
        for (const auto& s : group(n)) out.push_back(StepFunction::indicator(s));
      }
    }
    return out;
  }

  void bind_sets(const std::string& name, std::vector<ClopenSet> value) {
    sets.insert_or_assign(name, std::move(value));
    order.push_back(name);
  }
};

Json field_json(const FieldConfigPtr& f) {
  Json j;
  j["p"] = f->p();
  j["c"] = f->c();
  j["q"] = f->q();
  j["modulus"] = f->modulus();
  return j;
}

Json sets_json(const std::vector<ClopenSet>& sets) {
  Json out = Json::array();
  for (const auto& s : sets) out.push_back(to_json(s));
  return out;
}

struct Outcome {
  bool passed = true;
  Json payload = Json::object();
  std::string text;
};

Outcome verdict_outcome(const Verdict& v) {
  Outcome o;
  o.passed = v.passed();
  o.payload["verdict"] = to_json(v);
  o.text = to_text(v);
  return o;
}

std::string bound_text(const BoundReport& b) {
  std::string s = "value: " + (b.infinite ? std::string("+inf") : to_string(b.value));
  s += "\nmax m: " + (b.max_m ? std::to_string(*b.max_m) : std::string("unbounded"));
  return s + "\n";
}

Outcome run_check(const Directive& d, const Env& env) {
  const auto& op = d.op;
  if (op == "multiwavelet") return verdict_outcome(verify_multiwavelet_set(env.set_list(d.lists[0])));
  if (op == "pf-multiwavelet") return verdict_outcome(verify_pf_multiwavelet_set(env.set_list(d.lists[0])));
  if (op == "superwavelet") return verdict_outcome(verify_superwavelet(env.set_list(d.lists[0]), SuperMode::Orthonormal));
  if (op == "pf-superwavelet") return verdict_outcome(verify_superwavelet(env.set_list(d.lists[0]), SuperMode::Parseval));
  if (op == "frame") return verdict_outcome(verify_frame_pointwise(env.fn_list(d.lists[0])));
  if (op == "super-general") return verdict_outcome(verify_super_general(env.fn_list(d.lists[0])));
  if (op == "dilation") return verdict_outcome(check_dilation_tiling(env.eval(d.sets[0])));
  if (op == "packing") return verdict_outcome(check_translation(env.eval(d.sets[0]), TranslationMode::Packing));
  if (op == "tiling") return verdict_outcome(check_translation(env.eval(d.sets[0]), TranslationMode::Tiling));
  if (op == "translates") return verdict_outcome(verify_translates(env.eval(d.fns[0]), TranslatesMode::Parseval));
  if (op == "orthonormal-translates") {
    return verdict_outcome(verify_translates(env.eval(d.fns[0]), TranslatesMode::Orthonormal));
  }
  if (op == "equivalent") {
    return verdict_outcome(equivalent_superwavelets(env.fn_list(d.lists[0]), env.fn_list(d.lists[1])));
  }
  if (op == "mra") return verdict_outcome(mra_scaling_check(env.eval(d.sets[0]), env.eval(d.sets[1])));
  if (op == "joint-fold") {
    const auto existing = env.set_list(d.lists[0]);
    const ClopenSet target = env.eval(d.sets[0]);
    Verdict v;
    v.add(completion_joint_fold(existing, target, "joint fold tiling"));
    if (const auto* c = v.find("joint fold tiling"); c && c->witness.measure) {
      v.set_fact("joint_fold_measure", to_fraction_string(*c->witness.measure));
    }
    return verdict_outcome(v);
  }
  throw std::logic_error("unhandled check " + op);
}

Outcome run_bound(const Directive& d, const Env& env) {
  const StepFunction f = env.eval(d.fns[0]);
  BoundReport b = d.op == "decomposability" ? decomposability_bound(f)
                  : d.op == "extendability" ? extendability_bound(f)
                                            : inv_norm_integral(f);
  Outcome o;
  o.payload["bound"] = to_json(b);
  o.text = bound_text(b);
  return o;
}

Outcome run_construct(const Directive& d, Env& env) {
  const int n = d.ints.empty() ? 0 : static_cast<int>(d.ints[0]);
  std::vector<ClopenSet> sets;
  Outcome o;
  if (d.op == "shannon") {
    sets = shannon_multiwavelet(env.field);
  } else if (d.op == "annulus") {
    sets = {annulus_wavelet(env.field, n)};
  } else if (d.op == "scaled-shannon") {
    sets = scaled_shannon(env.field, n);
  } else if (d.op == "shell-super") {
    sets = shell_superwavelet(env.field, n);
  } else {
    const auto fam = missing_component_family(env.field, n);
    sets = fam.existing;
    o.payload["printed_target"] = to_json(fam.printed_target);
    o.payload["corrected_target"] = to_json(fam.corrected_target);
  }
  o.payload["sets"] = sets_json(sets);
  o.text = std::to_string(sets.size()) + " set(s)\n";
  env.bind_sets(d.name, std::move(sets));
  return o;
}

Outcome run_scaling(const Directive& d, Env& env) {
  const auto s = scaling_set(env.eval(d.sets[0]), static_cast<int>(d.ints[0]));
  Outcome o;
  o.passed = s.certified;
  o.payload["set"] = to_json(s.set);
  o.payload["certified"] = s.certified;
  o.payload["measure"] = to_fraction_string(s.set.measure());
  o.text = "measure " + to_fraction_string(s.set.measure()) + (s.certified ? ", certified\n" : ", not certified\n");
  env.bind_sets(d.name, {s.set});
  return o;
}

Outcome run_solve(const Directive& d, Env& env) {
  SolveRequest req;
  req.existing = env.set_list(d.lists[0]);
  req.shell_lo = static_cast<int>(d.ints[0]);
  req.shell_hi = static_cast<int>(d.ints[1]);
  req.max_scale = static_cast<int>(d.ints[2]);
  if (!d.sets.empty()) req.target = env.eval(d.sets[0]);
  if (const auto it = d.options.find("nodes"); it != d.options.end()) req.limits.max_nodes = it->second;
  if (const auto it = d.options.find("time-ms"); it != d.options.end()) {
    req.limits.time_limit = std::chrono::milliseconds(it->second);
  }
  const auto r = solve_complement(req);
  Outcome o;
  o.passed = r.status == SolveStatus::Solved && (!r.verification || r.verification->passed());
  o.payload["result"] = to_json(r);
  o.text = "status " + to_string(r.status);
  if (!r.certificate.empty()) o.text += " (" + r.certificate + ")";
  o.text += ", pool " + std::to_string(r.pool_size) + ", nodes " + std::to_string(r.nodes) + "\n";
  if (r.verification) o.text += to_text(*r.verification);
  if (r.status == SolveStatus::Solved) {
    env.bind_sets(d.name, {*r.set});
  } else {
    env.failed[d.name] = "no completion (" + to_string(r.status) + ")";
  }
  return o;
}

Outcome run_simulate(const Directive& d, const Env& env, std::uint64_t default_seed) {
  const auto fns = env.fn_list(d.lists[0]);
  Outcome o;
  if (d.op == "gram") {
    if (d.ints[1] < 0 || d.ints[3] < 0) throw std::invalid_argument("translation index must be nonnegative");
    const auto g = gram_entry(fns, {static_cast<int>(d.ints[0]), static_cast<std::uint64_t>(d.ints[1])},
                              {static_cast<int>(d.ints[2]), static_cast<std::uint64_t>(d.ints[3])});
    o.payload["value"] = to_string(g);
    o.text = "value " + to_string(g) + "\n";
    return o;
  }
  std::vector<SpectrumTuple> family;
  if (d.mode == "multi") {
    for (const auto& f : fns) family.push_back({f});
  } else {
    family.push_back(fns);
  }
  const FiniteModel window{static_cast<int>(d.ints[0]), static_cast<int>(d.ints[1])};
  const auto trials = d.options.count("trials") ? d.options.at("trials") : 100;
  const auto seed = d.options.count("seed") ? static_cast<std::uint64_t>(d.options.at("seed")) : default_seed;
  if (trials < 0) throw std::invalid_argument("trials must be nonnegative");
  const auto r = simulate_parseval(family, window, static_cast<std::size_t>(trials), seed);
  o.passed = r.passed();
  o.payload["simulation"] = to_json(r);
  o.payload["seed"] = seed;
  o.text = std::to_string(r.mesh_functions) + " mesh deltas, " + std::to_string(r.random_functions) +
           " random functions, " + std::to_string(r.nonzero_residuals) + " nonzero residuals\n";
  if (r.first_failure) o.text += "first failure: " + *r.first_failure + "\n";
  return o;
}

std::string indent(const std::string& text) {
  std::string out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out += "  " + line + "\n";
  return out;
}

}  // namespace

Report run(const SpecDocument& doc, const RunOptions& options) {
  Env env;
  env.field = make_field(doc.field);
  Report rep;
  rep.json["field"] = field_json(env.field);
  Json entries = Json::array();
  std::size_t failures = 0;
  std::size_t count = 0;

  for (const auto& d : doc.statements) {
    const bool definition = d.verb == Directive::Verb::Set || d.verb == Directive::Verb::Fn ||
                            d.verb == Directive::Verb::Construct || d.verb == Directive::Verb::Scaling;
    const bool selected = options.only.empty() || options.only.count(d.verb) != 0;
    if (!selected && !definition) {
      if (!d.name.empty()) env.failed[d.name] = "not run";
      continue;
    }
    const bool reported = selected && d.verb != Directive::Verb::Set && d.verb != Directive::Verb::Fn;
    Json entry;
    entry["line"] = d.loc.line;
    entry["directive"] = print_directive(d);
    std::string status;
    Outcome out;
    try {
      switch (d.verb) {
        case Directive::Verb::Set:
          env.bind_sets(d.name, {env.eval(d.sets[0])});
          break;
        case Directive::Verb::Fn:
          env.fns.insert_or_assign(d.name, env.eval(d.fns[0]));
          env.order.push_back(d.name);
          break;
        case Directive::Verb::Check: out = run_check(d, env); break;
        case Directive::Verb::Bound: out = run_bound(d, env); break;
        case Directive::Verb::Construct: out = run_construct(d, env); break;
        case Directive::Verb::Scaling: out = run_scaling(d, env); break;
        case Directive::Verb::Solve: out = run_solve(d, env); break;
        case Directive::Verb::Simulate: out = run_simulate(d, env, options.seed); break;
      }
      status = out.passed ? "pass" : "fail";
    } catch (const std::exception& e) {
      status = "error";
      out.payload = Json::object();
      out.payload["error"] = e.what();
      if (const auto* pe = dynamic_cast<const PreconditionError*>(&e)) out.payload["witness"] = to_json(pe->witness());
      out.text = std::string("error: ") + e.what() + "\n";
      if (!d.name.empty()) env.failed[d.name] = e.what();
    }
    if (!reported && status != "error") continue;
    ++count;
    entry["status"] = status;
    for (auto& [k, v] : out.payload.items()) entry[k] = v;
    entries.push_back(std::move(entry));
    if (status != "pass") ++failures;
    rep.text += "line " + std::to_string(d.loc.line) + ": " + print_directive(d) + "\n" + indent(out.text) + "  => " +
                (status == "pass" ? "PASS" : status == "fail" ? "FAIL" : "ERROR") + "\n";
  }
  rep.passed = failures == 0;
  rep.json["passed"] = rep.passed;
  rep.json["directives"] = std::move(entries);
  rep.text += "result: " + std::string(rep.passed ? "PASS" : "FAIL") + " (" + std::to_string(count) + " directive(s), " +
              std::to_string(failures) + " failed)\n";
  return rep;
}

Bindings evaluate_definitions(const SpecDocument& doc) {
  Env env;
  env.field = make_field(doc.field);
  for (const auto& d : doc.statements) {
    switch (d.verb) {
      case Directive::Verb::Set: env.bind_sets(d.name, {env.eval(d.sets[0])}); break;
      case Directive::Verb::Fn:
        env.fns.insert_or_assign(d.name, env.eval(d.fns[0]));
        env.order.push_back(d.name);
        break;
      case Directive::Verb::Construct: run_construct(d, env); break;
      case Directive::Verb::Scaling: run_scaling(d, env); break;
      default: break;
    }
  }
  Bindings b;
  b.field = env.field;
  for (const auto& name : env.order) {
    if (const auto it = env.fns.find(name); it != env.fns.end()) {
      b.fns.emplace_back(name, it->second);
    } else {
      b.sets.emplace_back(name, env.sets.at(name));
    }
  }
  return b;
}

}  // namespace lfw
