// Concrete syntax for formulas with named binders, and its conversion to and
// from the de Bruijn representation.
//
// Grammar (ASCII, `->` right-associative, precedence ~ > & > | > ->):
//
//   formula := disj ('->' formula)?
//   disj    := conj ('|' conj)*
//   conj    := unary ('&' unary)*
//   unary   := '~' unary | ('all' | 'ex') [name] '.' formula | atom | '(' formula ')'
//   atom    := 'true' | 'false' | ident ['(' [term (',' term)*] ')']
//   term    := numeral | ident ['(' [term (',' term)*] ')']
//
// Quantifiers extend as far right as possible. In term position a bare
// identifier bound by an enclosing quantifier is that variable; otherwise it is
// a free variable when it starts with one of u..z and a constant when it does
// not. Free variables named v0, v1, ... denote exactly that free index; other
// free names take the lowest unused indices in order of first appearance. A
// numeral is a raw de Bruijn index. `c()` always denotes a constant.
// Identifiers starting with '_' are reserved for generated constants and are
// only accepted when ParseOptions::allow_reserved is set.
#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "secav/syntax.hpp"

namespace secav {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column),
        detail_(message) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& detail() const { return detail_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string detail_;
};

struct ParseOptions {
  bool allow_reserved = false;
};

inline constexpr std::string_view kReservedPrefix = "_";

inline bool is_keyword(std::string_view s) { return s == "all" || s == "ex" || s == "true" || s == "false"; }

/// Bare identifiers that read as variables when unbound.
inline bool is_variable_name(std::string_view s) { return !s.empty() && s[0] >= 'u' && s[0] <= 'z'; }

/// Index k when `s` is the canonical free-variable name v<k>.
inline std::optional<std::size_t> canonical_free_index(std::string_view s) {
  if (s.size() < 2 || s[0] != 'v') return std::nullopt;
  if (s[1] == '0' && s.size() > 2) return std::nullopt;
  std::size_t k = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
    if (k > (std::size_t{1} << 40)) return std::nullopt;
    k = k * 10 + static_cast<std::size_t>(s[i] - '0');
  }
  return k;
}

// ---------------------------------------------------------------------------
// Surface syntax

struct SourcePos {
  std::size_t line = 1;
  std::size_t column = 1;
};

struct NamedTerm {
  enum class Kind { Name, Index, App };
  Kind kind = Kind::Name;
  std::string id;
  std::size_t index = 0;
  std::vector<NamedTerm> args;
  SourcePos pos;
};

/// Formula with explicit bound-variable names, as written by the user.
struct NamedFormula {
  FormulaKind kind = FormulaKind::Truth;
  std::string id;                   // Pre: predicate identifier
  std::vector<NamedTerm> args;      // Pre
  std::optional<std::string> name;  // Uni, Exi: bound name, empty when nameless
  std::vector<NamedFormula> sub;    // operands
  SourcePos pos;
};

namespace detail {

struct Token {
  enum class Kind { Ident, Number, LParen, RParen, Comma, Dot, Tilde, Amp, Bar, Arrow, End };
  Kind kind;
  std::string text;
  SourcePos pos;
};

class Lexer {
 public:
  Lexer(std::string_view src, ParseOptions opts) : src_(src), opts_(opts) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      const SourcePos at{line_, col_};
      if (i_ >= src_.size()) {
        out.push_back({Token::Kind::End, "", at});
        return out;
      }
      const char c = src_[i_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t j = i_;
        while (j < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_')) ++j;
        std::string text(src_.substr(i_, j - i_));
        if (text.rfind(kReservedPrefix, 0) == 0 && !opts_.allow_reserved) {
          throw ParseError("identifier '" + text + "' uses the reserved prefix '_'", at.line, at.column);
        }
        advance(j - i_);
        out.push_back({Token::Kind::Ident, std::move(text), at});
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t j = i_;
        while (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j]))) ++j;
        std::string text(src_.substr(i_, j - i_));
        if (text.size() > 9) throw ParseError("index too large", at.line, at.column);
        advance(j - i_);
        out.push_back({Token::Kind::Number, std::move(text), at});
      } else if (c == '-' && i_ + 1 < src_.size() && src_[i_ + 1] == '>') {
        advance(2);
        out.push_back({Token::Kind::Arrow, "->", at});
      } else {
        Token::Kind k;
        switch (c) {
          case '(': k = Token::Kind::LParen; break;
          case ')': k = Token::Kind::RParen; break;
          case ',': k = Token::Kind::Comma; break;
          case '.': k = Token::Kind::Dot; break;
          case '~': k = Token::Kind::Tilde; break;
          case '&': k = Token::Kind::Amp; break;
          case '|': k = Token::Kind::Bar; break;
          default:
            throw ParseError(std::string("unexpected character '") + c + "'", at.line, at.column);
        }
        advance(1);
        out.push_back({k, std::string(1, c), at});
      }
    }
  }

 private:
  void skip_space() {
    while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) advance(1);
  }

  void advance(std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i_) {
      if (src_[i_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
    }
  }

  std::string_view src_;
  ParseOptions opts_;
  std::size_t i_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

class SurfaceParser {
 public:
  SurfaceParser(std::string_view src, ParseOptions opts) : toks_(Lexer(src, opts).run()) {}

  NamedFormula formula_only() {
    NamedFormula f = formula();
    expect(Token::Kind::End, "end of input");
    return f;
  }

  NamedTerm term_only() {
    NamedTerm t = term();
    expect(Token::Kind::End, "end of input");
    return t;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  bool at(Token::Kind k) const { return peek().kind == k; }

  const Token& expect(Token::Kind k, std::string_view what) {
    if (!at(k)) fail("expected " + std::string(what));
    return toks_[pos_++];
  }

  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    const std::string found = t.kind == Token::Kind::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(msg + ", found " + found, t.pos.line, t.pos.column);
  }

  NamedFormula formula() {
    NamedFormula left = disjunction();
    if (at(Token::Kind::Arrow)) {
      const SourcePos p = peek().pos;
      ++pos_;
      NamedFormula right = formula();
      return binary(FormulaKind::Imp, std::move(left), std::move(right), p);
    }
    return left;
  }

  NamedFormula disjunction() {
    NamedFormula left = conjunction();
    while (at(Token::Kind::Bar)) {
      const SourcePos p = peek().pos;
      ++pos_;
      left = binary(FormulaKind::Dis, std::move(left), conjunction(), p);
    }
    return left;
  }

  NamedFormula conjunction() {
    NamedFormula left = unary();
    while (at(Token::Kind::Amp)) {
      const SourcePos p = peek().pos;
      ++pos_;
      left = binary(FormulaKind::Con, std::move(left), unary(), p);
    }
    return left;
  }

  NamedFormula unary() {
    const Token& t = peek();
    switch (t.kind) {
      case Token::Kind::Tilde: {
        ++pos_;
        NamedFormula f{FormulaKind::Neg, {}, {}, {}, {}, t.pos};
        f.sub.push_back(unary());
        return f;
      }
      case Token::Kind::LParen: {
        ++pos_;
        NamedFormula f = formula();
        expect(Token::Kind::RParen, "')'");
        return f;
      }
      case Token::Kind::Ident:
        if ((t.text == "all" || t.text == "ex") && peek(1).kind != Token::Kind::LParen) return quantifier();
        return atom();
      default:
        fail("expected a formula");
    }
  }

  NamedFormula quantifier() {
    const Token& q = toks_[pos_++];
    NamedFormula f{q.text == "all" ? FormulaKind::Uni : FormulaKind::Exi, {}, {}, {}, {}, q.pos};
    if (at(Token::Kind::Ident)) {
      const Token& n = toks_[pos_++];
      if (is_keyword(n.text)) {
        throw ParseError("keyword '" + n.text + "' cannot name a variable", n.pos.line, n.pos.column);
      }
      f.name = n.text;
    }
    expect(Token::Kind::Dot, "'.' after quantifier");
    f.sub.push_back(formula());
    return f;
  }

  NamedFormula atom() {
    const Token& t = toks_[pos_++];
    const bool applied = at(Token::Kind::LParen);
    if (!applied && t.text == "true") return NamedFormula{FormulaKind::Truth, {}, {}, {}, {}, t.pos};
    if (!applied && t.text == "false") return NamedFormula{FormulaKind::Falsity, {}, {}, {}, {}, t.pos};
    NamedFormula f{FormulaKind::Pre, t.text, {}, {}, {}, t.pos};
    if (applied) f.args = arguments();
    return f;
  }

  std::vector<NamedTerm> arguments() {
    expect(Token::Kind::LParen, "'('");
    std::vector<NamedTerm> args;
    if (at(Token::Kind::RParen)) {
      ++pos_;
      return args;
    }
    args.push_back(term());
    while (at(Token::Kind::Comma)) {
      ++pos_;
      args.push_back(term());
    }
    expect(Token::Kind::RParen, "',' or ')'");
    return args;
  }

  NamedTerm term() {
    const Token& t = peek();
    if (t.kind == Token::Kind::Number) {
      ++pos_;
      return NamedTerm{NamedTerm::Kind::Index, {}, std::stoul(t.text), {}, t.pos};
    }
    if (t.kind != Token::Kind::Ident) fail("expected a term");
    ++pos_;
    if (at(Token::Kind::LParen)) return NamedTerm{NamedTerm::Kind::App, t.text, 0, arguments(), t.pos};
    if (is_keyword(t.text)) {
      throw ParseError("keyword '" + t.text + "' cannot be used as a term", t.pos.line, t.pos.column);
    }
    return NamedTerm{NamedTerm::Kind::Name, t.text, 0, {}, t.pos};
  }

  static NamedFormula binary(FormulaKind k, NamedFormula l, NamedFormula r, SourcePos p) {
    NamedFormula f{k, {}, {}, {}, {}, p};
    f.sub.push_back(std::move(l));
    f.sub.push_back(std::move(r));
    return f;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline NamedFormula parse_named_formula(std::string_view src, ParseOptions opts = {}) {
  return detail::SurfaceParser(src, opts).formula_only();
}

inline NamedTerm parse_named_term(std::string_view src, ParseOptions opts = {}) {
  return detail::SurfaceParser(src, opts).term_only();
}

/// Converts named formulas and terms to de Bruijn form with one free-variable
/// table shared by everything added, so names mean the same across a whole
/// sequent or proof document.
class DeBruijnConverter {
 public:
  std::size_t add(NamedFormula f) {
    check_ambiguity(f);
    formulas_.push_back(std::move(f));
    return formulas_.size() - 1;
  }

  std::size_t add(NamedTerm t) {
    terms_.push_back(std::move(t));
    return terms_.size() - 1;
  }

  /// Fixes the free-variable table. Must be called before formula()/term().
  void resolve() {
    std::set<std::size_t> pinned;
    std::vector<std::string> order;
    std::vector<std::optional<std::string>> binders;
    for (const auto& f : formulas_) scan(f, binders, pinned, order);
    for (const auto& t : terms_) scan(t, binders, pinned, order);
    std::size_t next = 0;
    for (const auto& name : order) {
      if (free_.count(name)) continue;
      if (auto k = canonical_free_index(name)) {
        free_[name] = *k;
        continue;
      }
      while (pinned.count(next)) ++next;
      free_[name] = next;
      pinned.insert(next);
    }
    resolved_ = true;
  }

  Formula formula(std::size_t handle) const {
    std::vector<std::optional<std::string>> binders;
    return convert(formulas_.at(handle), binders);
  }

  Term term(std::size_t handle) const {
    std::vector<std::optional<std::string>> binders;
    return convert(terms_.at(handle), binders);
  }

  /// Free-variable names by index, for printing back with the user's names.
  std::vector<std::string> free_names() const {
    std::vector<std::string> out;
    for (const auto& [name, k] : free_) {
      if (out.size() <= k) out.resize(k + 1);
      out[k] = name;
    }
    for (std::size_t k = 0; k < out.size(); ++k) {
      if (out[k].empty()) out[k] = "v" + std::to_string(k);
    }
    return out;
  }

 private:
  static std::optional<std::size_t> bound_index(const std::vector<std::optional<std::string>>& binders,
                                                const std::string& name) {
    for (std::size_t i = 0; i < binders.size(); ++i) {
      const auto& b = binders[binders.size() - 1 - i];
      if (b && *b == name) return i;
    }
    return std::nullopt;
  }

  static void scan(const NamedTerm& t, std::vector<std::optional<std::string>>& binders,
                   std::set<std::size_t>& pinned, std::vector<std::string>& order) {
    switch (t.kind) {
      case NamedTerm::Kind::Index:
        if (t.index >= binders.size()) pinned.insert(t.index - binders.size());
        return;
      case NamedTerm::Kind::Name:
        if (!bound_index(binders, t.id) && is_variable_name(t.id)) {
          if (auto k = canonical_free_index(t.id)) pinned.insert(*k);
          order.push_back(t.id);
        }
        return;
      case NamedTerm::Kind::App:
        for (const auto& a : t.args) scan(a, binders, pinned, order);
        return;
    }
  }

  static void scan(const NamedFormula& f, std::vector<std::optional<std::string>>& binders,
                   std::set<std::size_t>& pinned, std::vector<std::string>& order) {
    if (f.kind == FormulaKind::Pre) {
      for (const auto& a : f.args) scan(a, binders, pinned, order);
      return;
    }
    const bool binds = f.kind == FormulaKind::Uni || f.kind == FormulaKind::Exi;
    if (binds) binders.push_back(f.name);
    for (const auto& s : f.sub) scan(s, binders, pinned, order);
    if (binds) binders.pop_back();
  }

  static void collect_function_ids(const NamedTerm& t, const std::vector<std::optional<std::string>>& binders,
                                   std::map<std::string, SourcePos>& out) {
    if (t.kind == NamedTerm::Kind::App) {
      out.emplace(t.id, t.pos);
      for (const auto& a : t.args) collect_function_ids(a, binders, out);
    } else if (t.kind == NamedTerm::Kind::Name && !bound_index(binders, t.id) && !is_variable_name(t.id)) {
      out.emplace(t.id, t.pos);
    }
  }

  static void collect(const NamedFormula& f, std::vector<std::optional<std::string>>& binders,
                      std::map<std::string, SourcePos>& functions, std::map<std::string, SourcePos>& bound) {
    if (f.kind == FormulaKind::Pre) {
      for (const auto& a : f.args) collect_function_ids(a, binders, functions);
      return;
    }
    const bool binds = f.kind == FormulaKind::Uni || f.kind == FormulaKind::Exi;
    if (binds) {
      binders.push_back(f.name);
      if (f.name) bound.emplace(*f.name, f.pos);
    }
    for (const auto& s : f.sub) collect(s, binders, functions, bound);
    if (binds) binders.pop_back();
  }

  // A name may not be both a bound variable and a function identifier.
  static void check_ambiguity(const NamedFormula& f) {
    std::map<std::string, SourcePos> functions, bound;
    std::vector<std::optional<std::string>> binders;
    collect(f, binders, functions, bound);
    for (const auto& [name, pos] : bound) {
      if (auto it = functions.find(name); it != functions.end()) {
        throw ParseError("ambiguous identifier '" + name + "' is used both as a bound variable and as a function",
                         it->second.line, it->second.column);
      }
    }
  }

  Term convert(const NamedTerm& t, std::vector<std::optional<std::string>>& binders) const {
    switch (t.kind) {
      case NamedTerm::Kind::Index:
        return Term::var(t.index);
      case NamedTerm::Kind::Name: {
        if (auto i = bound_index(binders, t.id)) return Term::var(*i);
        if (is_variable_name(t.id)) {
          if (!resolved_) throw std::logic_error("DeBruijnConverter: resolve() not called");
          return Term::var(free_.at(t.id) + binders.size());
        }
        return Term::fun(t.id);
      }
      case NamedTerm::Kind::App: {
        std::vector<Term> args;
        args.reserve(t.args.size());
        for (const auto& a : t.args) args.push_back(convert(a, binders));
        return Term::fun(t.id, std::move(args));
      }
    }
    throw std::logic_error("convert: unknown term kind");
  }

  Formula convert(const NamedFormula& f, std::vector<std::optional<std::string>>& binders) const {
    switch (f.kind) {
      case FormulaKind::Falsity:
        return Formula::falsity();
      case FormulaKind::Truth:
        return Formula::truth();
      case FormulaKind::Pre: {
        std::vector<Term> args;
        args.reserve(f.args.size());
        for (const auto& a : f.args) args.push_back(convert(a, binders));
        return Formula::pre(f.id, std::move(args));
      }
      case FormulaKind::Con:
        return Formula::con(convert(f.sub[0], binders), convert(f.sub[1], binders));
      case FormulaKind::Dis:
        return Formula::dis(convert(f.sub[0], binders), convert(f.sub[1], binders));
      case FormulaKind::Imp:
        return Formula::imp(convert(f.sub[0], binders), convert(f.sub[1], binders));
      case FormulaKind::Neg:
        return Formula::neg(convert(f.sub[0], binders));
      case FormulaKind::Uni:
      case FormulaKind::Exi: {
        binders.push_back(f.name);
        Formula body = convert(f.sub[0], binders);
        binders.pop_back();
        return f.kind == FormulaKind::Uni ? Formula::uni(std::move(body)) : Formula::exi(std::move(body));
      }
    }
    throw std::logic_error("convert: unknown formula kind");
  }

  std::vector<NamedFormula> formulas_;
  std::vector<NamedTerm> terms_;
  std::map<std::string, std::size_t> free_;
  bool resolved_ = false;
};

inline Formula parse_formula(std::string_view src, ParseOptions opts = {}) {
  DeBruijnConverter conv;
  const auto h = conv.add(parse_named_formula(src, opts));
  conv.resolve();
  return conv.formula(h);
}

/// Parses a list of formulas sharing one free-variable table.
inline Sequent parse_sequent(const std::vector<std::string>& srcs, ParseOptions opts = {}) {
  DeBruijnConverter conv;
  std::vector<std::size_t> hs;
  for (const auto& s : srcs) hs.push_back(conv.add(parse_named_formula(s, opts)));
  conv.resolve();
  Sequent out;
  for (auto h : hs) out.push_back(conv.formula(h));
  return out;
}

inline Term parse_term(std::string_view src, ParseOptions opts = {}) {
  DeBruijnConverter conv;
  const auto h = conv.add(parse_named_term(src, opts));
  conv.resolve();
  return conv.term(h);
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline int precedence(const Formula& p) {
  switch (p.kind()) {
    case FormulaKind::Imp: return 1;
    case FormulaKind::Dis: return 2;
    case FormulaKind::Con: return 3;
    case FormulaKind::Neg: return 4;
    case FormulaKind::Uni:
    case FormulaKind::Exi: return 0;
    default: return 5;
  }
}

class Printer {
 public:
  Printer(const Formula& p, const std::vector<std::string>* free_names) : free_names_(free_names) {
    for (const auto& s : function_symbols(p)) avoid_.insert(s.id);
  }
  explicit Printer(const std::vector<std::string>* free_names) : free_names_(free_names) {}

  std::string formula(const Formula& p, bool tail) {
    switch (p.kind()) {
      case FormulaKind::Falsity: return "false";
      case FormulaKind::Truth: return "true";
      case FormulaKind::Pre: {
        std::string s = p.id();
        if (!p.args().empty()) return s + arguments(p.args());
        return is_keyword(s) ? s + "()" : s;
      }
      case FormulaKind::Imp:
        return operand(p.left(), 2, false) + " -> " + operand(p.right(), 1, tail);
      case FormulaKind::Dis:
        return operand(p.left(), 2, false) + " | " + operand(p.right(), 3, tail);
      case FormulaKind::Con:
        return operand(p.left(), 3, false) + " & " + operand(p.right(), 4, tail);
      case FormulaKind::Neg:
        return "~" + operand(p.body(), 4, tail);
      case FormulaKind::Uni:
      case FormulaKind::Exi: {
        if (!tail) return "(" + formula(p, true) + ")";
        const std::string name = binder_name(binders_.size());
        binders_.push_back(name);
        std::string s = (p.is(FormulaKind::Uni) ? "all " : "ex ") + name + ". " + formula(p.body(), true);
        binders_.pop_back();
        return s;
      }
    }
    return "?";
  }

  std::string term(const Term& t) {
    if (t.is_var()) {
      const std::size_t n = t.index();
      if (n < binders_.size()) return binders_[binders_.size() - 1 - n];
      const std::size_t k = n - binders_.size();
      if (free_names_ && k < free_names_->size()) return (*free_names_)[k];
      return "v" + std::to_string(k);
    }
    if (!t.args().empty()) return t.id() + arguments(t.args());
    if (is_keyword(t.id()) || is_variable_name(t.id())) return t.id() + "()";
    return t.id();
  }

 private:
  std::string operand(const Formula& q, int min_prec, bool tail) {
    const bool quant = q.is(FormulaKind::Uni) || q.is(FormulaKind::Exi);
    if (!quant && precedence(q) < min_prec) return "(" + formula(q, true) + ")";
    return formula(q, tail);
  }

  std::string arguments(const std::vector<Term>& args) {
    std::string s = "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) s += ", ";
      s += term(args[i]);
    }
    return s + ")";
  }

  // x, y, z, x1, y1, z1, x2, ... skipping function identifiers.
  std::string binder_name(std::size_t depth) const {
    static const char* kBase[] = {"x", "y", "z"};
    std::size_t skipped = 0;
    for (std::size_t i = 0;; ++i) {
      std::string name = kBase[i % 3];
      if (i >= 3) name += std::to_string(i / 3);
      if (avoid_.count(name) || (free_names_ && is_free_name(name))) continue;
      if (skipped == depth) return name;
      ++skipped;
    }
  }

  bool is_free_name(const std::string& name) const {
    for (const auto& n : *free_names_) {
      if (n == name) return true;
    }
    return false;
  }

  const std::vector<std::string>* free_names_;
  std::set<std::string> avoid_;
  std::vector<std::string> binders_;
};

}  // namespace detail

/// Prints `p` in the surface grammar. Free variables print as v0, v1, ...
/// unless `free_names` supplies names by index.
inline std::string print_formula(const Formula& p, const std::vector<std::string>* free_names = nullptr) {
  return detail::Printer(p, free_names).formula(p, true);
}

inline std::string print_term(const Term& t, const std::vector<std::string>* free_names = nullptr) {
  return detail::Printer(free_names).term(t);
}

inline std::vector<std::string> print_sequent(const Sequent& x) {
  std::vector<std::string> out;
  out.reserve(x.size());
  for (const auto& p : x) out.push_back(print_formula(p));
  return out;
}

}  // namespace secav
