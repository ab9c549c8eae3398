// Abstract syntax of first-order terms and formulas over de Bruijn indices,
// together with the auxiliary functions the calculus side conditions use:
// newness of identifiers, index increment, substitution, membership and
// list extension.
#pragma once

#include <cstddef>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace secav {

class Term {
 public:
  enum class Kind { Var, Fun };

  static Term var(std::size_t index) { return Term(Kind::Var, index, {}, {}); }
  static Term fun(std::string id, std::vector<Term> args = {}) {
    return Term(Kind::Fun, 0, std::move(id), std::move(args));
  }

  Kind kind() const { return kind_; }
  bool is_var() const { return kind_ == Kind::Var; }
  bool is_fun() const { return kind_ == Kind::Fun; }
  std::size_t index() const { return index_; }
  const std::string& id() const { return id_; }
  const std::vector<Term>& args() const { return args_; }

  friend bool operator==(const Term& a, const Term& b) {
    return a.kind_ == b.kind_ && a.index_ == b.index_ && a.id_ == b.id_ && a.args_ == b.args_;
  }

 private:
  Term(Kind kind, std::size_t index, std::string id, std::vector<Term> args)
      : kind_(kind), index_(index), id_(std::move(id)), args_(std::move(args)) {}

  Kind kind_;
  std::size_t index_;
  std::string id_;
  std::vector<Term> args_;
};

enum class FormulaKind { Falsity, Truth, Pre, Con, Dis, Imp, Neg, Uni, Exi };

/// Immutable formula value. Subformulas are shared, so copies are cheap.
class Formula {
 public:
  static Formula falsity() { return Formula(FormulaKind::Falsity); }
  static Formula truth() { return Formula(FormulaKind::Truth); }
  static Formula pre(std::string id, std::vector<Term> args = {}) {
    Formula f(FormulaKind::Pre);
    f.node_ = std::make_shared<const Node>(Node{FormulaKind::Pre, std::move(id), std::move(args), {}, {}});
    return f;
  }
  static Formula con(Formula p, Formula q) { return binary(FormulaKind::Con, std::move(p), std::move(q)); }
  static Formula dis(Formula p, Formula q) { return binary(FormulaKind::Dis, std::move(p), std::move(q)); }
  static Formula imp(Formula p, Formula q) { return binary(FormulaKind::Imp, std::move(p), std::move(q)); }
  static Formula neg(Formula p) { return unary(FormulaKind::Neg, std::move(p)); }
  static Formula uni(Formula p) { return unary(FormulaKind::Uni, std::move(p)); }
  static Formula exi(Formula p) { return unary(FormulaKind::Exi, std::move(p)); }

  FormulaKind kind() const { return node_->kind; }
  bool is(FormulaKind k) const { return node_->kind == k; }

  // Pre only.
  const std::string& id() const { return node_->id; }
  const std::vector<Term>& args() const { return node_->args; }

  // Con, Dis, Imp: left/right. Neg, Uni, Exi: body.
  const Formula& left() const { return *node_->left; }
  const Formula& right() const { return *node_->right; }
  const Formula& body() const { return *node_->left; }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    const Node& x = *a.node_;
    const Node& y = *b.node_;
    if (x.kind != y.kind) return false;
    switch (x.kind) {
      case FormulaKind::Falsity:
      case FormulaKind::Truth:
        return true;
      case FormulaKind::Pre:
        return x.id == y.id && x.args == y.args;
      case FormulaKind::Con:
      case FormulaKind::Dis:
      case FormulaKind::Imp:
        return *x.left == *y.left && *x.right == *y.right;
      default:
        return *x.left == *y.left;
    }
  }

 private:
  struct Node {
    FormulaKind kind;
    std::string id;
    std::vector<Term> args;
    std::shared_ptr<const Formula> left;
    std::shared_ptr<const Formula> right;
  };

  explicit Formula(FormulaKind kind) : node_(constant_node(kind)) {}

  static std::shared_ptr<const Node> constant_node(FormulaKind kind) {
    static const auto falsity = std::make_shared<const Node>(Node{FormulaKind::Falsity, {}, {}, {}, {}});
    static const auto truth = std::make_shared<const Node>(Node{FormulaKind::Truth, {}, {}, {}, {}});
    return kind == FormulaKind::Truth ? truth : falsity;
  }

  static Formula unary(FormulaKind kind, Formula p) {
    Formula f(FormulaKind::Falsity);
    f.node_ = std::make_shared<const Node>(Node{kind, {}, {}, std::make_shared<const Formula>(std::move(p)), {}});
    return f;
  }

  static Formula binary(FormulaKind kind, Formula p, Formula q) {
    Formula f(FormulaKind::Falsity);
    f.node_ = std::make_shared<const Node>(Node{kind, {}, {}, std::make_shared<const Formula>(std::move(p)),
                                                std::make_shared<const Formula>(std::move(q))});
    return f;
  }

  std::shared_ptr<const Node> node_;
};

/// Ground term. Closed by construction.
struct HTerm {
  std::string id;
  std::vector<HTerm> args;

  Term to_term() const {
    std::vector<Term> ts;
    ts.reserve(args.size());
    for (const auto& a : args) ts.push_back(a.to_term());
    return Term::fun(id, std::move(ts));
  }

  friend bool operator==(const HTerm&, const HTerm&) = default;
};

/// The succedent of a sequent. The antecedent is always empty.
using Sequent = std::vector<Formula>;

/// A function or predicate identifier together with the arity it is used at.
struct Symbol {
  std::string id;
  std::size_t arity = 0;

  friend auto operator<=>(const Symbol&, const Symbol&) = default;
  friend bool operator==(const Symbol&, const Symbol&) = default;
};

// ---------------------------------------------------------------------------
// Newness

inline bool new_list(const std::string& c, const std::vector<Term>& l);

inline bool new_term(const std::string& c, const Term& t) {
  if (t.is_var()) return true;
  if (t.id() == c) return false;
  return new_list(c, t.args());
}

inline bool new_list(const std::string& c, const std::vector<Term>& l) {
  for (const auto& t : l) {
    if (!new_term(c, t)) return false;
  }
  return true;
}

/// `new` in the calculus; renamed since `new` is a keyword.
inline bool new_formula(const std::string& c, const Formula& p) {
  switch (p.kind()) {
    case FormulaKind::Falsity:
    case FormulaKind::Truth:
      return true;
    case FormulaKind::Pre:
      return new_list(c, p.args());
    case FormulaKind::Con:
    case FormulaKind::Dis:
    case FormulaKind::Imp:
      return new_formula(c, p.left()) && new_formula(c, p.right());
    default:
      return new_formula(c, p.body());
  }
}

inline bool news(const std::string& c, const std::vector<Formula>& x) {
  for (const auto& p : x) {
    if (!new_formula(c, p)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Increment and substitution

inline std::vector<Term> inc_list(const std::vector<Term>& l);

inline Term inc_term(const Term& t) {
  if (t.is_var()) return Term::var(t.index() + 1);
  return Term::fun(t.id(), inc_list(t.args()));
}

inline std::vector<Term> inc_list(const std::vector<Term>& l) {
  std::vector<Term> out;
  out.reserve(l.size());
  for (const auto& t : l) out.push_back(inc_term(t));
  return out;
}

inline std::vector<Term> sub_list(std::size_t v, const Term& s, const std::vector<Term>& l);

inline Term sub_term(std::size_t v, const Term& s, const Term& t) {
  if (t.is_fun()) return Term::fun(t.id(), sub_list(v, s, t.args()));
  const std::size_t n = t.index();
  if (n < v) return t;
  if (n == v) return s;
  return Term::var(n - 1);
}

inline std::vector<Term> sub_list(std::size_t v, const Term& s, const std::vector<Term>& l) {
  std::vector<Term> out;
  out.reserve(l.size());
  for (const auto& t : l) out.push_back(sub_term(v, s, t));
  return out;
}

/// Substitutes `s` for index `v` in `p`. Under each quantifier both the index
/// and the substituted term move up by one.
inline Formula sub(std::size_t v, const Term& s, const Formula& p) {
  switch (p.kind()) {
    case FormulaKind::Falsity:
    case FormulaKind::Truth:
      return p;
    case FormulaKind::Pre:
      return Formula::pre(p.id(), sub_list(v, s, p.args()));
    case FormulaKind::Con:
      return Formula::con(sub(v, s, p.left()), sub(v, s, p.right()));
    case FormulaKind::Dis:
      return Formula::dis(sub(v, s, p.left()), sub(v, s, p.right()));
    case FormulaKind::Imp:
      return Formula::imp(sub(v, s, p.left()), sub(v, s, p.right()));
    case FormulaKind::Neg:
      return Formula::neg(sub(v, s, p.body()));
    case FormulaKind::Uni:
      return Formula::uni(sub(v + 1, inc_term(s), p.body()));
    case FormulaKind::Exi:
      return Formula::exi(sub(v + 1, inc_term(s), p.body()));
  }
  throw std::logic_error("sub: unknown formula kind");
}

// ---------------------------------------------------------------------------
// Membership and extension

inline bool member(const Formula& p, const std::vector<Formula>& x) {
  for (const auto& q : x) {
    if (p == q) return true;
  }
  return false;
}

/// True iff every formula of `x` is a member of `y`.
inline bool ext(const std::vector<Formula>& y, const std::vector<Formula>& x) {
  for (const auto& p : x) {
    if (!member(p, y)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Structural queries used by the semantics, prover and printer.

namespace detail {

inline void collect_free(const Term& t, std::size_t depth, std::set<std::size_t>& out) {
  if (t.is_var()) {
    if (t.index() >= depth) out.insert(t.index() - depth);
    return;
  }
  for (const auto& a : t.args()) collect_free(a, depth, out);
}

inline void collect_free(const Formula& p, std::size_t depth, std::set<std::size_t>& out) {
  switch (p.kind()) {
    case FormulaKind::Falsity:
    case FormulaKind::Truth:
      return;
    case FormulaKind::Pre:
      for (const auto& a : p.args()) collect_free(a, depth, out);
      return;
    case FormulaKind::Con:
    case FormulaKind::Dis:
    case FormulaKind::Imp:
      collect_free(p.left(), depth, out);
      collect_free(p.right(), depth, out);
      return;
    case FormulaKind::Neg:
      collect_free(p.body(), depth, out);
      return;
    case FormulaKind::Uni:
    case FormulaKind::Exi:
      collect_free(p.body(), depth + 1, out);
      return;
  }
}

inline void collect_functions(const Term& t, std::set<Symbol>& out) {
  if (t.is_var()) return;
  out.insert({t.id(), t.args().size()});
  for (const auto& a : t.args()) collect_functions(a, out);
}

inline void collect_symbols(const Formula& p, std::set<Symbol>* funs, std::set<Symbol>* preds) {
  switch (p.kind()) {
    case FormulaKind::Falsity:
    case FormulaKind::Truth:
      return;
    case FormulaKind::Pre:
      if (preds) preds->insert({p.id(), p.args().size()});
      if (funs) {
        for (const auto& a : p.args()) collect_functions(a, *funs);
      }
      return;
    case FormulaKind::Con:
    case FormulaKind::Dis:
    case FormulaKind::Imp:
      collect_symbols(p.left(), funs, preds);
      collect_symbols(p.right(), funs, preds);
      return;
    default:
      collect_symbols(p.body(), funs, preds);
  }
}

}  // namespace detail

/// Free de Bruijn indices of `p`, measured from outside all quantifiers.
inline std::set<std::size_t> free_indices(const Formula& p) {
  std::set<std::size_t> out;
  detail::collect_free(p, 0, out);
  return out;
}

inline std::set<std::size_t> free_indices(const Term& t) {
  std::set<std::size_t> out;
  detail::collect_free(t, 0, out);
  return out;
}

inline bool is_closed(const Formula& p) { return free_indices(p).empty(); }

inline std::set<Symbol> function_symbols(const std::vector<Formula>& x) {
  std::set<Symbol> out;
  for (const auto& p : x) detail::collect_symbols(p, &out, nullptr);
  return out;
}

inline std::set<Symbol> function_symbols(const Formula& p) { return function_symbols(std::vector<Formula>{p}); }

inline std::set<Symbol> predicate_symbols(const Formula& p) {
  std::set<Symbol> out;
  detail::collect_symbols(p, nullptr, &out);
  return out;
}

inline bool has_quantifier(const Formula& p) {
  switch (p.kind()) {
    case FormulaKind::Uni:
    case FormulaKind::Exi:
      return true;
    case FormulaKind::Con:
    case FormulaKind::Dis:
    case FormulaKind::Imp:
      return has_quantifier(p.left()) || has_quantifier(p.right());
    case FormulaKind::Neg:
      return has_quantifier(p.body());
    default:
      return false;
  }
}

}  // namespace secav
