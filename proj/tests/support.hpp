// Shared fixtures: the exercise corpus and random generators for terms,
// formulas and models.
#pragma once

#include <random>
#include <string>
#include <vector>

#include "secav/secav.hpp"

namespace secav::testing {

inline const std::vector<std::string>& week1() {
  static const std::vector<std::string> v = {
      "p -> p",
      "p -> ~~p",
      "~~p -> p",
      "(all x. p(x)) -> p(a)",
      "(all x. p(x)) -> (ex x. p(x))",
      "p -> q -> p",
      "p & (p -> q) -> q",
  };
  return v;
}

inline const std::vector<std::string>& week2() {
  static const std::vector<std::string> v = {
      "(p -> q) -> p -> q",
      "p -> (p -> q) -> q",
      "(all x. all y. p(x,y)) -> (all x. p(x,x))",
      "p & q -> r -> p & r",
      "p(a) & (p(a) -> (all x. p(x))) -> (all x. p(x))",
      "~p | ~q -> ~(p & q)",
      "(p -> q -> r) -> (p -> q) -> p -> r",
  };
  return v;
}

inline const std::string& question1() {
  static const std::string s = "((all x. p(x)) & (all x. q(x))) -> (all x. p(x) & q(x))";
  return s;
}

inline const std::vector<std::string>& question2() {
  static const std::vector<std::string> v = {
      question1(),
      "p & q -> q",
      "p(a,a) -> (ex x. ex y. p(x,y))",
      "((all x. p(x)) | (all x. q(x))) -> (all x. p(x) | q(x))",
      "p | (p -> q)",
      "(p -> q) | (q -> r)",
  };
  return v;
}

/// Week 1, week 2, Question 1 and the six Question 2 formulas.
inline std::vector<std::string> full_corpus() {
  std::vector<std::string> out = week1();
  out.insert(out.end(), week2().begin(), week2().end());
  out.push_back(question1());
  out.insert(out.end(), question2().begin(), question2().end());
  return out;
}

inline Formula P() { return Formula::pre("p"); }
inline Formula Q() { return Formula::pre("q"); }

struct FormulaShape {
  std::size_t max_depth = 4;
  std::vector<Symbol> preds = {{"p", 1}, {"q", 2}};
  std::vector<Symbol> funs = {{"f", 1}};
  std::vector<std::string> constants = {"a"};
  std::size_t free_vars = 0;  // free indices available at the top level
};

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool coin() { return below(2) == 1; }
  std::mt19937_64& rng() { return rng_; }

  Term term(const FormulaShape& s, std::size_t bound, std::size_t depth) {
    const std::size_t vars = bound + s.free_vars;
    const std::size_t choices = vars + s.constants.size() + (depth > 1 ? s.funs.size() : 0);
    if (choices == 0) return Term::fun("a");
    std::size_t k = below(choices);
    if (k < vars) return Term::var(k);
    k -= vars;
    if (k < s.constants.size()) return Term::fun(s.constants[k]);
    const Symbol& f = s.funs[k - s.constants.size()];
    std::vector<Term> args;
    for (std::size_t i = 0; i < f.arity; ++i) args.push_back(term(s, bound, depth - 1));
    return Term::fun(f.id, std::move(args));
  }

  Formula formula(const FormulaShape& s) { return formula(s, 0, s.max_depth); }

  Formula formula(const FormulaShape& s, std::size_t bound, std::size_t depth) {
    if (depth <= 1) return atom(s, bound);
    switch (below(9)) {
      case 0: return atom(s, bound);
      case 1: return Formula::neg(formula(s, bound, depth - 1));
      case 2: return Formula::con(formula(s, bound, depth - 1), formula(s, bound, depth - 1));
      case 3: return Formula::dis(formula(s, bound, depth - 1), formula(s, bound, depth - 1));
      case 4:
      case 5: return Formula::imp(formula(s, bound, depth - 1), formula(s, bound, depth - 1));
      case 6: return Formula::uni(formula(s, bound + 1, depth - 1));
      case 7: return Formula::exi(formula(s, bound + 1, depth - 1));
      default: return below(4) == 0 ? (coin() ? Formula::truth() : Formula::falsity()) : atom(s, bound);
    }
  }

  // With no variable or constant in scope the atom is nullary.
  Formula atom(const FormulaShape& s, std::size_t bound) {
    const Symbol& p = s.preds[below(s.preds.size())];
    if (bound + s.free_vars + s.constants.size() == 0) return Formula::pre(p.id);
    std::vector<Term> args;
    for (std::size_t i = 0; i < p.arity; ++i) args.push_back(term(s, bound, 2));
    return Formula::pre(p.id, std::move(args));
  }

  /// Random model over the signature of `p` with extra environment entries.
  Model model(const Formula& p, std::size_t size, std::size_t env_len) {
    Model m;
    m.universe.size = size;
    for (const auto& s : predicate_symbols(p)) {
      for (auto& v : m.preds_entry(s).values) v = coin();
    }
    for (const auto& s : function_symbols(p)) {
      for (auto& v : m.funs_entry(s).values) v = below(size);
    }
    std::vector<Element> env(env_len);
    for (auto& v : env) v = below(size);
    m.env = Environment(std::move(env), below(size));
    return m;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace secav::testing
