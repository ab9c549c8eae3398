// Truth evaluation in finite models. Universes are {0, ..., size-1}, so both
// quantifiers are decided by enumeration.
#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "secav/syntax.hpp"

namespace secav {

using Element = std::size_t;

class InvalidElement : public std::invalid_argument {
 public:
  InvalidElement(Element z, std::size_t size)
      : std::invalid_argument("element " + std::to_string(z) + " is outside the universe of size " +
                              std::to_string(size)) {}
};

struct Universe {
  std::size_t size = 1;

  bool contains(Element z) const { return z < size; }
};

/// Total map from variable indices to elements: a finite prefix table plus a
/// fallback for every index beyond it.
class Environment {
 public:
  Environment() = default;
  explicit Environment(std::vector<Element> table, Element fallback = 0)
      : table_(std::move(table)), fallback_(fallback) {}

  Element operator()(std::size_t n) const { return n < table_.size() ? table_[n] : fallback_; }

  const std::vector<Element>& table() const { return table_; }
  std::vector<Element>& table() { return table_; }
  Element fallback() const { return fallback_; }

  friend bool operator==(const Environment& a, const Environment& b) {
    const std::size_t n = std::max(a.table_.size(), b.table_.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (a(i) != b(i)) return false;
    }
    return a.fallback_ == b.fallback_;
  }

 private:
  std::vector<Element> table_;
  Element fallback_ = 0;
};

/// Inserts `z` at index `v`: indices below `v` keep their value, indices above
/// it see the value previously one below.
inline Environment shift(const Environment& e, std::size_t v, Element z, Universe u) {
  if (!u.contains(z)) throw InvalidElement(z, u.size);
  const std::size_t len = std::max(e.table().size() + 1, v + 1);
  std::vector<Element> table(len);
  for (std::size_t n = 0; n < len; ++n) {
    if (n < v) {
      table[n] = e(n);
    } else if (n == v) {
      table[n] = z;
    } else {
      table[n] = e(n - 1);
    }
  }
  return Environment(std::move(table), e.fallback());
}

namespace detail {

// Row-major index of an argument tuple; the first argument is most significant.
inline std::size_t tuple_index(const std::vector<Element>& args, std::size_t size) {
  std::size_t idx = 0;
  for (Element a : args) idx = idx * size + a;
  return idx;
}

inline std::size_t table_size(std::size_t size, std::size_t arity) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < arity; ++i) n *= size;
  return n;
}

inline std::vector<Element> tuple_at(std::size_t idx, std::size_t arity, std::size_t size) {
  std::vector<Element> args(arity);
  for (std::size_t i = arity; i-- > 0;) {
    args[i] = idx % size;
    idx /= size;
  }
  return args;
}

struct SymbolLess {
  using is_transparent = void;
  template <typename A, typename B>
  bool operator()(const A& a, const B& b) const {
    const std::string_view ai = a.id, bi = b.id;
    return ai < bi || (ai == bi && a.arity < b.arity);
  }
};

struct SymbolKey {
  std::string_view id;
  std::size_t arity;
};

}  // namespace detail

/// Dense table over all argument tuples of one (identifier, arity) pair.
struct FunctionTable {
  std::size_t arity = 0;
  std::vector<Element> values;

  friend bool operator==(const FunctionTable&, const FunctionTable&) = default;
};

struct PredicateTable {
  std::size_t arity = 0;
  std::vector<char> values;

  friend bool operator==(const PredicateTable&, const PredicateTable&) = default;
};

/// Interpretation of function and predicate identifiers. Identifiers are
/// interpreted per (id, arity) pair. Unmapped functions yield element 0,
/// unmapped predicates are false.
struct Interpretation {
  std::map<Symbol, FunctionTable, detail::SymbolLess> funs;
  std::map<Symbol, PredicateTable, detail::SymbolLess> preds;

  friend bool operator==(const Interpretation&, const Interpretation&) = default;
};

struct Model {
  Universe universe;
  Interpretation interp;
  Environment env;

  std::size_t size() const { return universe.size; }

  void set_function(const Symbol& s, const std::vector<Element>& args, Element value) {
    check(value);
    for (Element a : args) check(a);
    auto& t = funs_entry(s);
    t.values[detail::tuple_index(args, size())] = value;
  }

  void set_predicate(const Symbol& s, const std::vector<Element>& args, bool value) {
    for (Element a : args) check(a);
    auto& t = preds_entry(s);
    t.values[detail::tuple_index(args, size())] = value ? 1 : 0;
  }

  FunctionTable& funs_entry(const Symbol& s) {
    auto it = interp.funs.find(s);
    if (it == interp.funs.end()) {
      it = interp.funs.emplace(s, FunctionTable{s.arity, std::vector<Element>(detail::table_size(size(), s.arity), 0)})
               .first;
    }
    return it->second;
  }

  PredicateTable& preds_entry(const Symbol& s) {
    auto it = interp.preds.find(s);
    if (it == interp.preds.end()) {
      it = interp.preds.emplace(s, PredicateTable{s.arity, std::vector<char>(detail::table_size(size(), s.arity), 0)})
               .first;
    }
    return it->second;
  }

  /// Throws InvalidElement or std::invalid_argument when a table is malformed.
  void validate() const {
    if (universe.size == 0) throw std::invalid_argument("universe must be nonempty");
    for (const auto& [s, t] : interp.funs) {
      if (t.arity != s.arity || t.values.size() != detail::table_size(size(), s.arity)) {
        throw std::invalid_argument("function table " + s.id + "/" + std::to_string(s.arity) + " has wrong shape");
      }
      for (Element v : t.values) check(v);
    }
    for (const auto& [s, t] : interp.preds) {
      if (t.arity != s.arity || t.values.size() != detail::table_size(size(), s.arity)) {
        throw std::invalid_argument("predicate table " + s.id + "/" + std::to_string(s.arity) + " has wrong shape");
      }
    }
    for (Element v : env.table()) check(v);
    check(env.fallback());
  }

  friend bool operator==(const Model& a, const Model& b) {
    return a.universe.size == b.universe.size && a.interp == b.interp && a.env == b.env;
  }

 private:
  void check(Element z) const {
    if (!universe.contains(z)) throw InvalidElement(z, universe.size);
  }
};

namespace detail {

// Evaluation with the quantifier-bound values kept on a stack: index n < depth
// refers to the n-th most recent binder, larger indices fall through to the
// model environment shifted by depth. Equivalent to repeated shift(e, 0, z).
class Evaluator {
 public:
  explicit Evaluator(const Model& m) : m_(m) {}

  Element term(const Term& t) {
    if (t.is_var()) {
      const std::size_t n = t.index();
      if (n < bound_.size()) return bound_[bound_.size() - 1 - n];
      return m_.env(n - bound_.size());
    }
    std::vector<Element> args;
    args.reserve(t.args().size());
    for (const auto& a : t.args()) args.push_back(term(a));
    auto it = m_.interp.funs.find(SymbolKey{t.id(), args.size()});
    if (it == m_.interp.funs.end()) return 0;
    return it->second.values[tuple_index(args, m_.size())];
  }

  bool formula(const Formula& p) {
    switch (p.kind()) {
      case FormulaKind::Falsity:
        return false;
      case FormulaKind::Truth:
        return true;
      case FormulaKind::Pre: {
        auto it = m_.interp.preds.find(SymbolKey{p.id(), p.args().size()});
        if (it == m_.interp.preds.end()) return false;
        std::vector<Element> args;
        args.reserve(p.args().size());
        for (const auto& a : p.args()) args.push_back(term(a));
        return it->second.values[tuple_index(args, m_.size())] != 0;
      }
      case FormulaKind::Con:
        return formula(p.left()) && formula(p.right());
      case FormulaKind::Dis:
        return formula(p.left()) || formula(p.right());
      case FormulaKind::Imp:
        return !formula(p.left()) || formula(p.right());
      case FormulaKind::Neg:
        return !formula(p.body());
      case FormulaKind::Uni:
        for (Element z = 0; z < m_.size(); ++z) {
          if (!quantified(p.body(), z)) return false;
        }
        return true;
      case FormulaKind::Exi:
        for (Element z = 0; z < m_.size(); ++z) {
          if (quantified(p.body(), z)) return true;
        }
        return false;
    }
    return false;
  }

 private:
  bool quantified(const Formula& body, Element z) {
    bound_.push_back(z);
    const bool r = formula(body);
    bound_.pop_back();
    return r;
  }

  const Model& m_;
  std::vector<Element> bound_;
};

}  // namespace detail

inline Element eval_term(const Model& m, const Term& t) { return detail::Evaluator(m).term(t); }

inline std::vector<Element> eval_list(const Model& m, const std::vector<Term>& l) {
  detail::Evaluator ev(m);
  std::vector<Element> out;
  out.reserve(l.size());
  for (const auto& t : l) out.push_back(ev.term(t));
  return out;
}

inline bool eval(const Model& m, const Formula& p) { return detail::Evaluator(m).formula(p); }

// ---------------------------------------------------------------------------
// Exhaustive finite validity check

struct EnumerationBudget {
  std::uint64_t max_models = 4'000'000;
};

enum class ValidityStatus { NoCountermodel, Countermodel, BudgetExhausted };

struct ValidityVerdict {
  ValidityStatus status = ValidityStatus::NoCountermodel;
  std::optional<Model> countermodel;
  std::uint64_t models_checked = 0;
};

namespace detail {

inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

}  // namespace detail

/// Searches all models over the signature of `p` with universe sizes
/// 1..max_size. Order: size ascending, then an odometer over the predicate
/// tables, function tables and free-variable environment (in that order, the
/// first predicate entry turning fastest).
inline ValidityVerdict valid_up_to(const Formula& p, std::size_t max_size, EnumerationBudget budget = {}) {
  if (max_size == 0) throw std::invalid_argument("valid_up_to: max_size must be at least 1");
  const std::set<Symbol> preds = predicate_symbols(p);
  const std::set<Symbol> funs = function_symbols(p);
  const std::set<std::size_t> free = free_indices(p);
  const std::size_t env_len = free.empty() ? 0 : *free.rbegin() + 1;

  ValidityVerdict verdict;
  for (std::size_t n = 1; n <= max_size; ++n) {
    Model m;
    m.universe.size = n;
    m.env = Environment(std::vector<Element>(env_len, 0), 0);

    // Each digit points at one mutable table cell of the model.
    struct Digit {
      char* pred = nullptr;
      Element* cell = nullptr;
      std::size_t radix = 2;
    };
    std::vector<Digit> digits;
    for (const auto& s : preds) m.preds_entry(s);
    for (const auto& s : funs) m.funs_entry(s);
    for (auto& [s, t] : m.interp.preds) {
      for (auto& v : t.values) digits.push_back({&v, nullptr, 2});
    }
    for (auto& [s, t] : m.interp.funs) {
      for (auto& v : t.values) digits.push_back({nullptr, &v, n});
    }
    for (std::size_t i : free) digits.push_back({nullptr, &m.env.table()[i], n});

    while (true) {
      if (verdict.models_checked >= budget.max_models) {
        verdict.status = ValidityStatus::BudgetExhausted;
        return verdict;
      }
      ++verdict.models_checked;
      if (!eval(m, p)) {
        verdict.status = ValidityStatus::Countermodel;
        verdict.countermodel = m;
        return verdict;
      }
      std::size_t d = 0;
      for (; d < digits.size(); ++d) {
        Digit& dg = digits[d];
        if (dg.pred) {
          if (*dg.pred == 0) {
            *dg.pred = 1;
            break;
          }
          *dg.pred = 0;
        } else {
          if (*dg.cell + 1 < dg.radix) {
            ++*dg.cell;
            break;
          }
          *dg.cell = 0;
        }
      }
      if (d == digits.size()) break;
    }
  }
  verdict.status = ValidityStatus::NoCountermodel;
  return verdict;
}

}  // namespace secav
