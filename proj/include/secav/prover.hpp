// Bounded proof search in the sequent calculus with a finite countermodel
// search as fallback.
//
// The search never backtracks: every rule it uses is invertible, so a branch
// that saturates without closing means no proof exists within the witness
// stock. Quantifier instances come from a stock of ground terms; a universal
// being refuted (or existential being proved) is kept at the back of the
// sequent after each instance so that every such formula gets its turn.
#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "secav/calculus.hpp"
#include "secav/semantics.hpp"
#include "secav/syntax.hpp"

namespace secav {

inline constexpr const char* kDefaultConstant = "_c";
inline constexpr const char* kFreshPrefix = "_e";

namespace detail {

inline std::size_t term_depth(const Term& t) {
  if (t.is_var()) return 0;
  std::size_t d = 0;
  for (const auto& a : t.args()) d = std::max(d, term_depth(a));
  return d + 1;
}

}  // namespace detail

/// Ground terms over the function symbols in `signature` of depth at most
/// `depth` (a constant has depth 1). Ordered by depth, then identifier, then
/// argument tuple. A default constant is added when no nullary symbol exists.
inline std::vector<Term> herbrand_terms(std::set<Symbol> signature, std::size_t depth) {
  bool has_constant = false;
  for (const auto& s : signature) has_constant = has_constant || s.arity == 0;
  if (!has_constant) signature.insert(Symbol{kDefaultConstant, 0});

  std::vector<Term> out;
  std::vector<std::size_t> level_end;  // out[0, level_end[d-1]) holds depths <= d
  for (std::size_t d = 1; d <= depth; ++d) {
    const std::size_t below = d == 1 ? 0 : level_end[d - 2];
    const std::size_t below_prev = d <= 2 ? 0 : level_end[d - 3];
    for (const auto& s : signature) {
      if (d == 1) {
        if (s.arity == 0) out.push_back(Term::fun(s.id));
        continue;
      }
      if (s.arity == 0 || below == 0) continue;
      // Tuples over out[0, below) with at least one argument of depth d-1,
      // first argument most significant.
      std::vector<std::size_t> idx(s.arity, 0);
      while (true) {
        bool deep = false;
        for (auto i : idx) deep = deep || i >= below_prev;
        if (deep) {
          std::vector<Term> args;
          args.reserve(s.arity);
          for (auto i : idx) args.push_back(out[i]);
          out.push_back(Term::fun(s.id, std::move(args)));
        }
        std::size_t k = s.arity;
        while (k > 0 && ++idx[k - 1] == below) idx[--k] = 0;
        if (k == 0) break;
      }
    }
    level_end.push_back(out.size());
  }
  return out;
}

struct SearchLimits {
  std::size_t max_depth = 256;       // rule applications along one branch
  std::size_t max_term_depth = 2;    // depth of quantifier instances
  std::uint64_t steps = 50000;       // rule applications in total
  std::size_t max_model_size = 3;    // largest universe tried for countermodels

  void validate() const {
    if (max_depth == 0 || max_term_depth == 0 || steps == 0 || max_model_size == 0) {
      throw std::invalid_argument("search limits must be positive");
    }
  }
};

class ProverInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ProveOutcome {
  enum class Kind { Proof, Refuted, Exhausted };
  Kind kind = Kind::Exhausted;
  std::optional<ProofTree> proof;
  std::optional<Model> model;
  std::uint64_t steps = 0;
  std::string reason;  // which limit stopped an exhausted search
};

inline std::string_view outcome_name(ProveOutcome::Kind k) {
  switch (k) {
    case ProveOutcome::Kind::Proof: return "proof";
    case ProveOutcome::Kind::Refuted: return "refuted";
    case ProveOutcome::Kind::Exhausted: return "exhausted";
  }
  return "?";
}

/// Disjunction of a sequent's formulas, falsity for the empty sequent.
inline Formula sequent_formula(const Sequent& x) {
  if (x.empty()) return Formula::falsity();
  Formula f = x.back();
  for (std::size_t i = x.size() - 1; i-- > 0;) f = Formula::dis(x[i], f);
  return f;
}

/// First countermodel of size at most `max_size` in enumeration order.
inline std::optional<Model> find_countermodel(const Formula& p, std::size_t max_size,
                                              EnumerationBudget budget = {}) {
  ValidityVerdict v = valid_up_to(p, max_size, budget);
  if (v.status == ValidityStatus::Countermodel) return v.countermodel;
  return std::nullopt;
}

namespace detail {

class Search {
 public:
  explicit Search(const SearchLimits& limits) : limits_(limits) {}

  enum class Status { Closed, Open, OutOfSteps, TooDeep };

  struct Result {
    Status status;
    std::optional<ProofTree> tree;
  };

  using Used = std::vector<std::pair<Formula, std::vector<Term>>>;

  Result run(const Sequent& goal) { return expand(goal, 0, {}); }

  std::uint64_t steps() const { return steps_; }

 private:
  static bool is_alpha(const Formula& f) {
    switch (f.kind()) {
      case FormulaKind::Dis:
      case FormulaKind::Imp:
        return true;
      case FormulaKind::Neg:
        return f.body().is(FormulaKind::Neg) || f.body().is(FormulaKind::Con);
      default:
        return false;
    }
  }

  static bool is_delta(const Formula& f) {
    return f.is(FormulaKind::Uni) || (f.is(FormulaKind::Neg) && f.body().is(FormulaKind::Exi));
  }

  static bool is_beta(const Formula& f) {
    if (f.is(FormulaKind::Con)) return true;
    return f.is(FormulaKind::Neg) && (f.body().is(FormulaKind::Dis) || f.body().is(FormulaKind::Imp));
  }

  static bool is_gamma(const Formula& f) {
    return f.is(FormulaKind::Exi) || (f.is(FormulaKind::Neg) && f.body().is(FormulaKind::Uni));
  }

  static RuleId rule_for(const Formula& f) {
    switch (f.kind()) {
      case FormulaKind::Dis: return RuleId::DisR;
      case FormulaKind::Imp: return RuleId::ImpR;
      case FormulaKind::Con: return RuleId::ConR;
      case FormulaKind::Uni: return RuleId::UniR;
      case FormulaKind::Exi: return RuleId::ExiR;
      default: break;
    }
    switch (f.body().kind()) {
      case FormulaKind::Neg: return RuleId::NegNeg;
      case FormulaKind::Con: return RuleId::NegCon;
      case FormulaKind::Dis: return RuleId::NegDis;
      case FormulaKind::Imp: return RuleId::NegImp;
      case FormulaKind::Uni: return RuleId::NegUni;
      case FormulaKind::Exi: return RuleId::NegExi;
      default: break;
    }
    throw std::logic_error("prover: no rule for formula");
  }

  // Wraps `child` under an ExtR node so that `target` follows from `goal`.
  static ProofTree extend_node(const Sequent& goal, ProofTree child) {
    ProofTree n{goal, RuleApp::extend(child.conclusion), {}};
    n.children.push_back(std::move(child));
    return n;
  }

  static Sequent rotate(const Sequent& goal, std::size_t i) {
    Sequent out{goal[i]};
    for (std::size_t j = 0; j < goal.size(); ++j) {
      if (j != i) out.push_back(goal[j]);
    }
    return out;
  }

  bool charge(std::size_t depth, Status& why) {
    if (steps_ >= limits_.steps) {
      why = Status::OutOfSteps;
      return false;
    }
    if (depth >= limits_.max_depth) {
      why = Status::TooDeep;
      return false;
    }
    ++steps_;
    return true;
  }

  std::optional<Sequent> closing_target(const Sequent& goal) const {
    for (const auto& f : goal) {
      if (f.is(FormulaKind::Truth)) return Sequent{f};
      if (f.is(FormulaKind::Neg) && f.body().is(FormulaKind::Falsity)) return Sequent{f};
    }
    for (const auto& f : goal) {
      if (f.is(FormulaKind::Pre) && member(Formula::neg(f), goal)) return Sequent{f, Formula::neg(f)};
    }
    return std::nullopt;
  }

  static RuleId closing_rule(const Formula& head) {
    if (head.is(FormulaKind::Truth)) return RuleId::TruthR;
    if (head.is(FormulaKind::Pre)) return RuleId::Basic;
    return RuleId::NegBot;
  }

  // Applies `app` to the head of `goal` (moved there first with ExtR when
  // `at` is nonzero) and expands the premises.
  Result apply_at(const Sequent& goal, std::size_t at, const RuleApp& app, std::size_t depth, const Used& used,
                  const std::optional<Sequent>& arranged = std::nullopt) {
    Status why{};
    Sequent head_goal = arranged ? *arranged : (at == 0 ? goal : rotate(goal, at));
    const bool moved = head_goal != goal;
    if (moved && !charge(depth++, why)) return {why, std::nullopt};
    if (!charge(depth, why)) return {why, std::nullopt};
    const std::vector<Sequent> premises = premises_of(app, head_goal);
    ProofTree node{head_goal, app, {}};
    for (const auto& prem : premises) {
      Result r = expand(prem, depth + 1, used);
      if (r.status != Status::Closed) return r;
      node.children.push_back(std::move(*r.tree));
    }
    if (moved) return {Status::Closed, extend_node(goal, std::move(node))};
    return {Status::Closed, std::move(node)};
  }

  std::string fresh_identifier(const Sequent& goal) {
    while (true) {
      std::string id = kFreshPrefix + std::to_string(fresh_counter_++);
      if (news(id, goal)) return id;
    }
  }

  Result expand(const Sequent& goal, std::size_t depth, Used used) {
    if (auto target = closing_target(goal)) {
      const RuleApp leaf = RuleApp::plain(closing_rule(target->front()));
      const bool direct = target->size() == 1 ? goal.front() == target->front()
                                              : goal.size() >= 2 && goal[0] == (*target)[0] && goal[1] == (*target)[1];
      return apply_at(goal, 0, leaf, depth, used, direct ? std::nullopt : target);
    }
    for (std::size_t i = 0; i < goal.size(); ++i) {
      if (is_alpha(goal[i])) return apply_at(goal, i, RuleApp::plain(rule_for(goal[i])), depth, used);
    }
    for (std::size_t i = 0; i < goal.size(); ++i) {
      if (is_delta(goal[i])) {
        const Formula& f = goal[i];
        return apply_at(goal, i, RuleApp::with_fresh(rule_for(f), fresh_identifier(goal)), depth, used);
      }
    }
    for (std::size_t i = 0; i < goal.size(); ++i) {
      if (is_beta(goal[i])) return apply_at(goal, i, RuleApp::plain(rule_for(goal[i])), depth, used);
    }
    std::vector<Term> stock;
    bool have_stock = false;
    for (std::size_t i = 0; i < goal.size(); ++i) {
      const Formula& g = goal[i];
      if (!is_gamma(g)) continue;
      if (!have_stock) {
        stock = herbrand_terms(function_symbols(goal), limits_.max_term_depth);
        have_stock = true;
      }
      auto rec = used.begin();
      while (rec != used.end() && !(rec->first == g)) ++rec;
      if (rec == used.end()) rec = used.insert(used.end(), {g, {}});
      std::optional<Term> witness;
      for (const auto& t : stock) {
        bool seen = false;
        for (const auto& u : rec->second) seen = seen || u == t;
        if (!seen) {
          witness = t;
          break;
        }
      }
      if (!witness) continue;
      rec->second.push_back(*witness);
      Sequent arranged = rotate(goal, i);
      arranged.push_back(g);
      return apply_at(goal, i, RuleApp::with_witness(rule_for(g), *witness), depth, used, arranged);
    }
    return {Status::Open, std::nullopt};
  }

  SearchLimits limits_;
  std::uint64_t steps_ = 0;
  std::size_t fresh_counter_ = 0;
};

}  // namespace detail

/// Searches for a proof of the sequent `goal`, falling back to a countermodel
/// of the disjunction of its formulas.
inline ProveOutcome prove_sequent(const Sequent& goal, const SearchLimits& limits = {}) {
  limits.validate();
  for (const auto& f : goal) {
    if (!is_closed(f)) throw ProverInputError("prove: the input has free variables");
  }
  const Formula whole = sequent_formula(goal);
  ProveOutcome out;

  auto refuted = [&](Model m) {
    if (eval(m, whole)) throw std::logic_error("prove: countermodel does not falsify the input");
    out.kind = ProveOutcome::Kind::Refuted;
    out.model = std::move(m);
    return out;
  };

  if (!has_quantifier(whole)) {
    if (auto m = find_countermodel(whole, limits.max_model_size, EnumerationBudget{200'000})) return refuted(*m);
  }

  detail::Search search(limits);
  detail::Search::Result r = search.run(goal);
  out.steps = search.steps();
  if (r.status == detail::Search::Status::Closed) {
    if (!check_proof(*r.tree).accepted) throw std::logic_error("prove: search produced a rejected proof");
    out.kind = ProveOutcome::Kind::Proof;
    out.proof = std::move(r.tree);
    return out;
  }
  if (auto m = find_countermodel(whole, limits.max_model_size)) return refuted(*m);
  out.kind = ProveOutcome::Kind::Exhausted;
  switch (r.status) {
    case detail::Search::Status::OutOfSteps: out.reason = "step budget exhausted"; break;
    case detail::Search::Status::TooDeep: out.reason = "branch depth limit reached"; break;
    default: out.reason = "witness terms exhausted without closing a branch"; break;
  }
  return out;
}

inline ProveOutcome prove(const Formula& p, const SearchLimits& limits = {}) { return prove_sequent({p}, limits); }

}  // namespace secav
