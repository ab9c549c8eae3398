// The one-sided sequent calculus: fifteen rules acting on the head of the
// succedent, applied backwards from a goal, and a checker for proof trees.
#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "secav/syntax.hpp"

namespace secav {

enum class RuleId {
  Basic,
  NegBot,
  TruthR,
  NegNeg,
  NegCon,
  DisR,
  ImpR,
  ConR,
  NegDis,
  NegImp,
  ExiR,
  NegUni,
  UniR,
  NegExi,
  ExtR,
};

inline constexpr std::array<RuleId, 15> kAllRules = {
    RuleId::Basic,  RuleId::NegBot, RuleId::TruthR, RuleId::NegNeg, RuleId::NegCon,
    RuleId::DisR,   RuleId::ImpR,   RuleId::ConR,   RuleId::NegDis, RuleId::NegImp,
    RuleId::ExiR,   RuleId::NegUni, RuleId::UniR,   RuleId::NegExi, RuleId::ExtR,
};

inline std::string_view rule_name(RuleId r) {
  switch (r) {
    case RuleId::Basic: return "Basic";
    case RuleId::NegBot: return "NegBot";
    case RuleId::TruthR: return "TruthR";
    case RuleId::NegNeg: return "NegNeg";
    case RuleId::NegCon: return "NegCon";
    case RuleId::DisR: return "DisR";
    case RuleId::ImpR: return "ImpR";
    case RuleId::ConR: return "ConR";
    case RuleId::NegDis: return "NegDis";
    case RuleId::NegImp: return "NegImp";
    case RuleId::ExiR: return "ExiR";
    case RuleId::NegUni: return "NegUni";
    case RuleId::UniR: return "UniR";
    case RuleId::NegExi: return "NegExi";
    case RuleId::ExtR: return "ExtR";
  }
  return "?";
}

inline std::optional<RuleId> rule_from_name(std::string_view name) {
  for (RuleId r : kAllRules) {
    if (rule_name(r) == name) return r;
  }
  return std::nullopt;
}

inline std::size_t premise_count(RuleId r) {
  switch (r) {
    case RuleId::Basic:
    case RuleId::NegBot:
    case RuleId::TruthR:
      return 0;
    case RuleId::ConR:
    case RuleId::NegDis:
    case RuleId::NegImp:
      return 2;
    default:
      return 1;
  }
}

inline bool needs_witness(RuleId r) { return r == RuleId::ExiR || r == RuleId::NegUni; }
inline bool needs_fresh(RuleId r) { return r == RuleId::UniR || r == RuleId::NegExi; }
inline bool needs_target(RuleId r) { return r == RuleId::ExtR; }

/// A rule together with its parameters: the instantiation term of ExiR and
/// NegUni, the new constant of UniR and NegExi, the premise of ExtR.
struct RuleApp {
  RuleId rule = RuleId::ExtR;
  std::optional<Term> witness;
  std::optional<std::string> fresh;
  std::optional<Sequent> target;

  static RuleApp plain(RuleId r) { return RuleApp{r, std::nullopt, std::nullopt, std::nullopt}; }
  static RuleApp with_witness(RuleId r, Term t) { return RuleApp{r, std::move(t), std::nullopt, std::nullopt}; }
  static RuleApp with_fresh(RuleId r, std::string id) { return RuleApp{r, std::nullopt, std::move(id), std::nullopt}; }
  static RuleApp extend(Sequent x) { return RuleApp{RuleId::ExtR, std::nullopt, std::nullopt, std::move(x)}; }

  friend bool operator==(const RuleApp&, const RuleApp&) = default;
};

/// Proof tree stored conclusion-down: each node names the rule applied to its
/// goal and holds one child per premise.
struct ProofTree {
  Sequent conclusion;
  RuleApp app;
  std::vector<ProofTree> children;

  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& c : children) n += c.size();
    return n;
  }

  friend bool operator==(const ProofTree&, const ProofTree&) = default;
};

enum class ErrorCode { Shape, Fresh, Ext, Param, ChildMismatch };

inline std::string_view error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::Shape: return "SHAPE";
    case ErrorCode::Fresh: return "FRESH";
    case ErrorCode::Ext: return "EXT";
    case ErrorCode::Param: return "PARAM";
    case ErrorCode::ChildMismatch: return "CHILD_MISMATCH";
  }
  return "?";
}

/// A rule application that does not fit its goal. `offender` is the formula
/// responsible, when there is one; `parameter` names the rule parameter
/// involved ("witness", "fresh", "target") or is empty.
class RuleError : public std::runtime_error {
 public:
  RuleError(ErrorCode code, std::string message, std::optional<Formula> offender = std::nullopt,
            std::string parameter = {})
      : std::runtime_error(std::move(message)),
        code_(code),
        offender_(std::move(offender)),
        parameter_(std::move(parameter)) {}

  ErrorCode code() const { return code_; }
  const std::optional<Formula>& offender() const { return offender_; }
  const std::string& parameter() const { return parameter_; }

 private:
  ErrorCode code_;
  std::optional<Formula> offender_;
  std::string parameter_;
};

namespace detail {

inline void check_params(const RuleApp& app) {
  const RuleId r = app.rule;
  const std::string name(rule_name(r));
  if (needs_witness(r) != app.witness.has_value()) {
    throw RuleError(ErrorCode::Param,
                    needs_witness(r) ? name + " requires a witness term" : name + " takes no witness term",
                    std::nullopt, "witness");
  }
  if (needs_fresh(r) != app.fresh.has_value()) {
    throw RuleError(ErrorCode::Param,
                    needs_fresh(r) ? name + " requires a fresh identifier" : name + " takes no fresh identifier",
                    std::nullopt, "fresh");
  }
  if (needs_target(r) != app.target.has_value()) {
    throw RuleError(ErrorCode::Param,
                    needs_target(r) ? name + " requires a target list" : name + " takes no target list",
                    std::nullopt, "target");
  }
  if (app.fresh && app.fresh->empty()) {
    throw RuleError(ErrorCode::Param, name + " requires a nonempty identifier", std::nullopt, "fresh");
  }
}

[[noreturn]] inline void shape_error(RuleId r, const Sequent& goal, std::string_view expected) {
  std::string msg = std::string(rule_name(r)) + " expects " + std::string(expected);
  if (goal.empty()) {
    throw RuleError(ErrorCode::Shape, msg + " but the goal is empty");
  }
  throw RuleError(ErrorCode::Shape, msg, goal.front());
}

inline Sequent cons(Formula p, const Sequent& x, std::size_t drop) {
  Sequent out;
  out.reserve(x.size() - drop + 1);
  out.push_back(std::move(p));
  out.insert(out.end(), x.begin() + static_cast<std::ptrdiff_t>(drop), x.end());
  return out;
}

inline Sequent cons2(Formula p, Formula q, const Sequent& x, std::size_t drop) {
  Sequent out;
  out.reserve(x.size() - drop + 2);
  out.push_back(std::move(p));
  out.push_back(std::move(q));
  out.insert(out.end(), x.begin() + static_cast<std::ptrdiff_t>(drop), x.end());
  return out;
}

inline bool head_is(const Sequent& goal, FormulaKind k) { return !goal.empty() && goal.front().is(k); }

inline bool head_is_neg(const Sequent& goal, FormulaKind k) {
  return head_is(goal, FormulaKind::Neg) && goal.front().body().is(k);
}

inline void require_news(RuleId r, const std::string& id, const Formula& p, const Sequent& goal) {
  // news i (p # x): the quantifier body and the rest of the goal.
  if (!new_formula(id, p)) {
    throw RuleError(ErrorCode::Fresh,
                    std::string(rule_name(r)) + ": identifier '" + id + "' occurs in the quantified formula",
                    p, "fresh");
  }
  for (std::size_t k = 1; k < goal.size(); ++k) {
    if (!new_formula(id, goal[k])) {
      throw RuleError(ErrorCode::Fresh, std::string(rule_name(r)) + ": identifier '" + id + "' occurs in the goal",
                      goal[k], "fresh");
    }
  }
}

}  // namespace detail

/// Computes the premises of applying `app` backwards to `goal`. Throws
/// RuleError when the goal has the wrong shape or a side condition fails.
inline std::vector<Sequent> premises_of(const RuleApp& app, const Sequent& goal) {
  using detail::cons;
  using detail::cons2;
  using detail::head_is;
  using detail::head_is_neg;
  detail::check_params(app);
  const RuleId r = app.rule;
  switch (r) {
    case RuleId::Basic: {
      if (!head_is(goal, FormulaKind::Pre)) detail::shape_error(r, goal, "a predicate followed by its negation");
      if (goal.size() < 2 || !(goal[1] == Formula::neg(goal[0]))) {
        if (goal.size() < 2) detail::shape_error(r, goal, "a predicate followed by its negation");
        throw RuleError(ErrorCode::Shape, "Basic expects the second formula to be the negation of the first",
                        goal[1]);
      }
      return {};
    }
    case RuleId::NegBot:
      if (!head_is_neg(goal, FormulaKind::Falsity)) detail::shape_error(r, goal, "a negated falsity");
      return {};
    case RuleId::TruthR:
      if (!head_is(goal, FormulaKind::Truth)) detail::shape_error(r, goal, "truth");
      return {};
    case RuleId::NegNeg:
      if (!head_is_neg(goal, FormulaKind::Neg)) detail::shape_error(r, goal, "a double negation");
      return {cons(goal[0].body().body(), goal, 1)};
    case RuleId::NegCon: {
      if (!head_is_neg(goal, FormulaKind::Con)) detail::shape_error(r, goal, "a negated conjunction");
      const Formula& c = goal[0].body();
      return {cons2(Formula::neg(c.left()), Formula::neg(c.right()), goal, 1)};
    }
    case RuleId::DisR: {
      if (!head_is(goal, FormulaKind::Dis)) detail::shape_error(r, goal, "a disjunction");
      return {cons2(goal[0].left(), goal[0].right(), goal, 1)};
    }
    case RuleId::ImpR: {
      if (!head_is(goal, FormulaKind::Imp)) detail::shape_error(r, goal, "an implication");
      return {cons2(Formula::neg(goal[0].left()), goal[0].right(), goal, 1)};
    }
    case RuleId::ConR: {
      if (!head_is(goal, FormulaKind::Con)) detail::shape_error(r, goal, "a conjunction");
      return {cons(goal[0].left(), goal, 1), cons(goal[0].right(), goal, 1)};
    }
    case RuleId::NegDis: {
      if (!head_is_neg(goal, FormulaKind::Dis)) detail::shape_error(r, goal, "a negated disjunction");
      const Formula& d = goal[0].body();
      return {cons(Formula::neg(d.left()), goal, 1), cons(Formula::neg(d.right()), goal, 1)};
    }
    case RuleId::NegImp: {
      if (!head_is_neg(goal, FormulaKind::Imp)) detail::shape_error(r, goal, "a negated implication");
      const Formula& i = goal[0].body();
      return {cons(i.left(), goal, 1), cons(Formula::neg(i.right()), goal, 1)};
    }
    case RuleId::ExiR:
      if (!head_is(goal, FormulaKind::Exi)) detail::shape_error(r, goal, "an existential");
      return {cons(sub(0, *app.witness, goal[0].body()), goal, 1)};
    case RuleId::NegUni:
      if (!head_is_neg(goal, FormulaKind::Uni)) detail::shape_error(r, goal, "a negated universal");
      return {cons(Formula::neg(sub(0, *app.witness, goal[0].body().body())), goal, 1)};
    case RuleId::UniR: {
      if (!head_is(goal, FormulaKind::Uni)) detail::shape_error(r, goal, "a universal");
      const Formula& p = goal[0].body();
      detail::require_news(r, *app.fresh, p, goal);
      return {cons(sub(0, Term::fun(*app.fresh), p), goal, 1)};
    }
    case RuleId::NegExi: {
      if (!head_is_neg(goal, FormulaKind::Exi)) detail::shape_error(r, goal, "a negated existential");
      const Formula& p = goal[0].body().body();
      detail::require_news(r, *app.fresh, p, goal);
      return {cons(Formula::neg(sub(0, Term::fun(*app.fresh), p)), goal, 1)};
    }
    case RuleId::ExtR:
      for (const auto& p : *app.target) {
        if (!member(p, goal)) {
          throw RuleError(ErrorCode::Ext, "ExtR: target formula is not a member of the goal", p, "target");
        }
      }
      return {*app.target};
  }
  throw std::logic_error("premises_of: unknown rule");
}

struct Verdict {
  bool accepted = true;
  std::vector<std::size_t> path;  // child indices from the root to the offending node
  std::optional<RuleError> error;

  static Verdict accept() { return {}; }
  static Verdict reject(std::vector<std::size_t> path, RuleError e) { return {false, std::move(path), std::move(e)}; }
};

namespace detail {

inline std::optional<Verdict> check_node(const ProofTree& pt, std::vector<std::size_t>& path) {
  std::vector<Sequent> premises;
  try {
    premises = premises_of(pt.app, pt.conclusion);
  } catch (const RuleError& e) {
    return Verdict::reject(path, e);
  }
  if (premises.size() != pt.children.size()) {
    return Verdict::reject(path, RuleError(ErrorCode::ChildMismatch,
                                           std::string(rule_name(pt.app.rule)) + " has " +
                                               std::to_string(premises.size()) + " premises but the node has " +
                                               std::to_string(pt.children.size()) + " children"));
  }
  for (std::size_t i = 0; i < premises.size(); ++i) {
    if (pt.children[i].conclusion != premises[i]) {
      std::optional<Formula> offender;
      const auto& got = pt.children[i].conclusion;
      for (std::size_t k = 0; k < std::max(got.size(), premises[i].size()); ++k) {
        if (k >= got.size() || k >= premises[i].size() || !(got[k] == premises[i][k])) {
          offender = k < got.size() ? std::optional<Formula>(got[k]) : std::optional<Formula>(premises[i][k]);
          break;
        }
      }
      return Verdict::reject(path, RuleError(ErrorCode::ChildMismatch,
                                             "child " + std::to_string(i) + " does not match the computed premise",
                                             offender));
    }
  }
  for (std::size_t i = 0; i < pt.children.size(); ++i) {
    path.push_back(i);
    if (auto v = check_node(pt.children[i], path)) return v;
    path.pop_back();
  }
  return std::nullopt;
}

}  // namespace detail

/// Accepts iff every node's children are exactly its computed premises.
/// Rejections report the first offending node in preorder.
inline Verdict check_proof(const ProofTree& pt) {
  std::vector<std::size_t> path;
  if (auto v = detail::check_node(pt, path)) return *v;
  return Verdict::accept();
}

/// Rule palette entry: the rule and which parameters the user must supply.
struct RuleTemplate {
  RuleId rule;
  bool witness = false;
  bool fresh = false;
  bool target = false;

  friend bool operator==(const RuleTemplate&, const RuleTemplate&) = default;
};

/// Rules whose shape matches the head of `goal`; ExtR is always offered.
/// Side conditions are not validated here.
inline std::vector<RuleTemplate> applicable_rules(const Sequent& goal) {
  std::vector<RuleId> ids;
  if (!goal.empty()) {
    const Formula& h = goal.front();
    switch (h.kind()) {
      case FormulaKind::Pre:
        if (goal.size() >= 2 && goal[1] == Formula::neg(h)) ids.push_back(RuleId::Basic);
        break;
      case FormulaKind::Truth: ids.push_back(RuleId::TruthR); break;
      case FormulaKind::Dis: ids.push_back(RuleId::DisR); break;
      case FormulaKind::Imp: ids.push_back(RuleId::ImpR); break;
      case FormulaKind::Con: ids.push_back(RuleId::ConR); break;
      case FormulaKind::Exi: ids.push_back(RuleId::ExiR); break;
      case FormulaKind::Uni: ids.push_back(RuleId::UniR); break;
      case FormulaKind::Neg:
        switch (h.body().kind()) {
          case FormulaKind::Falsity: ids.push_back(RuleId::NegBot); break;
          case FormulaKind::Neg: ids.push_back(RuleId::NegNeg); break;
          case FormulaKind::Con: ids.push_back(RuleId::NegCon); break;
          case FormulaKind::Dis: ids.push_back(RuleId::NegDis); break;
          case FormulaKind::Imp: ids.push_back(RuleId::NegImp); break;
          case FormulaKind::Uni: ids.push_back(RuleId::NegUni); break;
          case FormulaKind::Exi: ids.push_back(RuleId::NegExi); break;
          default: break;
        }
        break;
      default:
        break;
    }
  }
  ids.push_back(RuleId::ExtR);
  std::vector<RuleTemplate> out;
  for (RuleId r : ids) out.push_back({r, needs_witness(r), needs_fresh(r), needs_target(r)});
  return out;
}

}  // namespace secav
