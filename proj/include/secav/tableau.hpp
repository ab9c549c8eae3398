// Tableau calculus dual to the sequent calculus. A tableau branch holds the
// complements of a sequent's formulas; every sequent rule has a tableau rule
// of the same name acting on the complemented head, and a tableau is closed
// when every branch ends in one of the three leaf rules.
#pragma once

#include <stdexcept>
#include <vector>

#include "secav/calculus.hpp"

namespace secav {

/// Neg p becomes p, anything else p becomes Neg p.
inline Formula complement(const Formula& p) {
  if (p.is(FormulaKind::Neg)) return p.body();
  return Formula::neg(p);
}

inline Sequent complement_all(const Sequent& x) {
  Sequent out;
  out.reserve(x.size());
  for (const auto& p : x) out.push_back(complement(p));
  return out;
}

/// Right inverse of complement: complement(uncomplement(b)) == b for every b.
/// uncomplement(complement(p)) == p except that Neg (Neg r) with r not a
/// negation comes back as r.
inline Formula uncomplement(const Formula& b) {
  if (b.is(FormulaKind::Neg) && !b.body().is(FormulaKind::Neg)) return b.body();
  return Formula::neg(b);
}

inline Sequent uncomplement_all(const Sequent& x) {
  Sequent out;
  out.reserve(x.size());
  for (const auto& p : x) out.push_back(uncomplement(p));
  return out;
}

/// NegNeg normalization: the identity except Neg (Neg r) with r not a negation
/// becomes r.
inline Formula negneg_normalize(const Formula& p) { return uncomplement(complement(p)); }

struct TableauProof {
  Sequent branch;
  RuleApp app;
  std::vector<TableauProof> children;

  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& c : children) n += c.size();
    return n;
  }

  friend bool operator==(const TableauProof&, const TableauProof&) = default;
};

namespace detail {

inline bool branch_head_is(const Sequent& b, FormulaKind k) { return !b.empty() && b.front().is(k); }

inline bool branch_head_is_neg(const Sequent& b, FormulaKind k) {
  return branch_head_is(b, FormulaKind::Neg) && b.front().body().is(k);
}

[[noreturn]] inline void tableau_shape_error(RuleId r, const Sequent& b, std::string_view expected) {
  std::string msg = "tableau " + std::string(rule_name(r)) + " expects " + std::string(expected);
  if (b.empty()) throw RuleError(ErrorCode::Shape, msg + " but the branch is empty");
  throw RuleError(ErrorCode::Shape, msg, b.front());
}

}  // namespace detail

/// Branches produced by expanding the head of `branch` with the tableau dual
/// of `app`. An empty result means the branch closes.
inline std::vector<Sequent> tableau_premises(const RuleApp& app, const Sequent& branch) {
  using detail::branch_head_is;
  using detail::branch_head_is_neg;
  using detail::cons;
  using detail::cons2;
  detail::check_params(app);
  const RuleId r = app.rule;
  const Sequent& b = branch;
  switch (r) {
    case RuleId::Basic:
      if (!branch_head_is_neg(b, FormulaKind::Pre) || b.size() < 2 || !(b[1] == b[0].body())) {
        detail::tableau_shape_error(r, b, "a negated predicate followed by the predicate");
      }
      return {};
    case RuleId::NegBot:
      if (!branch_head_is(b, FormulaKind::Falsity)) detail::tableau_shape_error(r, b, "falsity");
      return {};
    case RuleId::TruthR:
      if (!branch_head_is_neg(b, FormulaKind::Truth)) detail::tableau_shape_error(r, b, "a negated truth");
      return {};
    case RuleId::NegNeg:
      if (!branch_head_is(b, FormulaKind::Neg)) detail::tableau_shape_error(r, b, "a negation");
      return {cons(complement(b[0].body()), b, 1)};
    case RuleId::NegCon:
      if (!branch_head_is(b, FormulaKind::Con)) detail::tableau_shape_error(r, b, "a conjunction");
      return {cons2(b[0].left(), b[0].right(), b, 1)};
    case RuleId::DisR:
      if (!branch_head_is_neg(b, FormulaKind::Dis)) detail::tableau_shape_error(r, b, "a negated disjunction");
      return {cons2(complement(b[0].body().left()), complement(b[0].body().right()), b, 1)};
    case RuleId::ImpR:
      if (!branch_head_is_neg(b, FormulaKind::Imp)) detail::tableau_shape_error(r, b, "a negated implication");
      return {cons2(b[0].body().left(), complement(b[0].body().right()), b, 1)};
    case RuleId::ConR:
      if (!branch_head_is_neg(b, FormulaKind::Con)) detail::tableau_shape_error(r, b, "a negated conjunction");
      return {cons(complement(b[0].body().left()), b, 1), cons(complement(b[0].body().right()), b, 1)};
    case RuleId::NegDis:
      if (!branch_head_is(b, FormulaKind::Dis)) detail::tableau_shape_error(r, b, "a disjunction");
      return {cons(b[0].left(), b, 1), cons(b[0].right(), b, 1)};
    case RuleId::NegImp:
      if (!branch_head_is(b, FormulaKind::Imp)) detail::tableau_shape_error(r, b, "an implication");
      return {cons(complement(b[0].left()), b, 1), cons(b[0].right(), b, 1)};
    case RuleId::ExiR:
      if (!branch_head_is_neg(b, FormulaKind::Exi)) detail::tableau_shape_error(r, b, "a negated existential");
      return {cons(complement(sub(0, *app.witness, b[0].body().body())), b, 1)};
    case RuleId::NegUni:
      if (!branch_head_is(b, FormulaKind::Uni)) detail::tableau_shape_error(r, b, "a universal");
      return {cons(sub(0, *app.witness, b[0].body()), b, 1)};
    case RuleId::UniR: {
      if (!branch_head_is_neg(b, FormulaKind::Uni)) detail::tableau_shape_error(r, b, "a negated universal");
      const Formula& p = b[0].body().body();
      detail::require_news(r, *app.fresh, p, b);
      return {cons(complement(sub(0, Term::fun(*app.fresh), p)), b, 1)};
    }
    case RuleId::NegExi: {
      if (!branch_head_is(b, FormulaKind::Exi)) detail::tableau_shape_error(r, b, "an existential");
      const Formula& p = b[0].body();
      detail::require_news(r, *app.fresh, p, b);
      return {cons(sub(0, Term::fun(*app.fresh), p), b, 1)};
    }
    case RuleId::ExtR:
      for (const auto& p : *app.target) {
        if (!member(p, b)) {
          throw RuleError(ErrorCode::Ext, "tableau ExtR: target formula is not on the branch", p, "target");
        }
      }
      return {*app.target};
  }
  throw std::logic_error("tableau_premises: unknown rule");
}

namespace detail {

inline std::optional<Verdict> check_tableau_node(const TableauProof& tp, std::vector<std::size_t>& path) {
  std::vector<Sequent> branches;
  try {
    branches = tableau_premises(tp.app, tp.branch);
  } catch (const RuleError& e) {
    return Verdict::reject(path, e);
  }
  if (branches.size() != tp.children.size()) {
    return Verdict::reject(path, RuleError(ErrorCode::ChildMismatch,
                                           "tableau " + std::string(rule_name(tp.app.rule)) + " yields " +
                                               std::to_string(branches.size()) + " branches but the node has " +
                                               std::to_string(tp.children.size()) + " children"));
  }
  for (std::size_t i = 0; i < branches.size(); ++i) {
    if (tp.children[i].branch != branches[i]) {
      return Verdict::reject(
          path, RuleError(ErrorCode::ChildMismatch, "child " + std::to_string(i) + " does not match the expansion"));
    }
  }
  for (std::size_t i = 0; i < tp.children.size(); ++i) {
    path.push_back(i);
    if (auto v = check_tableau_node(tp.children[i], path)) return v;
    path.pop_back();
  }
  return std::nullopt;
}

inline TableauProof to_tableau_unchecked(const ProofTree& pt) {
  TableauProof tp{complement_all(pt.conclusion), pt.app, {}};
  tp.children.reserve(pt.children.size());
  for (const auto& c : pt.children) tp.children.push_back(to_tableau_unchecked(c));
  if (tp.app.target) tp.app.target = complement_all(*tp.app.target);
  return tp;
}

// Proof of `want` from a proof of `have`, where the two differ only in that
// some positions of `want` hold Neg (Neg r) and `have` holds r there. Each
// such position is rotated to the head with ExtR, unwrapped with NegNeg and
// rotated back.
inline ProofTree restore_double_negations(const Sequent& want, ProofTree have) {
  if (want == have.conclusion) return have;
  std::size_t k = 0;
  while (want[k] == have.conclusion[k]) ++k;
  // want[k] is Neg (Neg r) where have holds r.
  Sequent fixed = want;
  fixed[k] = have.conclusion[k];
  ProofTree inner = restore_double_negations(fixed, std::move(have));
  if (k == 0) {
    ProofTree nn{want, RuleApp::plain(RuleId::NegNeg), {}};
    nn.children.push_back(std::move(inner));
    return nn;
  }
  Sequent rotated{want[k]};
  for (std::size_t j = 0; j < want.size(); ++j) {
    if (j != k) rotated.push_back(want[j]);
  }
  Sequent unwrapped = rotated;
  unwrapped[0] = fixed[k];

  ProofTree back{unwrapped, RuleApp::extend(fixed), {}};
  back.children.push_back(std::move(inner));
  ProofTree nn{rotated, RuleApp::plain(RuleId::NegNeg), {}};
  nn.children.push_back(std::move(back));
  ProofTree front{want, RuleApp::extend(rotated), {}};
  front.children.push_back(std::move(nn));
  return front;
}

inline ProofTree from_tableau_unchecked(const TableauProof& tp) {
  const Sequent conclusion = uncomplement_all(tp.branch);
  const RuleId r = tp.app.rule;

  // NegNeg on a head Neg p with p not a negation leaves the branch unchanged.
  if (r == RuleId::NegNeg && !tp.branch.front().body().is(FormulaKind::Neg)) {
    return from_tableau_unchecked(tp.children.front());
  }

  RuleApp app = tp.app;
  if (app.target) app.target = uncomplement_all(*app.target);

  // The sequent head the tableau head was complemented from.
  Sequent goal = conclusion;
  if (r == RuleId::NegNeg) goal[0] = Formula::neg(Formula::neg(tp.branch.front().body()));

  const std::vector<Sequent> premises = premises_of(app, goal);
  ProofTree pt{goal, app, {}};
  for (std::size_t i = 0; i < premises.size(); ++i) {
    pt.children.push_back(restore_double_negations(premises[i], from_tableau_unchecked(tp.children[i])));
  }
  return pt;
}

}  // namespace detail

/// Mirror of check_proof over the tableau rules.
inline Verdict check_tableau(const TableauProof& tp) {
  std::vector<std::size_t> path;
  if (auto v = detail::check_tableau_node(tp, path)) return *v;
  return Verdict::accept();
}

class TranslationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Closed tableau for the complemented conclusion of an accepted proof.
inline TableauProof to_tableau(const ProofTree& pt) {
  if (!check_proof(pt).accepted) throw TranslationError("to_tableau: input proof is not accepted");
  return detail::to_tableau_unchecked(pt);
}

/// Sequent proof of uncomplement_all(tp.branch) from a closed tableau. For a
/// tableau produced by to_tableau the conclusion is the original one up to
/// NegNeg normalization of each formula.
inline ProofTree from_tableau(const TableauProof& tp) {
  if (!check_tableau(tp).accepted) throw TranslationError("from_tableau: input tableau is not closed");
  return detail::from_tableau_unchecked(tp);
}

}  // namespace secav
