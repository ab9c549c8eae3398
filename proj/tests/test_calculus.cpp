#include <gtest/gtest.h>

#include <algorithm>

#include "support.hpp"

using namespace secav;
using secav::testing::P;
using secav::testing::Q;

namespace {

Formula N(Formula p) { return Formula::neg(std::move(p)); }

ProofTree leaf(Sequent goal, RuleId r) { return ProofTree{std::move(goal), RuleApp::plain(r), {}}; }

ProofTree node(Sequent goal, RuleApp app, std::vector<ProofTree> children) {
  return ProofTree{std::move(goal), std::move(app), std::move(children)};
}

// ImpR, ExtR [p, ~p], Basic.
ProofTree imp_p_p() {
  return node({Formula::imp(P(), P())}, RuleApp::plain(RuleId::ImpR),
              {node({N(P()), P()}, RuleApp::extend({P(), N(P())}), {leaf({P(), N(P())}, RuleId::Basic)})});
}

void collect_fresh_nodes(ProofTree& pt, std::vector<ProofTree*>& out) {
  if (pt.app.fresh) out.push_back(&pt);
  for (auto& c : pt.children) collect_fresh_nodes(c, out);
}

ErrorCode error_of(const RuleApp& app, const Sequent& goal) {
  try {
    premises_of(app, goal);
  } catch (const RuleError& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected a RuleError";
  return ErrorCode::Shape;
}

}  // namespace

TEST(Rules, PremiseCounts) {
  for (RuleId r : kAllRules) {
    const std::size_t n = premise_count(r);
    if (r == RuleId::ConR || r == RuleId::NegDis || r == RuleId::NegImp) {
      EXPECT_EQ(n, 2u);
    } else if (r == RuleId::Basic || r == RuleId::NegBot || r == RuleId::TruthR) {
      EXPECT_EQ(n, 0u);
    } else {
      EXPECT_EQ(n, 1u);
    }
    EXPECT_EQ(rule_from_name(rule_name(r)), r);
  }
  EXPECT_FALSE(rule_from_name("Cut").has_value());
}

TEST(Premises, Examples) {
  EXPECT_EQ(premises_of(RuleApp::plain(RuleId::ImpR), {Formula::imp(P(), P())}),
            (std::vector<Sequent>{{N(P()), P()}}));
  EXPECT_EQ(premises_of(RuleApp::extend({P(), N(P())}), {N(P()), P()}), (std::vector<Sequent>{{P(), N(P())}}));
  EXPECT_TRUE(premises_of(RuleApp::plain(RuleId::Basic), {P(), N(P())}).empty());
}

TEST(Premises, EachRuleOnItsShape) {
  const Formula x = Formula::truth();
  const Term a = Term::fun("a");
  const Formula px = Formula::pre("p", {Term::var(0)});
  const Formula pa = Formula::pre("p", {a});
  auto one = [](Sequent s) { return std::vector<Sequent>{std::move(s)}; };
  EXPECT_TRUE(premises_of(RuleApp::plain(RuleId::NegBot), {N(Formula::falsity())}).empty());
  EXPECT_TRUE(premises_of(RuleApp::plain(RuleId::TruthR), {x}).empty());
  EXPECT_EQ(premises_of(RuleApp::plain(RuleId::NegNeg), {N(N(P())), x}), one({P(), x}));
  EXPECT_EQ(premises_of(RuleApp::plain(RuleId::NegCon), {N(Formula::con(P(), Q())), x}), one({N(P()), N(Q()), x}));
  EXPECT_EQ(premises_of(RuleApp::plain(RuleId::DisR), {Formula::dis(P(), Q()), x}), one({P(), Q(), x}));
  EXPECT_EQ(premises_of(RuleApp::plain(RuleId::ConR), {Formula::con(P(), Q()), x}),
            (std::vector<Sequent>{{P(), x}, {Q(), x}}));
  EXPECT_EQ(premises_of(RuleApp::plain(RuleId::NegDis), {N(Formula::dis(P(), Q())), x}),
            (std::vector<Sequent>{{N(P()), x}, {N(Q()), x}}));
  EXPECT_EQ(premises_of(RuleApp::plain(RuleId::NegImp), {N(Formula::imp(P(), Q())), x}),
            (std::vector<Sequent>{{P(), x}, {N(Q()), x}}));
  EXPECT_EQ(premises_of(RuleApp::with_witness(RuleId::ExiR, a), {Formula::exi(px)}), one({pa}));
  EXPECT_EQ(premises_of(RuleApp::with_witness(RuleId::NegUni, a), {N(Formula::uni(px))}), one({N(pa)}));
  EXPECT_EQ(premises_of(RuleApp::with_fresh(RuleId::UniR, "a"), {Formula::uni(px)}), one({pa}));
  EXPECT_EQ(premises_of(RuleApp::with_fresh(RuleId::NegExi, "a"), {N(Formula::exi(px))}), one({N(pa)}));
}

TEST(Premises, FreshnessViolationNamesTheFormula) {
  const Formula body = Formula::pre("p", {Term::var(0), Term::fun("a")});
  try {
    premises_of(RuleApp::with_fresh(RuleId::UniR, "a"), {Formula::uni(body)});
    FAIL() << "expected a freshness violation";
  } catch (const RuleError& e) {
    EXPECT_EQ(e.code(), ErrorCode::Fresh);
    ASSERT_TRUE(e.offender().has_value());
    EXPECT_EQ(*e.offender(), body);
  }
  // The identifier may also be blocked by the rest of the sequent.
  EXPECT_EQ(error_of(RuleApp::with_fresh(RuleId::NegExi, "b"),
                     {N(Formula::exi(Formula::pre("p", {Term::var(0)}))), Formula::pre("q", {Term::fun("b")})}),
            ErrorCode::Fresh);
}

TEST(Premises, ErrorCodes) {
  EXPECT_EQ(error_of(RuleApp::plain(RuleId::TruthR), {P()}), ErrorCode::Shape);
  EXPECT_EQ(error_of(RuleApp::plain(RuleId::Basic), {P(), N(Q())}), ErrorCode::Shape);
  EXPECT_EQ(error_of(RuleApp::plain(RuleId::ImpR), {}), ErrorCode::Shape);
  EXPECT_EQ(error_of(RuleApp::extend({Q()}), {P()}), ErrorCode::Ext);
  EXPECT_EQ(error_of(RuleApp::plain(RuleId::ExiR), {Formula::exi(P())}), ErrorCode::Param);
  EXPECT_EQ(error_of(RuleApp{RuleId::ImpR, Term::fun("a"), std::nullopt, std::nullopt}, {Formula::imp(P(), P())}),
            ErrorCode::Param);
  EXPECT_EQ(error_of(RuleApp{RuleId::ExtR, std::nullopt, std::nullopt, std::nullopt}, {P()}), ErrorCode::Param);
}

TEST(Premises, ExtensionOffenderIsTheMissingFormula) {
  try {
    premises_of(RuleApp::extend({P(), Q()}), {P()});
    FAIL();
  } catch (const RuleError& e) {
    EXPECT_EQ(e.code(), ErrorCode::Ext);
    EXPECT_EQ(*e.offender(), Q());
    EXPECT_EQ(e.parameter(), "target");
  }
}

TEST(Premises, ExtRAllowsEmptyGoalAndWeakening) {
  EXPECT_EQ(premises_of(RuleApp::extend({}), {}), (std::vector<Sequent>{{}}));
  EXPECT_EQ(premises_of(RuleApp::extend({P(), P()}), {Q(), P()}), (std::vector<Sequent>{{P(), P()}}));
}

TEST(CheckProof, AcceptsImpPP) {
  const ProofTree pt = imp_p_p();
  EXPECT_TRUE(check_proof(pt).accepted);
  EXPECT_EQ(pt.size(), 3u);
}

TEST(CheckProof, RejectsWrongLeafRule) {
  ProofTree pt = imp_p_p();
  pt.children[0].children[0].app = RuleApp::plain(RuleId::TruthR);
  const Verdict v = check_proof(pt);
  EXPECT_FALSE(v.accepted);
  EXPECT_EQ(v.path, (std::vector<std::size_t>{0, 0}));
  EXPECT_EQ(v.error->code(), ErrorCode::Shape);
}

TEST(CheckProof, RejectsStaleFreshIdentifier) {
  const Formula body = Formula::dis(Formula::pre("p", {Term::var(0)}), N(Formula::pre("p", {Term::var(0)})));
  ProofTree ok = node({Formula::uni(body)}, RuleApp::with_fresh(RuleId::UniR, "c"),
                      {node({sub(0, Term::fun("c"), body)}, RuleApp::plain(RuleId::DisR),
                            {leaf({Formula::pre("p", {Term::fun("c")}), N(Formula::pre("p", {Term::fun("c")}))},
                                  RuleId::Basic)})});
  EXPECT_TRUE(check_proof(ok).accepted);

  const Formula with_a = Formula::dis(Formula::pre("p", {Term::var(0)}), Formula::pre("q", {Term::fun("a")}));
  ProofTree bad = node({Formula::uni(with_a)}, RuleApp::with_fresh(RuleId::UniR, "a"),
                       {leaf({sub(0, Term::fun("a"), with_a)}, RuleId::DisR)});
  const Verdict v = check_proof(bad);
  EXPECT_FALSE(v.accepted);
  EXPECT_TRUE(v.path.empty());
  EXPECT_EQ(v.error->code(), ErrorCode::Fresh);
}

TEST(CheckProof, ReportsChildMismatch) {
  ProofTree pt = imp_p_p();
  pt.children[0].conclusion = {P(), N(P())};
  Verdict v = check_proof(pt);
  EXPECT_FALSE(v.accepted);
  EXPECT_EQ(v.error->code(), ErrorCode::ChildMismatch);
  EXPECT_TRUE(v.path.empty());

  pt = imp_p_p();
  pt.children.push_back(pt.children[0]);
  v = check_proof(pt);
  EXPECT_EQ(v.error->code(), ErrorCode::ChildMismatch);
}

TEST(CheckProof, FirstOffenderInPreorder) {
  // ConR with both children broken: the left one is reported.
  const Formula c = Formula::con(Formula::truth(), Formula::truth());
  ProofTree pt = node({c}, RuleApp::plain(RuleId::ConR),
                      {leaf({Formula::truth()}, RuleId::NegBot), leaf({Formula::truth()}, RuleId::Basic)});
  const Verdict v = check_proof(pt);
  EXPECT_EQ(v.path, (std::vector<std::size_t>{0}));
}

TEST(CheckProof, PermutationClosure) {
  for (const auto& src : secav::testing::full_corpus()) {
    const auto out = prove(parse_formula(src));
    ASSERT_EQ(out.kind, ProveOutcome::Kind::Proof) << src;
    const Sequent x = out.proof->conclusion;
    Sequent y = x;
    y.push_back(x.front());
    std::reverse(y.begin(), y.end());
    ProofTree wrapped{y, RuleApp::extend(x), {*out.proof}};
    EXPECT_TRUE(check_proof(wrapped).accepted) << src;
  }
}

TEST(CheckProof, FreshnessIsReal) {
  for (const auto& src : secav::testing::full_corpus()) {
    auto out = prove(parse_formula(src));
    ASSERT_TRUE(out.proof);
    std::vector<ProofTree*> nodes;
    collect_fresh_nodes(*out.proof, nodes);
    for (ProofTree* n : nodes) {
      const std::string original = *n->app.fresh;
      const auto ids = function_symbols(n->conclusion);
      for (const auto& s : ids) {
        n->app.fresh = s.id;
        EXPECT_FALSE(check_proof(*out.proof).accepted) << src << " with " << s.id;
      }
      n->app.fresh = original;
    }
    EXPECT_TRUE(check_proof(*out.proof).accepted);
  }
}

TEST(CheckProof, AcceptedProofsHaveNoSmallCountermodel) {
  for (const auto& src : secav::testing::full_corpus()) {
    const auto out = prove(parse_formula(src));
    ASSERT_TRUE(out.proof);
    ASSERT_TRUE(check_proof(*out.proof).accepted);
    EXPECT_EQ(valid_up_to(out.proof->conclusion.front(), 2).status, ValidityStatus::NoCountermodel) << src;
  }
}

TEST(Applicable, Examples) {
  auto names = [](const Sequent& g) {
    std::vector<RuleId> out;
    for (const auto& t : applicable_rules(g)) out.push_back(t.rule);
    return out;
  };
  EXPECT_EQ(names({Formula::imp(P(), Q())}), (std::vector<RuleId>{RuleId::ImpR, RuleId::ExtR}));
  EXPECT_EQ(names({}), (std::vector<RuleId>{RuleId::ExtR}));
  const auto exi = applicable_rules({Formula::exi(P())});
  ASSERT_EQ(exi.front().rule, RuleId::ExiR);
  EXPECT_TRUE(exi.front().witness);
  EXPECT_TRUE(applicable_rules({}).front().target);
  EXPECT_EQ(names({P(), N(P())}), (std::vector<RuleId>{RuleId::Basic, RuleId::ExtR}));
  EXPECT_EQ(names({P(), P()}), (std::vector<RuleId>{RuleId::ExtR}));
}

TEST(Applicable, OfferedRulesAcceptTheirShape) {
  const Term a = Term::fun("zz");
  const Formula px = Formula::pre("p", {Term::var(0)});
  const std::vector<Formula> heads = {
      Formula::truth(), N(Formula::falsity()), N(N(P())), N(Formula::con(P(), Q())), Formula::dis(P(), Q()),
      Formula::imp(P(), Q()), Formula::con(P(), Q()), N(Formula::dis(P(), Q())), N(Formula::imp(P(), Q())),
      Formula::exi(px), N(Formula::uni(px)), Formula::uni(px), N(Formula::exi(px))};
  for (const auto& h : heads) {
    for (const auto& t : applicable_rules({h})) {
      if (t.rule == RuleId::ExtR) continue;
      RuleApp app = RuleApp::plain(t.rule);
      if (t.witness) app.witness = a;
      if (t.fresh) app.fresh = "zz";
      EXPECT_NO_THROW(premises_of(app, {h})) << rule_name(t.rule);
    }
  }
}
