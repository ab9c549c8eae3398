// Batch front end: check, prove, refute, eval, apply.
//
// Exit status: 0 accepted/proved/true, 1 rejected/refuted/false,
// 2 exhausted or unknown, 3 usage or input error.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "secav/secav.hpp"

using namespace secav;

namespace {

enum Exit { kOk = 0, kRejected = 1, kUnknown = 2, kInputError = 3 };

struct Options {
  bool json_out = false;
  std::string out_file;
  SearchLimits limits;
};

struct InputError : std::runtime_error {
  InputError(std::string code, const std::string& message) : std::runtime_error(message), code(std::move(code)) {}
  std::string code;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("IO", "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json_file(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw InputError("SCHEMA", path + ": malformed JSON: " + e.what());
  }
}

void emit(const Options& opt, const json& j, const std::string& human) {
  if (opt.json_out) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << human;
  }
}

void print_tree(std::ostream& os, const ProofTree& pt, std::size_t indent) {
  os << std::string(indent, ' ') << "[";
  for (std::size_t i = 0; i < pt.conclusion.size(); ++i) os << (i ? ", " : "") << print_formula(pt.conclusion[i]);
  os << "]  " << rule_name(pt.app.rule);
  if (pt.app.witness) os << " " << print_term(*pt.app.witness);
  if (pt.app.fresh) os << " " << *pt.app.fresh;
  os << "\n";
  for (const auto& c : pt.children) print_tree(os, c, indent + 2);
}

std::string describe_model(const Model& m) {
  json j = model_to_json(m);
  j.erase("schema");
  return j.dump() + "\n";
}

int cmd_check(const Options& opt, const std::string& file) {
  const ProofTree pt = proof_from_json(read_json_file(file));
  const Verdict v = check_proof(pt);
  std::ostringstream human;
  if (v.accepted) {
    human << "accepted (" << pt.size() << " nodes)\n";
  } else {
    human << "rejected at [";
    for (std::size_t i = 0; i < v.path.size(); ++i) human << (i ? "," : "") << v.path[i];
    human << "]: " << error_code_name(v.error->code()) << ": " << v.error->what();
    if (v.error->offender()) human << " (offender: " << print_formula(*v.error->offender()) << ")";
    human << "\n";
  }
  emit(opt, verdict_to_json(v), human.str());
  return v.accepted ? kOk : kRejected;
}

int cmd_prove(const Options& opt, const std::string& src) {
  const Formula p = parse_formula(src);
  ProveOutcome o;
  try {
    o = prove(p, opt.limits);
  } catch (const ProverInputError& e) {
    throw InputError("FREE_VARIABLES", e.what());
  }
  std::ostringstream human;
  human << outcome_name(o.kind);
  if (o.proof) {
    human << " (" << o.proof->size() << " nodes)\n";
    print_tree(human, *o.proof, 0);
    if (!opt.out_file.empty()) {
      std::ofstream out(opt.out_file);
      if (!out) throw InputError("IO", "cannot write " + opt.out_file);
      out << proof_to_json(*o.proof).dump(2) << "\n";
    }
  } else if (o.model) {
    human << "\ncountermodel: " << describe_model(*o.model);
  } else {
    human << ": " << o.reason << "\n";
  }
  emit(opt, outcome_to_json(o), human.str());
  switch (o.kind) {
    case ProveOutcome::Kind::Proof: return kOk;
    case ProveOutcome::Kind::Refuted: return kRejected;
    default: return kUnknown;
  }
}

int cmd_refute(const Options& opt, const std::string& src) {
  const Formula p = parse_formula(src);
  const auto m = find_countermodel(p, opt.limits.max_model_size);
  json j{{"schema", kSchemaVersion}, {"countermodel", nullptr}};
  std::string human;
  if (m) {
    json mj = model_to_json(*m);
    mj.erase("schema");
    j["countermodel"] = mj;
    human = "countermodel: " + mj.dump() + "\n";
  } else {
    human = "no countermodel up to size " + std::to_string(opt.limits.max_model_size) + "\n";
  }
  emit(opt, j, human);
  return m ? kRejected : kUnknown;
}

int cmd_eval(const Options& opt, const std::string& src, const std::string& model_file) {
  const Formula p = parse_formula(src);
  const Model m = model_from_json(read_json_file(model_file));
  const bool v = eval(m, p);
  emit(opt, json{{"schema", kSchemaVersion}, {"value", v}}, v ? "true\n" : "false\n");
  return v ? kOk : kRejected;
}

int cmd_apply(const Options& opt, const std::string& rule, const std::vector<std::string>& goal_src,
              const std::string& witness, const std::string& fresh, const std::vector<std::string>& target_src) {
  const auto id = rule_from_name(rule);
  if (!id) throw InputError("SCHEMA", "unknown rule '" + rule + "'");
  DeBruijnConverter conv;
  std::vector<std::size_t> goal_h, target_h;
  for (const auto& s : goal_src) goal_h.push_back(conv.add(parse_named_formula(s)));
  for (const auto& s : target_src) target_h.push_back(conv.add(parse_named_formula(s)));
  std::optional<std::size_t> witness_h;
  if (!witness.empty()) witness_h = conv.add(parse_named_term(witness));
  conv.resolve();

  RuleApp app = RuleApp::plain(*id);
  if (witness_h) app.witness = conv.term(*witness_h);
  if (!fresh.empty()) app.fresh = fresh;
  if (!target_src.empty()) {
    app.target = Sequent{};
    for (auto h : target_h) app.target->push_back(conv.formula(h));
  }
  Sequent goal;
  for (auto h : goal_h) goal.push_back(conv.formula(h));

  try {
    const auto premises = premises_of(app, goal);
    json j{{"schema", kSchemaVersion}, {"premises", json::array()}};
    std::ostringstream human;
    if (premises.empty()) human << "closed\n";
    for (const auto& x : premises) {
      j["premises"].push_back(sequent_to_json(x));
      human << "[";
      for (std::size_t i = 0; i < x.size(); ++i) human << (i ? ", " : "") << print_formula(x[i]);
      human << "]\n";
    }
    emit(opt, j, human.str());
    return kOk;
  } catch (const RuleError& e) {
    json j{{"schema", kSchemaVersion}, {"error", rule_error_to_json(e)}};
    std::string human = std::string(error_code_name(e.code())) + ": " + e.what();
    if (e.offender()) human += " (offender: " + print_formula(*e.offender()) + ")";
    emit(opt, j, human + "\n");
    return kRejected;
  }
}

int report_input_error(const Options& opt, const std::string& code, const std::string& message, json extra = {}) {
  json err{{"code", code}, {"message", message}};
  if (extra.is_object()) err.update(extra);
  if (opt.json_out) {
    std::cout << json{{"schema", kSchemaVersion}, {"error", err}}.dump(2) << "\n";
  }
  std::cerr << "error: " << message << "\n";
  return kInputError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequent calculus proof checker, prover and countermodel finder"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  app.add_flag("--json", opt.json_out, "Write a JSON document to standard output instead of a report");
  app.add_option("--out", opt.out_file, "Write the proof found by prove to FILE");
  app.add_option("--max-depth", opt.limits.max_depth, "Rule applications per branch")->check(CLI::PositiveNumber);
  app.add_option("--max-term-depth", opt.limits.max_term_depth, "Depth of quantifier instances")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-size", opt.limits.max_model_size, "Largest countermodel universe")
      ->check(CLI::Range(1, 8));
  app.add_option("--steps", opt.limits.steps, "Total rule applications")->check(CLI::PositiveNumber);

  std::string file, formula, model_file, rule, witness, fresh;
  std::vector<std::string> goal, target;

  auto* check = app.add_subcommand("check", "Check a proof file");
  check->add_option("proof", file, "Proof JSON file")->required();
  auto* prove_cmd = app.add_subcommand("prove", "Search for a proof");
  prove_cmd->add_option("formula", formula)->required();
  auto* refute = app.add_subcommand("refute", "Search for a finite countermodel");
  refute->add_option("formula", formula)->required();
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a formula in a model");
  eval_cmd->add_option("formula", formula)->required();
  eval_cmd->add_option("model", model_file, "Model JSON file")->required();
  auto* apply = app.add_subcommand("apply", "Apply one rule backwards to a goal");
  apply->add_option("rule", rule)->required();
  apply->add_option("goal", goal, "Formulas of the goal sequent")->required();
  apply->add_option("--witness", witness, "Instance term for ExiR and NegUni");
  apply->add_option("--fresh", fresh, "New constant for UniR and NegExi");
  apply->add_option("--target", target, "Formula of the ExtR premise (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*check) return cmd_check(opt, file);
    if (*prove_cmd) return cmd_prove(opt, formula);
    if (*refute) return cmd_refute(opt, formula);
    if (*eval_cmd) return cmd_eval(opt, formula, model_file);
    if (*apply) return cmd_apply(opt, rule, goal, witness, fresh, target);
  } catch (const ParseError& e) {
    return report_input_error(opt, "PARSE", e.what(), {{"line", e.line()}, {"column", e.column()}});
  } catch (const FieldParseError& e) {
    return report_input_error(opt, "PARSE", e.what(), {{"path", e.path()}, {"line", e.line()}, {"column", e.column()}});
  } catch (const SchemaError& e) {
    return report_input_error(opt, "SCHEMA", e.what(), {{"path", e.path()}});
  } catch (const InputError& e) {
    return report_input_error(opt, e.code, e.what());
  } catch (const std::invalid_argument& e) {
    return report_input_error(opt, "INPUT", e.what());
  }
  return kInputError;
}
