// JSON documents for proofs, models, prover outcomes and check verdicts.
// Formulas and terms travel as strings in the surface grammar. Every document
// written here carries "schema": "secav-1".
#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "secav/calculus.hpp"
#include "secav/prover.hpp"
#include "secav/semantics.hpp"
#include "secav/textio.hpp"

namespace secav {

using json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "secav-1";

/// Document does not follow the schema. `path` locates the offending value,
/// e.g. "$.children[0].rule".
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)), detail_(message) {}

  const std::string& path() const { return path_; }
  const std::string& detail() const { return detail_; }

 private:
  std::string path_;
  std::string detail_;
};

/// A formula or term string inside a document does not parse.
class FieldParseError : public SchemaError {
 public:
  FieldParseError(std::string path, const ParseError& e)
      : SchemaError(std::move(path), e.what()), line_(e.line()), column_(e.column()), message_(e.detail()) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

namespace detail {

inline std::string key_path(const std::string& base, const std::string& key) { return base + "." + key; }
inline std::string index_path(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

inline const json& require(const json& obj, const std::string& key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(key_path(path, key), "missing field");
  return *it;
}

inline void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
}

inline const std::string& require_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw SchemaError(path, "expected a string");
  return j.get_ref<const std::string&>();
}

inline std::size_t require_natural(const json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    throw SchemaError(path, "expected a non-negative integer");
  }
  return j.get<std::size_t>();
}

inline void check_schema_field(const json& doc) {
  if (!doc.is_object()) return;
  auto it = doc.find("schema");
  if (it != doc.end() && (!it->is_string() || *it != kSchemaVersion)) {
    throw SchemaError("$.schema", std::string("unsupported schema, expected \"") + kSchemaVersion + "\"");
  }
}

inline json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("$", std::string("malformed JSON: ") + e.what());
  }
}

// Collects surface strings of one document and resolves them together.
class StringTable {
 public:
  explicit StringTable(ParseOptions opts) : opts_(opts) {}

  std::size_t formula(const json& j, const std::string& path) {
    const std::string& s = require_string(j, path);
    try {
      return conv_.add(parse_named_formula(s, opts_));
    } catch (const ParseError& e) {
      throw FieldParseError(path, e);
    }
  }

  std::size_t term(const json& j, const std::string& path) {
    const std::string& s = require_string(j, path);
    try {
      return conv_.add(parse_named_term(s, opts_));
    } catch (const ParseError& e) {
      throw FieldParseError(path, e);
    }
  }

  std::vector<std::size_t> formulas(const json& j, const std::string& path) {
    if (!j.is_array()) throw SchemaError(path, "expected an array of formula strings");
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(formula(j[i], index_path(path, i)));
    return out;
  }

  void resolve() { conv_.resolve(); }
  Formula get_formula(std::size_t h) const { return conv_.formula(h); }
  Term get_term(std::size_t h) const { return conv_.term(h); }

  Sequent get_sequent(const std::vector<std::size_t>& hs) const {
    Sequent out;
    for (auto h : hs) out.push_back(conv_.formula(h));
    return out;
  }

 private:
  ParseOptions opts_;
  DeBruijnConverter conv_;
};

struct PendingNode {
  std::vector<std::size_t> goal;
  RuleId rule;
  std::optional<std::size_t> witness;
  std::optional<std::string> fresh;
  std::optional<std::vector<std::size_t>> target;
  std::vector<PendingNode> children;
};

inline PendingNode read_node(const json& j, const std::string& path, StringTable& strings) {
  require_object(j, path);
  PendingNode n;
  n.goal = strings.formulas(require(j, "goal", path), key_path(path, "goal"));
  const std::string rule_path = key_path(path, "rule");
  const std::string& name = require_string(require(j, "rule", path), rule_path);
  auto rule = rule_from_name(name);
  if (!rule) throw SchemaError(rule_path, "unknown rule '" + name + "'");
  n.rule = *rule;
  if (auto it = j.find("witness"); it != j.end() && !it->is_null()) {
    n.witness = strings.term(*it, key_path(path, "witness"));
  }
  if (auto it = j.find("fresh"); it != j.end() && !it->is_null()) {
    n.fresh = require_string(*it, key_path(path, "fresh"));
  }
  if (auto it = j.find("target"); it != j.end() && !it->is_null()) {
    n.target = strings.formulas(*it, key_path(path, "target"));
  }
  const std::string children_path = key_path(path, "children");
  const json& children = require(j, "children", path);
  if (!children.is_array()) throw SchemaError(children_path, "expected an array");
  for (std::size_t i = 0; i < children.size(); ++i) {
    n.children.push_back(read_node(children[i], index_path(children_path, i), strings));
  }
  return n;
}

inline ProofTree build_node(const PendingNode& n, const StringTable& strings) {
  ProofTree pt{strings.get_sequent(n.goal), RuleApp::plain(n.rule), {}};
  if (n.witness) pt.app.witness = strings.get_term(*n.witness);
  pt.app.fresh = n.fresh;
  if (n.target) pt.app.target = strings.get_sequent(*n.target);
  for (const auto& c : n.children) pt.children.push_back(build_node(c, strings));
  return pt;
}

inline json proof_node_to_json(const ProofTree& pt) {
  json j = json::object();
  j["goal"] = print_sequent(pt.conclusion);
  j["rule"] = std::string(rule_name(pt.app.rule));
  if (pt.app.witness) j["witness"] = print_term(*pt.app.witness);
  if (pt.app.fresh) j["fresh"] = *pt.app.fresh;
  if (pt.app.target) j["target"] = print_sequent(*pt.app.target);
  j["children"] = json::array();
  for (const auto& c : pt.children) j["children"].push_back(proof_node_to_json(c));
  return j;
}

inline std::string tuple_key(const std::vector<Element>& args) {
  std::string s = "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(args[i]);
  }
  return s + ")";
}

inline std::vector<Element> parse_tuple_key(const std::string& key, std::size_t arity, const std::string& path) {
  auto bad = [&]() -> SchemaError {
    return SchemaError(path, "expected a tuple key of arity " + std::to_string(arity) + " like \"(0,1)\"");
  };
  if (key.size() < 2 || key.front() != '(' || key.back() != ')') throw bad();
  std::vector<Element> out;
  const std::string inner = key.substr(1, key.size() - 2);
  if (!inner.empty()) {
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = inner.find(',', start);
      const std::string part = inner.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      if (part.empty() || part.size() > 9 || part.find_first_not_of("0123456789") != std::string::npos) throw bad();
      out.push_back(std::stoul(part));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  if (out.size() != arity) throw bad();
  return out;
}

inline Symbol parse_symbol_key(const std::string& key, const std::string& path) {
  const std::size_t slash = key.rfind('/');
  if (slash == std::string::npos || slash == 0 || slash + 1 == key.size() ||
      key.find_first_not_of("0123456789", slash + 1) != std::string::npos || key.size() - slash > 4) {
    throw SchemaError(path, "expected a symbol key like \"f/2\"");
  }
  return Symbol{key.substr(0, slash), std::stoul(key.substr(slash + 1))};
}

inline Element element(const json& j, std::size_t size, const std::string& path) {
  const std::size_t v = require_natural(j, path);
  if (v >= size) throw SchemaError(path, "element " + std::to_string(v) + " is outside the universe");
  return v;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Proofs

inline json proof_to_json(const ProofTree& pt) {
  json j = detail::proof_node_to_json(pt);
  j["schema"] = kSchemaVersion;
  return j;
}

/// Formula strings may use reserved identifiers, since generated proofs
/// contain them. All strings of the document share one free-variable table.
inline ProofTree proof_from_json(const json& doc, const std::string& base = "$") {
  detail::check_schema_field(doc);
  detail::StringTable strings(ParseOptions{true});
  const detail::PendingNode root = detail::read_node(doc, base, strings);
  strings.resolve();
  return detail::build_node(root, strings);
}

inline json sequent_to_json(const Sequent& x) { return print_sequent(x); }

inline Sequent sequent_from_json(const json& j, const std::string& path = "$") {
  detail::StringTable strings(ParseOptions{true});
  const auto hs = strings.formulas(j, path);
  strings.resolve();
  return strings.get_sequent(hs);
}

// ---------------------------------------------------------------------------
// Models

inline json model_to_json(const Model& m) {
  json j = json::object();
  j["schema"] = kSchemaVersion;
  j["size"] = m.size();
  json funs = json::object();
  for (const auto& [s, t] : m.interp.funs) {
    json table = json::object();
    for (std::size_t i = 0; i < t.values.size(); ++i) {
      if (t.values[i] != 0) table[detail::tuple_key(detail::tuple_at(i, s.arity, m.size()))] = t.values[i];
    }
    table["default"] = 0;
    funs[s.id + "/" + std::to_string(s.arity)] = std::move(table);
  }
  j["funs"] = std::move(funs);
  json preds = json::object();
  for (const auto& [s, t] : m.interp.preds) {
    json rows = json::array();
    for (std::size_t i = 0; i < t.values.size(); ++i) {
      if (t.values[i]) rows.push_back(detail::tuple_key(detail::tuple_at(i, s.arity, m.size())));
    }
    preds[s.id + "/" + std::to_string(s.arity)] = std::move(rows);
  }
  j["preds"] = std::move(preds);
  json env = json::object();
  for (std::size_t i = 0; i < m.env.table().size(); ++i) {
    if (m.env.table()[i] != m.env.fallback()) env[std::to_string(i)] = m.env.table()[i];
  }
  env["default"] = m.env.fallback();
  j["env"] = std::move(env);
  return j;
}

inline Model model_from_json(const json& doc) {
  using namespace detail;
  check_schema_field(doc);
  require_object(doc, "$");
  Model m;
  const std::size_t n = require_natural(require(doc, "size", "$"), "$.size");
  if (n == 0) throw SchemaError("$.size", "universe must be nonempty");
  if (n > 1'000'000) throw SchemaError("$.size", "universe too large");
  m.universe.size = n;

  if (auto it = doc.find("funs"); it != doc.end()) {
    require_object(*it, "$.funs");
    for (const auto& [key, table] : it->items()) {
      const std::string path = key_path("$.funs", key);
      const Symbol s = parse_symbol_key(key, path);
      if (table_size(n, s.arity) > 10'000'000) throw SchemaError(path, "table too large");
      require_object(table, path);
      FunctionTable& t = m.funs_entry(s);
      Element fallback = 0;
      if (auto d = table.find("default"); d != table.end()) fallback = element(*d, n, key_path(path, "default"));
      std::fill(t.values.begin(), t.values.end(), fallback);
      for (const auto& [tk, v] : table.items()) {
        if (tk == "default") continue;
        const std::string vpath = key_path(path, tk);
        const auto args = parse_tuple_key(tk, s.arity, vpath);
        for (Element a : args) {
          if (a >= n) throw SchemaError(vpath, "tuple element outside the universe");
        }
        t.values[tuple_index(args, n)] = element(v, n, vpath);
      }
    }
  }
  if (auto it = doc.find("preds"); it != doc.end()) {
    require_object(*it, "$.preds");
    for (const auto& [key, rows] : it->items()) {
      const std::string path = key_path("$.preds", key);
      const Symbol s = parse_symbol_key(key, path);
      if (table_size(n, s.arity) > 10'000'000) throw SchemaError(path, "table too large");
      if (!rows.is_array()) throw SchemaError(path, "expected an array of tuples");
      PredicateTable& t = m.preds_entry(s);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::string rpath = index_path(path, i);
        const auto args = parse_tuple_key(require_string(rows[i], rpath), s.arity, rpath);
        for (Element a : args) {
          if (a >= n) throw SchemaError(rpath, "tuple element outside the universe");
        }
        t.values[tuple_index(args, n)] = 1;
      }
    }
  }
  if (auto it = doc.find("env"); it != doc.end()) {
    require_object(*it, "$.env");
    Element fallback = 0;
    if (auto d = it->find("default"); d != it->end()) fallback = element(*d, n, "$.env.default");
    std::vector<Element> table;
    for (const auto& [key, v] : it->items()) {
      if (key == "default") continue;
      const std::string path = key_path("$.env", key);
      if (key.empty() || key.size() > 6 || key.find_first_not_of("0123456789") != std::string::npos) {
        throw SchemaError(path, "expected a variable index");
      }
      const std::size_t idx = std::stoul(key);
      if (table.size() <= idx) table.resize(idx + 1, fallback);
      table[idx] = element(v, n, path);
    }
    m.env = Environment(std::move(table), fallback);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Outcomes and verdicts

inline json outcome_to_json(const ProveOutcome& o) {
  json j = json::object();
  j["schema"] = kSchemaVersion;
  j["outcome"] = std::string(outcome_name(o.kind));
  j["steps"] = o.steps;
  if (o.proof) {
    j["proof"] = detail::proof_node_to_json(*o.proof);
    j["nodes"] = o.proof->size();
  }
  if (o.model) {
    json m = model_to_json(*o.model);
    m.erase("schema");
    j["model"] = std::move(m);
  }
  if (!o.reason.empty()) j["reason"] = o.reason;
  return j;
}

inline ProveOutcome outcome_from_json(const json& doc) {
  detail::check_schema_field(doc);
  detail::require_object(doc, "$");
  ProveOutcome o;
  const std::string& kind = detail::require_string(detail::require(doc, "outcome", "$"), "$.outcome");
  if (kind == "proof") {
    o.kind = ProveOutcome::Kind::Proof;
    o.proof = proof_from_json(detail::require(doc, "proof", "$"), "$.proof");
  } else if (kind == "refuted") {
    o.kind = ProveOutcome::Kind::Refuted;
    try {
      o.model = model_from_json(detail::require(doc, "model", "$"));
    } catch (const SchemaError& e) {
      throw SchemaError("$.model" + e.path().substr(1), e.detail());
    }
  } else if (kind == "exhausted") {
    o.kind = ProveOutcome::Kind::Exhausted;
  } else {
    throw SchemaError("$.outcome", "expected \"proof\", \"refuted\" or \"exhausted\"");
  }
  if (auto it = doc.find("steps"); it != doc.end()) o.steps = detail::require_natural(*it, "$.steps");
  if (auto it = doc.find("reason"); it != doc.end()) o.reason = detail::require_string(*it, "$.reason");
  return o;
}

inline json rule_error_to_json(const RuleError& e) {
  json j = json::object();
  j["code"] = std::string(error_code_name(e.code()));
  j["message"] = e.what();
  j["offender"] = e.offender() ? json(print_formula(*e.offender())) : json(nullptr);
  if (!e.parameter().empty()) j["parameter"] = e.parameter();
  return j;
}

inline json verdict_to_json(const Verdict& v) {
  json j = json::object();
  j["schema"] = kSchemaVersion;
  if (v.accepted) {
    j["verdict"] = "accepted";
    return j;
  }
  j["verdict"] = "rejected";
  j["path"] = v.path;
  if (v.error) j.update(rule_error_to_json(*v.error));
  return j;
}

inline json templates_to_json(const std::vector<RuleTemplate>& ts) {
  json out = json::array();
  for (const auto& t : ts) {
    out.push_back({{"rule", std::string(rule_name(t.rule))},
                   {"witness", t.witness},
                   {"fresh", t.fresh},
                   {"target", t.target}});
  }
  return out;
}

}  // namespace secav
