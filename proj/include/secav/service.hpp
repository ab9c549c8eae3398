// Stateless request handlers behind the HTTP API. Each handler maps a JSON
// request body to a status code and a JSON response and touches no shared
// state, so requests may be served concurrently.
#pragma once

#include <functional>
#include <map>
#include <string>

#include "secav/json_io.hpp"
#include "secav/prover.hpp"

namespace secav::service {

struct Response {
  int status = 200;
  json body;
};

namespace detail {

inline Response error(int status, json payload) { return {status, json{{"error", std::move(payload)}}}; }

inline Response schema_error(const SchemaError& e) {
  return error(400, {{"code", "SCHEMA"}, {"path", e.path()}, {"message", e.detail()}});
}

inline Response parse_error(const FieldParseError& e) {
  return error(400, {{"code", "PARSE"},
                     {"path", e.path()},
                     {"line", e.line()},
                     {"column", e.column()},
                     {"message", e.message()}});
}

inline Response rule_error(const RuleError& e) { return error(422, secav::rule_error_to_json(e)); }

inline const json& body_object(const json& body) {
  secav::detail::require_object(body, "$");
  return body;
}

inline std::size_t limit_field(const json& body, const char* key, std::size_t fallback) {
  auto it = body.find(key);
  if (it == body.end() || it->is_null()) return fallback;
  const std::size_t v = secav::detail::require_natural(*it, std::string("$.") + key);
  if (v == 0) throw SchemaError(std::string("$.") + key, "must be positive");
  return v;
}

inline SearchLimits limits_from(const json& body) {
  SearchLimits l;
  l.max_depth = limit_field(body, "max_depth", l.max_depth);
  l.max_term_depth = limit_field(body, "max_term_depth", l.max_term_depth);
  l.steps = limit_field(body, "steps", l.steps);
  l.max_model_size = limit_field(body, "max_size", l.max_model_size);
  if (l.max_model_size > 8) throw SchemaError("$.max_size", "at most 8");
  return l;
}

// The goal of a request, from either "goal" (a list) or "formula" (one string).
inline Sequent read_goal(const json& body) {
  if (auto it = body.find("goal"); it != body.end()) return sequent_from_json(*it, "$.goal");
  if (auto it = body.find("formula"); it != body.end()) return sequent_from_json(json::array({*it}), "$.formula");
  throw SchemaError("$.goal", "missing field");
}

inline json premises_to_json(const std::vector<Sequent>& ps) {
  json out = json::array();
  for (const auto& p : ps) out.push_back(sequent_to_json(p));
  return out;
}

}  // namespace detail

/// {"formula": s} or {"goal": [s, ...]} -> canonical rendering.
inline Response parse(const json& body) {
  detail::body_object(body);
  if (auto it = body.find("formula"); it != body.end()) {
    const Sequent x = sequent_from_json(json::array({*it}), "$.formula");
    return {200, {{"formula", print_formula(x.front())}, {"closed", is_closed(x.front())}}};
  }
  const Sequent x = sequent_from_json(secav::detail::require(body, "goal", "$"), "$.goal");
  return {200, {{"goal", sequent_to_json(x)}}};
}

/// {"goal", "rule", "witness"?, "fresh"?, "target"?} -> {"premises": [[...], ...]}.
inline Response apply(const json& body) {
  detail::body_object(body);
  secav::detail::StringTable strings(ParseOptions{true});
  const auto goal = strings.formulas(secav::detail::require(body, "goal", "$"), "$.goal");
  const std::string& name = secav::detail::require_string(secav::detail::require(body, "rule", "$"), "$.rule");
  const auto rule = rule_from_name(name);
  if (!rule) throw SchemaError("$.rule", "unknown rule '" + name + "'");
  std::optional<std::size_t> witness;
  std::optional<std::vector<std::size_t>> target;
  RuleApp app = RuleApp::plain(*rule);
  if (auto it = body.find("witness"); it != body.end() && !it->is_null()) witness = strings.term(*it, "$.witness");
  if (auto it = body.find("fresh"); it != body.end() && !it->is_null()) {
    app.fresh = secav::detail::require_string(*it, "$.fresh");
  }
  if (auto it = body.find("target"); it != body.end() && !it->is_null()) target = strings.formulas(*it, "$.target");
  strings.resolve();
  if (witness) app.witness = strings.get_term(*witness);
  if (target) app.target = strings.get_sequent(*target);
  return {200, {{"premises", detail::premises_to_json(premises_of(app, strings.get_sequent(goal)))}}};
}

/// {"goal"} -> {"rules": [{"rule", "witness", "fresh", "target"}, ...]}.
inline Response applicable(const json& body) {
  detail::body_object(body);
  const Sequent goal = sequent_from_json(secav::detail::require(body, "goal", "$"), "$.goal");
  return {200, {{"rules", templates_to_json(applicable_rules(goal))}}};
}

/// {"proof": tree} or a bare proof tree -> verdict. Rejections are 200 too.
inline Response check(const json& body) {
  detail::body_object(body);
  if (auto it = body.find("proof"); it != body.end()) {
    return {200, verdict_to_json(check_proof(proof_from_json(*it, "$.proof")))};
  }
  return {200, verdict_to_json(check_proof(proof_from_json(body)))};
}

/// {"formula"} or {"goal"}, plus optional limits -> outcome.
inline Response prove(const json& body) {
  detail::body_object(body);
  const SearchLimits limits = detail::limits_from(body);
  const Sequent goal = detail::read_goal(body);
  try {
    return {200, outcome_to_json(prove_sequent(goal, limits))};
  } catch (const ProverInputError& e) {
    return detail::error(422, {{"code", "FREE_VARIABLES"}, {"message", e.what()}});
  }
}

/// {"formula"} or {"goal"}, "max_size"? -> {"countermodel": model | null}.
inline Response refute(const json& body) {
  detail::body_object(body);
  const SearchLimits limits = detail::limits_from(body);
  const Sequent goal = detail::read_goal(body);
  const auto m = find_countermodel(sequent_formula(goal), limits.max_model_size);
  json out{{"schema", kSchemaVersion}, {"countermodel", nullptr}};
  if (m) {
    json mj = model_to_json(*m);
    mj.erase("schema");
    out["countermodel"] = std::move(mj);
  }
  return {200, out};
}

using Handler = std::function<Response(const json&)>;

inline const std::map<std::string, Handler>& routes() {
  static const std::map<std::string, Handler> table = {
      {"/parse", parse}, {"/apply", apply}, {"/applicable", applicable},
      {"/check", check}, {"/prove", prove}, {"/refute", refute},
  };
  return table;
}

/// Runs the handler for `route` on the raw request body, mapping failures to
/// 400 (malformed request) and 422 (kernel rejection).
inline Response handle(const std::string& route, const std::string& body_text) {
  auto it = routes().find(route);
  if (it == routes().end()) return detail::error(404, {{"code", "NOT_FOUND"}, {"message", "no route " + route}});
  try {
    return it->second(secav::detail::parse_document(body_text));
  } catch (const FieldParseError& e) {
    return detail::parse_error(e);
  } catch (const SchemaError& e) {
    return detail::schema_error(e);
  } catch (const RuleError& e) {
    return detail::rule_error(e);
  } catch (const json::exception& e) {
    return detail::error(400, {{"code", "SCHEMA"}, {"path", "$"}, {"message", e.what()}});
  }
}

}  // namespace secav::service
