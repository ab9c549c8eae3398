#include <gtest/gtest.h>

#include <future>
#include <thread>

#include "httplib.h"
#include "support.hpp"

using namespace secav;
using secav::service::handle;

namespace {

json call(const std::string& route, const json& body, int expected_status = 200) {
  const auto r = handle(route, body.dump());
  EXPECT_EQ(r.status, expected_status) << route << " " << body.dump() << " -> " << r.body.dump();
  return r.body;
}

}  // namespace

TEST(Service, ApplyImpR) {
  const json r = call("/apply", {{"goal", {"p -> p"}}, {"rule", "ImpR"}});
  EXPECT_EQ(r["premises"], json::parse(R"([["~p","p"]])"));
}

TEST(Service, ApplyWithParameters) {
  json r = call("/apply", {{"goal", {"ex x. p(x)"}}, {"rule", "ExiR"}, {"witness", "f(a)"}});
  EXPECT_EQ(r["premises"], json::parse(R"J([["p(f(a))"]])J"));
  r = call("/apply", {{"goal", {"all x. p(x)"}}, {"rule", "UniR"}, {"fresh", "c"}});
  EXPECT_EQ(r["premises"], json::parse(R"J([["p(c)"]])J"));
  r = call("/apply", {{"goal", {"~p", "p"}}, {"rule", "ExtR"}, {"target", {"p", "~p"}}});
  EXPECT_EQ(r["premises"], json::parse(R"([["p","~p"]])"));
  r = call("/apply", {{"goal", {"p", "~p"}}, {"rule", "Basic"}});
  EXPECT_EQ(r["premises"], json::array());
}

TEST(Service, ApplyKernelErrors) {
  json r = call("/apply", {{"goal", {"all x. p(x, c)"}}, {"rule", "UniR"}, {"fresh", "c"}}, 422);
  EXPECT_EQ(r["error"]["code"], "FRESH");
  EXPECT_EQ(r["error"]["offender"], "p(v0, c)");
  r = call("/apply", {{"goal", {"p"}}, {"rule", "TruthR"}}, 422);
  EXPECT_EQ(r["error"]["code"], "SHAPE");
  r = call("/apply", {{"goal", {"p"}}, {"rule", "ExtR"}, {"target", {"q"}}}, 422);
  EXPECT_EQ(r["error"]["code"], "EXT");
  EXPECT_EQ(r["error"]["offender"], "q");
  r = call("/apply", {{"goal", {"ex x. p(x)"}}, {"rule", "ExiR"}}, 422);
  EXPECT_EQ(r["error"]["code"], "PARAM");
}

TEST(Service, RequestErrors) {
  json r = call("/apply", {{"goal", {"p -> "}}, {"rule", "ImpR"}}, 400);
  EXPECT_EQ(r["error"]["code"], "PARSE");
  EXPECT_EQ(r["error"]["path"], "$.goal[0]");
  EXPECT_EQ(r["error"]["column"], 6);
  r = call("/apply", {{"goal", {"p"}}, {"rule", "Cut"}}, 400);
  EXPECT_EQ(r["error"]["code"], "SCHEMA");
  EXPECT_EQ(r["error"]["path"], "$.rule");
  r = call("/apply", {{"rule", "ImpR"}}, 400);
  EXPECT_EQ(r["error"]["path"], "$.goal");
  EXPECT_EQ(handle("/apply", "{not json").status, 400);
  EXPECT_EQ(handle("/apply", "[1,2]").status, 400);
  EXPECT_EQ(handle("/nowhere", "{}").status, 404);
  r = call("/prove", {{"formula", "p"}, {"steps", 0}}, 400);
  EXPECT_EQ(r["error"]["path"], "$.steps");
  r = call("/prove", {{"formula", "p(z)"}}, 422);
  EXPECT_EQ(r["error"]["code"], "FREE_VARIABLES");
}

TEST(Service, Applicable) {
  const json r = call("/applicable", {{"goal", {"p -> p"}}});
  std::vector<std::string> names;
  for (const auto& t : r["rules"]) names.push_back(t["rule"]);
  EXPECT_EQ(names, (std::vector<std::string>{"ImpR", "ExtR"}));
  EXPECT_EQ(r["rules"][1]["target"], true);
}

TEST(Service, Parse) {
  EXPECT_EQ(call("/parse", {{"formula", "(p -> q) -> (p -> q)"}})["formula"], "(p -> q) -> p -> q");
  EXPECT_EQ(call("/parse", {{"formula", "p(z)"}})["closed"], false);
  EXPECT_EQ(call("/parse", {{"goal", {"p(z)", "q(w)"}}})["goal"], json::array({"p(v0)", "q(v1)"}));
}

TEST(Service, ProveAndCheck) {
  const json out = call("/prove", {{"formula", "p -> p"}});
  EXPECT_EQ(out["outcome"], "proof");
  EXPECT_EQ(call("/check", {{"proof", out["proof"]}})["verdict"], "accepted");
  EXPECT_EQ(call("/check", out["proof"])["verdict"], "accepted");

  json bad = out["proof"];
  bad["rule"] = "DisR";
  const json v = call("/check", {{"proof", bad}});
  EXPECT_EQ(v["verdict"], "rejected");
  EXPECT_EQ(v["code"], "SHAPE");

  bad["rule"] = "Nope";
  EXPECT_EQ(call("/check", {{"proof", bad}}, 400)["error"]["path"], "$.proof.rule");
}

TEST(Service, ProveWithLimitsAndGoals) {
  EXPECT_EQ(call("/prove", {{"goal", {"p", "~p"}}})["outcome"], "proof");
  EXPECT_EQ(call("/prove", {{"formula", "p | q -> p & q"}})["outcome"], "refuted");
  EXPECT_EQ(call("/prove", {{"formula", "(all x. p(x)) -> (ex x. p(x))"}, {"steps", 2}})["outcome"], "exhausted");
}

TEST(Service, Refute) {
  json r = call("/refute", {{"formula", "p"}, {"max_size", 1}});
  EXPECT_EQ(r["countermodel"]["size"], 1);
  r = call("/refute", {{"formula", "p | (p -> q)"}});
  EXPECT_TRUE(r["countermodel"].is_null());
  r = call("/refute", {{"formula", "(all x. p(x) | q(x)) -> (all x. p(x)) | (all x. q(x))"}});
  EXPECT_EQ(r["countermodel"]["size"], 2);
  const Model m = model_from_json(r["countermodel"]);
  EXPECT_FALSE(eval(m, parse_formula("(all x. p(x) | q(x)) -> (all x. p(x)) | (all x. q(x))")));
}

// Drives a session the way the UI does: apply rules to open goals, assemble
// the tree from the responses, and have /check accept the export.
TEST(Service, ReplayedSessionIsAccepted) {
  json root = {{"goal", {"p -> p"}}, {"rule", "ImpR"}, {"children", json::array()}};
  json prem = call("/apply", {{"goal", root["goal"]}, {"rule", "ImpR"}})["premises"];
  json ext = {{"goal", prem[0]}, {"rule", "ExtR"}, {"target", {"p", "~p"}}, {"children", json::array()}};
  prem = call("/apply", {{"goal", ext["goal"]}, {"rule", "ExtR"}, {"target", ext["target"]}})["premises"];
  json basic = {{"goal", prem[0]}, {"rule", "Basic"}, {"children", json::array()}};
  EXPECT_EQ(call("/apply", {{"goal", basic["goal"]}, {"rule", "Basic"}})["premises"], json::array());
  ext["children"].push_back(basic);
  root["children"].push_back(ext);
  EXPECT_EQ(call("/check", {{"proof", root}})["verdict"], "accepted");
}

TEST(Service, ReplayProverProofsStepByStep) {
  // Every node of a prover proof, sent through /apply, yields its children.
  std::function<void(const json&)> replay = [&](const json& node) {
    json req = {{"goal", node["goal"]}, {"rule", node["rule"]}};
    for (const char* k : {"witness", "fresh", "target"}) {
      if (node.contains(k)) req[k] = node[k];
    }
    const json prem = call("/apply", req)["premises"];
    ASSERT_EQ(prem.size(), node["children"].size());
    for (std::size_t i = 0; i < prem.size(); ++i) {
      EXPECT_EQ(prem[i], node["children"][i]["goal"]);
      replay(node["children"][i]);
    }
  };
  for (const auto& src : secav::testing::full_corpus()) replay(call("/prove", {{"formula", src}})["proof"]);
}

TEST(Service, ConcurrentClientsMatchSerialResponses) {
  std::vector<std::pair<std::string, json>> requests;
  for (const auto& src : secav::testing::full_corpus()) {
    requests.push_back({"/prove", {{"formula", src}}});
    requests.push_back({"/applicable", {{"goal", {src}}}});
    requests.push_back({"/refute", {{"formula", src}, {"max_size", 2}}});
  }
  requests.push_back({"/apply", {{"goal", {"all x. p(x, c)"}}, {"rule", "UniR"}, {"fresh", "c"}}});
  requests.push_back({"/apply", {{"goal", {"p -> "}}, {"rule", "ImpR"}}});

  std::vector<std::pair<int, std::string>> serial;
  for (const auto& [route, body] : requests) {
    const auto r = handle(route, body.dump());
    serial.push_back({r.status, r.body.dump()});
  }

  httplib::Server server;
  for (const auto& [route, handler] : service::routes()) {
    const std::string path = route;
    server.Post(path, [path](const httplib::Request& req, httplib::Response& res) {
      const auto r = handle(path, req.body);
      res.status = r.status;
      res.set_content(r.body.dump(), "application/json");
    });
  }
  const int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread listener([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  constexpr int kClients = 6;
  std::vector<std::future<int>> clients;
  for (int c = 0; c < kClients; ++c) {
    clients.push_back(std::async(std::launch::async, [&, c] {
      httplib::Client client("127.0.0.1", port);
      int mismatches = 0;
      // Each client walks the requests in a different order.
      for (std::size_t k = 0; k < requests.size(); ++k) {
        const std::size_t i = (k * (c + 1) + c) % requests.size();
        const auto res = client.Post(requests[i].first, requests[i].second.dump(), "application/json");
        if (!res || res->status != serial[i].first || res->body != serial[i].second) ++mismatches;
      }
      return mismatches;
    }));
  }
  for (auto& f : clients) EXPECT_EQ(f.get(), 0);
  server.stop();
  listener.join();
}
