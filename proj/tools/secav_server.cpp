// HTTP front end for the request handlers in secav/service.hpp.

#include <iostream>

#include "CLI11.hpp"
#include "httplib.h"
#include "secav/service.hpp"

namespace {

void add_cors(httplib::Response& res, const std::string& origin) {
  res.set_header("Access-Control-Allow-Origin", origin);
  res.set_header("Access-Control-Allow-Methods", "POST, OPTIONS");
  res.set_header("Access-Control-Allow-Headers", "Content-Type");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HTTP JSON API for the proof kernel"};
  int port = 8080;
  std::string host = "127.0.0.1";
  std::string origin = "*";
  app.add_option("--port", port, "Port to listen on")->check(CLI::Range(0, 65535));
  app.add_option("--host", host, "Address to bind");
  app.add_option("--cors-origin", origin, "Value of Access-Control-Allow-Origin");
  CLI11_PARSE(app, argc, argv);

  httplib::Server server;
  for (const auto& [route, handler] : secav::service::routes()) {
    const std::string path = route;
    server.Post(path, [path, origin](const httplib::Request& req, httplib::Response& res) {
      const secav::service::Response r = secav::service::handle(path, req.body);
      res.status = r.status;
      res.set_content(r.body.dump(), "application/json");
      add_cors(res, origin);
    });
  }
  server.Options(".*", [origin](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
    add_cors(res, origin);
  });

  if (port == 0) {
    port = server.bind_to_any_port(host);
  } else if (!server.bind_to_port(host, port)) {
    std::cerr << "cannot bind " << host << ":" << port << "\n";
    return 1;
  }
  std::cout << "listening on " << host << ":" << port << std::endl;
  return server.listen_after_bind() ? 0 : 1;
}
