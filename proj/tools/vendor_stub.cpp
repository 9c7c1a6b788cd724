// Minimal vendor API stand-in for exercising the HTTP provider.
//
// Serves a fixture directory over the same two endpoints the real vendor
// exposes, with a fault-injection hook so tests can script 429/500 bursts:
//
//   GET  /v1/companies                      directory listing
//   GET  /v1/companies/<dir>/files/<file>   raw fixture file
//   POST /admin/fault {"status": s, "count": n}
//
// With --require-token the stub rejects requests whose bearer token does not
// match the value of the named environment variable.

#include "CLI11.hpp"
#include "httplib.h"

#include <finmcp/provider.hpp>
#include <finmcp/util.hpp>

#include <nlohmann/json.hpp>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

int main(int argc, char** argv) {
  CLI::App app{"Fixture-backed vendor API stub"};
  std::string fixtures_dir = "fixtures";
  std::string host = "127.0.0.1";
  int port = 8790;
  std::string token_env;
  app.add_option("--fixtures", fixtures_dir, "Fixture directory to serve");
  app.add_option("--host", host, "Bind address");
  app.add_option("--port", port, "Bind port");
  app.add_option("--require-token", token_env,
                 "Require a bearer token matching this environment variable");
  CLI11_PARSE(app, argc, argv);

  // Remaining injected-fault budget: every request consumes one while > 0.
  std::atomic<int> fault_count{0};
  std::atomic<int> fault_status{500};

  httplib::Server server;

  auto authorized = [&token_env](const httplib::Request& req) {
    if (token_env.empty()) return true;
    const char* expected = std::getenv(token_env.c_str());
    if (!expected) return false;
    auto header = req.get_header_value("Authorization");
    return header == std::string("Bearer ") + expected;
  };

  auto faulted = [&](httplib::Response& res) {
    int remaining = fault_count.load();
    while (remaining > 0 && !fault_count.compare_exchange_weak(remaining, remaining - 1)) {
    }
    if (remaining <= 0) return false;
    res.status = fault_status.load();
    res.set_content(json{{"error", "injected"}}.dump(), "application/json");
    return true;
  };

  server.Get("/v1/companies", [&](const httplib::Request& req, httplib::Response& res) {
    if (faulted(res)) return;
    if (!authorized(req)) {
      res.status = 401;
      res.set_content(json{{"error", "unauthorized"}}.dump(), "application/json");
      return;
    }
    json companies = json::array();
    for (const auto& entry : fs::directory_iterator(fixtures_dir)) {
      if (!entry.is_directory()) continue;
      const fs::path meta_path = entry.path() / "company.json";
      if (!fs::exists(meta_path)) continue;
      json meta = json::parse(finmcp::read_file(meta_path.string()));
      companies.push_back({{"name", meta.value("name", entry.path().filename().string())},
                           {"dir", entry.path().filename().string()},
                           {"aliases", meta.value("aliases", json::array())},
                           {"currency", meta.value("currency", "USD")}});
    }
    res.set_content(json{{"companies", companies}}.dump(), "application/json");
  });

  server.Get(R"(/v1/companies/([^/]+)/files/([^/]+))",
             [&](const httplib::Request& req, httplib::Response& res) {
               if (faulted(res)) return;
               if (!authorized(req)) {
                 res.status = 401;
                 res.set_content(json{{"error", "unauthorized"}}.dump(), "application/json");
                 return;
               }
               const std::string dir = req.matches[1];
               const std::string file = req.matches[2];
               const fs::path path = fs::path(fixtures_dir) / dir / file;
               if (dir.find("..") != std::string::npos ||
                   file.find("..") != std::string::npos || !fs::exists(path)) {
                 res.status = 404;
                 res.set_content(json{{"error", "not_found"}}.dump(), "application/json");
                 return;
               }
               res.set_content(finmcp::read_file(path.string()), "application/json");
             });

  server.Post("/admin/fault", [&](const httplib::Request& req, httplib::Response& res) {
    json body = json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.contains("status") || !body.contains("count")) {
      res.status = 400;
      res.set_content(json{{"error", "bad_request"}}.dump(), "application/json");
      return;
    }
    fault_status.store(body["status"].get<int>());
    fault_count.store(body["count"].get<int>());
    res.set_content(json{{"ok", true}}.dump(), "application/json");
  });

  std::cout << "serving " << fixtures_dir << " on " << host << ":" << port << std::endl;
  if (!server.listen(host, port)) {
    std::cerr << "failed to bind " << host << ":" << port << "\n";
    return 1;
  }
  return 0;
}
