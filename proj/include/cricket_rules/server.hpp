#pragma once

#include <cstdlib>
#include <string>
#include <utility>

// Eigen must be seen before httplib: httplib pulls in <resolv.h>, whose
// `_res` macro collides with parameter names inside Eigen's product kernels.
#include "cricket_rules/analysis.hpp"

#include <httplib.h>

namespace cricket_rules {

inline int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidFilter: return 400;
    case ErrorCode::UnknownPlayer: return 404;
    case ErrorCode::EmptySelection:
    case ErrorCode::AllZeroMatrix:
    case ErrorCode::RankZero:
    case ErrorCode::DegenerateMatrix: return 422;
    default: return 500;
  }
}

/// Builds an AnalysisRequest from query parameters
/// player, type, opponents, from, to, categories, top_k.
inline AnalysisRequest request_from_query(const httplib::Request& req) {
  AnalysisRequest r;
  r.player = req.get_param_value("player");
  if (r.player.empty()) throw Error(ErrorCode::InvalidFilter, "missing 'player' parameter");
  if (req.has_param("type")) {
    auto t = parse_analysis_type(req.get_param_value("type"));
    if (!t) throw Error(ErrorCode::InvalidFilter, "type must be bat or bowl");
    r.type = *t;
  }
  if (req.has_param("opponents")) r.opponents = req.get_param_value("opponents");
  for (auto [key, slot] : {std::pair{"from", &r.from}, std::pair{"to", &r.to}}) {
    if (!req.has_param(key) || req.get_param_value(key).empty()) continue;
    auto d = Date::parse(req.get_param_value(key));
    if (!d) throw Error(ErrorCode::InvalidFilter, std::string(key) + " must be YYYY-MM-DD");
    *slot = *d;
  }
  if (req.has_param("categories")) {
    r.categories.clear();
    const std::string list = req.get_param_value("categories");  // split() returns views into it
    for (auto part : text::split(list, ',')) {
      auto c = parse_category(text::trim(part));
      if (!c) throw Error(ErrorCode::InvalidFilter, "unknown category '" + std::string(part) + "'");
      r.categories.push_back(*c);
    }
  }
  if (req.has_param("top_k")) {
    auto k = text::parse_int<std::size_t>(req.get_param_value("top_k"));
    if (!k || *k == 0) throw Error(ErrorCode::InvalidFilter, "top_k must be a positive integer");
    r.top_k = *k;
  }
  return r;
}

/// Read-only JSON service over a corpus provisioned at start-up.
///
///   GET /health    liveness
///   GET /players   players with delivery counts per role
///   GET /analysis  same document as the `analyze` command
class AnalysisServer {
 public:
  explicit AnalysisServer(AnalysisContext ctx) : ctx_(ctx) {
    server_.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                 {"Access-Control-Allow-Methods", "GET, OPTIONS"},
                                 {"Access-Control-Allow-Headers", "Content-Type"}});
    server_.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    server_.Get("/health", [this](const httplib::Request&, httplib::Response& res) {
      res.set_content(dump_json({{"status", "ok"}, {"records", ctx_.corpus.size()}}), kJson);
    });
    server_.Get("/players", [this](const httplib::Request&, httplib::Response& res) {
      res.set_content(dump_json(players_json(ctx_.corpus)), kJson);
    });
    server_.Get("/analysis", [this](const httplib::Request& req, httplib::Response& res) {
      try {
        res.set_content(analysis_response(ctx_, request_from_query(req)), kJson);
      } catch (const Error& e) {
        res.status = http_status(e.code());
        res.set_content(dump_json(error_json(e)), kJson);
      } catch (const std::exception& e) {
        res.status = 500;
        res.set_content(dump_json(Json{{"error", {{"code", "internal"}, {"message", e.what()}}}}), kJson);
      }
    });
  }

  /// Binds to `host:port` (port 0 picks a free port). Returns the port or -1.
  int bind(const std::string& host, int port) {
    return port == 0 ? server_.bind_to_any_port(host) : (server_.bind_to_port(host, port) ? port : -1);
  }

  /// Blocks until stop() is called.
  bool listen() { return server_.listen_after_bind(); }
  void stop() { server_.stop(); }
  void wait_until_ready() const { server_.wait_until_ready(); }

 private:
  static constexpr const char* kJson = "application/json";
  AnalysisContext ctx_;
  httplib::Server server_;
};

/// "host:port" from, in order, `flag`, $CRICKET_RULES_BIND, or the default.
inline std::pair<std::string, int> resolve_bind_address(const std::string& flag) {
  std::string spec = flag;
  if (spec.empty())
    if (const char* env = std::getenv("CRICKET_RULES_BIND")) spec = env;
  if (spec.empty()) spec = "127.0.0.1:8080";
  auto colon = spec.rfind(':');
  auto port = colon == std::string::npos ? std::nullopt : text::parse_int<int>(spec.substr(colon + 1));
  if (!port || *port < 0 || *port > 65535)
    throw Error(ErrorCode::InvalidFilter, "bind address must be host:port, got '" + spec + "'");
  return {spec.substr(0, colon), *port};
}

}  // namespace cricket_rules
