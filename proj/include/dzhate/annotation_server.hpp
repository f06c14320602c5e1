#pragma once

// HTTP front for an annotation Session.
//
//   GET  /next      -> 200 {id, clean_text, raw_text, auto_label, highlights} | 204
//   POST /label     {id, label, action} -> 200 {ok, progress} | 400 | 404 | 409
//   GET  /progress  -> 200 {pending, confirmed, corrected, skipped}
//   GET  /export    -> 200 text/csv | 409 when nothing has been reviewed

#include <httplib.h>

#include <optional>
#include <string>
#include <thread>

#include <nlohmann/json.hpp>

#include "dzhate/annotation.hpp"
#include "dzhate/error.hpp"

namespace dzhate::annotation {

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8765;  // 0 binds an ephemeral port
  std::string cors_origin = "*";
};

inline int status_for(RejectReason r) {
  switch (r) {
    case RejectReason::unknown_id: return 404;
    case RejectReason::already_reviewed: return 409;
    case RejectReason::inconsistent: return 400;
    case RejectReason::invalid: return 400;
  }
  return 400;
}

class Server {
 public:
  Server(Session& session, ServerOptions options) : session_(session), options_(std::move(options)) { routes(); }
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;
  ~Server() { stop(); }

  // Binds and returns the actual port; serving starts with run() or start().
  int bind() {
    if (options_.port == 0) {
      port_ = http_.bind_to_any_port(options_.host);
    } else if (http_.bind_to_port(options_.host, options_.port)) {
      port_ = options_.port;
    } else {
      port_ = -1;
    }
    if (port_ < 0) throw Error("cannot bind " + options_.host + ":" + std::to_string(options_.port));
    return port_;
  }

  int port() const { return port_; }

  // Blocks until stop().
  void run() {
    if (port_ < 0) bind();
    http_.listen_after_bind();
  }

  void start() {
    if (port_ < 0) bind();
    thread_ = std::thread([this] { http_.listen_after_bind(); });
    http_.wait_until_ready();
  }

  void stop() {
    http_.stop();
    if (thread_.joinable()) thread_.join();
  }

 private:
  void reply_json(httplib::Response& res, int status, const nlohmann::ordered_json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  void reply_error(httplib::Response& res, int status, const std::string& message) {
    reply_json(res, status, {{"ok", false}, {"error", message}});
  }

  void routes() {
    http_.set_post_routing_handler([this](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Origin", options_.cors_origin);
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
    });
    http_.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    http_.Get("/next", [this](const httplib::Request&, httplib::Response& res) {
      const auto item = session_.next();
      if (!item) {
        res.status = 204;
        return;
      }
      reply_json(res, 200, item->to_json());
    });

    http_.Get("/progress", [this](const httplib::Request&, httplib::Response& res) {
      reply_json(res, 200, session_.progress().to_json());
    });

    http_.Post("/label", [this](const httplib::Request& req, httplib::Response& res) { label(req, res); });

    http_.Get("/export", [this](const httplib::Request&, httplib::Response& res) {
      try {
        res.status = 200;
        res.set_content(session_.export_csv(), "text/csv; charset=utf-8");
      } catch (const Rejected& e) {
        reply_error(res, 409, e.what());
      } catch (const std::exception& e) {
        reply_error(res, 500, e.what());
      }
    });
  }

  void label(const httplib::Request& req, httplib::Response& res) {
    nlohmann::json body;
    try {
      body = nlohmann::json::parse(req.body);
    } catch (const nlohmann::json::exception&) {
      return reply_error(res, 400, "request body is not JSON");
    }
    if (!body.is_object() || !body.contains("id") || !body["id"].is_string()) {
      return reply_error(res, 400, "missing string field \"id\"");
    }
    const auto action = parse_action(body.value("action", ""));
    if (!action) return reply_error(res, 400, "action must be confirm, correct or skip");
    std::optional<Label> label;
    if (body.contains("label") && !body["label"].is_null()) {
      const auto& l = body["label"];
      if (!l.is_number_integer() || (l != 0 && l != 1)) return reply_error(res, 400, "label must be 0 or 1");
      label = label_from_int(l.get<int>());
    }
    try {
      const Progress p = session_.submit(body["id"].get<std::string>(), label, *action);
      reply_json(res, 200, {{"ok", true}, {"progress", p.to_json()}});
    } catch (const Rejected& e) {
      reply_error(res, status_for(e.reason()), e.what());
    } catch (const std::exception& e) {
      reply_error(res, 500, e.what());
    }
  }

  Session& session_;
  ServerOptions options_;
  httplib::Server http_;
  std::thread thread_;
  int port_ = -1;
};

}  // namespace dzhate::annotation
