#pragma once

// HTTP/JSON front end for ModelPool.
//
//   POST /v1/apps           {summary, dataset_ref}        -> 202 {app_id, state}
//   GET  /v1/apps/{app_id}                                -> 200 status | 404
//   POST /v1/classify       {app_id?, features}           -> 200 {labels, model} | 503
//   POST /v1/decide         {app_id, labels | scalar}     -> 200 outcome
//
// The app id may also be sent as the X-App-Id header.

#include <string>

#include "chameleon/serving.hpp"
#include "httplib.h"

namespace chameleon {

inline int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotFound: return 404;
    case ErrorCode::Conflict: return 409;
    case ErrorCode::Unavailable: return 503;
    case ErrorCode::NumericFailure:
    case ErrorCode::Io: return 500;
    default: return 400;
  }
}

class HttpFrontend {
 public:
  explicit HttpFrontend(ModelPool& pool) : pool_(pool) { routes(); }

  /// Binds to `port` (0 picks a free one) and returns the bound port, or -1.
  int bind(const std::string& host, int port) {
    if (port == 0) return server_.bind_to_any_port(host);
    return server_.bind_to_port(host, port) ? port : -1;
  }

  /// Blocks until stop() is called.
  bool listen_after_bind() { return server_.listen_after_bind(); }
  void stop() { server_.stop(); }
  void wait_until_ready() const { server_.wait_until_ready(); }

 private:
  static void reply(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  static void reply_error(httplib::Response& res, const Error& e) {
    reply(res, http_status(e.code()), {{"error", e.what()}, {"code", to_string(e.code())}});
  }

  template <typename F>
  static httplib::Server::Handler guarded(F f) {
    return [f](const httplib::Request& req, httplib::Response& res) {
      try {
        f(req, res);
      } catch (const Error& e) {
        reply_error(res, e);
      } catch (const json::exception& e) {
        reply(res, 400, {{"error", std::string("bad request body: ") + e.what()}, {"code", "invalid_input"}});
      } catch (const std::exception& e) {
        reply(res, 500, {{"error", e.what()}, {"code", "internal"}});
      }
    };
  }

  static json body_of(const httplib::Request& req) {
    try {
      return json::parse(req.body);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::InvalidInput, std::string("request body is not valid JSON: ") + e.what());
    }
  }

  static std::optional<std::string> app_id_of(const httplib::Request& req, const json& body) {
    if (body.contains("app_id") && !body.at("app_id").is_null()) return body.at("app_id").get<std::string>();
    if (req.has_header("X-App-Id")) return req.get_header_value("X-App-Id");
    return std::nullopt;
  }

  void routes() {
    server_.Post("/v1/apps", guarded([this](const httplib::Request& req, httplib::Response& res) {
                   const json body = body_of(req);
                   CHAMELEON_REQUIRE(body.contains("summary") && body.contains("dataset_ref"), ErrorCode::InvalidInput,
                                     "body needs summary and dataset_ref");
                   const auto summary = summary_from_json(body.at("summary"));
                   const auto st = pool_.register_app(summary, body.at("dataset_ref").get<std::string>());
                   reply(res, 202, {{"app_id", st.app_id}, {"state", to_string(st.state)}});
                 }));

    server_.Get(R"(/v1/apps/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
                  reply(res, 200, pool_.get_status(req.matches[1]).to_json());
                }));

    server_.Post("/v1/classify", guarded([this](const httplib::Request& req, httplib::Response& res) {
                   const json body = body_of(req);
                   const auto features = body.at("features").get<std::vector<double>>();
                   reply(res, 200, pool_.classify(app_id_of(req, body), features).to_json());
                 }));

    server_.Post("/v1/decide", guarded([this](const httplib::Request& req, httplib::Response& res) {
                   const json body = body_of(req);
                   const auto app = app_id_of(req, body);
                   CHAMELEON_REQUIRE(app.has_value(), ErrorCode::InvalidInput, "app_id is required");
                   reply(res, 200, to_json(pool_.decide_for(*app, output_from_json(body))));
                 }));
  }

  ModelPool& pool_;
  httplib::Server server_;
};

}  // namespace chameleon
