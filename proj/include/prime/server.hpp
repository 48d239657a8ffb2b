#ifndef PRIME_SERVER_HPP
#define PRIME_SERVER_HPP

#include <optional>
#include <string>
#include <vector>

#include "httplib.h"
#include "json.hpp"

#include "prime/engine.hpp"

namespace prime {

namespace detail {

inline void send_json(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json; charset=utf-8");
}

inline std::optional<std::size_t> optional_count(const nlohmann::json& body, const char* key) {
  if (!body.contains(key) || body[key].is_null()) return std::nullopt;
  const auto& v = body[key];
  if (!v.is_number_integer() || v.get<int64_t>() < 1) throw ApiError(400, std::string(key) + " must be a positive integer");
  return v.get<std::size_t>();
}

inline nlohmann::json parse_body(const httplib::Request& req) {
  auto body = nlohmann::json::parse(req.body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) throw ApiError(400, "request body must be a JSON object");
  return body;
}

template <class F>
void guarded(httplib::Response& res, F&& f) {
  try {
    f();
  } catch (const ApiError& e) {
    send_json(res, e.status(), {{"error", e.what()}});
  } catch (const nlohmann::json::exception& e) {
    send_json(res, 400, {{"error", e.what()}});
  } catch (const std::exception& e) {
    send_json(res, 500, {{"error", e.what()}});
  }
}

}  // namespace detail

/// Registers the JSON API on `server`. If static_dir is non-empty it is
/// mounted at "/".
inline void install_routes(httplib::Server& server, Engine& engine, const std::string& static_dir = "") {
  using detail::guarded;
  using detail::send_json;

  server.Post("/api/search", [&engine](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto body = detail::parse_body(req);
      SearchRequest sr;
      if (!body.contains("query") || !body["query"].is_string()) throw ApiError(400, "query must be a string");
      sr.query = body["query"].get<std::string>();
      const std::string lang = body.value("lang", std::string("en"));
      auto l = parse_lang(lang);
      if (!l) throw ApiError(400, "unknown lang \"" + lang + "\"");
      sr.lang = *l;
      sr.k = detail::optional_count(body, "k");
      sr.clusters = detail::optional_count(body, "clusters");
      send_json(res, 200, to_json(engine.handle_search(sr), engine));
    });
  });

  server.Post(R"(/api/session/([0-9a-f]+)/recluster)", [&engine](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto body = detail::parse_body(req);
      if (!body.contains("keep") || !body["keep"].is_array()) throw ApiError(400, "keep must be an array of cluster ids");
      std::vector<std::size_t> keep;
      for (const auto& v : body["keep"]) {
        if (!v.is_number_integer() || v.get<int64_t>() < 0) throw ApiError(400, "cluster ids must be non-negative integers");
        keep.push_back(v.get<std::size_t>());
      }
      auto resp = engine.handle_recluster(req.matches[1], keep, detail::optional_count(body, "clusters"));
      send_json(res, 200, to_json(resp, engine));
    });
  });

  server.Get(R"(/api/doc/([^/]+))", [&engine](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const std::string viewer = req.has_param("viewer") ? req.get_param_value("viewer") : "en";
      auto l = parse_lang(viewer);
      if (!l) throw ApiError(400, "unknown viewer language \"" + viewer + "\"");
      send_json(res, 200, engine.handle_doc(req.matches[1], *l));
    });
  });

  server.Get("/api/health", [&engine](const httplib::Request&, httplib::Response& res) {
    auto h = engine.health();
    send_json(res, h["status"] == "ok" ? 200 : 503, h);
  });

  if (!static_dir.empty() && !server.set_mount_point("/", static_dir))
    throw Error("cannot serve static files from " + static_dir);
}

}  // namespace prime

#endif  // PRIME_SERVER_HPP
