#include "cctv/service/http_server.hpp"

#include <charconv>

#include "cctv/registry_io.hpp"
#include "cctv/service/api.hpp"

namespace cctv::service {

namespace {

constexpr const char* kJson = "application/json";

void send_error(httplib::Response& res, int status, const std::string& message, const std::string& field = {}) {
  Json body = {{"error", message}};
  if (!field.empty()) body["field"] = field;
  res.status = status;
  res.set_content(body.dump(), kJson);
}

double number_param(const httplib::Request& req, const char* name, double fallback) {
  if (!req.has_param(name)) return fallback;
  const std::string raw = req.get_param_value(name);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
  if (raw.empty() || ec != std::errc() || ptr != raw.data() + raw.size()) {
    throw InvalidRequest(name, "expected a number");
  }
  return v;
}

RouteRequest parse_route_query(const httplib::Request& req, const AppConfig& config) {
  for (const char* required : {"from", "to"}) {
    if (!req.has_param(required)) throw InvalidRequest(required, "missing query parameter");
  }
  RouteRequest r;
  r.from = parse_lat_lon(req.get_param_value("from"), "from");
  r.to = parse_lat_lon(req.get_param_value("to"), "to");
  if (req.has_param("mode")) {
    const auto mode = parse_route_mode(req.get_param_value("mode"));
    if (!mode) throw InvalidRequest("mode", "expected default|privacy|safety");
    r.mode = *mode;
  }
  r.params.lambda = number_param(req, "lambda", config.lambda);
  r.params.beta = number_param(req, "beta", config.beta);
  r.params.camera_penalty_m = number_param(req, "penalty", config.camera_penalty_m);
  validate_params(r.params);
  return r;
}

}  // namespace

void install_routes(httplib::Server& server, StateStore& store) {
  const std::string origin = store.config().cors_origin;

  server.set_post_routing_handler([origin](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", origin);
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
  });

  server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr) {
    send_error(res, 500, "internal error");
  });

  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.status == 404 && res.body.empty()) send_error(res, 404, "not found");
  });

  server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  server.Get("/health", [](const httplib::Request&, httplib::Response& res) { res.set_content("ok", "text/plain"); });

  server.Get("/cameras", [&store](const httplib::Request&, httplib::Response& res) {
    const auto snap = store.snapshot();
    res.set_content(cameras_geojson(snap->cameras).dump(), kJson);
  });

  server.Get("/route", [&store](const httplib::Request& req, httplib::Response& res) {
    try {
      const RouteRequest request = parse_route_query(req, store.config());
      const auto snap = store.snapshot();
      res.set_content(route_response(*snap, request).dump(), kJson);
    } catch (const InvalidRequest& e) {
      send_error(res, 400, e.what(), e.field());
    } catch (const NoPath& e) {
      send_error(res, 422, e.what());
    } catch (const SnapFailure& e) {
      send_error(res, 422, e.what());
    }
  });

  server.Post("/cameras", [&store](const httplib::Request& req, httplib::Response& res) {
    try {
      const Json feature = json_util::parse(req.body);
      Camera added = store.add_camera(camera_from_feature(feature, "body"));
      res.status = 201;
      res.set_content(camera_to_feature(added).dump(), kJson);
    } catch (const InvalidCamera& e) {
      send_error(res, 400, e.what(), e.field());
    } catch (const InputError& e) {
      send_error(res, 400, e.what(), "body");
    }
  });
}

}  // namespace cctv::service
