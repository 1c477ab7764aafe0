#include "cctv/service/api.hpp"

#include <charconv>
#include <iomanip>
#include <sstream>

#include "cctv/registry_io.hpp"

namespace cctv::service {

geo::GeoPoint parse_lat_lon(std::string_view text, const std::string& field) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) throw InvalidRequest(field, "expected \"lat,lon\"");
  const auto parse = [&](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
      throw InvalidRequest(field, "expected \"lat,lon\" with numeric values");
    }
    return v;
  };
  const geo::GeoPoint p{parse(text.substr(0, comma)), parse(text.substr(comma + 1))};
  if (!p.valid()) throw InvalidRequest(field, "latitude/longitude out of range");
  return p;
}

namespace {

Json ring_json(const std::vector<geo::GeoPoint>& pts) {
  Json ring = Json::array();
  for (const auto& p : pts) ring.push_back({p.lon, p.lat});
  return ring;
}

}  // namespace

Json cameras_geojson(std::span<const Camera> cameras) {
  Json doc = Json::object();
  doc["type"] = "FeatureCollection";
  doc["features"] = Json::array();
  for (const Camera& c : cameras) {
    Json f = camera_to_feature(c);
    f["properties"]["zone_polygon"] = ring_json(zone_polygon(coverage_zone(c), kZoneArcStepDeg));
    doc["features"].push_back(std::move(f));
  }
  return doc;
}

Json route_geojson(const Route& route) {
  Json edge_ids = Json::array();
  for (const RouteLeg& leg : route.legs) edge_ids.push_back(leg.edge_id);
  Json f = Json::object();
  f["type"] = "Feature";
  f["geometry"] = {{"type", "LineString"}, {"coordinates", ring_json(route.geometry)}};
  f["properties"] = {{"edge_ids", std::move(edge_ids)}, {"total_m", route.total_m}, {"total_cost", route.total_cost}};
  return f;
}

Json route_response(const Snapshot& snapshot, const RouteRequest& request) {
  const RouteResult result = route(*snapshot.graph, snapshot.exposure, request);
  Json body = Json::object();
  body["mode"] = std::string(to_string(request.mode));
  body["params"] = {{"lambda", request.params.lambda},
                    {"beta", request.params.beta},
                    {"penalty", request.params.camera_penalty_m}};
  body["route"] = route_geojson(result.route);
  body["report"] = {{"distinct_cameras", result.report.distinct_cameras},
                    {"exposed_m", result.report.exposed_m},
                    {"total_m", result.report.total_m},
                    {"exposure_share", result.report.exposure_share},
                    {"detour_ratio", result.report.detour_ratio}};
  return body;
}

std::string route_text(const Json& response) {
  const Json& r = response.at("report");
  std::ostringstream os;
  os << std::fixed;
  os << "mode: " << response.at("mode").get<std::string>() << '\n';
  os << std::setprecision(2) << "total_m: " << r.at("total_m").get<double>() << '\n';
  os << "exposed_m: " << r.at("exposed_m").get<double>() << '\n';
  os << "distinct_cameras: " << r.at("distinct_cameras").get<std::size_t>() << '\n';
  os << std::setprecision(4) << "detour_ratio: " << r.at("detour_ratio").get<double>() << '\n';
  os << "exposure_share: " << r.at("exposure_share").get<double>() << '\n';
  os << std::setprecision(2)
     << "total_cost: " << response.at("route").at("properties").at("total_cost").get<double>() << '\n';
  os << "edges: " << response.at("route").at("properties").at("edge_ids").size() << '\n';
  return os.str();
}

Json validation_json(const ValidationReport& report, std::span<const CameraEstimate> estimates) {
  Json cams = Json::array();
  for (const RegistryCheck& c : report.cameras) {
    cams.push_back({{"id", c.camera_id},
                    {"status", c.status == ValidationStatus::confirmed ? "confirmed" : "unconfirmed"},
                    {"nearest_distance_m", c.nearest_distance_m ? Json(*c.nearest_distance_m) : Json(nullptr)}});
  }
  Json novel = Json::array();
  for (std::size_t i : report.novel) {
    const CameraEstimate& e = estimates[i];
    novel.push_back({{"lat", e.position.lat},
                     {"lon", e.position.lon},
                     {"position_sigma_m", e.position_sigma_m},
                     {"kind", std::string(to_string(e.kind))},
                     {"provenance", e.provenance}});
  }
  return {{"confirmed", report.confirmed()},
          {"unconfirmed", report.unconfirmed()},
          {"cameras", std::move(cams)},
          {"novel", std::move(novel)}};
}

}  // namespace cctv::service
