#pragma once

#include <span>
#include <string>
#include <string_view>

#include "cctv/json_util.hpp"
#include "cctv/localizer.hpp"
#include "cctv/router.hpp"
#include "cctv/service/state.hpp"

namespace cctv::service {

using json_util::Json;

/// Ring resolution used for the zone outlines served to the map.
inline constexpr double kZoneArcStepDeg = 10.0;

/// "lat,lon" -> GeoPoint; InvalidRequest naming `field` on failure.
geo::GeoPoint parse_lat_lon(std::string_view text, const std::string& field);

/// Registry as a FeatureCollection; each feature gains a "zone_polygon"
/// property holding its coverage ring as [lon, lat] pairs.
Json cameras_geojson(std::span<const Camera> cameras);

Json route_geojson(const Route& route);

/// Body shared by `cctvmap route --json` and GET /route:
/// {"mode", "params", "route": Feature<LineString>, "report"}.
Json route_response(const Snapshot& snapshot, const RouteRequest& request);

/// Plain-text rendering of a route response.
std::string route_text(const Json& response);

Json validation_json(const ValidationReport& report, std::span<const CameraEstimate> estimates);

}  // namespace cctv::service
