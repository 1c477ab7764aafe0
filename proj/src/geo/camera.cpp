#include "cctv/camera.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cctv {

std::string_view to_string(CameraKind kind) { return kind == CameraKind::directed ? "directed" : "round"; }

std::string_view to_string(CameraSource source) {
  switch (source) {
    case CameraSource::registry: return "registry";
    case CameraSource::localized: return "localized";
    case CameraSource::imported: return "imported";
  }
  return "registry";
}

std::optional<CameraKind> parse_camera_kind(std::string_view s) {
  if (s == "directed") return CameraKind::directed;
  if (s == "round") return CameraKind::round;
  return std::nullopt;
}

std::optional<CameraSource> parse_camera_source(std::string_view s) {
  if (s == "registry") return CameraSource::registry;
  if (s == "localized") return CameraSource::localized;
  if (s == "imported") return CameraSource::imported;
  return std::nullopt;
}

Camera make_round_camera(std::string id, geo::GeoPoint position, double range_m) {
  Camera c;
  c.id = std::move(id);
  c.position = position;
  c.kind = CameraKind::round;
  c.range_m = range_m;
  return c;
}

Camera make_directed_camera(std::string id, geo::GeoPoint position, double heading_deg, double fov_deg,
                            double range_m) {
  Camera c;
  c.id = std::move(id);
  c.position = position;
  c.kind = CameraKind::directed;
  c.heading_deg = heading_deg;
  c.fov_deg = fov_deg;
  c.range_m = range_m;
  return c;
}

void validate_camera(const Camera& camera) {
  if (camera.id.empty()) throw InvalidCamera("id", "must be a non-empty string");
  if (!camera.position.valid()) throw InvalidCamera("position", "latitude/longitude out of range");
  if (!(camera.range_m > 0.0 && camera.range_m <= defaults::kMaxRangeM)) {
    throw InvalidCamera("range_m", "must be in (0, 200] meters");
  }
  if (!(camera.confidence >= 0.0 && camera.confidence <= 1.0)) {
    throw InvalidCamera("confidence", "must be in [0, 1]");
  }
  if (camera.kind == CameraKind::directed) {
    if (!camera.heading_deg) throw InvalidCamera("heading_deg", "required for directed cameras");
    if (!(*camera.heading_deg >= 0.0 && *camera.heading_deg < 360.0)) {
      throw InvalidCamera("heading_deg", "must be in [0, 360)");
    }
    if (!camera.fov_deg) throw InvalidCamera("fov_deg", "required for directed cameras");
    if (!(*camera.fov_deg > 0.0 && *camera.fov_deg <= 180.0)) {
      throw InvalidCamera("fov_deg", "must be in (0, 180] for directed cameras");
    }
  } else {
    if (camera.heading_deg) throw InvalidCamera("heading_deg", "not allowed for round cameras");
    if (camera.fov_deg) throw InvalidCamera("fov_deg", "not allowed for round cameras");
  }
}

double CoverageZone::radius_m() const {
  return std::visit([](const auto& s) { return s.radius_m; }, shape);
}

CoverageZone coverage_zone(const Camera& camera) {
  validate_camera(camera);
  CoverageZone zone{camera.id, camera.position, Disc{camera.range_m}};
  if (camera.kind == CameraKind::directed) {
    zone.shape = Sector{camera.range_m, *camera.heading_deg, *camera.fov_deg};
  }
  return zone;
}

simd::CoverageShape coverage_shape(const CoverageZone& zone, double buffer) {
  if (const auto* sector = std::get_if<Sector>(&zone.shape)) {
    return simd::make_sector_shape(sector->radius_m, buffer, sector->heading_deg, sector->fov_deg);
  }
  return simd::make_disc_shape(std::get<Disc>(zone.shape).radius_m, buffer);
}

bool covers(const CoverageZone& zone, const geo::GeoPoint& p, double lateral_buffer_m) {
  const double buffer = std::max(0.0, lateral_buffer_m);
  // Anything past the local frame is far outside every admissible zone.
  if (geo::haversine_m(zone.center, p) > geo::kProjectionLimitM) return false;
  const geo::LocalXY xy = geo::project_unchecked(zone.center, p);
  return simd::covers_point(coverage_shape(zone, buffer), xy.x, xy.y);
}

std::vector<geo::GeoPoint> zone_polygon(const CoverageZone& zone, double arc_step_deg) {
  if (!(arc_step_deg > 0.0 && arc_step_deg <= 30.0)) {
    throw std::invalid_argument("arc_step_deg must be in (0, 30]");
  }
  std::vector<geo::GeoPoint> ring;
  const auto arc_point = [&](double radius, double bearing) {
    const double theta = bearing * geo::kDegToRad;
    return geo::unproject_unchecked(zone.center, {radius * std::sin(theta), radius * std::cos(theta)});
  };

  const auto* sector = std::get_if<Sector>(&zone.shape);
  if (sector == nullptr || sector->fov_deg >= 360.0) {
    const double radius = zone.radius_m();
    const auto n = static_cast<int>(std::ceil(360.0 / arc_step_deg));
    for (int i = 0; i < n; ++i) ring.push_back(arc_point(radius, 360.0 * i / n));
  } else {
    const auto n = static_cast<int>(std::ceil(sector->fov_deg / arc_step_deg));
    const double start = sector->heading_deg - sector->fov_deg / 2.0;
    for (int i = 0; i <= n; ++i) ring.push_back(arc_point(sector->radius_m, start + sector->fov_deg * i / n));
    ring.push_back(zone.center);
  }
  ring.push_back(ring.front());
  return ring;
}

}  // namespace cctv
