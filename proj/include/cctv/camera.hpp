#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cctv/geo.hpp"
#include "cctv/simd/kernels.hpp"

namespace cctv {

enum class CameraKind { directed, round };
enum class CameraSource { registry, localized, imported };

std::string_view to_string(CameraKind kind);
std::string_view to_string(CameraSource source);
std::optional<CameraKind> parse_camera_kind(std::string_view s);
std::optional<CameraSource> parse_camera_source(std::string_view s);

namespace defaults {
inline constexpr double kDirectedFovDeg = 90.0;
inline constexpr double kDirectedRangeM = 30.0;
inline constexpr double kRoundRangeM = 15.0;
inline constexpr double kMaxRangeM = 200.0;
}  // namespace defaults

struct Camera {
  std::string id;
  geo::GeoPoint position;
  CameraKind kind = CameraKind::round;
  std::optional<double> heading_deg;  // directed only
  std::optional<double> fov_deg;      // directed only
  double range_m = defaults::kRoundRangeM;
  CameraSource source = CameraSource::registry;
  double confidence = 1.0;
  /// Registry properties this library does not interpret, kept verbatim as
  /// serialized JSON values so they survive a load/save cycle.
  std::map<std::string, std::string> extra_properties;
};

Camera make_round_camera(std::string id, geo::GeoPoint position, double range_m = defaults::kRoundRangeM);
Camera make_directed_camera(std::string id, geo::GeoPoint position, double heading_deg,
                            double fov_deg = defaults::kDirectedFovDeg,
                            double range_m = defaults::kDirectedRangeM);

/// Violated camera invariant; `field()` names the offending property.
class InvalidCamera : public std::invalid_argument {
 public:
  InvalidCamera(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

void validate_camera(const Camera& camera);

struct Disc {
  double radius_m;
};

struct Sector {
  double radius_m;
  double heading_deg;
  double fov_deg;
};

struct CoverageZone {
  std::string camera_id;
  geo::GeoPoint center;
  std::variant<Disc, Sector> shape;

  double radius_m() const;
};

CoverageZone coverage_zone(const Camera& camera);

/// Ground-plane coverage test. A non-zero buffer widens the zone the way a
/// street of width 2*buffer does for a pedestrian walking anywhere across it.
bool covers(const CoverageZone& zone, const geo::GeoPoint& p, double lateral_buffer_m);

/// Kernel-ready form of `zone` in its own local frame (center at origin).
simd::CoverageShape coverage_shape(const CoverageZone& zone, double lateral_buffer_m);

/// Closed ring (first vertex repeated at the end) approximating the zone.
/// Discs get ceil(360/step) arc vertices; sectors get ceil(fov/step)+1 arc
/// vertices followed by the apex.
std::vector<geo::GeoPoint> zone_polygon(const CoverageZone& zone, double arc_step_deg);

}  // namespace cctv
