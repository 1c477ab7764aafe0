#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cctv/exposure.hpp"
#include "cctv/graph.hpp"

namespace cctv {

enum class RouteMode { standard, privacy, safety };

std::string_view to_string(RouteMode mode);
/// "default" | "privacy" | "safety"
std::optional<RouteMode> parse_route_mode(std::string_view s);

struct RouteParams {
  double lambda = 10.0;            // privacy weight on the exposed share
  double beta = 0.7;               // safety discount on the exposed share, < 1
  double camera_penalty_m = 50.0;  // privacy surcharge per camera on an edge
};

/// Request field outside its documented range; `field()` names it.
class InvalidRequest : public std::invalid_argument {
 public:
  InvalidRequest(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

void validate_params(const RouteParams& params);

struct RouteRequest {
  geo::GeoPoint from;
  geo::GeoPoint to;
  RouteMode mode = RouteMode::standard;
  RouteParams params;
};

class NoPath : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SnapFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One traversed piece of an edge, between two fractions of its length.
struct RouteLeg {
  EdgeIndex edge = 0;
  std::string edge_id;
  bool forward = true;
  double from_fraction = 0.0;
  double to_fraction = 1.0;
  double length_m = 0.0;
  double cost = 0.0;

  double portion() const { return from_fraction < to_fraction ? to_fraction - from_fraction : from_fraction - to_fraction; }
};

struct Route {
  std::vector<RouteLeg> legs;
  std::vector<geo::GeoPoint> geometry;
  double total_m = 0.0;
  double total_cost = 0.0;
  SnapResult origin;
  SnapResult destination;
};

struct ExposureReport {
  std::size_t distinct_cameras = 0;
  double exposed_m = 0.0;
  double total_m = 0.0;
  double exposure_share = 0.0;
  double detour_ratio = 1.0;
};

/// Meter-equivalent traversal cost of a whole edge, always > 0.
///   default: length
///   privacy: length * (1 + lambda * fraction) + penalty * |cameras on edge|
///   safety:  max(length * (1 - beta * fraction), 0.05 * length)
double edge_cost(const Edge& edge, const EdgeExposure& exposure, RouteMode mode, const RouteParams& params);

/// Minimum-cost route between the snapped endpoints. Partial first/last edges
/// cost their share of the whole-edge cost. Throws NoPath, SnapFailure and
/// InvalidRequest.
Route shortest_route(const RoadGraph& graph, const ExposureMap& exposure, const RouteRequest& request);

/// Union of cameras over traversed legs and prorated exposed length.
/// detour_ratio is left at 1.
ExposureReport exposure_report(const Route& route, const ExposureMap& exposure);

struct RouteResult {
  Route route;
  ExposureReport report;
};

/// shortest_route plus its exposure report, with the detour ratio measured
/// against a default-mode route between the same endpoints.
RouteResult route(const RoadGraph& graph, const ExposureMap& exposure, const RouteRequest& request);

}  // namespace cctv
