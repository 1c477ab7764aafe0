#include "cctv/geo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cctv::geo {

bool GeoPoint::valid() const {
  return std::isfinite(lat) && std::isfinite(lon) && lat >= -90.0 && lat <= 90.0 && lon >= -180.0 &&
         lon <= 180.0;
}

bool GeoPoint::approx_equal(const GeoPoint& other, double eps_deg) const {
  return std::abs(lat - other.lat) <= eps_deg && std::abs(wrap180(lon - other.lon)) <= eps_deg;
}

double LocalXY::norm() const { return std::hypot(x, y); }

double wrap360(double deg) {
  double r = std::fmod(deg, 360.0);
  if (r < 0.0) r += 360.0;
  // fmod of a tiny negative value can round up to exactly 360
  if (r >= 360.0) r = 0.0;
  return r;
}

double wrap180(double deg) {
  double r = wrap360(deg);
  return r > 180.0 ? r - 360.0 : r;
}

double haversine_m(const GeoPoint& a, const GeoPoint& b) {
  const double lat1 = a.lat * kDegToRad;
  const double lat2 = b.lat * kDegToRad;
  const double s1 = std::sin((lat2 - lat1) / 2.0);
  const double s2 = std::sin(wrap180(b.lon - a.lon) * kDegToRad / 2.0);
  const double h = s1 * s1 + std::cos(lat1) * std::cos(lat2) * s2 * s2;
  return 2.0 * kEarthRadiusM * std::asin(std::sqrt(std::min(1.0, h)));
}

LocalXY project_unchecked(const GeoPoint& origin, const GeoPoint& p) {
  return {kEarthRadiusM * wrap180(p.lon - origin.lon) * std::cos(origin.lat * kDegToRad) * kDegToRad,
          kEarthRadiusM * (p.lat - origin.lat) * kDegToRad};
}

GeoPoint unproject_unchecked(const GeoPoint& origin, const LocalXY& xy) {
  const double lat = origin.lat + xy.y / kMetersPerDegree;
  const double lon = wrap180(origin.lon + xy.x / (kMetersPerDegree * std::cos(origin.lat * kDegToRad)));
  return {lat, lon};
}

namespace {

[[noreturn]] void out_of_range(double meters) {
  std::ostringstream os;
  os << "point " << meters << " m from origin exceeds the " << kProjectionLimitM << " m local frame";
  throw GeoError(GeoErrorKind::OutOfProjectionRange, os.str());
}

}  // namespace

LocalXY project_local(const GeoPoint& origin, const GeoPoint& p) {
  const double d = haversine_m(origin, p);
  if (d > kProjectionLimitM) out_of_range(d);
  return project_unchecked(origin, p);
}

GeoPoint unproject_local(const GeoPoint& origin, const LocalXY& xy) {
  const double d = xy.norm();
  if (!(d <= kProjectionLimitM)) out_of_range(d);
  return unproject_unchecked(origin, xy);
}

GeoPoint destination_point(const GeoPoint& origin, double bearing_deg, double distance_m) {
  if (!(distance_m >= 0.0)) {
    throw GeoError(GeoErrorKind::DegenerateInput, "distance_m must be non-negative");
  }
  if (distance_m > kProjectionLimitM) out_of_range(distance_m);
  const double theta = bearing_deg * kDegToRad;
  return unproject_unchecked(origin, {distance_m * std::sin(theta), distance_m * std::cos(theta)});
}

double initial_bearing_deg(const GeoPoint& a, const GeoPoint& b) {
  if (a.approx_equal(b)) {
    throw GeoError(GeoErrorKind::DegenerateInput, "bearing undefined between coincident points");
  }
  if (haversine_m(a, b) <= kProjectionLimitM) {
    const LocalXY xy = project_unchecked(a, b);
    return wrap360(std::atan2(xy.x, xy.y) * kRadToDeg);
  }
  const double lat1 = a.lat * kDegToRad;
  const double lat2 = b.lat * kDegToRad;
  const double dlon = wrap180(b.lon - a.lon) * kDegToRad;
  const double y = std::sin(dlon) * std::cos(lat2);
  const double x = std::cos(lat1) * std::sin(lat2) - std::sin(lat1) * std::cos(lat2) * std::cos(dlon);
  return wrap360(std::atan2(y, x) * kRadToDeg);
}

}  // namespace cctv::geo
