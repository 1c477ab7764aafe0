#pragma once

#include <stdexcept>
#include <string>

namespace cctv::geo {

inline constexpr double kEarthRadiusM = 6371000.0;
/// Beyond this distance the equirectangular local frame is not trusted.
inline constexpr double kProjectionLimitM = 5000.0;
inline constexpr double kCoordEpsilonDeg = 1e-9;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDegToRad = kPi / 180.0;
inline constexpr double kRadToDeg = 180.0 / kPi;
/// Meters per degree of latitude on the sphere.
inline constexpr double kMetersPerDegree = kEarthRadiusM * kDegToRad;

struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  bool valid() const;
  /// Component-wise comparison at kCoordEpsilonDeg.
  bool approx_equal(const GeoPoint& other, double eps_deg = kCoordEpsilonDeg) const;
};

/// Meters east (x) and north (y) of a declared origin.
struct LocalXY {
  double x = 0.0;
  double y = 0.0;

  double norm() const;
};

enum class GeoErrorKind { OutOfProjectionRange, DegenerateInput, InvalidPoint };

class GeoError : public std::runtime_error {
 public:
  GeoError(GeoErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  GeoErrorKind kind() const { return kind_; }

 private:
  GeoErrorKind kind_;
};

double haversine_m(const GeoPoint& a, const GeoPoint& b);

/// Equirectangular projection around `origin`. Throws OutOfProjectionRange
/// when `p` is farther than kProjectionLimitM.
LocalXY project_local(const GeoPoint& origin, const GeoPoint& p);
GeoPoint unproject_local(const GeoPoint& origin, const LocalXY& xy);

/// Same formula as project_local without the range check. Used by bulk
/// kernels that prune by distance themselves.
LocalXY project_unchecked(const GeoPoint& origin, const GeoPoint& p);
GeoPoint unproject_unchecked(const GeoPoint& origin, const LocalXY& xy);

/// Bearing clockwise from true north, distance in meters.
GeoPoint destination_point(const GeoPoint& origin, double bearing_deg, double distance_m);

/// Result in [0, 360). Uses the local frame inside kProjectionLimitM so it
/// inverts destination_point exactly; great-circle initial bearing beyond.
double initial_bearing_deg(const GeoPoint& a, const GeoPoint& b);

/// Wrap an angle to [0, 360).
double wrap360(double deg);
/// Wrap an angle to (-180, 180].
double wrap180(double deg);

}  // namespace cctv::geo
