#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cctv/camera.hpp"
#include "cctv/geo.hpp"

namespace cctv {

/// One mobile-collector sighting: GPS fix, bearing to the target after the
/// pan/tilt head centred it, and the laser range to it.
struct Observation {
  std::string id;
  double timestamp = 0.0;  // seconds since epoch
  geo::GeoPoint observer;
  double gps_sigma_m = 0.0;
  double heading_deg = 0.0;
  double range_m = 0.0;
  double range_sigma_m = 0.0;
  CameraKind kind = CameraKind::round;
  double score = 1.0;
  std::string image_ref;
};

class InvalidObservation : public std::invalid_argument {
 public:
  InvalidObservation(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

void validate_observation(const Observation& obs);

struct LocalizerConfig {
  double heading_sigma_deg = 1.0;
};

struct CameraEstimate {
  geo::GeoPoint position;
  double position_sigma_m = 0.0;
  CameraKind kind = CameraKind::round;
  double score = 0.0;
  std::vector<std::string> provenance;
  /// Bearing from the camera back to the observer. A camera is only
  /// recognisable from its front, so this approximates its mounting heading.
  double facing_deg = 0.0;
};

/// Places the target at range/bearing from the observer and propagates
/// GPS, range and heading noise into a position sigma.
CameraEstimate localize(const Observation& obs, const LocalizerConfig& config = {});

inline constexpr double kDefaultClusterEpsM = 8.0;
inline constexpr double kDefaultValidateRadiusM = 15.0;

/// Single-linkage components (pairwise distance <= eps_m). Each component
/// lists member indices ascending; components are ordered by first member.
std::vector<std::vector<std::size_t>> cluster_partition(std::span<const CameraEstimate> estimates, double eps_m);

/// One localized camera per component at the inverse-variance weighted
/// centroid; kind by majority vote (ties go to directed); confidence is the
/// best member score.
std::vector<Camera> cluster(std::span<const CameraEstimate> estimates, double eps_m = kDefaultClusterEpsM);

enum class ValidationStatus { confirmed, unconfirmed };

struct RegistryCheck {
  std::string camera_id;
  ValidationStatus status = ValidationStatus::unconfirmed;
  std::optional<double> nearest_distance_m;  // absent with no estimates
};

struct ValidationReport {
  std::vector<RegistryCheck> cameras;  // registry order
  std::vector<std::size_t> novel;      // indices into the estimates
  std::size_t confirmed() const;
  std::size_t unconfirmed() const;
};

ValidationReport validate_registry(std::span<const Camera> registry, std::span<const CameraEstimate> estimates,
                                   double radius_m = kDefaultValidateRadiusM);

}  // namespace cctv
