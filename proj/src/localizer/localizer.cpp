#include "cctv/localizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cctv {

void validate_observation(const Observation& obs) {
  if (!obs.observer.valid()) throw InvalidObservation("lat/lon", "observer position out of range");
  if (!(obs.range_m > 0.0 && obs.range_m <= defaults::kMaxRangeM)) {
    throw InvalidObservation("range_m", "must be in (0, 200] meters");
  }
  if (!(obs.gps_sigma_m >= 0.0)) throw InvalidObservation("gps_sigma_m", "must be non-negative");
  if (!(obs.range_sigma_m >= 0.0)) throw InvalidObservation("range_sigma_m", "must be non-negative");
  if (!(obs.heading_deg >= 0.0 && obs.heading_deg < 360.0)) {
    throw InvalidObservation("heading_deg", "must be in [0, 360)");
  }
  if (!(obs.score >= 0.0 && obs.score <= 1.0)) throw InvalidObservation("score", "must be in [0, 1]");
}

CameraEstimate localize(const Observation& obs, const LocalizerConfig& config) {
  validate_observation(obs);
  CameraEstimate e;
  e.position = geo::destination_point(obs.observer, obs.heading_deg, obs.range_m);
  const double lateral = obs.range_m * std::sin(config.heading_sigma_deg * geo::kDegToRad);
  e.position_sigma_m = std::sqrt(obs.gps_sigma_m * obs.gps_sigma_m + obs.range_sigma_m * obs.range_sigma_m +
                                 lateral * lateral);
  e.kind = obs.kind;
  e.score = obs.score;
  e.provenance = {obs.id};
  e.facing_deg = geo::wrap360(obs.heading_deg + 180.0);
  return e;
}

namespace {

struct DisjointSet {
  std::vector<std::size_t> parent;
  explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// Zero-sigma estimates would dominate with infinite weight.
constexpr double kMinSigmaM = 1e-3;

}  // namespace

std::vector<std::vector<std::size_t>> cluster_partition(std::span<const CameraEstimate> estimates, double eps_m) {
  if (!(eps_m > 0.0)) throw std::invalid_argument("eps_m must be positive");
  DisjointSet ds(estimates.size());
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    for (std::size_t j = i + 1; j < estimates.size(); ++j) {
      if (geo::haversine_m(estimates[i].position, estimates[j].position) <= eps_m) ds.unite(i, j);
    }
  }
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> slot(estimates.size(), SIZE_MAX);
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    const std::size_t root = ds.find(i);
    if (slot[root] == SIZE_MAX) {
      slot[root] = groups.size();
      groups.emplace_back();
    }
    groups[slot[root]].push_back(i);
  }
  return groups;
}

std::vector<Camera> cluster(std::span<const CameraEstimate> estimates, double eps_m) {
  std::vector<Camera> cameras;
  for (const auto& members : cluster_partition(estimates, eps_m)) {
    const geo::GeoPoint origin = estimates[members.front()].position;
    double wx = 0.0, wy = 0.0, wsum = 0.0, fx = 0.0, fy = 0.0, best_score = 0.0;
    std::size_t directed = 0;
    for (std::size_t i : members) {
      const CameraEstimate& e = estimates[i];
      const double sigma = std::max(e.position_sigma_m, kMinSigmaM);
      const double w = 1.0 / (sigma * sigma);
      const geo::LocalXY xy = geo::project_unchecked(origin, e.position);
      wx += w * xy.x;
      wy += w * xy.y;
      wsum += w;
      fx += std::sin(e.facing_deg * geo::kDegToRad);
      fy += std::cos(e.facing_deg * geo::kDegToRad);
      best_score = std::max(best_score, e.score);
      directed += e.kind == CameraKind::directed ? 1 : 0;
    }
    const geo::GeoPoint centroid = geo::unproject_unchecked(origin, {wx / wsum, wy / wsum});
    const std::string id = "loc-" + (estimates[members.front()].provenance.empty()
                                         ? std::to_string(cameras.size())
                                         : estimates[members.front()].provenance.front());
    Camera c;
    if (2 * directed >= members.size()) {
      // Opposing sightings can cancel; fall back to the first one's facing.
      const double heading = (std::hypot(fx, fy) > 1e-9) ? geo::wrap360(std::atan2(fx, fy) * geo::kRadToDeg)
                                                         : estimates[members.front()].facing_deg;
      c = make_directed_camera(id, centroid, heading);
    } else {
      c = make_round_camera(id, centroid);
    }
    c.source = CameraSource::localized;
    c.confidence = best_score;
    cameras.push_back(std::move(c));
  }
  return cameras;
}

std::size_t ValidationReport::confirmed() const {
  return static_cast<std::size_t>(std::count_if(cameras.begin(), cameras.end(), [](const RegistryCheck& c) {
    return c.status == ValidationStatus::confirmed;
  }));
}

std::size_t ValidationReport::unconfirmed() const { return cameras.size() - confirmed(); }

ValidationReport validate_registry(std::span<const Camera> registry, std::span<const CameraEstimate> estimates,
                                   double radius_m) {
  if (!(radius_m > 0.0)) throw std::invalid_argument("radius_m must be positive");
  ValidationReport report;
  std::vector<bool> matched(estimates.size(), false);
  for (const Camera& cam : registry) {
    RegistryCheck check{cam.id, ValidationStatus::unconfirmed, std::nullopt};
    for (std::size_t i = 0; i < estimates.size(); ++i) {
      const double d = geo::haversine_m(cam.position, estimates[i].position);
      if (!check.nearest_distance_m || d < *check.nearest_distance_m) check.nearest_distance_m = d;
      if (d <= radius_m) matched[i] = true;
    }
    if (check.nearest_distance_m && *check.nearest_distance_m <= radius_m) {
      check.status = ValidationStatus::confirmed;
    }
    report.cameras.push_back(std::move(check));
  }
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    if (!matched[i]) report.novel.push_back(i);
  }
  return report;
}

}  // namespace cctv
