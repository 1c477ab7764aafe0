#pragma once

#include <span>
#include <string>
#include <vector>

#include "cctv/camera.hpp"
#include "cctv/graph.hpp"

namespace cctv {

inline constexpr double kDefaultSampleIntervalM = 1.0;
inline constexpr double kMaxSampleIntervalM = 5.0;

struct EdgeExposure {
  EdgeIndex edge = 0;
  std::string edge_id;
  /// Share of samples inside at least one zone.
  double fraction = 0.0;
  /// fraction * length_m
  double exposed_m = 0.0;
  /// Cameras covering at least one sample, sorted.
  std::vector<std::string> camera_ids;
  std::size_t samples = 0;
};

struct ExposureParams {
  double sample_interval_m = kDefaultSampleIntervalM;
};

/// Samples the polyline at equal spacing no larger than sample_interval_m,
/// endpoints included. A sample is exposed when some camera covers it with a
/// lateral buffer of half the street width.
EdgeExposure edge_exposure(const Edge& edge, std::span<const Camera> cameras, double sample_interval_m);

/// Frozen per-edge exposure for one graph and camera set.
class ExposureMap {
 public:
  ExposureMap() = default;
  ExposureMap(ExposureParams params, std::vector<EdgeExposure> edges)
      : params_(params), edges_(std::move(edges)) {}

  const ExposureParams& params() const { return params_; }
  const EdgeExposure& at(EdgeIndex e) const { return edges_.at(e); }
  const std::vector<EdgeExposure>& edges() const { return edges_; }
  std::size_t size() const { return edges_.size(); }

 private:
  ExposureParams params_;
  std::vector<EdgeExposure> edges_;
};

/// edge_exposure over every edge, with cameras pruned by a grid lookup
/// against each edge's bounding box grown by range plus half street width.
ExposureMap annotate_graph(const RoadGraph& graph, std::span<const Camera> cameras, const ExposureParams& params = {});

/// CSV with header edge_id,fraction,exposed_m,camera_ids (ids joined by ';').
std::string exposure_table_csv(const ExposureMap& map);

}  // namespace cctv
