#include "cctv/exposure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "cctv/simd/kernels.hpp"

namespace cctv {

namespace {

std::vector<geo::GeoPoint> sample_polyline(const Edge& edge, double interval) {
  const double total = edge.geometry_length_m;
  const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(total / interval)));
  std::vector<geo::GeoPoint> samples;
  samples.reserve(n + 1);

  const auto& pts = edge.geometry;
  std::size_t seg = 0;
  double seg_start = 0.0;
  double seg_len = geo::haversine_m(pts[0], pts[1]);
  for (std::size_t i = 0; i <= n; ++i) {
    const double target = (i == n) ? total : total * static_cast<double>(i) / static_cast<double>(n);
    while (seg + 2 < pts.size() && seg_start + seg_len < target) {
      seg_start += seg_len;
      ++seg;
      seg_len = geo::haversine_m(pts[seg], pts[seg + 1]);
    }
    const double t = seg_len > 0.0 ? std::clamp((target - seg_start) / seg_len, 0.0, 1.0) : 0.0;
    const geo::GeoPoint& a = pts[seg];
    const geo::GeoPoint& b = pts[seg + 1];
    samples.push_back({a.lat + t * (b.lat - a.lat), geo::wrap180(a.lon + t * geo::wrap180(b.lon - a.lon))});
  }
  return samples;
}

}  // namespace

EdgeExposure edge_exposure(const Edge& edge, std::span<const Camera> cameras, double sample_interval_m) {
  if (!(sample_interval_m > 0.0 && sample_interval_m <= kMaxSampleIntervalM)) {
    throw std::invalid_argument("sample_interval_m must be in (0, 5]");
  }
  EdgeExposure out;
  out.edge_id = edge.id;
  const std::vector<geo::GeoPoint> samples = sample_polyline(edge, sample_interval_m);
  out.samples = samples.size();
  const double buffer = edge.width_m / 2.0;

  std::vector<std::uint8_t> exposed(samples.size(), 0), hit(samples.size());
  std::vector<double> xs(samples.size()), ys(samples.size());
  for (const Camera& cam : cameras) {
    const CoverageZone zone = coverage_zone(cam);
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const geo::LocalXY xy = geo::project_unchecked(zone.center, samples[i]);
      xs[i] = xy.x;
      ys[i] = xy.y;
    }
    simd::coverage_mask(coverage_shape(zone, buffer), xs, ys, hit);
    bool any = false;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      exposed[i] |= hit[i];
      any = any || hit[i] != 0;
    }
    if (any) out.camera_ids.push_back(cam.id);
  }
  std::sort(out.camera_ids.begin(), out.camera_ids.end());
  out.camera_ids.erase(std::unique(out.camera_ids.begin(), out.camera_ids.end()), out.camera_ids.end());

  const auto count = static_cast<std::size_t>(std::count(exposed.begin(), exposed.end(), std::uint8_t{1}));
  out.fraction = static_cast<double>(count) / static_cast<double>(samples.size());
  out.exposed_m = out.fraction * edge.length_m;
  return out;
}

namespace {

class CameraGrid {
 public:
  CameraGrid(std::span<const Camera> cameras, double reference_lat) : cameras_(cameras) {
    cell_lat_ = kGridCellM / geo::kMetersPerDegree;
    cell_lon_ = cell_lat_ / std::cos(std::clamp(reference_lat, -85.0, 85.0) * geo::kDegToRad);
    for (std::size_t i = 0; i < cameras.size(); ++i) {
      cells_[key(row(cameras[i].position.lat), col(cameras[i].position.lon))].push_back(i);
    }
  }

  // Cameras inside the lat/lon box, in input order.
  std::vector<Camera> within(double lat0, double lat1, double lon0, double lon1) const {
    std::vector<std::size_t> hits;
    const auto r0 = row(lat0), r1 = row(lat1), c0 = col(lon0), c1 = col(lon1);
    if (static_cast<double>(r1 - r0 + 1) * static_cast<double>(c1 - c0 + 1) > static_cast<double>(cells_.size())) {
      for (std::size_t i = 0; i < cameras_.size(); ++i) hits.push_back(i);
    } else {
      for (auto r = r0; r <= r1; ++r) {
        for (auto c = c0; c <= c1; ++c) {
          if (const auto it = cells_.find(key(r, c)); it != cells_.end()) {
            hits.insert(hits.end(), it->second.begin(), it->second.end());
          }
        }
      }
      std::sort(hits.begin(), hits.end());
    }
    std::vector<Camera> out;
    for (std::size_t i : hits) {
      const auto& p = cameras_[i].position;
      if (p.lat >= lat0 && p.lat <= lat1 && p.lon >= lon0 && p.lon <= lon1) out.push_back(cameras_[i]);
    }
    return out;
  }

 private:
  std::int64_t row(double lat) const { return static_cast<std::int64_t>(std::floor(lat / cell_lat_)); }
  std::int64_t col(double lon) const { return static_cast<std::int64_t>(std::floor(lon / cell_lon_)); }
  static std::uint64_t key(std::int64_t r, std::int64_t c) {
    return (static_cast<std::uint64_t>(r) << 32) ^ (static_cast<std::uint64_t>(c) & 0xffffffffULL);
  }

  std::span<const Camera> cameras_;
  double cell_lat_ = 1.0, cell_lon_ = 1.0;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> cells_;
};

}  // namespace

ExposureMap annotate_graph(const RoadGraph& graph, std::span<const Camera> cameras, const ExposureParams& params) {
  for (const Camera& c : cameras) validate_camera(c);
  double max_range = 0.0;
  for (const Camera& c : cameras) max_range = std::max(max_range, c.range_m);

  double lat_sum = 0.0;
  for (const Node& n : graph.nodes()) lat_sum += n.position.lat;
  const double ref_lat = graph.nodes().empty() ? 0.0 : lat_sum / static_cast<double>(graph.nodes().size());
  const CameraGrid grid(cameras, ref_lat);

  std::vector<EdgeExposure> out;
  out.reserve(graph.edges().size());
  for (EdgeIndex e = 0; e < graph.edges().size(); ++e) {
    const Edge& edge = graph.edges()[e];
    double lat0 = 90.0, lat1 = -90.0, lon0 = 180.0, lon1 = -180.0;
    for (const auto& p : edge.geometry) {
      lat0 = std::min(lat0, p.lat), lat1 = std::max(lat1, p.lat);
      lon0 = std::min(lon0, p.lon), lon1 = std::max(lon1, p.lon);
    }
    // 1 m slack absorbs the gap between the sphere and the local frame.
    const double margin_lat = (max_range + edge.width_m / 2.0 + 1.0) / geo::kMetersPerDegree;
    const double max_abs_lat = std::max(std::abs(lat0 - margin_lat), std::abs(lat1 + margin_lat));
    std::vector<Camera> candidates;
    if (max_abs_lat >= 89.0 || lon1 - lon0 > 180.0) {
      candidates.assign(cameras.begin(), cameras.end());
    } else {
      const double margin_lon = margin_lat / std::cos(max_abs_lat * geo::kDegToRad);
      candidates = grid.within(lat0 - margin_lat, lat1 + margin_lat, lon0 - margin_lon, lon1 + margin_lon);
    }
    EdgeExposure ex = edge_exposure(edge, candidates, params.sample_interval_m);
    ex.edge = e;
    out.push_back(std::move(ex));
  }
  return ExposureMap(params, std::move(out));
}

std::string exposure_table_csv(const ExposureMap& map) {
  std::ostringstream os;
  os.precision(17);
  os << "edge_id,fraction,exposed_m,camera_ids\n";
  for (const EdgeExposure& e : map.edges()) {
    os << e.edge_id << ',' << e.fraction << ',' << e.exposed_m << ',';
    for (std::size_t i = 0; i < e.camera_ids.size(); ++i) os << (i ? ";" : "") << e.camera_ids[i];
    os << '\n';
  }
  return os.str();
}

}  // namespace cctv
