#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "cctv/camera.hpp"
#include "cctv/eval.hpp"
#include "cctv/exposure.hpp"
#include "cctv/graph.hpp"

namespace cctv::testing {

/// Anchor shared with tests/fixtures/make_fixtures.py.
inline constexpr geo::GeoPoint kOrigin{40.4168, -3.7038};

geo::GeoPoint offset(double east_m, double north_m);

std::string fixture_path(const std::string& name);
std::string read_fixture(const std::string& name);

/// "lat,lon" with enough digits to round-trip to the millimetre.
std::string lat_lon(const geo::GeoPoint& p);

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

/// n x n lattice with `spacing_m` between neighbours. Node "r<row>c<col>",
/// edges "h<row>-<col>" (west-east) and "v<row>-<col>" (south-north).
RoadGraph grid_graph(int n, double spacing_m, double width_m = kDefaultStreetWidthM);

/// 5x5 grid, 100 m spacing, four round cameras (r=15) on the middle row's
/// edge midpoints. Endpoints sit on the middle row's outer nodes.
struct CorridorFixture {
  RoadGraph graph;
  std::vector<Camera> cameras;
  geo::GeoPoint from;
  geo::GeoPoint to;
};
CorridorFixture corridor_fixture();

/// One straight west-east edge of `length_m` starting at kOrigin.
RoadGraph straight_edge(double length_m, double width_m = kDefaultStreetWidthM);

/// Random connected-ish street graph with up to `max_nodes` nodes inside a
/// `extent_m` square, random widths and occasional oneway edges.
RoadGraph random_graph(std::mt19937_64& rng, int max_nodes, double extent_m = 400.0);
std::vector<Camera> random_cameras(std::mt19937_64& rng, int count, double extent_m = 400.0);
geo::GeoPoint random_point(std::mt19937_64& rng, double extent_m = 400.0);

/// Random detection/ground-truth instance on <= max_images images with
/// <= max_boxes boxes each. Coordinates snap to a coarse lattice and scores
/// repeat so ties occur.
struct EvalInstance {
  std::vector<eval::Detection> dets;
  std::vector<eval::GroundTruthBox> gts;
};
EvalInstance random_eval_instance(std::mt19937_64& rng, int max_images, int max_boxes);

}  // namespace cctv::testing
