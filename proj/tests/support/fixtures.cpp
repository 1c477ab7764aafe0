#include "fixtures.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifndef CCTV_FIXTURE_DIR
#error "CCTV_FIXTURE_DIR must point at tests/fixtures"
#endif

namespace cctv::testing {

geo::GeoPoint offset(double east_m, double north_m) { return geo::unproject_unchecked(kOrigin, {east_m, north_m}); }

std::string fixture_path(const std::string& name) { return std::string(CCTV_FIXTURE_DIR) + "/" + name; }

std::string read_fixture(const std::string& name) {
  std::ifstream f(fixture_path(name), std::ios::binary);
  if (!f) throw std::runtime_error("missing fixture " + name);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string lat_lon(const geo::GeoPoint& p) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f,%.9f", p.lat, p.lon);
  return buf;
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  std::random_device rd;
  path_ = std::filesystem::temp_directory_path() /
          ("cctv-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

namespace {

std::string node_id(int r, int c) { return "r" + std::to_string(r) + "c" + std::to_string(c); }

}  // namespace

RoadGraph grid_graph(int n, double spacing_m, double width_m) {
  RoadGraph::Builder b;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) b.add_node(node_id(r, c), offset(c * spacing_m, r * spacing_m));
  }
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const std::string suffix = std::to_string(r) + "-" + std::to_string(c);
      if (c + 1 < n) b.add_edge({"h" + suffix, node_id(r, c), node_id(r, c + 1), {}, width_m, false, {}});
      if (r + 1 < n) b.add_edge({"v" + suffix, node_id(r, c), node_id(r + 1, c), {}, width_m, false, {}});
    }
  }
  return std::move(b).build();
}

CorridorFixture corridor_fixture() {
  CorridorFixture f{grid_graph(5, 100.0), {}, offset(0.0, 200.0), offset(400.0, 200.0)};
  for (int c = 0; c < 4; ++c) {
    f.cameras.push_back(make_round_camera("corr-" + std::to_string(c), offset(100.0 * c + 50.0, 200.0), 15.0));
  }
  return f;
}

RoadGraph straight_edge(double length_m, double width_m) {
  RoadGraph::Builder b;
  b.add_node("a", offset(0.0, 0.0));
  b.add_node("b", offset(length_m, 0.0));
  b.add_edge({"ab", "a", "b", {}, width_m, false, {}});
  return std::move(b).build();
}

geo::GeoPoint random_point(std::mt19937_64& rng, double extent_m) {
  std::uniform_real_distribution<double> u(0.0, extent_m);
  return offset(u(rng), u(rng));
}

RoadGraph random_graph(std::mt19937_64& rng, int max_nodes, double extent_m) {
  std::uniform_int_distribution<int> n_dist(2, max_nodes);
  std::uniform_real_distribution<double> u(0.0, extent_m);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = n_dist(rng);

  std::vector<geo::LocalXY> pts;
  while (static_cast<int>(pts.size()) < n) {
    const geo::LocalXY p{u(rng), u(rng)};
    bool crowded = false;
    for (const auto& q : pts) crowded |= std::hypot(p.x - q.x, p.y - q.y) < 15.0;
    if (!crowded) pts.push_back(p);
  }

  RoadGraph::Builder b;
  for (int i = 0; i < n; ++i) b.add_node("n" + std::to_string(i), offset(pts[i].x, pts[i].y));

  int edge_no = 0;
  const auto add = [&](int i, int j) {
    EdgeSpec spec{"e" + std::to_string(edge_no++), "n" + std::to_string(i), "n" + std::to_string(j),
                  {}, 4.0 + 8.0 * unit(rng), unit(rng) < 0.15, {}};
    if (unit(rng) < 0.3) {
      const double mx = (pts[i].x + pts[j].x) / 2.0 + (unit(rng) - 0.5) * 40.0;
      const double my = (pts[i].y + pts[j].y) / 2.0 + (unit(rng) - 0.5) * 40.0;
      spec.geometry = {offset(pts[i].x, pts[i].y), offset(mx, my), offset(pts[j].x, pts[j].y)};
    }
    b.add_edge(spec);
  };

  // Random tree (occasionally skipping a link to leave components apart),
  // then extra chords.
  for (int i = 1; i < n; ++i) {
    if (unit(rng) < 0.05) continue;
    std::uniform_int_distribution<int> parent(0, i - 1);
    const int p = parent(rng);
    unit(rng) < 0.5 ? add(p, i) : add(i, p);
  }
  std::uniform_int_distribution<int> pick(0, n - 1);
  const int chords = n / 2 + pick(rng) % 4;
  for (int k = 0; k < chords; ++k) {
    const int i = pick(rng), j = pick(rng);
    if (i != j) add(i, j);
  }
  if (edge_no == 0) add(0, 1);
  return std::move(b).build();
}

std::vector<Camera> random_cameras(std::mt19937_64& rng, int count, double extent_m) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Camera> cams;
  for (int i = 0; i < count; ++i) {
    const std::string id = "cam" + std::to_string(i);
    const geo::GeoPoint p = random_point(rng, extent_m);
    if (unit(rng) < 0.5) {
      cams.push_back(make_round_camera(id, p, 5.0 + 30.0 * unit(rng)));
    } else {
      cams.push_back(make_directed_camera(id, p, 360.0 * unit(rng) * 0.999, 20.0 + 160.0 * unit(rng),
                                          10.0 + 60.0 * unit(rng)));
    }
  }
  return cams;
}

EvalInstance random_eval_instance(std::mt19937_64& rng, int max_images, int max_boxes) {
  static const double kSides[] = {16, 24, 31, 32, 40, 64, 96, 97, 128};
  static const double kScores[] = {0.3, 0.5, 0.5, 0.7, 0.9, 0.9};
  std::uniform_int_distribution<int> images(1, max_images), boxes(0, max_boxes), coord(0, 25), side(0, 8),
      score(0, 5), shift(-2, 2), coin(0, 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  EvalInstance inst;
  const int n_images = images(rng);
  for (int img = 1; img <= n_images; ++img) {
    std::vector<eval::BBox> gt_boxes;
    const int n_gt = boxes(rng);
    for (int k = 0; k < n_gt; ++k) {
      const eval::BBox bb{8.0 * coord(rng), 8.0 * coord(rng), kSides[side(rng)], kSides[side(rng)]};
      gt_boxes.push_back(bb);
      inst.gts.push_back({img, coin(rng) ? eval::Category::directed : eval::Category::round, bb});
    }
    const int n_det = boxes(rng);
    for (int k = 0; k < n_det; ++k) {
      eval::BBox bb;
      if (!gt_boxes.empty() && unit(rng) < 0.7) {
        const eval::BBox& g = gt_boxes[static_cast<std::size_t>(k) % gt_boxes.size()];
        bb = {g.x + 4.0 * shift(rng), g.y + 4.0 * shift(rng), g.w + 4.0 * shift(rng), g.h};
        if (bb.w <= 0.0) bb.w = g.w;
      } else {
        bb = {8.0 * coord(rng), 8.0 * coord(rng), kSides[side(rng)], kSides[side(rng)]};
      }
      inst.dets.push_back({img, coin(rng) ? eval::Category::directed : eval::Category::round, bb, kScores[score(rng)]});
    }
  }
  return inst;
}

}  // namespace cctv::testing
