#include <doctest.h>

#include <cmath>
#include <functional>
#include <map>
#include <random>

#include "cctv/graph_io.hpp"
#include "fixtures.hpp"

using namespace cctv;
using cctv::testing::offset;

namespace {

GraphErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const GraphError& e) {
    return e.kind();
  }
  FAIL("expected GraphError");
  return GraphErrorKind::ParseError;
}

// Nearest point over every segment of every edge, measured in a frame centred
// on the query point. Ties keep the smallest edge id.
struct LinearSnap {
  std::string edge_id;
  double distance_m;
  std::map<std::string, double> per_edge;
};
LinearSnap linear_snap(const RoadGraph& g, const geo::GeoPoint& p) {
  LinearSnap best{"", INFINITY, {}};
  for (const Edge& e : g.edges()) {
    best.per_edge[e.id] = INFINITY;
    for (std::size_t s = 0; s + 1 < e.geometry.size(); ++s) {
      const geo::LocalXY a = geo::project_unchecked(p, e.geometry[s]);
      const geo::LocalXY b = geo::project_unchecked(p, e.geometry[s + 1]);
      const double vx = b.x - a.x, vy = b.y - a.y, len2 = vx * vx + vy * vy;
      const double t = len2 > 0 ? std::clamp(-(a.x * vx + a.y * vy) / len2, 0.0, 1.0) : 0.0;
      const double d = std::hypot(a.x + t * vx, a.y + t * vy);
      best.per_edge[e.id] = std::min(best.per_edge[e.id], d);
      if (d < best.distance_m || (d == best.distance_m && e.id < best.edge_id)) best.edge_id = e.id, best.distance_m = d;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("builder derives lengths and rejects bad edges") {
  RoadGraph::Builder b;
  b.add_node("a", offset(0, 0));
  b.add_node("b", offset(100, 0));
  b.add_node("c", offset(100, 0));
  const EdgeIndex e = b.add_edge({"ab", "a", "b", {}, {}, false, {}});
  CHECK(kind_of([&] { b.add_node("a", offset(1, 1)); }) == GraphErrorKind::DuplicateId);
  CHECK(kind_of([&] { b.add_edge({"ab", "a", "b", {}, {}, false, {}}); }) == GraphErrorKind::DuplicateId);
  CHECK(kind_of([&] { b.add_edge({"ax", "a", "x", {}, {}, false, {}}); }) == GraphErrorKind::DanglingReference);
  CHECK(kind_of([&] { b.add_edge({"bc", "b", "c", {}, {}, false, {}}); }) == GraphErrorKind::NonPositiveLength);
  CHECK(kind_of([&] { b.add_edge({"ab2", "a", "b", 120.0, {}, false, {}}); }) == GraphErrorKind::InconsistentLength);
  CHECK(kind_of([&] { b.add_edge({"ab3", "a", "b", -1.0, {}, false, {}}); }) == GraphErrorKind::NonPositiveLength);
  CHECK(kind_of([&] {
          b.add_edge({"ab4", "a", "b", {}, {}, false, {offset(0, 5), offset(100, 0)}});
        }) == GraphErrorKind::ParseError);
  b.add_edge({"ab5", "a", "b", 100.5, 6.0, true, {}});
  const RoadGraph g = std::move(b).build();
  CHECK(e == 0);
  CHECK(g.edges()[0].length_m == doctest::Approx(100.0).epsilon(1e-9));
  CHECK(g.edges()[0].width_m == kDefaultStreetWidthM);
  CHECK(g.edges()[1].length_m == 100.5);
  CHECK(g.arcs(*g.find_node("a")).size() == 2);
  CHECK(g.arcs(*g.find_node("b")).size() == 1);  // only the two-way edge leads back
  CHECK(g.arc_count() == 3);
  CHECK(g.find_edge("ab5") == EdgeIndex{1});
  CHECK_FALSE(g.find_edge("zz"));
}

TEST_CASE("snap equals a linear scan over all segments") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-300, 700);
  for (int trial = 0; trial < 60; ++trial) {
    const RoadGraph g = testing::random_graph(rng, 25);
    for (int q = 0; q < 40; ++q) {
      const geo::GeoPoint p = offset(u(rng), u(rng));
      const SnapResult s = g.snap(p);
      const LinearSnap want = linear_snap(g, p);
      // Edges meeting at the nearest node tie up to rounding of the segment
      // parameter; the winner must still be nearest to within 1e-9 m.
      if (s.edge_id != want.edge_id) CHECK(want.per_edge.at(s.edge_id) - want.distance_m <= 1e-9);
      CHECK(s.distance_m == doctest::Approx(want.distance_m).epsilon(1e-9));
      // Distances live in the query's local frame; haversine departs from it
      // by the frame's second-order scale error.
      const double d = s.distance_m;
      const double frame_err = d * (d / geo::kEarthRadiusM) * (0.5 + std::abs(std::tan(p.lat * geo::kDegToRad))) + 1e-6;
      CHECK(std::abs(geo::haversine_m(s.snapped, p) - d) <= frame_err);
      CHECK(s.fraction >= 0.0);
      CHECK(s.fraction <= 1.0);
    }
  }
  CHECK(kind_of([] { RoadGraph().snap({0, 0}); }) == GraphErrorKind::EmptyGraph);
}

TEST_CASE("snap offsets and sub-geometry") {
  RoadGraph::Builder b;
  b.add_node("a", offset(0, 0));
  b.add_node("b", offset(100, 100));
  b.add_edge({"bend", "a", "b", {}, {}, false, {offset(0, 0), offset(100, 0), offset(100, 100)}});
  const RoadGraph g = std::move(b).build();
  const Edge& e = g.edges()[0];
  CHECK(e.geometry_length_m == doctest::Approx(200.0).epsilon(1e-4));
  const SnapResult s = g.snap(offset(101, 30));
  CHECK(s.offset_m == doctest::Approx(130.0).epsilon(1e-4));
  CHECK(s.distance_m == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(geo::haversine_m(g.point_at(0, 0.25), offset(50, 0)) < 1e-3);
  const auto fwd = g.sub_geometry(0, 0.25, 0.75);
  REQUIRE(fwd.size() == 3);
  CHECK(geo::haversine_m(fwd[1], offset(100, 0)) < 1e-6);
  const auto back = g.sub_geometry(0, 0.75, 0.25);
  REQUIRE(back.size() == 3);
  CHECK(back.front().approx_equal(fwd.back()));
}

TEST_CASE("OSM fixture equals its native twin") {
  const RoadGraph osm = parse_graph(testing::read_fixture("grid5.osm"), GraphFormat::automatic);
  const RoadGraph native = parse_graph(testing::read_fixture("grid5.json"), GraphFormat::automatic);
  CHECK(osm.nodes().size() == 25);
  CHECK(osm.edges().size() == 40);
  CHECK(native.edges().size() == 40);
  CHECK(equivalent(osm, native));
  const RoadGraph shifted = testing::grid_graph(5, 100.0);
  CHECK_FALSE(equivalent(shifted, native));  // different ids
}

TEST_CASE("native format round trip is lossless") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 30; ++i) {
    const RoadGraph g = testing::random_graph(rng, 20);
    const std::string text = serialize_graph_json(g);
    const RoadGraph back = parse_graph_json(text);
    CHECK(equivalent(g, back, 0.0));
    CHECK(serialize_graph_json(back) == text);
  }
}

TEST_CASE("OSM tags: highway filter, oneway, width, unreferenced nodes") {
  const char* xml = R"(<?xml version="1.0"?>
<osm version="0.6">
  <node id="1" lat="40.0" lon="-3.0"/>
  <node id="2" lat="40.001" lon="-3.0"/>
  <node id="3" lat="40.002" lon="-3.0"/>
  <node id="4" lat="40.003" lon="-3.0"/>
  <node id="9" lat="41.0" lon="-3.0"/>
  <way id="10"><nd ref="1"/><nd ref="2"/><tag k="highway" v="motorway"/><tag k="oneway" v="yes"/></way>
  <way id="11"><nd ref="2"/><nd ref="3"/><tag k="highway" v="residential"/><tag k="oneway" v="yes"/>
    <tag k="width" v="5.5"/></way>
  <way id="12"><nd ref="3"/><nd ref="4"/><tag k="building" v="yes"/></way>
</osm>
)";
  const RoadGraph g = parse_osm_xml(xml);
  CHECK(g.nodes().size() == 3);
  REQUIRE(g.edges().size() == 2);
  CHECK(g.edges()[0].id == "w10-0");
  CHECK(g.edges()[0].oneway);
  CHECK(g.edges()[1].id == "w11-0");
  CHECK_FALSE(g.edges()[1].oneway);  // pedestrians walk residential oneways both ways
  CHECK(g.edges()[1].width_m == 5.5);
  CHECK(g.edges()[0].width_m == kDefaultStreetWidthM);
}

TEST_CASE("parse errors carry positions") {
  try {
    parse_graph_json("{\n  \"version\": \"cctv-graph/1\",\n  \"nodes\": [,]\n}");
    FAIL("expected parse error");
  } catch (const GraphError& e) {
    CHECK(e.kind() == GraphErrorKind::ParseError);
    CHECK(e.line() == 3);
  }
  try {
    parse_osm_xml("<osm>\n<node id=\"1\" lat=\"1\" lon=\"2\">\n</osm>\n");
    FAIL("expected parse error");
  } catch (const GraphError& e) {
    CHECK(e.kind() == GraphErrorKind::ParseError);
    CHECK(e.line().has_value());
  }
  CHECK(kind_of([] { parse_graph_json(R"({"version": "cctv-graph/9", "nodes": [], "edges": []})"); }) ==
        GraphErrorKind::ParseError);
  CHECK(kind_of([] {
          parse_osm_xml(R"(<osm><way id="1"><nd ref="5"/><nd ref="6"/><tag k="highway" v="path"/></way></osm>)");
        }) == GraphErrorKind::UnknownNodeRef);
  CHECK(kind_of([] {
          parse_graph_json(R"({"version": "cctv-graph/1", "nodes": [{"id": 1, "lat": 0, "lon": 0}],
                               "edges": [{"id": "e", "from": 1, "to": 2}]})");
        }) == GraphErrorKind::DanglingReference);
  CHECK_THROWS_AS(parse_graph_format("shapefile"), std::invalid_argument);
  CHECK(parse_graph_format("osm") == GraphFormat::osm);
}
