#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "cctv/errors.hpp"
#include "cctv/geo.hpp"

namespace cctv {

using NodeIndex = std::uint32_t;
using EdgeIndex = std::uint32_t;

inline constexpr double kDefaultStreetWidthM = 8.0;
inline constexpr double kGridCellM = 50.0;
/// Allowed relative disagreement between a declared length and the polyline.
inline constexpr double kLengthTolerance = 0.01;

enum class GraphErrorKind {
  ParseError,
  DanglingReference,
  NonPositiveLength,
  UnknownNodeRef,
  DuplicateId,
  InconsistentLength,
  EmptyGraph,
};

class GraphError : public InputError {
 public:
  GraphError(GraphErrorKind kind, const std::string& what, std::optional<std::size_t> line = std::nullopt,
             std::optional<std::size_t> column = std::nullopt)
      : InputError(what, line, column), kind_(kind) {}
  GraphErrorKind kind() const { return kind_; }

 private:
  GraphErrorKind kind_;
};

struct Node {
  std::string id;
  geo::GeoPoint position;
};

struct Edge {
  std::string id;
  NodeIndex from = 0;
  NodeIndex to = 0;
  double length_m = 0.0;
  double width_m = kDefaultStreetWidthM;
  bool oneway = false;
  /// Polyline from `from` to `to`; endpoints equal the node positions.
  std::vector<geo::GeoPoint> geometry;
  /// Haversine length of `geometry`.
  double geometry_length_m = 0.0;
};

/// Traversal of an edge leaving a node. Oneway edges only have a forward arc.
struct Arc {
  EdgeIndex edge;
  NodeIndex to;
  bool forward;
};

struct SegmentRef {
  EdgeIndex edge;
  std::uint32_t segment;  // index of the segment's first vertex in the polyline
};

struct SnapResult {
  EdgeIndex edge = 0;
  std::string edge_id;
  /// Distance along the polyline from the edge's `from` node.
  double offset_m = 0.0;
  /// offset_m / geometry_length_m
  double fraction = 0.0;
  geo::GeoPoint snapped;
  double distance_m = 0.0;
};

struct EdgeSpec {
  std::string id;
  std::string from;
  std::string to;
  std::optional<double> length_m;
  std::optional<double> width_m;
  bool oneway = false;
  std::vector<geo::GeoPoint> geometry;  // empty: straight segment between nodes
};

/// Uniform grid over edge segments, cells of kGridCellM at the graph's
/// reference latitude.
class SegmentGrid {
 public:
  SegmentGrid() = default;
  SegmentGrid(double reference_lat, std::span<const Edge> edges);

  struct Cell {
    std::int64_t row;
    std::int64_t col;
  };
  Cell cell_of(const geo::GeoPoint& p) const;
  const std::vector<SegmentRef>* segments_in(const Cell& c) const;
  double cell_lat_deg() const { return cell_lat_deg_; }
  double cell_lon_deg() const { return cell_lon_deg_; }
  bool empty() const { return cells_.empty(); }
  std::int64_t row_lo() const { return row_lo_; }
  std::int64_t row_hi() const { return row_hi_; }
  std::int64_t col_lo() const { return col_lo_; }
  std::int64_t col_hi() const { return col_hi_; }

 private:
  static std::uint64_t key(std::int64_t row, std::int64_t col);
  double cell_lat_deg_ = 1.0;
  double cell_lon_deg_ = 1.0;
  std::int64_t row_lo_ = 0, row_hi_ = -1, col_lo_ = 0, col_hi_ = -1;
  std::unordered_map<std::uint64_t, std::vector<SegmentRef>> cells_;
};

/// Immutable walkable network. Build through RoadGraph::Builder.
class RoadGraph {
 public:
  class Builder {
   public:
    NodeIndex add_node(std::string id, geo::GeoPoint position);
    /// Resolves node ids and derives or checks the length. Throws GraphError.
    EdgeIndex add_edge(const EdgeSpec& spec);
    RoadGraph build() &&;

    std::optional<NodeIndex> find_node(const std::string& id) const;

   private:
    std::vector<Node> nodes_;
    std::vector<Edge> edges_;
    std::unordered_map<std::string, NodeIndex> node_ids_;
    std::unordered_map<std::string, EdgeIndex> edge_ids_;
  };

  RoadGraph() = default;

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const Arc> arcs(NodeIndex n) const { return adjacency_[n]; }
  std::size_t arc_count() const;
  bool empty() const { return edges_.empty(); }

  std::optional<NodeIndex> find_node(const std::string& id) const;
  std::optional<EdgeIndex> find_edge(const std::string& id) const;

  /// Nearest point on any edge polyline; ties go to the smallest edge id.
  /// Throws GraphError(EmptyGraph) on a graph without edges.
  SnapResult snap(const geo::GeoPoint& p) const;

  /// Point at `fraction` of the polyline length from the `from` node.
  geo::GeoPoint point_at(EdgeIndex e, double fraction) const;
  /// Polyline traversed from fraction f0 to f1 (reversed when f1 < f0).
  std::vector<geo::GeoPoint> sub_geometry(EdgeIndex e, double f0, double f1) const;

  const SegmentGrid& grid() const { return grid_; }

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Arc>> adjacency_;
  std::unordered_map<std::string, NodeIndex> node_ids_;
  std::unordered_map<std::string, EdgeIndex> edge_ids_;
  SegmentGrid grid_;
};

/// Local-frame distance^2 and parameter of the closest point on one segment,
/// measured in the frame centred at `p`. Shared by snapping and its checks.
struct SegmentProbe {
  double dist2;
  double t;
};
SegmentProbe probe_segment(const geo::GeoPoint& p, const geo::GeoPoint& a, const geo::GeoPoint& b);

/// Builds the SnapResult for a chosen segment and parameter.
SnapResult make_snap_result(const RoadGraph& g, EdgeIndex e, std::uint32_t segment, double t, double dist2);

/// Same node ids/positions and edge ids/endpoints/lengths/widths/oneway flags
/// and geometry, up to `tol` (degrees for positions, meters for lengths).
bool equivalent(const RoadGraph& a, const RoadGraph& b, double tol = 1e-9);

}  // namespace cctv
