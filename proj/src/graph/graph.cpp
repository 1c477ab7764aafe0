#include "cctv/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "cctv/simd/kernels.hpp"

namespace cctv {

namespace {

double polyline_length(const std::vector<geo::GeoPoint>& pts) {
  double len = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) len += geo::haversine_m(pts[i - 1], pts[i]);
  return len;
}

geo::GeoPoint lerp(const geo::GeoPoint& a, const geo::GeoPoint& b, double t) {
  return {a.lat + t * (b.lat - a.lat), geo::wrap180(a.lon + t * geo::wrap180(b.lon - a.lon))};
}

}  // namespace

// --- SegmentGrid -----------------------------------------------------------

SegmentGrid::SegmentGrid(double reference_lat, std::span<const Edge> edges) {
  const double lat = std::clamp(reference_lat, -85.0, 85.0);
  cell_lat_deg_ = kGridCellM / geo::kMetersPerDegree;
  cell_lon_deg_ = cell_lat_deg_ / std::cos(lat * geo::kDegToRad);
  bool first = true;
  for (EdgeIndex e = 0; e < edges.size(); ++e) {
    const auto& pts = edges[e].geometry;
    for (std::uint32_t s = 0; s + 1 < pts.size(); ++s) {
      const Cell a = cell_of(pts[s]);
      const Cell b = cell_of(pts[s + 1]);
      const auto [r0, r1] = std::minmax(a.row, b.row);
      const auto [c0, c1] = std::minmax(a.col, b.col);
      for (std::int64_t r = r0; r <= r1; ++r) {
        for (std::int64_t c = c0; c <= c1; ++c) cells_[key(r, c)].push_back({e, s});
      }
      if (first) {
        row_lo_ = r0, row_hi_ = r1, col_lo_ = c0, col_hi_ = c1;
        first = false;
      } else {
        row_lo_ = std::min(row_lo_, r0), row_hi_ = std::max(row_hi_, r1);
        col_lo_ = std::min(col_lo_, c0), col_hi_ = std::max(col_hi_, c1);
      }
    }
  }
}

SegmentGrid::Cell SegmentGrid::cell_of(const geo::GeoPoint& p) const {
  return {static_cast<std::int64_t>(std::floor(p.lat / cell_lat_deg_)),
          static_cast<std::int64_t>(std::floor(p.lon / cell_lon_deg_))};
}

std::uint64_t SegmentGrid::key(std::int64_t row, std::int64_t col) {
  return (static_cast<std::uint64_t>(row) << 32) ^ (static_cast<std::uint64_t>(col) & 0xffffffffULL);
}

const std::vector<SegmentRef>* SegmentGrid::segments_in(const Cell& c) const {
  const auto it = cells_.find(key(c.row, c.col));
  return it == cells_.end() ? nullptr : &it->second;
}

// --- Builder ---------------------------------------------------------------

NodeIndex RoadGraph::Builder::add_node(std::string id, geo::GeoPoint position) {
  if (!position.valid()) throw GraphError(GraphErrorKind::ParseError, "node " + id + ": position out of range");
  const auto index = static_cast<NodeIndex>(nodes_.size());
  if (!node_ids_.emplace(id, index).second) {
    throw GraphError(GraphErrorKind::DuplicateId, "duplicate node id \"" + id + "\"");
  }
  nodes_.push_back({std::move(id), position});
  return index;
}

std::optional<NodeIndex> RoadGraph::Builder::find_node(const std::string& id) const {
  const auto it = node_ids_.find(id);
  if (it == node_ids_.end()) return std::nullopt;
  return it->second;
}

EdgeIndex RoadGraph::Builder::add_edge(const EdgeSpec& spec) {
  const std::string where = "edge \"" + spec.id + "\"";
  const auto from = find_node(spec.from);
  if (!from) throw GraphError(GraphErrorKind::DanglingReference, where + " references missing node " + spec.from);
  const auto to = find_node(spec.to);
  if (!to) throw GraphError(GraphErrorKind::DanglingReference, where + " references missing node " + spec.to);

  Edge e;
  e.id = spec.id;
  e.from = *from;
  e.to = *to;
  e.oneway = spec.oneway;
  if (spec.geometry.empty()) {
    e.geometry = {nodes_[*from].position, nodes_[*to].position};
  } else {
    if (spec.geometry.size() < 2) throw GraphError(GraphErrorKind::ParseError, where + ": geometry needs 2+ points");
    constexpr double kEndpointTolDeg = 1e-6;
    if (!spec.geometry.front().approx_equal(nodes_[*from].position, kEndpointTolDeg) ||
        !spec.geometry.back().approx_equal(nodes_[*to].position, kEndpointTolDeg)) {
      throw GraphError(GraphErrorKind::ParseError, where + ": geometry endpoints must match node positions");
    }
    for (const auto& p : spec.geometry) {
      if (!p.valid()) throw GraphError(GraphErrorKind::ParseError, where + ": geometry point out of range");
    }
    e.geometry = spec.geometry;
    e.geometry.front() = nodes_[*from].position;
    e.geometry.back() = nodes_[*to].position;
  }
  e.geometry_length_m = polyline_length(e.geometry);
  if (spec.length_m) {
    if (!(*spec.length_m > 0.0)) {
      throw GraphError(GraphErrorKind::NonPositiveLength, where + ": length_m must be positive");
    }
    if (std::abs(*spec.length_m - e.geometry_length_m) > kLengthTolerance * e.geometry_length_m) {
      throw GraphError(GraphErrorKind::InconsistentLength,
                       where + ": length_m differs from the polyline length by more than 1%");
    }
    e.length_m = *spec.length_m;
  } else {
    e.length_m = e.geometry_length_m;
  }
  if (!(e.length_m > 0.0) || !(e.geometry_length_m > 0.0)) {
    throw GraphError(GraphErrorKind::NonPositiveLength, where + ": zero-length edge");
  }
  if (spec.width_m) {
    if (!(*spec.width_m > 0.0)) throw GraphError(GraphErrorKind::ParseError, where + ": width_m must be positive");
    e.width_m = *spec.width_m;
  }

  const auto index = static_cast<EdgeIndex>(edges_.size());
  if (!edge_ids_.emplace(spec.id, index).second) {
    throw GraphError(GraphErrorKind::DuplicateId, "duplicate edge id \"" + spec.id + "\"");
  }
  edges_.push_back(std::move(e));
  return index;
}

RoadGraph RoadGraph::Builder::build() && {
  RoadGraph g;
  g.nodes_ = std::move(nodes_);
  g.edges_ = std::move(edges_);
  g.node_ids_ = std::move(node_ids_);
  g.edge_ids_ = std::move(edge_ids_);
  g.adjacency_.resize(g.nodes_.size());
  for (EdgeIndex i = 0; i < g.edges_.size(); ++i) {
    const Edge& e = g.edges_[i];
    g.adjacency_[e.from].push_back({i, e.to, true});
    if (!e.oneway) g.adjacency_[e.to].push_back({i, e.from, false});
  }
  double lat_sum = 0.0;
  for (const Node& n : g.nodes_) lat_sum += n.position.lat;
  const double ref_lat = g.nodes_.empty() ? 0.0 : lat_sum / static_cast<double>(g.nodes_.size());
  g.grid_ = SegmentGrid(ref_lat, g.edges_);
  return g;
}

// --- RoadGraph ---------------------------------------------------------------

std::size_t RoadGraph::arc_count() const {
  std::size_t n = 0;
  for (const auto& a : adjacency_) n += a.size();
  return n;
}

std::optional<NodeIndex> RoadGraph::find_node(const std::string& id) const {
  const auto it = node_ids_.find(id);
  if (it == node_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<EdgeIndex> RoadGraph::find_edge(const std::string& id) const {
  const auto it = edge_ids_.find(id);
  if (it == edge_ids_.end()) return std::nullopt;
  return it->second;
}

SegmentProbe probe_segment(const geo::GeoPoint& p, const geo::GeoPoint& a, const geo::GeoPoint& b) {
  const geo::LocalXY la = geo::project_unchecked(p, a);
  const geo::LocalXY lb = geo::project_unchecked(p, b);
  const double ax[] = {la.x}, ay[] = {la.y}, bx[] = {lb.x}, by[] = {lb.y};
  double d2[1], t[1];
  simd::scalar::segment_distance2(0.0, 0.0, {ax, ay, bx, by}, d2, t);
  return {d2[0], t[0]};
}

SnapResult make_snap_result(const RoadGraph& g, EdgeIndex e, std::uint32_t segment, double t, double dist2) {
  const Edge& edge = g.edges()[e];
  const auto& pts = edge.geometry;
  double offset = 0.0;
  for (std::uint32_t s = 0; s < segment; ++s) offset += geo::haversine_m(pts[s], pts[s + 1]);
  offset += t * geo::haversine_m(pts[segment], pts[segment + 1]);
  SnapResult r;
  r.edge = e;
  r.edge_id = edge.id;
  r.offset_m = std::min(offset, edge.geometry_length_m);
  r.fraction = std::clamp(r.offset_m / edge.geometry_length_m, 0.0, 1.0);
  r.snapped = lerp(pts[segment], pts[segment + 1], t);
  r.distance_m = std::sqrt(dist2);
  return r;
}

SnapResult RoadGraph::snap(const geo::GeoPoint& p) const {
  if (edges_.empty()) throw GraphError(GraphErrorKind::EmptyGraph, "cannot snap on an empty graph");

  const SegmentGrid::Cell pc = grid_.cell_of(p);
  const double cell_m = std::min(grid_.cell_lat_deg(), grid_.cell_lon_deg() * std::cos(p.lat * geo::kDegToRad)) *
                        geo::kMetersPerDegree;
  const std::int64_t k_first = std::max<std::int64_t>(
      {0, grid_.row_lo() - pc.row, pc.row - grid_.row_hi(), grid_.col_lo() - pc.col, pc.col - grid_.col_hi()});
  const std::int64_t k_last = std::max({std::abs(pc.row - grid_.row_lo()), std::abs(pc.row - grid_.row_hi()),
                                        std::abs(pc.col - grid_.col_lo()), std::abs(pc.col - grid_.col_hi())});

  struct Best {
    double dist2 = std::numeric_limits<double>::infinity();
    EdgeIndex edge = 0;
    std::uint32_t segment = 0;
    double t = 0.0;
  } best;
  bool found = false;

  std::unordered_set<std::uint64_t> seen;
  std::vector<SegmentRef> batch;
  std::vector<double> ax, ay, bx, by, d2, tt;

  const auto visit = [&](std::int64_t r, std::int64_t c) {
    const auto* refs = grid_.segments_in({r, c});
    if (refs == nullptr) return;
    for (const SegmentRef& ref : *refs) {
      if (seen.insert((static_cast<std::uint64_t>(ref.edge) << 32) | ref.segment).second) batch.push_back(ref);
    }
  };

  for (std::int64_t k = k_first; k <= k_last; ++k) {
    batch.clear();
    const std::int64_t r0 = std::max(pc.row - k, grid_.row_lo()), r1 = std::min(pc.row + k, grid_.row_hi());
    for (std::int64_t r = r0; r <= r1; ++r) {
      if (std::abs(r - pc.row) == k) {
        const std::int64_t c0 = std::max(pc.col - k, grid_.col_lo()), c1 = std::min(pc.col + k, grid_.col_hi());
        for (std::int64_t c = c0; c <= c1; ++c) visit(r, c);
      } else {
        if (pc.col - k >= grid_.col_lo() && pc.col - k <= grid_.col_hi()) visit(r, pc.col - k);
        if (k > 0 && pc.col + k >= grid_.col_lo() && pc.col + k <= grid_.col_hi()) visit(r, pc.col + k);
      }
    }

    if (!batch.empty()) {
      ax.resize(batch.size()), ay.resize(batch.size()), bx.resize(batch.size()), by.resize(batch.size());
      d2.resize(batch.size()), tt.resize(batch.size());
      for (std::size_t i = 0; i < batch.size(); ++i) {
        const auto& pts = edges_[batch[i].edge].geometry;
        const geo::LocalXY a = geo::project_unchecked(p, pts[batch[i].segment]);
        const geo::LocalXY b = geo::project_unchecked(p, pts[batch[i].segment + 1]);
        ax[i] = a.x, ay[i] = a.y, bx[i] = b.x, by[i] = b.y;
      }
      simd::segment_distance2(0.0, 0.0, {ax, ay, bx, by}, d2, tt);
      for (std::size_t i = 0; i < batch.size(); ++i) {
        const SegmentRef& ref = batch[i];
        bool better = !found || d2[i] < best.dist2;
        if (!better && d2[i] == best.dist2) {
          const std::string& id = edges_[ref.edge].id;
          const std::string& best_id = edges_[best.edge].id;
          better = id < best_id || (ref.edge == best.edge && ref.segment < best.segment);
        }
        if (better) {
          best = {d2[i], ref.edge, ref.segment, tt[i]};
          found = true;
        }
      }
    }
    // Unvisited segments lie outside the (2k+1)^2 block, at least k cells away.
    if (found && std::sqrt(best.dist2) < static_cast<double>(k) * cell_m) break;
  }
  return make_snap_result(*this, best.edge, best.segment, best.t, best.dist2);
}

geo::GeoPoint RoadGraph::point_at(EdgeIndex e, double fraction) const {
  const Edge& edge = edges_[e];
  const double target = std::clamp(fraction, 0.0, 1.0) * edge.geometry_length_m;
  double acc = 0.0;
  for (std::size_t i = 1; i < edge.geometry.size(); ++i) {
    const double seg = geo::haversine_m(edge.geometry[i - 1], edge.geometry[i]);
    if (acc + seg >= target && seg > 0.0) return lerp(edge.geometry[i - 1], edge.geometry[i], (target - acc) / seg);
    acc += seg;
  }
  return edge.geometry.back();
}

std::vector<geo::GeoPoint> RoadGraph::sub_geometry(EdgeIndex e, double f0, double f1) const {
  const Edge& edge = edges_[e];
  const bool reversed = f1 < f0;
  const double lo = std::clamp(std::min(f0, f1), 0.0, 1.0) * edge.geometry_length_m;
  const double hi = std::clamp(std::max(f0, f1), 0.0, 1.0) * edge.geometry_length_m;

  std::vector<geo::GeoPoint> out{point_at(e, lo / edge.geometry_length_m)};
  double acc = 0.0;
  for (std::size_t i = 1; i + 1 < edge.geometry.size(); ++i) {
    acc += geo::haversine_m(edge.geometry[i - 1], edge.geometry[i]);
    if (acc > lo && acc < hi) out.push_back(edge.geometry[i]);
  }
  out.push_back(point_at(e, hi / edge.geometry_length_m));
  if (reversed) std::reverse(out.begin(), out.end());
  return out;
}

bool equivalent(const RoadGraph& a, const RoadGraph& b, double tol) {
  if (a.nodes().size() != b.nodes().size() || a.edges().size() != b.edges().size()) return false;
  for (const Node& n : a.nodes()) {
    const auto m = b.find_node(n.id);
    if (!m || !n.position.approx_equal(b.nodes()[*m].position, tol)) return false;
  }
  for (const Edge& e : a.edges()) {
    const auto f = b.find_edge(e.id);
    if (!f) return false;
    const Edge& o = b.edges()[*f];
    if (a.nodes()[e.from].id != b.nodes()[o.from].id || a.nodes()[e.to].id != b.nodes()[o.to].id) return false;
    if (std::abs(e.length_m - o.length_m) > tol || std::abs(e.width_m - o.width_m) > tol) return false;
    if (e.oneway != o.oneway || e.geometry.size() != o.geometry.size()) return false;
    for (std::size_t i = 0; i < e.geometry.size(); ++i) {
      if (!e.geometry[i].approx_equal(o.geometry[i], tol)) return false;
    }
  }
  return true;
}

}  // namespace cctv
