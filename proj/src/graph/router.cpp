#include "cctv/router.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>

namespace cctv {

std::string_view to_string(RouteMode mode) {
  switch (mode) {
    case RouteMode::standard: return "default";
    case RouteMode::privacy: return "privacy";
    case RouteMode::safety: return "safety";
  }
  return "default";
}

std::optional<RouteMode> parse_route_mode(std::string_view s) {
  if (s == "default") return RouteMode::standard;
  if (s == "privacy") return RouteMode::privacy;
  if (s == "safety") return RouteMode::safety;
  return std::nullopt;
}

void validate_params(const RouteParams& p) {
  if (!(p.lambda >= 0.0) || !std::isfinite(p.lambda)) throw InvalidRequest("lambda", "must be a finite value >= 0");
  if (!(p.beta >= 0.0 && p.beta <= 0.9)) throw InvalidRequest("beta", "must be in [0, 0.9]");
  if (!(p.camera_penalty_m >= 0.0) || !std::isfinite(p.camera_penalty_m)) {
    throw InvalidRequest("penalty", "must be a finite value >= 0");
  }
}

double edge_cost(const Edge& edge, const EdgeExposure& exposure, RouteMode mode, const RouteParams& params) {
  switch (mode) {
    case RouteMode::standard: return edge.length_m;
    case RouteMode::privacy:
      return edge.length_m * (1.0 + params.lambda * exposure.fraction) +
             params.camera_penalty_m * static_cast<double>(exposure.camera_ids.size());
    case RouteMode::safety:
      return std::max(edge.length_m * (1.0 - params.beta * exposure.fraction), 0.05 * edge.length_m);
  }
  return edge.length_m;
}

namespace {

// Endpoints inside an edge become virtual nodes; at an edge end they
// collapse onto the real node.
struct Anchor {
  NodeIndex node;
  bool is_virtual;
};

struct QueryArc {
  NodeIndex to;
  EdgeIndex edge;
  bool forward;
  double f0;
  double f1;
};

constexpr double kEndpointEpsM = 1e-9;

Anchor anchor_for(const RoadGraph& g, const SnapResult& s, NodeIndex virtual_id) {
  const Edge& e = g.edges()[s.edge];
  if (s.offset_m <= kEndpointEpsM) return {e.from, false};
  if (s.offset_m >= e.geometry_length_m - kEndpointEpsM) return {e.to, false};
  return {virtual_id, true};
}

class QueryGraph {
 public:
  QueryGraph(const RoadGraph& g, const SnapResult& src, const SnapResult& dst)
      : graph_(g), extra_(g.nodes().size() + 2) {
    const auto n = static_cast<NodeIndex>(g.nodes().size());
    source_ = anchor_for(g, src, n);
    target_ = anchor_for(g, dst, n + 1);
    if (source_.is_virtual) attach(src, n);
    if (target_.is_virtual) attach(dst, n + 1);
    if (source_.is_virtual && target_.is_virtual && src.edge == dst.edge) {
      const Edge& e = g.edges()[src.edge];
      if (src.fraction <= dst.fraction) {
        extra_[n].push_back({n + 1, src.edge, true, src.fraction, dst.fraction});
      } else if (!e.oneway) {
        extra_[n].push_back({n + 1, src.edge, false, src.fraction, dst.fraction});
      }
    }
  }

  std::size_t size() const { return extra_.size(); }
  NodeIndex source() const { return source_.node; }
  NodeIndex target() const { return target_.node; }

  template <typename Fn>
  void for_each_arc(NodeIndex u, Fn&& fn) const {
    if (u < graph_.nodes().size()) {
      for (const Arc& a : graph_.arcs(u)) fn(QueryArc{a.to, a.edge, a.forward, a.forward ? 0.0 : 1.0, a.forward ? 1.0 : 0.0});
    }
    for (const QueryArc& a : extra_[u]) fn(a);
  }

 private:
  void attach(const SnapResult& s, NodeIndex v) {
    const Edge& e = graph_.edges()[s.edge];
    const double f = s.fraction;
    extra_[e.from].push_back({v, s.edge, true, 0.0, f});
    extra_[v].push_back({e.to, s.edge, true, f, 1.0});
    if (!e.oneway) {
      extra_[v].push_back({e.from, s.edge, false, f, 0.0});
      extra_[e.to].push_back({v, s.edge, false, 1.0, f});
    }
  }

  const RoadGraph& graph_;
  std::vector<std::vector<QueryArc>> extra_;
  Anchor source_{};
  Anchor target_{};
};

double portion_of(const QueryArc& a) { return std::abs(a.f1 - a.f0); }

}  // namespace

Route shortest_route(const RoadGraph& graph, const ExposureMap& exposure, const RouteRequest& request) {
  validate_params(request.params);
  if (!request.from.valid()) throw InvalidRequest("from", "latitude/longitude out of range");
  if (!request.to.valid()) throw InvalidRequest("to", "latitude/longitude out of range");
  if (graph.empty()) throw SnapFailure("graph has no edges to snap to");
  if (exposure.size() != graph.edges().size()) throw std::logic_error("exposure map does not match graph");

  Route route;
  route.origin = graph.snap(request.from);
  route.destination = graph.snap(request.to);
  const QueryGraph q(graph, route.origin, route.destination);

  std::vector<double> full_cost(graph.edges().size());
  for (EdgeIndex e = 0; e < graph.edges().size(); ++e) {
    full_cost[e] = edge_cost(graph.edges()[e], exposure.at(e), request.mode, request.params);
  }
  const auto arc_cost = [&](const QueryArc& a) {
    const double p = portion_of(a);
    return p == 1.0 ? full_cost[a.edge] : p * full_cost[a.edge];
  };

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(q.size(), kInf);
  std::vector<std::optional<std::pair<NodeIndex, QueryArc>>> prev(q.size());
  std::vector<bool> settled(q.size(), false);
  using Label = std::pair<double, NodeIndex>;
  std::priority_queue<Label, std::vector<Label>, std::greater<>> heap;
  dist[q.source()] = 0.0;
  heap.push({0.0, q.source()});
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (settled[u]) continue;
    settled[u] = true;
    if (u == q.target()) break;
    q.for_each_arc(u, [&](const QueryArc& a) {
      if (settled[a.to]) return;
      const double nd = d + arc_cost(a);
      if (nd < dist[a.to]) {
        dist[a.to] = nd;
        prev[a.to] = {u, a};
        heap.push({nd, a.to});
      }
    });
  }
  if (!settled[q.target()]) throw NoPath("no walkable path between the snapped endpoints");

  std::vector<QueryArc> arcs;
  for (NodeIndex v = q.target(); v != q.source();) {
    const auto& [u, a] = *prev[v];
    arcs.push_back(a);
    v = u;
  }
  std::reverse(arcs.begin(), arcs.end());

  route.total_cost = dist[q.target()];
  for (const QueryArc& a : arcs) {
    const Edge& e = graph.edges()[a.edge];
    RouteLeg leg{a.edge, e.id, a.forward, a.f0, a.f1, 0.0, arc_cost(a)};
    leg.length_m = leg.portion() == 1.0 ? e.length_m : leg.portion() * e.length_m;
    route.total_m += leg.length_m;
    for (const auto& p : graph.sub_geometry(a.edge, a.f0, a.f1)) {
      if (route.geometry.empty() || !route.geometry.back().approx_equal(p, 0.0)) route.geometry.push_back(p);
    }
    route.legs.push_back(std::move(leg));
  }
  if (route.geometry.empty()) route.geometry.push_back(route.origin.snapped);
  if (route.geometry.size() == 1) route.geometry.push_back(route.geometry.front());
  return route;
}

ExposureReport exposure_report(const Route& route, const ExposureMap& exposure) {
  ExposureReport r;
  std::set<std::string> cameras;
  for (const RouteLeg& leg : route.legs) {
    const EdgeExposure& ex = exposure.at(leg.edge);
    const double p = leg.portion();
    if (p <= 0.0) continue;
    r.exposed_m += p == 1.0 ? ex.exposed_m : p * ex.exposed_m;
    cameras.insert(ex.camera_ids.begin(), ex.camera_ids.end());
  }
  r.distinct_cameras = cameras.size();
  r.total_m = route.total_m;
  r.exposure_share = r.total_m > 0.0 ? r.exposed_m / r.total_m : 0.0;
  return r;
}

RouteResult route(const RoadGraph& graph, const ExposureMap& exposure, const RouteRequest& request) {
  RouteResult result{shortest_route(graph, exposure, request), {}};
  result.report = exposure_report(result.route, exposure);
  double baseline = result.route.total_m;
  if (request.mode != RouteMode::standard) {
    RouteRequest standard = request;
    standard.mode = RouteMode::standard;
    baseline = shortest_route(graph, exposure, standard).total_m;
  }
  result.report.detour_ratio = baseline > 0.0 ? result.route.total_m / baseline : 1.0;
  return result;
}

}  // namespace cctv
