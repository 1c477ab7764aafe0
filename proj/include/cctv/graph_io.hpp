#pragma once

#include <string>
#include <string_view>

#include "cctv/graph.hpp"

namespace cctv {

inline constexpr std::string_view kGraphSchema = "cctv-graph/1";

/// Native format: {"version":"cctv-graph/1","nodes":[{id,lat,lon}],
/// "edges":[{id,from,to,length_m?,width_m?,oneway?,geometry?:[[lat,lon]...]}]}.
/// Numeric ids are accepted and stored as their decimal text.
RoadGraph parse_graph_json(std::string_view text);
std::string serialize_graph_json(const RoadGraph& graph);

/// Minimal OSM XML: every way carrying a highway tag becomes one edge per
/// consecutive node pair, with ids "w<way id>-<k>". Only nodes referenced by
/// such ways are kept. Oneway applies only to motorway/trunk ways tagged
/// oneway=yes; pedestrians walk everything else both ways.
RoadGraph parse_osm_xml(std::string_view text);

enum class GraphFormat { automatic, json, osm };
GraphFormat parse_graph_format(std::string_view s);
/// Dispatches on `format`; `automatic` sniffs for a leading '<'.
RoadGraph parse_graph(std::string_view text, GraphFormat format);

}  // namespace cctv
