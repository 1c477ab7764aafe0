#include "cctv/graph_io.hpp"

#include <charconv>
#include <set>
#include <sstream>
#include <unordered_map>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "cctv/json_util.hpp"

namespace cctv {

using json_util::Json;

namespace {

std::string id_text(const Json& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  throw GraphError(GraphErrorKind::ParseError, where + ": id must be a string or integer");
}

double number_at(const Json& obj, const char* key, const std::string& where) {
  try {
    return json_util::require_number(obj, key, where);
  } catch (const InputError& e) {
    throw GraphError(GraphErrorKind::ParseError, e.what());
  }
}

const Json& member_at(const Json& obj, const char* key, const std::string& where) {
  try {
    return json_util::require_member(obj, key, where);
  } catch (const InputError& e) {
    throw GraphError(GraphErrorKind::ParseError, e.what());
  }
}

std::optional<double> optional_number(const Json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) throw GraphError(GraphErrorKind::ParseError, where + "." + key + ": expected a number");
  return it->get<double>();
}

}  // namespace

RoadGraph parse_graph_json(std::string_view text) {
  Json doc;
  try {
    doc = json_util::parse(text);
  } catch (const InputError& e) {
    throw GraphError(GraphErrorKind::ParseError, e.what(), e.line(), e.column());
  }
  if (!doc.is_object()) throw GraphError(GraphErrorKind::ParseError, "graph: expected an object");
  const Json& version = member_at(doc, "version", "graph");
  if (!version.is_string() || version.get<std::string>() != kGraphSchema) {
    throw GraphError(GraphErrorKind::ParseError, "graph.version: expected \"" + std::string(kGraphSchema) + "\"");
  }

  RoadGraph::Builder b;
  const Json& nodes = member_at(doc, "nodes", "graph");
  if (!nodes.is_array()) throw GraphError(GraphErrorKind::ParseError, "graph.nodes: expected an array");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string where = "nodes[" + std::to_string(i) + "]";
    b.add_node(id_text(member_at(nodes[i], "id", where), where),
               {number_at(nodes[i], "lat", where), number_at(nodes[i], "lon", where)});
  }

  const Json& edges = member_at(doc, "edges", "graph");
  if (!edges.is_array()) throw GraphError(GraphErrorKind::ParseError, "graph.edges: expected an array");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string where = "edges[" + std::to_string(i) + "]";
    const Json& e = edges[i];
    EdgeSpec spec;
    spec.id = id_text(member_at(e, "id", where), where);
    spec.from = id_text(member_at(e, "from", where), where);
    spec.to = id_text(member_at(e, "to", where), where);
    spec.length_m = optional_number(e, "length_m", where);
    spec.width_m = optional_number(e, "width_m", where);
    if (const auto ow = e.find("oneway"); ow != e.end() && !ow->is_null()) {
      if (!ow->is_boolean()) throw GraphError(GraphErrorKind::ParseError, where + ".oneway: expected a boolean");
      spec.oneway = ow->get<bool>();
    }
    if (const auto geom = e.find("geometry"); geom != e.end() && !geom->is_null()) {
      if (!geom->is_array()) throw GraphError(GraphErrorKind::ParseError, where + ".geometry: expected an array");
      for (const Json& pt : *geom) {
        if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number()) {
          throw GraphError(GraphErrorKind::ParseError, where + ".geometry: expected [lat, lon] pairs");
        }
        spec.geometry.push_back({pt[0].get<double>(), pt[1].get<double>()});
      }
    }
    try {
      b.add_edge(spec);
    } catch (const GraphError& err) {
      throw GraphError(err.kind(), where + ": " + err.what());
    }
  }
  return std::move(b).build();
}

std::string serialize_graph_json(const RoadGraph& graph) {
  Json doc = Json::object();
  doc["version"] = std::string(kGraphSchema);
  doc["nodes"] = Json::array();
  for (const Node& n : graph.nodes()) {
    doc["nodes"].push_back({{"id", n.id}, {"lat", n.position.lat}, {"lon", n.position.lon}});
  }
  doc["edges"] = Json::array();
  for (const Edge& e : graph.edges()) {
    Json je = {{"id", e.id},
               {"from", graph.nodes()[e.from].id},
               {"to", graph.nodes()[e.to].id},
               {"length_m", e.length_m},
               {"width_m", e.width_m},
               {"oneway", e.oneway}};
    if (e.geometry.size() > 2) {
      Json geom = Json::array();
      for (const auto& p : e.geometry) geom.push_back({p.lat, p.lon});
      je["geometry"] = std::move(geom);
    }
    doc["edges"].push_back(std::move(je));
  }
  return doc.dump(2) + "\n";
}

namespace {

namespace pt = boost::property_tree;

const std::set<std::string, std::less<>> kMotorClasses = {"motorway", "trunk"};

std::optional<double> parse_width(const std::string& raw) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
  if (ec != std::errc() || ptr == raw.data() || !(v > 0.0)) return std::nullopt;
  return v;
}

double osm_coord(const pt::ptree& attrs, const char* key, const std::string& where) {
  const auto raw = attrs.get_optional<std::string>(key);
  if (!raw) throw GraphError(GraphErrorKind::ParseError, where + ": missing " + key);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(raw->data(), raw->data() + raw->size(), v);
  if (ec != std::errc() || ptr != raw->data() + raw->size()) {
    throw GraphError(GraphErrorKind::ParseError, where + ": bad " + key + " \"" + *raw + "\"");
  }
  return v;
}

}  // namespace

RoadGraph parse_osm_xml(std::string_view text) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw GraphError(GraphErrorKind::ParseError, "invalid OSM XML: " + e.message(), e.line());
  }
  const auto osm = tree.get_child_optional("osm");
  if (!osm) throw GraphError(GraphErrorKind::ParseError, "missing <osm> root element");

  std::unordered_map<std::string, geo::GeoPoint> positions;
  struct Way {
    std::string id;
    std::vector<std::string> refs;
    std::string highway;
    bool oneway_tag = false;
    std::optional<double> width;
  };
  std::vector<Way> ways;

  for (const auto& [tag, child] : *osm) {
    if (tag == "node") {
      const auto& attrs = child.get_child("<xmlattr>", pt::ptree{});
      const auto id = attrs.get_optional<std::string>("id");
      if (!id) throw GraphError(GraphErrorKind::ParseError, "<node> without id");
      const std::string where = "node " + *id;
      positions[*id] = {osm_coord(attrs, "lat", where), osm_coord(attrs, "lon", where)};
    } else if (tag == "way") {
      Way w;
      w.id = child.get<std::string>("<xmlattr>.id", "");
      if (w.id.empty()) throw GraphError(GraphErrorKind::ParseError, "<way> without id");
      for (const auto& [wtag, wchild] : child) {
        if (wtag == "nd") {
          w.refs.push_back(wchild.get<std::string>("<xmlattr>.ref", ""));
        } else if (wtag == "tag") {
          const auto k = wchild.get<std::string>("<xmlattr>.k", "");
          const auto v = wchild.get<std::string>("<xmlattr>.v", "");
          if (k == "highway") w.highway = v;
          if (k == "oneway") w.oneway_tag = (v == "yes" || v == "true" || v == "1");
          if (k == "width") w.width = parse_width(v);
        }
      }
      if (!w.highway.empty()) ways.push_back(std::move(w));
    }
  }

  RoadGraph::Builder b;
  for (const Way& w : ways) {
    for (const auto& ref : w.refs) {
      const auto pos = positions.find(ref);
      if (pos == positions.end()) {
        throw GraphError(GraphErrorKind::UnknownNodeRef, "way " + w.id + " references unknown node " + ref);
      }
      if (!b.find_node(ref)) b.add_node(ref, pos->second);
    }
    const bool oneway = w.oneway_tag && kMotorClasses.contains(w.highway);
    for (std::size_t k = 0; k + 1 < w.refs.size(); ++k) {
      EdgeSpec spec;
      spec.id = "w" + w.id + "-" + std::to_string(k);
      spec.from = w.refs[k];
      spec.to = w.refs[k + 1];
      spec.width_m = w.width;
      spec.oneway = oneway;
      b.add_edge(spec);
    }
  }
  return std::move(b).build();
}

GraphFormat parse_graph_format(std::string_view s) {
  if (s == "auto") return GraphFormat::automatic;
  if (s == "json") return GraphFormat::json;
  if (s == "osm") return GraphFormat::osm;
  throw std::invalid_argument("unknown graph format \"" + std::string(s) + "\" (expected auto|json|osm)");
}

RoadGraph parse_graph(std::string_view text, GraphFormat format) {
  if (format == GraphFormat::automatic) {
    const auto first = text.find_first_not_of(" \t\r\n\xEF\xBB\xBF");
    format = (first != std::string_view::npos && text[first] == '<') ? GraphFormat::osm : GraphFormat::json;
  }
  return format == GraphFormat::osm ? parse_osm_xml(text) : parse_graph_json(text);
}

}  // namespace cctv
