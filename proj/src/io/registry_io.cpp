#include "cctv/registry_io.hpp"

#include <set>
#include <sstream>

namespace cctv {

using json_util::Json;

namespace {

const std::set<std::string, std::less<>> kKnownProperties = {"id",      "kind",   "heading_deg", "fov_deg",
                                                             "range_m", "source", "confidence"};

std::optional<double> optional_number(const Json& props, const char* key, const std::string& where) {
  const auto it = props.find(key);
  if (it == props.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) throw InvalidCamera(key, "expected a number at " + where);
  return it->get<double>();
}

}  // namespace

Camera camera_from_feature(const Json& feature, const std::string& where) {
  if (!feature.is_object() || feature.value("type", "") != "Feature") {
    throw InputError(where + ": expected a GeoJSON Feature");
  }
  const Json& geometry = json_util::require_member(feature, "geometry", where);
  if (!geometry.is_object() || geometry.value("type", "") != "Point") {
    throw InputError(where + ".geometry: expected a Point");
  }
  const Json& coords = json_util::require_member(geometry, "coordinates", where + ".geometry");
  if (!coords.is_array() || coords.size() < 2 || !coords[0].is_number() || !coords[1].is_number()) {
    throw InputError(where + ".geometry.coordinates: expected [lon, lat]");
  }
  const Json& props = json_util::require_member(feature, "properties", where);
  if (!props.is_object()) throw InputError(where + ".properties: expected an object");

  Camera c;
  c.position = {coords[1].get<double>(), coords[0].get<double>()};

  const auto id = props.find("id");
  if (id == props.end() || !id->is_string()) throw InvalidCamera("id", "expected a string at " + where);
  c.id = id->get<std::string>();

  const auto kind = props.find("kind");
  if (kind == props.end() || !kind->is_string() || !parse_camera_kind(kind->get<std::string>())) {
    throw InvalidCamera("kind", "expected \"directed\" or \"round\" at " + where);
  }
  c.kind = *parse_camera_kind(kind->get<std::string>());

  c.heading_deg = optional_number(props, "heading_deg", where);
  c.fov_deg = optional_number(props, "fov_deg", where);
  if (c.kind == CameraKind::directed && !c.fov_deg) c.fov_deg = defaults::kDirectedFovDeg;
  c.range_m = optional_number(props, "range_m", where)
                  .value_or(c.kind == CameraKind::directed ? defaults::kDirectedRangeM : defaults::kRoundRangeM);
  c.confidence = optional_number(props, "confidence", where).value_or(1.0);

  if (const auto src = props.find("source"); src != props.end() && !src->is_null()) {
    if (!src->is_string() || !parse_camera_source(src->get<std::string>())) {
      throw InvalidCamera("source", "expected registry|localized|imported at " + where);
    }
    c.source = *parse_camera_source(src->get<std::string>());
  }

  for (const auto& [key, value] : props.items()) {
    if (!kKnownProperties.contains(key)) c.extra_properties[key] = value.dump();
  }
  validate_camera(c);
  return c;
}

Json camera_to_feature(const Camera& c) {
  Json props = Json::object();
  props["id"] = c.id;
  props["kind"] = std::string(to_string(c.kind));
  if (c.heading_deg) props["heading_deg"] = *c.heading_deg;
  if (c.fov_deg) props["fov_deg"] = *c.fov_deg;
  props["range_m"] = c.range_m;
  props["source"] = std::string(to_string(c.source));
  props["confidence"] = c.confidence;
  for (const auto& [key, raw] : c.extra_properties) props[key] = Json::parse(raw);

  Json feature = Json::object();
  feature["type"] = "Feature";
  feature["geometry"] = {{"type", "Point"}, {"coordinates", {c.position.lon, c.position.lat}}};
  feature["properties"] = std::move(props);
  return feature;
}

std::vector<Camera> parse_registry(std::string_view text) {
  const Json doc = json_util::parse(text);
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection") {
    throw InputError("registry: expected a GeoJSON FeatureCollection");
  }
  const Json& features = json_util::require_member(doc, "features", "registry");
  if (!features.is_array()) throw InputError("registry.features: expected an array");

  std::vector<Camera> cameras;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < features.size(); ++i) {
    const std::string where = "features[" + std::to_string(i) + "]";
    Camera c = camera_from_feature(features[i], where);
    if (!ids.insert(c.id).second) throw InvalidCamera("id", "duplicate id \"" + c.id + "\" at " + where);
    cameras.push_back(std::move(c));
  }
  return cameras;
}

std::string serialize_registry(const std::vector<Camera>& cameras) {
  Json doc = Json::object();
  doc["type"] = "FeatureCollection";
  doc["features"] = Json::array();
  for (const Camera& c : cameras) doc["features"].push_back(camera_to_feature(c));
  return doc.dump(2) + "\n";
}

KindCounts count_kinds(const std::vector<Camera>& cameras) {
  KindCounts k;
  for (const Camera& c : cameras) (c.kind == CameraKind::directed ? k.directed : k.round)++;
  return k;
}

std::string registry_summary(const std::vector<Camera>& cameras) {
  const KindCounts k = count_kinds(cameras);
  std::ostringstream os;
  os << cameras.size() << (cameras.size() == 1 ? " camera" : " cameras") << " (" << k.directed << " directed, "
     << k.round << " round)";
  return os.str();
}

}  // namespace cctv
