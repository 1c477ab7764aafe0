#include "cctv/coco_io.hpp"

#include <iomanip>
#include <sstream>

#include "cctv/json_util.hpp"

namespace cctv::eval {

using json_util::Json;

namespace {

Category category_from_id(const Json& obj, const std::string& where) {
  const Json& v = json_util::require_member(obj, "category_id", where);
  if (!v.is_number_integer()) throw InputError(where + ".category_id: expected an integer");
  switch (v.get<int>()) {
    case kDirectedCategoryId: return Category::directed;
    case kRoundCategoryId: return Category::round;
    default: throw InputError(where + ".category_id: unknown category " + v.dump() + " (expected 1 or 2)");
  }
}

int category_to_id(Category c) { return c == Category::directed ? kDirectedCategoryId : kRoundCategoryId; }

std::int64_t image_id_of(const Json& obj, const std::string& where) {
  const Json& v = json_util::require_member(obj, "image_id", where);
  if (!v.is_number_integer()) throw InputError(where + ".image_id: expected an integer");
  return v.get<std::int64_t>();
}

BBox bbox_of(const Json& obj, const std::string& where) {
  const Json& v = json_util::require_member(obj, "bbox", where);
  if (!v.is_array() || v.size() != 4) throw InputError(where + ".bbox: expected [x, y, w, h]");
  for (const Json& c : v) {
    if (!c.is_number()) throw InputError(where + ".bbox: expected numbers");
  }
  BBox b{v[0].get<double>(), v[1].get<double>(), v[2].get<double>(), v[3].get<double>()};
  if (!b.valid()) throw InputError(where + ".bbox: width and height must be positive");
  return b;
}

}  // namespace

CocoGroundTruth parse_coco_ground_truth(std::string_view text) {
  const Json doc = json_util::parse(text);
  if (!doc.is_object()) throw InputError("ground truth: expected a COCO annotation object");
  CocoGroundTruth gt;

  const Json& images = json_util::require_member(doc, "images", "ground truth");
  if (!images.is_array()) throw InputError("ground truth.images: expected an array");
  for (std::size_t i = 0; i < images.size(); ++i) {
    const std::string where = "images[" + std::to_string(i) + "]";
    const Json& id = json_util::require_member(images[i], "id", where);
    if (!id.is_number_integer()) throw InputError(where + ".id: expected an integer");
    gt.image_ids.insert(id.get<std::int64_t>());
  }

  const Json& anns = json_util::require_member(doc, "annotations", "ground truth");
  if (!anns.is_array()) throw InputError("ground truth.annotations: expected an array");
  for (std::size_t i = 0; i < anns.size(); ++i) {
    const std::string where = "annotations[" + std::to_string(i) + "]";
    GroundTruthBox g{image_id_of(anns[i], where), category_from_id(anns[i], where), bbox_of(anns[i], where)};
    if (!gt.image_ids.contains(g.image_id)) {
      throw InputError(where + ".image_id: " + std::to_string(g.image_id) + " not listed in images");
    }
    gt.boxes.push_back(g);
  }
  return gt;
}

std::vector<Detection> parse_coco_results(std::string_view text, const std::set<std::int64_t>* known_images) {
  const Json doc = json_util::parse(text);
  if (!doc.is_array()) throw InputError("detections: expected a COCO results array");
  std::vector<Detection> dets;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string where = "detections[" + std::to_string(i) + "]";
    Detection d{image_id_of(doc[i], where), category_from_id(doc[i], where), bbox_of(doc[i], where),
                json_util::require_number(doc[i], "score", where)};
    if (!(d.score >= 0.0 && d.score <= 1.0)) throw InputError(where + ".score: must be in [0, 1]");
    if (known_images != nullptr && !known_images->contains(d.image_id)) {
      throw InputError(where + ".image_id: " + std::to_string(d.image_id) + " not in ground truth");
    }
    dets.push_back(d);
  }
  return dets;
}

std::string serialize_coco_results(std::span<const Detection> dets) {
  Json out = Json::array();
  for (const Detection& d : dets) {
    out.push_back({{"image_id", d.image_id},
                   {"category_id", category_to_id(d.category)},
                   {"bbox", {d.bbox.x, d.bbox.y, d.bbox.w, d.bbox.h}},
                   {"score", d.score}});
  }
  return out.dump(2) + "\n";
}

namespace {

std::vector<std::pair<const char*, const std::optional<double>*>> metric_fields(const EvalReport& r) {
  return {{"ap50", &r.ap50},           {"ap50_95", &r.ap50_95},         {"ap_medium", &r.ap_medium},
          {"ap_large", &r.ap_large},   {"ar100", &r.ar100},             {"ar_medium", &r.ar_medium},
          {"ar_large", &r.ar_large},   {"f1_at_50", &r.f1_at_50},       {"ap50_directed", &r.ap50_directed},
          {"ap50_round", &r.ap50_round}};
}

}  // namespace

std::string report_text(const EvalReport& report) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4);
  for (const auto& [name, value] : metric_fields(report)) {
    os << name << ": ";
    if (*value) {
      os << **value;
    } else {
      os << "absent";
    }
    os << '\n';
  }
  os << "tp: " << report.counts_at_50.tp << '\n'
     << "fp: " << report.counts_at_50.fp << '\n'
     << "fn: " << report.counts_at_50.fn << '\n';
  return os.str();
}

std::string report_json(const EvalReport& report) {
  Json out = Json::object();
  for (const auto& [name, value] : metric_fields(report)) {
    out[name] = *value ? Json(**value) : Json(nullptr);
  }
  out["counts"] = {{"tp", report.counts_at_50.tp}, {"fp", report.counts_at_50.fp}, {"fn", report.counts_at_50.fn}};
  return out.dump(2) + "\n";
}

}  // namespace cctv::eval
