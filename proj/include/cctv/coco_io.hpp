#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cctv/eval.hpp"

namespace cctv::eval {

/// COCO category ids used by the camera dataset.
inline constexpr int kDirectedCategoryId = 1;
inline constexpr int kRoundCategoryId = 2;

struct CocoGroundTruth {
  std::set<std::int64_t> image_ids;
  std::vector<GroundTruthBox> boxes;
};

/// COCO annotation file: images[] and annotations[] with bbox [x,y,w,h].
CocoGroundTruth parse_coco_ground_truth(std::string_view text);

/// COCO results file: [{"image_id","category_id","bbox","score"}...]. When
/// `known_images` is given, detections on other images are a schema error.
std::vector<Detection> parse_coco_results(std::string_view text,
                                          const std::set<std::int64_t>* known_images = nullptr);
std::string serialize_coco_results(std::span<const Detection> dets);

/// "key: value" lines; absent metrics print as "absent".
std::string report_text(const EvalReport& report);
std::string report_json(const EvalReport& report);

}  // namespace cctv::eval
