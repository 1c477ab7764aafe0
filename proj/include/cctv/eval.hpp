#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace cctv::eval {

/// Camera sub-classes; COCO category ids 1 and 2 respectively.
enum class Category { directed, round };
enum class SizeBucket { small, medium, large };
enum class Interpolation { coco101, all_point };

std::string_view to_string(Category c);
std::string_view to_string(SizeBucket b);

struct BBox {
  double x = 0.0;  // top-left, pixels
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double area() const { return w * h; }
  bool valid() const { return w > 0.0 && h > 0.0; }
};

struct Detection {
  std::int64_t image_id = 0;
  Category category = Category::directed;
  BBox bbox;
  double score = 0.0;
};

struct GroundTruthBox {
  std::int64_t image_id = 0;
  Category category = Category::directed;
  BBox bbox;
};

struct EvalConfig {
  std::vector<double> iou_thresholds = default_thresholds();
  std::size_t max_dets_per_image = 100;
  std::set<SizeBucket> size_filter = {SizeBucket::medium, SizeBucket::large};
  Interpolation interpolation = Interpolation::coco101;

  /// 0.50, 0.55, ..., 0.95
  static std::vector<double> default_thresholds();
  /// Throws std::invalid_argument on non-increasing or out-of-range thresholds.
  void validate() const;
};

struct Counts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

/// Absent metrics (no ground truth in scope) are nullopt, never 0.
struct EvalReport {
  std::optional<double> ap50;
  std::optional<double> ap50_95;
  std::optional<double> ap_medium;
  std::optional<double> ap_large;
  std::optional<double> ar100;
  std::optional<double> ar_medium;
  std::optional<double> ar_large;
  std::optional<double> f1_at_50;
  std::optional<double> ap50_directed;
  std::optional<double> ap50_round;
  Counts counts_at_50;
};

double iou(const BBox& a, const BBox& b);

/// Half-open buckets: area < 32^2 small, area <= 96^2 medium, else large.
SizeBucket size_bucket(const BBox& b);

struct MatchResult {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  /// (detection index, ground-truth index) into the caller's spans.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  /// Indexed like the input detections; false for unmatched or truncated ones.
  std::vector<bool> det_is_tp;
};

/// Single-image, per-category greedy matching: detections in descending
/// score order (ties by input order) claim the unmatched same-category ground
/// truth of highest IoU >= iou_thr.
MatchResult match_greedy(std::span<const Detection> dets, std::span<const GroundTruthBox> gts, double iou_thr,
                         std::size_t max_dets);

/// Interpolated AP over all images at one IoU threshold. `category` restricts
/// to one class; nullopt pools both classes into a single camera class.
/// nullopt result: no ground truth survives the size filter.
std::optional<double> average_precision(std::span<const Detection> dets, std::span<const GroundTruthBox> gts,
                                        double iou_thr, const EvalConfig& config,
                                        std::optional<Category> category = std::nullopt);

/// Mean over the configured IoU thresholds of recall at max_dets_per_image.
std::optional<double> average_recall(std::span<const Detection> dets, std::span<const GroundTruthBox> gts,
                                     const EvalConfig& config, std::optional<Category> category = std::nullopt);

/// Pooled TP/FP/FN counts at one IoU threshold after size filtering.
Counts count_matches(std::span<const Detection> dets, std::span<const GroundTruthBox> gts, double iou_thr,
                     const EvalConfig& config);

/// 2tp / (2tp + fp + fn); nullopt when all counts are zero.
std::optional<double> f1_score(std::size_t tp, std::size_t fp, std::size_t fn);

EvalReport evaluate(std::span<const Detection> dets, std::span<const GroundTruthBox> gts,
                    const EvalConfig& config = {});

/// Cross-source greedy non-maximum suppression per image and category: the
/// union is visited in descending score order (ties keep `a` before `b`) and a
/// detection survives unless it overlaps an already kept one at IoU >= thr.
std::vector<Detection> fuse(std::span<const Detection> a, std::span<const Detection> b,
                            double dedup_iou_thr = 0.5);

}  // namespace cctv::eval
