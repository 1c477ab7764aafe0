#include "cctv/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "cctv/simd/kernels.hpp"

namespace cctv::eval {

std::string_view to_string(Category c) { return c == Category::directed ? "directed" : "round"; }

std::string_view to_string(SizeBucket b) {
  switch (b) {
    case SizeBucket::small: return "small";
    case SizeBucket::medium: return "medium";
    case SizeBucket::large: return "large";
  }
  return "small";
}

std::vector<double> EvalConfig::default_thresholds() {
  std::vector<double> t;
  for (int i = 0; i < 10; ++i) t.push_back((50 + 5 * i) / 100.0);
  return t;
}

void EvalConfig::validate() const {
  if (iou_thresholds.empty()) throw std::invalid_argument("iou_thresholds must not be empty");
  for (std::size_t i = 0; i < iou_thresholds.size(); ++i) {
    const double t = iou_thresholds[i];
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("iou_thresholds must lie in [0, 1]");
    if (i > 0 && !(t > iou_thresholds[i - 1])) {
      throw std::invalid_argument("iou_thresholds must be strictly increasing");
    }
  }
  if (max_dets_per_image == 0) throw std::invalid_argument("max_dets_per_image must be positive");
}

double iou(const BBox& a, const BBox& b) {
  const double bx[] = {b.x}, by[] = {b.y}, bw[] = {b.w}, bh[] = {b.h};
  double out[1];
  simd::scalar::iou_row({a.x, a.y, a.w, a.h}, {bx, by, bw, bh}, out);
  return out[0];
}

SizeBucket size_bucket(const BBox& b) {
  const double area = b.area();
  if (area < 32.0 * 32.0) return SizeBucket::small;
  if (area <= 96.0 * 96.0) return SizeBucket::medium;
  return SizeBucket::large;
}

namespace {

// One non-truncated detection after matching, in per-image score order.
struct ScoredDet {
  double score;
  std::int64_t image_id;
  std::size_t rank;  // position within its image after sorting
  bool matched;
  bool ignored;
};

struct ImageMatch {
  std::vector<ScoredDet> dets;
  std::size_t non_ignored_gts = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // indices into the image's inputs
};

bool in_scope(std::optional<Category> category, Category c) { return !category || *category == c; }

// COCO matching for one image. When `size_filter` is null nothing is ignored.
// Ground truths outside the filter are ignored; a detection matched to an
// ignored ground truth is itself ignored, as is an unmatched detection
// outside the filter. Non-ignored ground truths are preferred, and among equal
// IoU the later ground truth wins.
ImageMatch match_image(const std::vector<const Detection*>& dets, const std::vector<const GroundTruthBox*>& gts,
                       double iou_thr, std::size_t max_dets, const std::set<SizeBucket>* size_filter,
                       bool per_category) {
  ImageMatch result;

  std::vector<std::size_t> det_order(dets.size());
  std::iota(det_order.begin(), det_order.end(), 0);
  std::stable_sort(det_order.begin(), det_order.end(),
                   [&](std::size_t a, std::size_t b) { return dets[a]->score > dets[b]->score; });
  if (det_order.size() > max_dets) det_order.resize(max_dets);

  std::vector<bool> gt_ignored(gts.size(), false);
  if (size_filter != nullptr) {
    for (std::size_t g = 0; g < gts.size(); ++g) {
      gt_ignored[g] = !size_filter->contains(size_bucket(gts[g]->bbox));
    }
  }
  std::vector<std::size_t> gt_order(gts.size());
  std::iota(gt_order.begin(), gt_order.end(), 0);
  std::stable_sort(gt_order.begin(), gt_order.end(),
                   [&](std::size_t a, std::size_t b) { return !gt_ignored[a] && gt_ignored[b]; });
  for (std::size_t g = 0; g < gts.size(); ++g) result.non_ignored_gts += gt_ignored[g] ? 0 : 1;

  std::vector<double> gx, gy, gw, gh;
  for (std::size_t g : gt_order) {
    gx.push_back(gts[g]->bbox.x);
    gy.push_back(gts[g]->bbox.y);
    gw.push_back(gts[g]->bbox.w);
    gh.push_back(gts[g]->bbox.h);
  }
  const simd::BoxesSoA gt_soa{gx, gy, gw, gh};
  std::vector<double> ious(gts.size());
  std::vector<bool> gt_taken(gts.size(), false);
  const double floor_thr = std::min(iou_thr, 1.0 - 1e-10);

  for (std::size_t rank = 0; rank < det_order.size(); ++rank) {
    const Detection& d = *dets[det_order[rank]];
    simd::iou_row({d.bbox.x, d.bbox.y, d.bbox.w, d.bbox.h}, gt_soa, ious);
    double best = floor_thr;
    std::optional<std::size_t> m;
    for (std::size_t k = 0; k < gt_order.size(); ++k) {
      const std::size_t g = gt_order[k];
      if (gt_taken[k]) continue;
      if (per_category && gts[g]->category != d.category) continue;
      if (m && !gt_ignored[gt_order[*m]] && gt_ignored[g]) break;
      if (ious[k] < best) continue;
      best = ious[k];
      m = k;
    }
    ScoredDet sd{d.score, d.image_id, rank, false, false};
    if (m) {
      gt_taken[*m] = true;
      sd.matched = true;
      sd.ignored = gt_ignored[gt_order[*m]];
      result.pairs.emplace_back(det_order[rank], gt_order[*m]);
    } else if (size_filter != nullptr) {
      sd.ignored = !size_filter->contains(size_bucket(d.bbox));
    }
    result.dets.push_back(sd);
  }
  return result;
}

struct Sweep {
  std::vector<ScoredDet> dets;  // non-ignored, global score order
  std::size_t non_ignored_gts = 0;
};

Sweep sweep(std::span<const Detection> dets, std::span<const GroundTruthBox> gts, double iou_thr,
            std::size_t max_dets, const std::set<SizeBucket>& size_filter, std::optional<Category> category) {
  std::map<std::int64_t, std::pair<std::vector<const Detection*>, std::vector<const GroundTruthBox*>>> images;
  for (const Detection& d : dets) {
    if (in_scope(category, d.category)) images[d.image_id].first.push_back(&d);
  }
  for (const GroundTruthBox& g : gts) {
    if (in_scope(category, g.category)) images[g.image_id].second.push_back(&g);
  }

  Sweep s;
  for (const auto& [image_id, items] : images) {
    // Pooled evaluation treats every camera as one class.
    ImageMatch im = match_image(items.first, items.second, iou_thr, max_dets, &size_filter, false);
    s.non_ignored_gts += im.non_ignored_gts;
    for (const ScoredDet& d : im.dets) {
      if (!d.ignored) s.dets.push_back(d);
    }
  }
  // Images are visited in id order and each image is already score-sorted,
  // so a stable sort yields (score desc, image id, rank).
  std::stable_sort(s.dets.begin(), s.dets.end(),
                   [](const ScoredDet& a, const ScoredDet& b) { return a.score > b.score; });
  return s;
}

double interpolated_ap(const Sweep& s, Interpolation interpolation) {
  const std::size_t n = s.dets.size();
  std::vector<double> precision(n), recall(n);
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < n; ++i) {
    (s.dets[i].matched ? tp : fp)++;
    recall[i] = static_cast<double>(tp) / static_cast<double>(s.non_ignored_gts);
    precision[i] = static_cast<double>(tp) / static_cast<double>(tp + fp);
  }
  // Precision envelope: max precision at any recall to the right.
  for (std::size_t i = n; i-- > 1;) precision[i - 1] = std::max(precision[i - 1], precision[i]);

  if (interpolation == Interpolation::all_point) {
    double ap = 0.0, prev_recall = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      ap += (recall[i] - prev_recall) * precision[i];
      prev_recall = recall[i];
    }
    return ap;
  }
  double sum = 0.0;
  for (int k = 0; k <= 100; ++k) {
    const double r = k / 100.0;
    const auto it = std::lower_bound(recall.begin(), recall.end(), r);
    if (it != recall.end()) sum += precision[static_cast<std::size_t>(it - recall.begin())];
  }
  return sum / 101.0;
}

std::optional<double> mean_of(const std::vector<std::optional<double>>& values) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& v : values) {
    if (v) {
      sum += *v;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

std::optional<double> recall_at(std::span<const Detection> dets, std::span<const GroundTruthBox> gts,
                                double iou_thr, const EvalConfig& config, std::optional<Category> category) {
  const Sweep s = sweep(dets, gts, iou_thr, config.max_dets_per_image, config.size_filter, category);
  if (s.non_ignored_gts == 0) return std::nullopt;
  const auto tp = std::count_if(s.dets.begin(), s.dets.end(), [](const ScoredDet& d) { return d.matched; });
  return static_cast<double>(tp) / static_cast<double>(s.non_ignored_gts);
}

EvalConfig with_filter(const EvalConfig& config, std::set<SizeBucket> filter) {
  EvalConfig c = config;
  c.size_filter = std::move(filter);
  return c;
}

}  // namespace

MatchResult match_greedy(std::span<const Detection> dets, std::span<const GroundTruthBox> gts, double iou_thr,
                         std::size_t max_dets) {
  std::vector<const Detection*> dp;
  std::vector<const GroundTruthBox*> gp;
  for (const Detection& d : dets) dp.push_back(&d);
  for (const GroundTruthBox& g : gts) gp.push_back(&g);
  const ImageMatch im = match_image(dp, gp, iou_thr, max_dets, nullptr, true);

  MatchResult r;
  r.det_is_tp.assign(dets.size(), false);
  r.pairs = im.pairs;
  for (const auto& [d, g] : im.pairs) r.det_is_tp[d] = true;
  r.tp = im.pairs.size();
  r.fp = im.dets.size() - r.tp;
  r.fn = gts.size() - r.tp;
  return r;
}

std::optional<double> average_precision(std::span<const Detection> dets, std::span<const GroundTruthBox> gts,
                                        double iou_thr, const EvalConfig& config, std::optional<Category> category) {
  config.validate();
  const Sweep s = sweep(dets, gts, iou_thr, config.max_dets_per_image, config.size_filter, category);
  if (s.non_ignored_gts == 0) return std::nullopt;
  return interpolated_ap(s, config.interpolation);
}

std::optional<double> average_recall(std::span<const Detection> dets, std::span<const GroundTruthBox> gts,
                                     const EvalConfig& config, std::optional<Category> category) {
  config.validate();
  std::vector<std::optional<double>> recalls;
  for (double t : config.iou_thresholds) recalls.push_back(recall_at(dets, gts, t, config, category));
  return mean_of(recalls);
}

Counts count_matches(std::span<const Detection> dets, std::span<const GroundTruthBox> gts, double iou_thr,
                     const EvalConfig& config) {
  const Sweep s = sweep(dets, gts, iou_thr, config.max_dets_per_image, config.size_filter, std::nullopt);
  Counts c;
  for (const ScoredDet& d : s.dets) (d.matched ? c.tp : c.fp)++;
  c.fn = s.non_ignored_gts - c.tp;
  return c;
}

std::optional<double> f1_score(std::size_t tp, std::size_t fp, std::size_t fn) {
  if (tp == 0 && fp == 0 && fn == 0) return std::nullopt;
  return 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
}

EvalReport evaluate(std::span<const Detection> dets, std::span<const GroundTruthBox> gts, const EvalConfig& config) {
  config.validate();
  EvalReport r;

  std::vector<std::optional<double>> per_threshold;
  for (double t : config.iou_thresholds) per_threshold.push_back(average_precision(dets, gts, t, config));
  r.ap50 = average_precision(dets, gts, 0.5, config);
  r.ap50_95 = mean_of(per_threshold);

  const EvalConfig medium = with_filter(config, {SizeBucket::medium});
  const EvalConfig large = with_filter(config, {SizeBucket::large});
  std::vector<std::optional<double>> ap_m, ap_l;
  for (double t : config.iou_thresholds) {
    ap_m.push_back(average_precision(dets, gts, t, medium));
    ap_l.push_back(average_precision(dets, gts, t, large));
  }
  r.ap_medium = mean_of(ap_m);
  r.ap_large = mean_of(ap_l);

  r.ar100 = average_recall(dets, gts, config);
  r.ar_medium = average_recall(dets, gts, medium);
  r.ar_large = average_recall(dets, gts, large);

  r.counts_at_50 = count_matches(dets, gts, 0.5, config);
  r.f1_at_50 = f1_score(r.counts_at_50.tp, r.counts_at_50.fp, r.counts_at_50.fn);

  r.ap50_directed = average_precision(dets, gts, 0.5, config, Category::directed);
  r.ap50_round = average_precision(dets, gts, 0.5, config, Category::round);
  return r;
}

std::vector<Detection> fuse(std::span<const Detection> a, std::span<const Detection> b, double dedup_iou_thr) {
  std::map<std::pair<std::int64_t, Category>, std::vector<const Detection*>> groups;
  for (const Detection& d : a) groups[{d.image_id, d.category}].push_back(&d);
  for (const Detection& d : b) groups[{d.image_id, d.category}].push_back(&d);

  std::vector<Detection> out;
  for (auto& [key, group] : groups) {
    std::stable_sort(group.begin(), group.end(),
                     [](const Detection* x, const Detection* y) { return x->score > y->score; });
    std::vector<double> kx, ky, kw, kh, ious;
    for (const Detection* d : group) {
      ious.resize(kx.size());
      simd::iou_row({d->bbox.x, d->bbox.y, d->bbox.w, d->bbox.h}, {kx, ky, kw, kh}, ious);
      if (std::any_of(ious.begin(), ious.end(), [&](double v) { return v >= dedup_iou_thr; })) continue;
      kx.push_back(d->bbox.x);
      ky.push_back(d->bbox.y);
      kw.push_back(d->bbox.w);
      kh.push_back(d->bbox.h);
      out.push_back(*d);
    }
  }
  return out;
}

}  // namespace cctv::eval
