#include <doctest.h>

#include <cmath>
#include <random>

#include "cctv/coco_io.hpp"
#include "cctv/errors.hpp"
#include "cctv/eval.hpp"
#include "coco_oracle.hpp"
#include "fixtures.hpp"

using namespace cctv;
using namespace cctv::eval;

namespace {

bool close(const std::optional<double>& a, const std::optional<double>& b, double tol = 1e-9) {
  if (a.has_value() != b.has_value()) return false;
  return !a || std::abs(*a - *b) <= tol;
}

void check_reports_match(const EvalReport& got, const EvalReport& want) {
  CHECK(close(got.ap50, want.ap50));
  CHECK(close(got.ap50_95, want.ap50_95));
  CHECK(close(got.ap_medium, want.ap_medium));
  CHECK(close(got.ap_large, want.ap_large));
  CHECK(close(got.ar100, want.ar100));
  CHECK(close(got.ar_medium, want.ar_medium));
  CHECK(close(got.ar_large, want.ar_large));
  CHECK(close(got.f1_at_50, want.f1_at_50));
  CHECK(close(got.ap50_directed, want.ap50_directed));
  CHECK(close(got.ap50_round, want.ap50_round));
  CHECK(got.counts_at_50.tp == want.counts_at_50.tp);
  CHECK(got.counts_at_50.fp == want.counts_at_50.fp);
  CHECK(got.counts_at_50.fn == want.counts_at_50.fn);
}

GroundTruthBox gt(std::int64_t img, BBox b, Category c = Category::directed) { return {img, c, b}; }
Detection det(std::int64_t img, BBox b, double s, Category c = Category::directed) { return {img, c, b, s}; }

}  // namespace

TEST_CASE("iou and size buckets") {
  CHECK(iou({0, 0, 10, 10}, {0, 0, 10, 10}) == 1.0);
  CHECK(iou({0, 0, 10, 10}, {10, 0, 10, 10}) == 0.0);
  CHECK(iou({0, 0, 10, 10}, {5, 0, 10, 10}) == doctest::Approx(50.0 / 150.0));
  CHECK(size_bucket({0, 0, 31, 31}) == SizeBucket::small);
  CHECK(size_bucket({0, 0, 32, 32}) == SizeBucket::medium);
  CHECK(size_bucket({0, 0, 96, 96}) == SizeBucket::medium);
  CHECK(size_bucket({0, 0, 97, 97}) == SizeBucket::large);
  CHECK(size_bucket({0, 0, 16, 64}) == SizeBucket::medium);
}

TEST_CASE("f1 identities") {
  CHECK(*f1_score(33, 0, 6) == doctest::Approx(0.9167).epsilon(0.0005 / 0.9167));
  CHECK(*f1_score(35, 0, 4) == doctest::Approx(0.9459).epsilon(0.0005 / 0.9459));
  CHECK(*f1_score(0, 3, 0) == 0.0);
  CHECK_FALSE(f1_score(0, 0, 0));
}

TEST_CASE("greedy matching is per category and prefers higher scores") {
  const std::vector<GroundTruthBox> gts = {gt(1, {0, 0, 50, 50}), gt(1, {100, 0, 50, 50}, Category::round)};
  const std::vector<Detection> dets = {det(1, {2, 2, 50, 50}, 0.5), det(1, {0, 0, 50, 50}, 0.9),
                                       det(1, {100, 0, 50, 50}, 0.8)};
  const MatchResult m = match_greedy(dets, gts, 0.5, 100);
  CHECK(m.tp == 1);
  CHECK(m.fp == 2);  // the round GT is not claimable by a directed detection
  CHECK(m.fn == 1);
  CHECK(m.det_is_tp == std::vector<bool>{false, true, false});
  REQUIRE(m.pairs.size() == 1);
  CHECK(m.pairs[0] == std::pair<std::size_t, std::size_t>{1, 0});

  const MatchResult truncated = match_greedy(dets, gts, 0.5, 1);
  CHECK(truncated.tp == 1);
  CHECK(truncated.fp == 0);
}

TEST_CASE("equal IoU goes to the later ground truth") {
  // Two identical GT boxes: the detection claims the second one.
  const std::vector<GroundTruthBox> gts = {gt(1, {0, 0, 40, 40}), gt(1, {0, 0, 40, 40})};
  const std::vector<Detection> dets = {det(1, {0, 0, 40, 40}, 0.9)};
  const MatchResult m = match_greedy(dets, gts, 0.5, 100);
  REQUIRE(m.pairs.size() == 1);
  CHECK(m.pairs[0].second == 1);
}

TEST_CASE("perfect detector scores 1 everywhere it is defined") {
  const auto truth = eval::parse_coco_ground_truth(testing::read_fixture("coco_gt.json"));
  const auto dets = eval::parse_coco_results(testing::read_fixture("coco_perfect.json"), &truth.image_ids);
  const EvalReport r = evaluate(dets, truth.boxes);
  CHECK(*r.ap50 == 1.0);
  CHECK(*r.ap50_95 == 1.0);
  CHECK(*r.ap_medium == 1.0);
  CHECK_FALSE(r.ap_large);  // the fixture has no large boxes
  CHECK(*r.ar100 == 1.0);
  CHECK(*r.f1_at_50 == 1.0);
  CHECK(*r.ap50_directed == 1.0);
  CHECK(*r.ap50_round == 1.0);
}

TEST_CASE("absent ground truth yields absent metrics, not zero") {
  const std::vector<Detection> dets = {det(1, {0, 0, 50, 50}, 0.9)};
  const EvalReport r = evaluate(dets, {});
  CHECK_FALSE(r.ap50);
  CHECK_FALSE(r.ar100);
  CHECK(r.f1_at_50 == 0.0);
  CHECK(r.counts_at_50.fp == 1);
  const std::string text = report_text(r);
  CHECK(text.find("ap50: absent\n") != std::string::npos);
  CHECK(text.find("fp: 1\n") != std::string::npos);
  CHECK(report_json(r).find("\"ap50\": null") != std::string::npos);
}

TEST_CASE("small boxes are outside the default evaluation") {
  const std::vector<GroundTruthBox> gts = {gt(1, {0, 0, 20, 20}), gt(1, {100, 100, 50, 50})};
  const std::vector<Detection> dets = {det(1, {0, 0, 20, 20}, 0.9), det(1, {300, 300, 10, 10}, 0.8),
                                       det(1, {100, 100, 50, 50}, 0.7)};
  const Counts c = count_matches(dets, gts, 0.5, {});
  CHECK(c.tp == 1);
  CHECK(c.fp == 0);
  CHECK(c.fn == 0);
  CHECK(*average_precision(dets, gts, 0.5, {}) == 1.0);
}

TEST_CASE("metrics equal the brute-force oracle on random instances") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 500; ++i) {
    const auto inst = testing::random_eval_instance(rng, 5, 6);
    check_reports_match(evaluate(inst.dets, inst.gts), oracle::coco_report(inst.dets, inst.gts));

    EvalConfig all_point;
    all_point.interpolation = Interpolation::all_point;
    oracle::CocoOptions opt;
    opt.all_point = true;
    for (double t : {0.3, 0.5, 0.75}) {
      CHECK(close(average_precision(inst.dets, inst.gts, t, all_point), oracle::coco_ap(inst.dets, inst.gts, t, opt)));
    }
    EvalConfig tight;
    tight.max_dets_per_image = 2;
    tight.size_filter = {SizeBucket::small, SizeBucket::medium, SizeBucket::large};
    oracle::CocoOptions topt;
    topt.max_dets = 2;
    topt.filter = tight.size_filter;
    CHECK(close(average_precision(inst.dets, inst.gts, 0.5, tight), oracle::coco_ap(inst.dets, inst.gts, 0.5, topt)));
  }
}

TEST_CASE("config validation") {
  EvalConfig c;
  CHECK_NOTHROW(c.validate());
  c.iou_thresholds = {0.5, 0.5};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.iou_thresholds = {1.2};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.iou_thresholds = {};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.max_dets_per_image = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  CHECK(EvalConfig::default_thresholds().size() == 10);
}

TEST_CASE("fusion keeps the first source on ties and respects categories") {
  const std::vector<Detection> a = {det(1, {0, 0, 50, 50}, 0.8), det(2, {0, 0, 50, 50}, 0.6)};
  const std::vector<Detection> b = {det(1, {2, 2, 50, 50}, 0.8), det(1, {0, 0, 50, 50}, 0.7, Category::round),
                                    det(1, {300, 0, 50, 50}, 0.4)};
  const auto f = fuse(a, b);
  REQUIRE(f.size() == 4);
  int from_a = 0;
  for (const Detection& d : f) from_a += d.image_id == 1 && d.bbox.x == 0 && d.category == Category::directed;
  CHECK(from_a == 1);
  // Fusing a suppressed set with itself changes nothing.
  CHECK(fuse(f, f).size() == f.size());
}

TEST_CASE("fusion reproduces the complementary detector scenario") {
  const auto truth = parse_coco_ground_truth(testing::read_fixture("coco_gt.json"));
  const auto a = parse_coco_results(testing::read_fixture("coco_dets_a.json"), &truth.image_ids);
  const auto b = parse_coco_results(testing::read_fixture("coco_dets_b.json"), &truth.image_ids);
  CHECK(truth.boxes.size() == 39);
  const EvalReport ra = evaluate(a, truth.boxes);
  CHECK(ra.counts_at_50.tp == 33);
  CHECK(ra.counts_at_50.fp == 0);
  CHECK(ra.counts_at_50.fn == 6);
  const EvalReport rf = evaluate(fuse(a, b), truth.boxes);
  CHECK(rf.counts_at_50.tp == 35);
  CHECK(rf.counts_at_50.fp == 0);
  CHECK(rf.counts_at_50.fn == 4);
  CHECK(*rf.f1_at_50 == doctest::Approx(0.9459).epsilon(0.0005 / 0.9459));
}

TEST_CASE("COCO file handling") {
  const auto truth = parse_coco_ground_truth(testing::read_fixture("coco_gt.json"));
  const auto dets = parse_coco_results(testing::read_fixture("coco_dets_a.json"));
  const auto again = parse_coco_results(serialize_coco_results(dets));
  REQUIRE(again.size() == dets.size());
  for (std::size_t i = 0; i < dets.size(); ++i) {
    CHECK(again[i].image_id == dets[i].image_id);
    CHECK(again[i].category == dets[i].category);
    CHECK(again[i].bbox.x == dets[i].bbox.x);
    CHECK(again[i].bbox.h == dets[i].bbox.h);
    CHECK(again[i].score == dets[i].score);
  }

  const std::set<std::int64_t> known = {1};
  CHECK_THROWS_AS(parse_coco_results(R"([{"image_id": 7, "category_id": 1, "bbox": [0,0,1,1], "score": 0.5}])", &known),
                  InputError);
  CHECK_THROWS_AS(parse_coco_results(R"([{"image_id": 1, "category_id": 9, "bbox": [0,0,1,1], "score": 0.5}])"),
                  InputError);
  CHECK_THROWS_AS(parse_coco_results(R"([{"image_id": 1, "category_id": 1, "bbox": [0,0,0,1], "score": 0.5}])"),
                  InputError);
  try {
    parse_coco_results("[\n  {\"image_id\": 1,\n  oops\n]");
    FAIL("expected a parse error");
  } catch (const InputError& e) {
    CHECK(e.line() == 3);
  }
}
