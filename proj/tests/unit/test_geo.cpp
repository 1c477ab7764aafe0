#include <doctest.h>

#include <cmath>
#include <random>

#include "cctv/geo.hpp"

using namespace cctv::geo;

namespace {

// Spherical law of cosines: a different closed form for the same distance.
double cosine_law_m(const GeoPoint& a, const GeoPoint& b) {
  const double p1 = a.lat * kDegToRad, p2 = b.lat * kDegToRad, dl = (b.lon - a.lon) * kDegToRad;
  const double c = std::sin(p1) * std::sin(p2) + std::cos(p1) * std::cos(p2) * std::cos(dl);
  return kEarthRadiusM * std::acos(std::clamp(c, -1.0, 1.0));
}

}  // namespace

TEST_CASE("haversine matches known arcs") {
  CHECK(haversine_m({0, 0}, {1, 0}) == doctest::Approx(kMetersPerDegree).epsilon(1e-12));
  CHECK(haversine_m({0, 0}, {0, 90}) == doctest::Approx(kEarthRadiusM * kPi / 2).epsilon(1e-12));
  CHECK(haversine_m({10, 179.9}, {10, -179.9}) == doctest::Approx(haversine_m({10, 0}, {10, 0.2})).epsilon(1e-9));
  CHECK(haversine_m({12.5, 7.25}, {12.5, 7.25}) == 0.0);
}

TEST_CASE("haversine agrees with the cosine law away from tiny distances") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> lat(-80, 80), lon(-180, 180);
  for (int i = 0; i < 2000; ++i) {
    const GeoPoint a{lat(rng), lon(rng)}, b{lat(rng), lon(rng)};
    const double d = haversine_m(a, b);
    if (d < 10000.0) continue;
    CHECK(d == doctest::Approx(cosine_law_m(a, b)).epsilon(1e-7));
  }
}

TEST_CASE("local frame round trip and range limit") {
  const GeoPoint o{52.37, 4.89};
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> m(-3000, 3000);
  for (int i = 0; i < 1000; ++i) {
    const LocalXY xy{m(rng), m(rng)};
    const GeoPoint p = unproject_local(o, xy);
    const LocalXY back = project_local(o, p);
    CHECK(back.x == doctest::Approx(xy.x).epsilon(1e-9));
    CHECK(back.y == doctest::Approx(xy.y).epsilon(1e-9));
  }
  try {
    project_local(o, {o.lat + 0.1, o.lon});
    FAIL("expected OutOfProjectionRange");
  } catch (const GeoError& e) {
    CHECK(e.kind() == GeoErrorKind::OutOfProjectionRange);
  }
  CHECK_THROWS_AS(unproject_local(o, {6000.0, 0.0}), GeoError);
  CHECK_THROWS_AS(destination_point(o, 10.0, 5000.5), GeoError);
}

TEST_CASE("destination and bearing invert each other") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> lat(-60, 60), lon(-180, 180), brg(0, 360), dist(0.5, 4900);
  for (int i = 0; i < 5000; ++i) {
    const GeoPoint o{lat(rng), lon(rng)};
    const double b = brg(rng), d = dist(rng);
    const GeoPoint p = destination_point(o, b, d);
    const double back = initial_bearing_deg(o, p);
    CHECK(std::abs(wrap180(back - b)) < 1e-7);
    // Planar vs spherical distance: the frame's scale error grows with
    // tan(lat) times the latitude span.
    const double bound = d * (d / kEarthRadiusM) * (0.5 + std::abs(std::tan(o.lat * kDegToRad))) + 1e-6;
    CHECK(std::abs(haversine_m(o, p) - d) < bound);
  }
}

TEST_CASE("bearings beyond the local frame follow the great circle") {
  CHECK(initial_bearing_deg({0, 0}, {0, 10}) == doctest::Approx(90.0));
  CHECK(initial_bearing_deg({0, 0}, {10, 0}) == doctest::Approx(0.0));
  CHECK(initial_bearing_deg({0, 10}, {0, 0}) == doctest::Approx(270.0));
  // New York to London leaves heading roughly north-east.
  CHECK(initial_bearing_deg({40.7128, -74.006}, {51.5074, -0.1278}) == doctest::Approx(51.2).epsilon(0.005));
}

TEST_CASE("degenerate and invalid input") {
  try {
    initial_bearing_deg({1, 1}, {1, 1});
    FAIL("expected DegenerateInput");
  } catch (const GeoError& e) {
    CHECK(e.kind() == GeoErrorKind::DegenerateInput);
  }
  CHECK_THROWS_AS(destination_point({0, 0}, 0, -1), GeoError);
  CHECK(destination_point({3, 4}, 77, 0).approx_equal({3, 4}));
  CHECK_FALSE(GeoPoint{91, 0}.valid());
  CHECK_FALSE(GeoPoint{0, 180.5}.valid());
  CHECK_FALSE(GeoPoint{NAN, 0}.valid());
  CHECK(GeoPoint{-90, -180}.valid());
}

TEST_CASE("angle wrapping") {
  CHECK(wrap360(-10) == 350);
  CHECK(wrap360(720) == 0);
  CHECK(wrap360(-1e-18) == 0);
  CHECK(wrap180(190) == -170);
  CHECK(wrap180(180) == 180);
  CHECK(wrap180(-180) == 180);
  CHECK(GeoPoint{0, 179.9999999999}.approx_equal({0, -179.9999999999}, 1e-9));
}
