#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <stdexcept>
#include <vector>

#include "cctv/simd/kernels.hpp"

using namespace cctv::simd;

namespace {

std::vector<double> uniform(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

CoverageShape random_shape(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  const double r = 5 + 60 * u(rng), b = u(rng) < 0.2 ? 0.0 : 8 * u(rng);
  if (u(rng) < 0.25) return make_disc_shape(r, b);
  return make_sector_shape(r, b, 359.9 * u(rng), 1 + 179 * u(rng));
}

}  // namespace

TEST_CASE("scalar kernels follow the single-point reference") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const CoverageShape s = random_shape(rng);
    const auto xs = uniform(rng, 301, -80, 80), ys = uniform(rng, 301, -80, 80);
    std::vector<std::uint8_t> mask(xs.size());
    scalar::coverage_mask(s, xs, ys, mask);
    for (std::size_t i = 0; i < xs.size(); ++i) CHECK(static_cast<bool>(mask[i]) == covers_point(s, xs[i], ys[i]));
  }

  const double bx[] = {0, 5, 20, 10}, by[] = {0, 5, 0, 10}, bw[] = {10, 10, 5, 10}, bh[] = {10, 10, 5, 10};
  std::vector<double> out(4);
  scalar::iou_row({0, 0, 10, 10}, {bx, by, bw, bh}, out);
  CHECK(out[0] == 1.0);
  CHECK(out[1] == doctest::Approx(25.0 / 175.0));
  CHECK(out[2] == 0.0);
  CHECK(out[3] == 0.0);  // touching corners

  const double ax[] = {-1, 3, 2}, ay[] = {1, 3, 2}, sx[] = {1, 5, 2}, sy[] = {1, 3, 2};
  std::vector<double> d2(3), t(3);
  scalar::segment_distance2(0, 0, {ax, ay, sx, sy}, d2, t);
  CHECK(d2[0] == 1.0);
  CHECK(t[0] == 0.5);
  CHECK(d2[1] == 18.0);
  CHECK(t[1] == 0.0);
  CHECK(d2[2] == 8.0);  // degenerate segment
  CHECK(t[2] == 0.0);
}

TEST_CASE("dispatch honours force_isa") {
  force_isa(Isa::scalar);
  CHECK(active_isa() == Isa::scalar);
  force_isa(std::nullopt);
  CHECK(cpu_supports(active_isa()));
  CHECK(isa_name(Isa::avx2) == "avx2");
  if (!cpu_supports(Isa::avx2)) CHECK_THROWS_AS(force_isa(Isa::avx2), std::invalid_argument);
}

#ifdef CCTV_HAVE_AVX2

TEST_CASE("AVX2 kernels are bit-identical to scalar") {
  if (!cpu_supports(Isa::avx2)) {
    MESSAGE("CPU lacks AVX2; equivalence not exercised");
    return;
  }
  std::mt19937_64 rng(99);
  for (std::size_t n = 0; n < 70; ++n) {
    for (int rep = 0; rep < 20; ++rep) {
      const CoverageShape s = random_shape(rng);
      const auto xs = uniform(rng, n, -80, 80), ys = uniform(rng, n, -80, 80);
      std::vector<std::uint8_t> m1(n), m2(n);
      scalar::coverage_mask(s, xs, ys, m1);
      avx2::coverage_mask(s, xs, ys, m2);
      CHECK(m1 == m2);

      const auto bx = uniform(rng, n, 0, 200), by = uniform(rng, n, 0, 200), bw = uniform(rng, n, 1, 120),
                 bh = uniform(rng, n, 1, 120);
      const Box a{80, 70, 60, 50};
      std::vector<double> i1(n), i2(n);
      scalar::iou_row(a, {bx, by, bw, bh}, i1);
      avx2::iou_row(a, {bx, by, bw, bh}, i2);
      CHECK(same_bits(i1, i2));

      auto ax = uniform(rng, n, -50, 50), ay = uniform(rng, n, -50, 50), qx = uniform(rng, n, -50, 50),
           qy = uniform(rng, n, -50, 50);
      if (n > 3) qx[3] = ax[3], qy[3] = ay[3];
      std::vector<double> d1(n), d2(n), t1(n), t2(n);
      scalar::segment_distance2(1.5, -2.5, {ax, ay, qx, qy}, d1, t1);
      avx2::segment_distance2(1.5, -2.5, {ax, ay, qx, qy}, d2, t2);
      CHECK(same_bits(d1, d2));
      CHECK(same_bits(t1, t2));
    }
  }
}

TEST_CASE("AVX2 coverage on boundary points") {
  if (!cpu_supports(Isa::avx2)) return;
  // Points exactly on the rim, the apex buffer and the sector edges.
  const CoverageShape s = make_sector_shape(20, 3, 45, 90);
  std::vector<double> xs, ys;
  for (int k = 0; k < 360; ++k) {
    const double a = k * M_PI / 180;
    for (double r : {3.0, 20.0, 23.0}) {
      xs.push_back(r * std::sin(a));
      ys.push_back(r * std::cos(a));
    }
  }
  std::vector<std::uint8_t> m1(xs.size()), m2(xs.size());
  scalar::coverage_mask(s, xs, ys, m1);
  avx2::coverage_mask(s, xs, ys, m2);
  CHECK(m1 == m2);
}

#endif
