#include <algorithm>
#include <cmath>

#include "cctv/geo.hpp"
#include "cctv/simd/kernels.hpp"

namespace cctv::simd {

CoverageShape make_disc_shape(double radius_m, double buffer_m) {
  CoverageShape s;
  const double reach = radius_m + buffer_m;
  s.reach2 = reach * reach;
  s.buffer = buffer_m;
  s.buffer2 = buffer_m * buffer_m;
  s.full = true;
  return s;
}

CoverageShape make_sector_shape(double radius_m, double buffer_m, double heading_deg, double fov_deg) {
  CoverageShape s = make_disc_shape(radius_m, buffer_m);
  const double half = fov_deg / 2.0;
  if (half >= 180.0) return s;
  s.full = false;
  s.wide = half >= 90.0;
  const double theta = heading_deg * geo::kDegToRad;
  s.ux = std::sin(theta);
  s.uy = std::cos(theta);
  s.cos_half = std::cos(half * geo::kDegToRad);
  s.sin_half = std::sin(half * geo::kDegToRad);
  s.sin_half_buffer = s.sin_half * buffer_m;
  return s;
}

namespace scalar {

void coverage_mask(const CoverageShape& s, std::span<const double> xs, std::span<const double> ys,
                   std::span<std::uint8_t> out) {
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = covers_point(s, xs[i], ys[i]) ? 1 : 0;
}

void iou_row(const Box& a, const BoxesSoA& b, std::span<double> out) {
  const double ax2 = a.x + a.w;
  const double ay2 = a.y + a.h;
  const double area_a = a.w * a.h;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double bx2 = b.x[i] + b.w[i];
    const double by2 = b.y[i] + b.h[i];
    const double ix = std::max(0.0, std::min(ax2, bx2) - std::max(a.x, b.x[i]));
    const double iy = std::max(0.0, std::min(ay2, by2) - std::max(a.y, b.y[i]));
    const double inter = ix * iy;
    const double uni = area_a + b.w[i] * b.h[i] - inter;
    out[i] = inter / uni;
  }
}

void segment_distance2(double px, double py, const SegmentsSoA& segs, std::span<double> dist2,
                       std::span<double> t) {
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const double dx = segs.bx[i] - segs.ax[i];
    const double dy = segs.by[i] - segs.ay[i];
    const double len2 = dx * dx + dy * dy;
    const double wx = px - segs.ax[i];
    const double wy = py - segs.ay[i];
    double u = len2 > 0.0 ? (wx * dx + wy * dy) / len2 : 0.0;
    u = std::min(std::max(u, 0.0), 1.0);
    const double ex = wx - u * dx;
    const double ey = wy - u * dy;
    dist2[i] = ex * ex + ey * ey;
    t[i] = u;
  }
}

}  // namespace scalar
}  // namespace cctv::simd
