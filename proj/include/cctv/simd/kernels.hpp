#pragma once

// Data-parallel inner loops shared by the coverage, evaluation and snapping
// code. Every kernel has a scalar reference and an AVX2 variant that performs
// the same IEEE operations in the same order, so results are bit-identical.
// The build disables floating-point contraction to keep it that way.

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace cctv::simd {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);
bool cpu_supports(Isa isa);

/// The ISA used by the dispatching entry points: the best one the CPU
/// supports, unless CCTV_SIMD=scalar is set or force_isa() overrides it.
Isa active_isa();
/// Pins dispatch to `isa` (must be supported); nullopt restores auto-detection.
void force_isa(std::optional<Isa> isa);

/// Precomputed coverage test for a disc or sector centered at the local
/// origin, with the sector widened by a lateral buffer.
struct CoverageShape {
  double reach2 = 0.0;   // (radius + buffer)^2
  double buffer = 0.0;
  double buffer2 = 0.0;
  bool full = true;      // disc, or half-angle >= 180 degrees
  bool wide = false;     // half-angle >= 90 degrees
  double ux = 0.0;       // heading unit vector, east component
  double uy = 1.0;       // heading unit vector, north component
  double cos_half = 1.0;
  double sin_half = 0.0;
  double sin_half_buffer = 0.0;
};

CoverageShape make_disc_shape(double radius_m, double buffer_m);
CoverageShape make_sector_shape(double radius_m, double buffer_m, double heading_deg, double fov_deg);

/// Single-point reference used by every kernel variant and by callers that
/// test one point at a time.
inline bool covers_point(const CoverageShape& s, double x, double y);

struct BoxesSoA {
  std::span<const double> x, y, w, h;
  std::size_t size() const { return x.size(); }
};

struct SegmentsSoA {
  std::span<const double> ax, ay, bx, by;
  std::size_t size() const { return ax.size(); }
};

struct Box {
  double x, y, w, h;
};

namespace scalar {
void coverage_mask(const CoverageShape& s, std::span<const double> xs, std::span<const double> ys,
                   std::span<std::uint8_t> out);
void iou_row(const Box& a, const BoxesSoA& b, std::span<double> out);
void segment_distance2(double px, double py, const SegmentsSoA& segs, std::span<double> dist2,
                       std::span<double> t);
}  // namespace scalar

namespace avx2 {
void coverage_mask(const CoverageShape& s, std::span<const double> xs, std::span<const double> ys,
                   std::span<std::uint8_t> out);
void iou_row(const Box& a, const BoxesSoA& b, std::span<double> out);
void segment_distance2(double px, double py, const SegmentsSoA& segs, std::span<double> dist2,
                       std::span<double> t);
}  // namespace avx2

// Dispatching entry points.
void coverage_mask(const CoverageShape& s, std::span<const double> xs, std::span<const double> ys,
                   std::span<std::uint8_t> out);
void iou_row(const Box& a, const BoxesSoA& b, std::span<double> out);
void segment_distance2(double px, double py, const SegmentsSoA& segs, std::span<double> dist2,
                       std::span<double> t);

inline bool covers_point(const CoverageShape& s, double x, double y) {
  const double d2 = x * x + y * y;
  if (!(d2 <= s.reach2)) return false;
  if (s.full) return true;
  if (d2 <= s.buffer2) return true;
  const double d = __builtin_sqrt(d2);
  if (s.wide && s.buffer >= d * s.sin_half) return true;
  const double dot = s.ux * x + s.uy * y;
  const double rem = d2 - s.buffer2;
  const double rhs = s.cos_half * __builtin_sqrt(rem > 0.0 ? rem : 0.0) - s.sin_half_buffer;
  return dot >= rhs;
}

}  // namespace cctv::simd
