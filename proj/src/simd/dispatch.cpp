#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "cctv/simd/kernels.hpp"

namespace cctv::simd {

namespace {

// -1: auto-detect; otherwise an Isa value.
std::atomic<int> g_forced{-1};

Isa detect() {
  if (const char* env = std::getenv("CCTV_SIMD")) {
    if (std::string_view(env) == "scalar") return Isa::scalar;
  }
  return cpu_supports(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(CCTV_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() {
  const int forced = g_forced.load(std::memory_order_relaxed);
  if (forced >= 0) return static_cast<Isa>(forced);
  static const Isa detected = detect();
  return detected;
}

void force_isa(std::optional<Isa> isa) {
  if (isa && !cpu_supports(*isa)) {
    throw std::invalid_argument("ISA " + std::string(isa_name(*isa)) + " not supported on this CPU");
  }
  g_forced.store(isa ? static_cast<int>(*isa) : -1, std::memory_order_relaxed);
}

void coverage_mask(const CoverageShape& s, std::span<const double> xs, std::span<const double> ys,
                   std::span<std::uint8_t> out) {
#ifdef CCTV_HAVE_AVX2
  if (active_isa() == Isa::avx2) return avx2::coverage_mask(s, xs, ys, out);
#endif
  scalar::coverage_mask(s, xs, ys, out);
}

void iou_row(const Box& a, const BoxesSoA& b, std::span<double> out) {
#ifdef CCTV_HAVE_AVX2
  if (active_isa() == Isa::avx2) return avx2::iou_row(a, b, out);
#endif
  scalar::iou_row(a, b, out);
}

void segment_distance2(double px, double py, const SegmentsSoA& segs, std::span<double> dist2,
                       std::span<double> t) {
#ifdef CCTV_HAVE_AVX2
  if (active_isa() == Isa::avx2) return avx2::segment_distance2(px, py, segs, dist2, t);
#endif
  scalar::segment_distance2(px, py, segs, dist2, t);
}

}  // namespace cctv::simd
