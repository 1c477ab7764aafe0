// Compiled with -mavx2 (no FMA); only reached after a runtime CPU check.

#include <immintrin.h>

#include "cctv/simd/kernels.hpp"

namespace cctv::simd::avx2 {

namespace {

constexpr std::size_t kLanes = 4;

// Stores the low bit of each lane mask as a 0/1 byte.
inline void store_mask(__m256d mask, std::uint8_t* out) {
  const int bits = _mm256_movemask_pd(mask);
  out[0] = static_cast<std::uint8_t>(bits & 1);
  out[1] = static_cast<std::uint8_t>((bits >> 1) & 1);
  out[2] = static_cast<std::uint8_t>((bits >> 2) & 1);
  out[3] = static_cast<std::uint8_t>((bits >> 3) & 1);
}

}  // namespace

void coverage_mask(const CoverageShape& s, std::span<const double> xs, std::span<const double> ys,
                   std::span<std::uint8_t> out) {
  const std::size_t n = xs.size();
  const std::size_t body = n - n % kLanes;

  const __m256d reach2 = _mm256_set1_pd(s.reach2);
  const __m256d buffer = _mm256_set1_pd(s.buffer);
  const __m256d buffer2 = _mm256_set1_pd(s.buffer2);
  const __m256d ux = _mm256_set1_pd(s.ux);
  const __m256d uy = _mm256_set1_pd(s.uy);
  const __m256d cos_half = _mm256_set1_pd(s.cos_half);
  const __m256d sin_half = _mm256_set1_pd(s.sin_half);
  const __m256d sin_half_buffer = _mm256_set1_pd(s.sin_half_buffer);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d wide = s.wide ? _mm256_castsi256_pd(_mm256_set1_epi64x(-1)) : zero;

  for (std::size_t i = 0; i < body; i += kLanes) {
    const __m256d x = _mm256_loadu_pd(xs.data() + i);
    const __m256d y = _mm256_loadu_pd(ys.data() + i);
    const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(x, x), _mm256_mul_pd(y, y));
    const __m256d in_reach = _mm256_cmp_pd(d2, reach2, _CMP_LE_OQ);
    if (s.full) {
      store_mask(in_reach, out.data() + i);
      continue;
    }
    const __m256d apex = _mm256_cmp_pd(d2, buffer2, _CMP_LE_OQ);
    const __m256d d = _mm256_sqrt_pd(d2);
    const __m256d wide_ok = _mm256_and_pd(wide, _mm256_cmp_pd(buffer, _mm256_mul_pd(d, sin_half), _CMP_GE_OQ));
    const __m256d dot = _mm256_add_pd(_mm256_mul_pd(ux, x), _mm256_mul_pd(uy, y));
    const __m256d rem = _mm256_max_pd(_mm256_sub_pd(d2, buffer2), zero);
    const __m256d rhs = _mm256_sub_pd(_mm256_mul_pd(cos_half, _mm256_sqrt_pd(rem)), sin_half_buffer);
    const __m256d angular = _mm256_cmp_pd(dot, rhs, _CMP_GE_OQ);
    const __m256d hit = _mm256_and_pd(in_reach, _mm256_or_pd(apex, _mm256_or_pd(wide_ok, angular)));
    store_mask(hit, out.data() + i);
  }
  for (std::size_t i = body; i < n; ++i) out[i] = covers_point(s, xs[i], ys[i]) ? 1 : 0;
}

void iou_row(const Box& a, const BoxesSoA& b, std::span<double> out) {
  const std::size_t n = b.size();
  const std::size_t body = n - n % kLanes;
  const __m256d ax = _mm256_set1_pd(a.x);
  const __m256d ay = _mm256_set1_pd(a.y);
  const __m256d ax2 = _mm256_set1_pd(a.x + a.w);
  const __m256d ay2 = _mm256_set1_pd(a.y + a.h);
  const __m256d area_a = _mm256_set1_pd(a.w * a.h);
  const __m256d zero = _mm256_setzero_pd();

  for (std::size_t i = 0; i < body; i += kLanes) {
    const __m256d bx = _mm256_loadu_pd(b.x.data() + i);
    const __m256d by = _mm256_loadu_pd(b.y.data() + i);
    const __m256d bw = _mm256_loadu_pd(b.w.data() + i);
    const __m256d bh = _mm256_loadu_pd(b.h.data() + i);
    const __m256d bx2 = _mm256_add_pd(bx, bw);
    const __m256d by2 = _mm256_add_pd(by, bh);
    const __m256d ix = _mm256_max_pd(_mm256_sub_pd(_mm256_min_pd(ax2, bx2), _mm256_max_pd(ax, bx)), zero);
    const __m256d iy = _mm256_max_pd(_mm256_sub_pd(_mm256_min_pd(ay2, by2), _mm256_max_pd(ay, by)), zero);
    const __m256d inter = _mm256_mul_pd(ix, iy);
    const __m256d uni = _mm256_sub_pd(_mm256_add_pd(area_a, _mm256_mul_pd(bw, bh)), inter);
    _mm256_storeu_pd(out.data() + i, _mm256_div_pd(inter, uni));
  }
  if (body < n) {
    const BoxesSoA tail{b.x.subspan(body), b.y.subspan(body), b.w.subspan(body), b.h.subspan(body)};
    scalar::iou_row(a, tail, out.subspan(body));
  }
}

void segment_distance2(double px, double py, const SegmentsSoA& segs, std::span<double> dist2,
                       std::span<double> t) {
  const std::size_t n = segs.size();
  const std::size_t body = n - n % kLanes;
  const __m256d vpx = _mm256_set1_pd(px);
  const __m256d vpy = _mm256_set1_pd(py);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);

  for (std::size_t i = 0; i < body; i += kLanes) {
    const __m256d ax = _mm256_loadu_pd(segs.ax.data() + i);
    const __m256d ay = _mm256_loadu_pd(segs.ay.data() + i);
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(segs.bx.data() + i), ax);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(segs.by.data() + i), ay);
    const __m256d len2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    const __m256d wx = _mm256_sub_pd(vpx, ax);
    const __m256d wy = _mm256_sub_pd(vpy, ay);
    const __m256d proj = _mm256_add_pd(_mm256_mul_pd(wx, dx), _mm256_mul_pd(wy, dy));
    const __m256d positive = _mm256_cmp_pd(len2, zero, _CMP_GT_OQ);
    __m256d u = _mm256_blendv_pd(zero, _mm256_div_pd(proj, len2), positive);
    u = _mm256_min_pd(_mm256_max_pd(u, zero), one);
    const __m256d ex = _mm256_sub_pd(wx, _mm256_mul_pd(u, dx));
    const __m256d ey = _mm256_sub_pd(wy, _mm256_mul_pd(u, dy));
    _mm256_storeu_pd(dist2.data() + i, _mm256_add_pd(_mm256_mul_pd(ex, ex), _mm256_mul_pd(ey, ey)));
    _mm256_storeu_pd(t.data() + i, u);
  }
  if (body < n) {
    const SegmentsSoA tail{segs.ax.subspan(body), segs.ay.subspan(body), segs.bx.subspan(body),
                           segs.by.subspan(body)};
    scalar::segment_distance2(px, py, tail, dist2.subspan(body), t.subspan(body));
  }
}

}  // namespace cctv::simd::avx2
