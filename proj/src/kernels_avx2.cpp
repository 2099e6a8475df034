// Copyright 2026 The stqpulse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kernels_common.hpp"

#if defined(STQPULSE_ENABLE_AVX2)

#include <immintrin.h>

#include <algorithm>

namespace stq {
namespace kernel_detail {
namespace {

struct SinCos4 {
  __m256d s;
  __m256d c;
};

// four-lane sine and cosine; the half angles stay below a few tens of
// radians, well inside the two-term cody-waite reduction's exact range
SinCos4 sincos4(__m256d a) {
  const __m256d two_over_pi = _mm256_set1_pd(6.36619772367581382433e-01);
  const __m256d pio2_hi = _mm256_set1_pd(1.57079632679489655800e+00);
  const __m256d pio2_lo = _mm256_set1_pd(6.12323399573676603587e-17);
  const __m256d fk =
      _mm256_round_pd(_mm256_mul_pd(a, two_over_pi),
                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(fk, pio2_hi, a);
  r = _mm256_fnmadd_pd(fk, pio2_lo, r);
  const __m256d r2 = _mm256_mul_pd(r, r);

  __m256d sp = _mm256_set1_pd(1.58969099521155010221e-10);
  sp = _mm256_fmadd_pd(sp, r2, _mm256_set1_pd(-2.50507602534068634195e-08));
  sp = _mm256_fmadd_pd(sp, r2, _mm256_set1_pd(2.75573137070700676789e-06));
  sp = _mm256_fmadd_pd(sp, r2, _mm256_set1_pd(-1.98412698298579493134e-04));
  sp = _mm256_fmadd_pd(sp, r2, _mm256_set1_pd(8.33333333332248946124e-03));
  sp = _mm256_fmadd_pd(sp, r2, _mm256_set1_pd(-1.66666666666666324348e-01));
  const __m256d sinr = _mm256_fmadd_pd(_mm256_mul_pd(sp, r2), r, r);

  __m256d cp = _mm256_set1_pd(-1.13596475577881948265e-11);
  cp = _mm256_fmadd_pd(cp, r2, _mm256_set1_pd(2.08757232129817482790e-09));
  cp = _mm256_fmadd_pd(cp, r2, _mm256_set1_pd(-2.75573143513906633035e-07));
  cp = _mm256_fmadd_pd(cp, r2, _mm256_set1_pd(2.48015872894767294178e-05));
  cp = _mm256_fmadd_pd(cp, r2, _mm256_set1_pd(-1.38888888888741095749e-03));
  cp = _mm256_fmadd_pd(cp, r2, _mm256_set1_pd(4.16666666666666019037e-02));
  const __m256d cosr = _mm256_fmadd_pd(
      cp, _mm256_mul_pd(r2, r2),
      _mm256_fnmadd_pd(r2, _mm256_set1_pd(0.5), _mm256_set1_pd(1.0)));

  // quadrant fix-up from the low two bits of k: bit0 swaps sine and cosine,
  // bit1 negates the sine, bit0 xor bit1 negates the cosine
  const __m256d magic = _mm256_set1_pd(6755399441055744.0);
  const __m256i bits = _mm256_castpd_si256(_mm256_add_pd(fk, magic));
  const __m256i one = _mm256_set1_epi64x(1);
  const __m256i two = _mm256_set1_epi64x(2);
  const __m256d bit0 = _mm256_castsi256_pd(
      _mm256_cmpeq_epi64(_mm256_and_si256(bits, one), one));
  const __m256d bit1 = _mm256_castsi256_pd(
      _mm256_cmpeq_epi64(_mm256_and_si256(bits, two), two));
  const __m256d signbit = _mm256_set1_pd(-0.0);
  SinCos4 out;
  out.s = _mm256_xor_pd(_mm256_blendv_pd(sinr, cosr, bit0),
                        _mm256_and_pd(bit1, signbit));
  out.c = _mm256_xor_pd(_mm256_blendv_pd(cosr, sinr, bit0),
                        _mm256_and_pd(_mm256_xor_pd(bit0, bit1), signbit));
  return out;
}

struct Lanes4 {
  __m256d w, x, y, z;
};

Lanes4 compose_lanes(const std::vector<PreppedSegment>& segs, __m256d vdh,
                     __m256d vde) {
  const __m256d ax = _mm256_add_pd(_mm256_set1_pd(1.0), vdh);
  const __m256d ax2 = _mm256_mul_pd(ax, ax);
  const __m256d zero = _mm256_setzero_pd();
  Lanes4 q{_mm256_set1_pd(1.0), zero, zero, zero};
  for (const auto& s : segs) {
    const __m256d az =
        _mm256_fmadd_pd(_mm256_set1_pd(s.gj), vde, _mm256_set1_pd(s.j));
    const __m256d wn = _mm256_sqrt_pd(_mm256_fmadd_pd(az, az, ax2));
    const SinCos4 sc = sincos4(_mm256_mul_pd(_mm256_set1_pd(s.half_t), wn));
    const __m256d tiny =
        _mm256_cmp_pd(wn, _mm256_set1_pd(1e-300), _CMP_LT_OQ);
    const __m256d inv =
        _mm256_blendv_pd(_mm256_div_pd(sc.s, wn), zero, tiny);
    const __m256d sw = sc.c;
    const __m256d sx = _mm256_mul_pd(ax, inv);
    const __m256d sz = _mm256_mul_pd(az, inv);
    // hamilton product with the segment factor on the left, its y part zero
    const __m256d nw = _mm256_fnmadd_pd(
        sz, q.z, _mm256_fnmadd_pd(sx, q.x, _mm256_mul_pd(sw, q.w)));
    const __m256d nx = _mm256_fnmadd_pd(
        sz, q.y, _mm256_fmadd_pd(sx, q.w, _mm256_mul_pd(sw, q.x)));
    const __m256d ny = _mm256_fmadd_pd(
        sz, q.x, _mm256_fnmadd_pd(sx, q.z, _mm256_mul_pd(sw, q.y)));
    const __m256d nz = _mm256_fmadd_pd(
        sz, q.w, _mm256_fmadd_pd(sx, q.y, _mm256_mul_pd(sw, q.z)));
    q = {nw, nx, ny, nz};
  }
  return q;
}

// lanes never interact, so the tail is padded and run through the same lane
// math; a pair's result is then independent of its neighbors and of n
__m256d load_padded(const double* v, std::size_t n) {
  alignas(32) double buf[4];
  for (std::size_t l = 0; l < 4; ++l) buf[l] = v[l < n ? l : n - 1];
  return _mm256_load_pd(buf);
}

void compose_avx2(const std::vector<PreppedSegment>& segs, const double* dh,
                  const double* de, std::size_t n, Quaternion* out) {
  for (std::size_t i = 0; i < n; i += 4) {
    const std::size_t m = std::min<std::size_t>(4, n - i);
    const Lanes4 q =
        compose_lanes(segs, load_padded(dh + i, m), load_padded(de + i, m));
    alignas(32) double w[4], x[4], y[4], z[4];
    _mm256_store_pd(w, q.w);
    _mm256_store_pd(x, q.x);
    _mm256_store_pd(y, q.y);
    _mm256_store_pd(z, q.z);
    for (std::size_t l = 0; l < m; ++l) out[i + l] = {w[l], x[l], y[l], z[l]};
  }
}

void infidelity_avx2(const std::vector<PreppedSegment>& segs,
                     const Quaternion& target, const double* dh,
                     const double* de, std::size_t n, double* out) {
  const __m256d tw = _mm256_set1_pd(target.w);
  const __m256d tx = _mm256_set1_pd(target.x);
  const __m256d ty = _mm256_set1_pd(target.y);
  const __m256d tz = _mm256_set1_pd(target.z);
  for (std::size_t i = 0; i < n; i += 4) {
    const std::size_t m = std::min<std::size_t>(4, n - i);
    const Lanes4 q =
        compose_lanes(segs, load_padded(dh + i, m), load_padded(de + i, m));
    const __m256d dotv = _mm256_fmadd_pd(
        q.z, tz,
        _mm256_fmadd_pd(q.y, ty,
                        _mm256_fmadd_pd(q.x, tx, _mm256_mul_pd(q.w, tw))));
    const __m256d norm2 = _mm256_fmadd_pd(
        q.z, q.z,
        _mm256_fmadd_pd(q.y, q.y,
                        _mm256_fmadd_pd(q.x, q.x, _mm256_mul_pd(q.w, q.w))));
    const __m256d d2 = _mm256_div_pd(_mm256_mul_pd(dotv, dotv), norm2);
    const __m256d inf = _mm256_mul_pd(
        _mm256_set1_pd(2.0 / 3.0),
        _mm256_sub_pd(_mm256_set1_pd(1.0), d2));
    alignas(32) double buf[4];
    _mm256_store_pd(buf, inf);
    for (std::size_t l = 0; l < m; ++l) out[i + l] = buf[l];
  }
}

}  // namespace

const Variant kAvx2Variant = {"avx2", compose_avx2, infidelity_avx2};

}  // namespace kernel_detail
}  // namespace stq

#endif  // STQPULSE_ENABLE_AVX2
