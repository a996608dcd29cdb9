#include "assoc_common.hpp"

#if defined(__AVX512BW__)
#include <immintrin.h>
#endif

namespace pe::kernels {

#if defined(__AVX512BW__)

AssocResult check_assoc_avx512(const AssocProblem& p) {
  if (p.ta > kStride || p.tb > kStride) return check_assoc_scalar(p);
  AssocResult res;
  if (p.tb == 0 && p.a > 0) return res;
  std::uint64_t gs = detail::ipow(p.tc, p.b);
  const auto* ab = p.ext_ab.data();
  const auto* ac = p.ext_ac.data();
  for (std::uint64_t g = 0; g < gs; ++g) {
    const std::uint8_t* gext = p.ext_bc.data() + g * kStride;
    __m128i g128 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(gext));
    __m512i gv = _mm512_broadcast_i32x4(g128);
    __mmask64 acc = ~__mmask64{0};
    __m128i acc1 = _mm_set1_epi8(-1);
    std::uint64_t n = 0;
    detail::for_each_block(p, gext, [&](std::uint64_t row, std::uint64_t hbase, bool single) {
      std::size_t width = single ? 1 : p.tb;
      std::size_t f0 = 0;
      // Four consecutive rows of f† per 512-bit load; pshufb works per lane.
      for (; f0 + 4 <= width; f0 += 4) {
        __m512i fr = _mm512_loadu_si512(ab + (row + f0) * kStride);
        auto hrow = [&](std::size_t k) {
          return _mm_loadu_si128(
              reinterpret_cast<const __m128i*>(ac + (hbase + gext[f0 + k]) * kStride));
        };
        __m256i lo = _mm256_inserti128_si256(_mm256_castsi128_si256(hrow(0)), hrow(1), 1);
        __m256i hi = _mm256_inserti128_si256(_mm256_castsi128_si256(hrow(2)), hrow(3), 1);
        __m512i hr = _mm512_inserti64x4(_mm512_castsi256_si512(lo), hi, 1);
        acc &= _mm512_cmpeq_epi8_mask(_mm512_shuffle_epi8(gv, fr), hr);
      }
      for (; f0 < width; ++f0) {
        std::uint64_t h = single ? 0 : hbase + gext[f0];
        __m128i fr = _mm_loadu_si128(reinterpret_cast<const __m128i*>(ab + (row + f0) * kStride));
        __m128i hr = _mm_loadu_si128(reinterpret_cast<const __m128i*>(ac + h * kStride));
        acc1 = _mm_and_si128(acc1, _mm_cmpeq_epi8(_mm_shuffle_epi8(g128, fr), hr));
      }
      n += width;
    });
    if (acc != ~__mmask64{0} || _mm_movemask_epi8(acc1) != 0xFFFF) {
      detail::scan_scalar(p, g, res);
    } else {
      res.pairs += n;
    }
  }
  return res;
}

#else

AssocResult check_assoc_avx512(const AssocProblem& p) { return check_assoc_scalar(p); }

#endif

}  // namespace pe::kernels
