#include "assoc_common.hpp"

#if defined(__AVX2__)
#include <immintrin.h>
#endif

namespace pe::kernels {

#if defined(__AVX2__)

AssocResult check_assoc_avx2(const AssocProblem& p) {
  if (p.ta > kStride || p.tb > kStride) return check_assoc_scalar(p);
  AssocResult res;
  if (p.tb == 0 && p.a > 0) return res;
  std::uint64_t gs = detail::ipow(p.tc, p.b);
  const auto* ab = p.ext_ab.data();
  const auto* ac = p.ext_ac.data();
  for (std::uint64_t g = 0; g < gs; ++g) {
    const std::uint8_t* gext = p.ext_bc.data() + g * kStride;
    __m128i g128 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(gext));
    __m256i gv = _mm256_broadcastsi128_si256(g128);
    __m256i acc = _mm256_set1_epi8(-1);
    __m256i acc2 = acc;
    __m128i acc1 = _mm_set1_epi8(-1);
    std::uint64_t n = 0;
    detail::for_each_block(p, gext, [&](std::uint64_t row, std::uint64_t hbase, bool single) {
      std::size_t width = single ? 1 : p.tb;
      std::size_t f0 = 0;
      auto hrow = [&](std::size_t k) {
        return _mm_loadu_si128(reinterpret_cast<const __m128i*>(ac + (hbase + gext[k]) * kStride));
      };
      // Two consecutive rows of f† per 256-bit load; pshufb works per lane.
      for (; f0 + 4 <= width; f0 += 4) {
        const auto* fp = ab + (row + f0) * kStride;
        __m256i fa = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(fp));
        __m256i fb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(fp + 2 * kStride));
        __m256i ha = _mm256_inserti128_si256(_mm256_castsi128_si256(hrow(f0)), hrow(f0 + 1), 1);
        __m256i hb = _mm256_inserti128_si256(_mm256_castsi128_si256(hrow(f0 + 2)), hrow(f0 + 3), 1);
        acc = _mm256_and_si256(acc, _mm256_cmpeq_epi8(_mm256_shuffle_epi8(gv, fa), ha));
        acc2 = _mm256_and_si256(acc2, _mm256_cmpeq_epi8(_mm256_shuffle_epi8(gv, fb), hb));
      }
      for (; f0 + 2 <= width; f0 += 2) {
        __m256i fr = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(ab + (row + f0) * kStride));
        __m256i hr = _mm256_inserti128_si256(_mm256_castsi128_si256(hrow(f0)), hrow(f0 + 1), 1);
        acc = _mm256_and_si256(acc, _mm256_cmpeq_epi8(_mm256_shuffle_epi8(gv, fr), hr));
      }
      for (; f0 < width; ++f0) {
        std::uint64_t h = single ? 0 : hbase + gext[f0];
        __m128i fr = _mm_loadu_si128(reinterpret_cast<const __m128i*>(ab + (row + f0) * kStride));
        __m128i hr = _mm_loadu_si128(reinterpret_cast<const __m128i*>(ac + h * kStride));
        acc1 = _mm_and_si128(acc1, _mm_cmpeq_epi8(_mm_shuffle_epi8(g128, fr), hr));
      }
      n += width;
    });
    if (_mm256_movemask_epi8(_mm256_and_si256(acc, acc2)) != -1 || _mm_movemask_epi8(acc1) != 0xFFFF) {
      detail::scan_scalar(p, g, res);
    } else {
      res.pairs += n;
    }
  }
  return res;
}

#else

AssocResult check_assoc_avx2(const AssocProblem& p) { return check_assoc_scalar(p); }

#endif

}  // namespace pe::kernels
