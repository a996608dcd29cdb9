#include "assoc_common.hpp"

#if defined(__SSSE3__)
#include <tmmintrin.h>
#endif

namespace pe::kernels {

#if defined(__SSSE3__)

AssocResult check_assoc_ssse3(const AssocProblem& p) {
  if (p.ta > kStride || p.tb > kStride) return check_assoc_scalar(p);
  AssocResult res;
  if (p.tb == 0 && p.a > 0) return res;
  std::uint64_t gs = detail::ipow(p.tc, p.b);
  const auto* ab = p.ext_ab.data();
  const auto* ac = p.ext_ac.data();
  for (std::uint64_t g = 0; g < gs; ++g) {
    const std::uint8_t* gext = p.ext_bc.data() + g * kStride;
    __m128i gv = _mm_loadu_si128(reinterpret_cast<const __m128i*>(gext));
    __m128i acc = _mm_set1_epi8(-1);
    std::uint64_t n = 0;
    detail::for_each_block(p, gext, [&](std::uint64_t row, std::uint64_t hbase, bool single) {
      std::size_t width = single ? 1 : p.tb;
      for (std::size_t f0 = 0; f0 < width; ++f0) {
        std::uint64_t h = single ? 0 : hbase + gext[f0];
        __m128i fr = _mm_loadu_si128(reinterpret_cast<const __m128i*>(ab + (row + f0) * kStride));
        __m128i hr = _mm_loadu_si128(reinterpret_cast<const __m128i*>(ac + h * kStride));
        acc = _mm_and_si128(acc, _mm_cmpeq_epi8(_mm_shuffle_epi8(gv, fr), hr));
      }
      n += width;
    });
    if (_mm_movemask_epi8(acc) != 0xFFFF) {
      detail::scan_scalar(p, g, res);
    } else {
      res.pairs += n;
    }
  }
  return res;
}

#else

AssocResult check_assoc_ssse3(const AssocProblem& p) { return check_assoc_scalar(p); }

#endif

}  // namespace pe::kernels
