#pragma once

#include <cstdint>
#include <vector>

#include "pe/kernels.hpp"

namespace pe::kernels::detail {

// Walks f = f0 + tb * r over all functions A -> TB with the higher digits of
// f held in an odometer. For each r it calls block(r * tb, hbase), where the
// index of h = g† . f is hbase + gext[f0].
template <typename Block>
void for_each_block(const AssocProblem& p, const std::uint8_t* gext, Block&& block) {
  if (p.a == 0) {
    block(std::uint64_t{0}, std::uint64_t{0}, true);
    return;
  }
  std::vector<std::uint32_t> digit(p.a, 0);
  std::vector<std::uint64_t> pw(p.a, 1);
  for (std::size_t i = 1; i < p.a; ++i) pw[i] = pw[i - 1] * p.tc;
  std::uint64_t hbase = 0;
  for (std::size_t i = 1; i < p.a; ++i) hbase += gext[0] * pw[i];
  std::uint64_t row = 0;
  for (;;) {
    block(row, hbase, false);
    row += p.tb;
    std::size_t i = 1;
    while (i < p.a) {
      hbase -= gext[digit[i]] * pw[i];
      if (++digit[i] == p.tb) {
        digit[i] = 0;
        hbase += gext[0] * pw[i];
        ++i;
      } else {
        hbase += gext[digit[i]] * pw[i];
        break;
      }
    }
    if (i == p.a) return;
  }
}

inline std::uint64_t ipow(std::uint64_t b, std::size_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

// Scalar check of one g against every f; records violations into res.
inline void scan_scalar(const AssocProblem& p, std::uint64_t g, AssocResult& res) {
  const std::uint8_t* gext = p.ext_bc.data() + g * kStride;
  for_each_block(p, gext, [&](std::uint64_t row, std::uint64_t hbase, bool single) {
    std::size_t width = single ? 1 : p.tb;
    for (std::size_t f0 = 0; f0 < width; ++f0) {
      std::uint64_t f = row + f0;
      std::uint64_t h = single ? 0 : hbase + gext[f0];
      const std::uint8_t* fr = p.ext_ab.data() + f * kStride;
      const std::uint8_t* hr = p.ext_ac.data() + h * kStride;
      bool ok = true;
      for (std::size_t s = 0; s < p.ta; ++s)
        if (hr[s] != gext[fr[s]]) ok = false;
      ++res.pairs;
      if (!ok) {
        ++res.violations;
        if (!res.first) res.first = std::make_pair(f, g);
      }
    }
  });
}

}  // namespace pe::kernels::detail
