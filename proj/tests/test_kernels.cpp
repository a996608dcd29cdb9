#include <cstdint>
#include <vector>

#include "doctest.h"
#include "pe/finmodel.hpp"
#include "pe/kernels.hpp"

namespace pe::kernels {
namespace {

fin::Table decode(std::uint64_t idx, std::size_t n, std::size_t base) {
  fin::Table t(n);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = static_cast<std::uint32_t>(idx % base);
    idx /= base;
  }
  return t;
}

std::vector<std::uint8_t> rows(const fin::MonadSpec& m, std::size_t n, std::size_t k,
                               std::uint8_t pad) {
  std::size_t tk = m.t_size(k);
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < n; ++i) count *= tk;
  std::vector<std::uint8_t> out(count * kStride, pad);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    fin::Table ext = m.extend(decode(idx, n, tk), n, k);
    for (std::size_t s = 0; s < ext.size(); ++s) out[idx * kStride + s] = ext[s];
  }
  return out;
}

AssocProblem problem(const fin::MonadSpec& m, std::size_t a, std::size_t b, std::size_t c) {
  AssocProblem p;
  p.a = a;
  p.b = b;
  p.ta = m.t_size(a);
  p.tb = m.t_size(b);
  p.tc = m.t_size(c);
  p.ext_ab = rows(m, a, b, 0x80);
  p.ext_ac = rows(m, a, c, 0);
  p.ext_bc = rows(m, b, c, 0);
  return p;
}

void check_all_variants(const AssocProblem& p) {
  AssocResult ref = check_assoc_scalar(p);
  for (Variant v : {Variant::Ssse3, Variant::Avx2, Variant::Avx512}) {
    if (!cpu_supports(v)) continue;
    CAPTURE(variant_name(v));
    AssocResult r = check_assoc(p, v);
    CHECK(r.pairs == ref.pairs);
    CHECK(r.violations == ref.violations);
    CHECK(r.first == ref.first);
  }
}

TEST_SUITE("kernels") {

TEST_CASE("variants agree on lawful tables") {
  for (const fin::MonadSpec& m : {fin::MonadSpec::exception({"e"}),
                                  fin::MonadSpec::exception({"e1", "e2"}),
                                  fin::MonadSpec::powerset()}) {
    for (std::size_t a = 0; a <= 3; ++a)
      for (std::size_t b = 0; b <= 3; ++b)
        for (std::size_t c = 0; c <= 2; ++c) {
          CAPTURE(m.key());
          CAPTURE(a);
          CAPTURE(b);
          CAPTURE(c);
          AssocProblem p = problem(m, a, b, c);
          AssocResult ref = check_assoc_scalar(p);
          CHECK(ref.violations == 0);
          check_all_variants(p);
        }
  }
}

TEST_CASE("variants agree on corrupted tables") {
  fin::MonadSpec m = fin::MonadSpec::powerset();
  AssocProblem p = problem(m, 2, 2, 2);
  // Perturb the {0,1} entry of one g-dagger row (index 2); singleton entries
  // would also shift the composite consistently.
  std::uint8_t& cell = p.ext_bc[5 * kStride + 2];
  cell = static_cast<std::uint8_t>((cell + 1) % p.tc);
  AssocResult ref = check_assoc_scalar(p);
  CHECK(ref.violations > 0);
  REQUIRE(ref.first.has_value());
  check_all_variants(p);
  // Corrupt an h-dagger row as well.
  std::uint8_t& other = p.ext_ac[3 * kStride + 2];
  other = static_cast<std::uint8_t>((other + 2) % p.tc);
  check_all_variants(p);
}

TEST_CASE("selection respects the cpu") {
  AssocProblem p = problem(fin::MonadSpec::powerset(), 2, 2, 2);
  CHECK(cpu_supports(Variant::Scalar));
  CHECK(cpu_supports(select_variant(p)));
}

}  // TEST_SUITE

}  // namespace
}  // namespace pe::kernels
