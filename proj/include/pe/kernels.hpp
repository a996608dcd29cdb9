#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace pe::kernels {

// Row stride of the byte tables below. Rows hold at most kStride entries;
// unused lanes of `ext_ab` rows are 0x80 and unused lanes of the other tables
// are 0, so that full-width comparisons are exact.
inline constexpr std::size_t kStride = 16;

// Dense Kleisli-extension tables for the associativity law
// (g† . f)† = g† . f† over sets A, B, C with |TA| = ta, |TB| = tb, |TC| = tc.
// A function f : A -> TB is indexed by sum_i f(i) * tb^i, likewise for
// h : A -> TC and g : B -> TC.
struct AssocProblem {
  std::size_t a = 0, b = 0;
  std::size_t ta = 0, tb = 0, tc = 0;
  std::vector<std::uint8_t> ext_ab;  // tb^a rows of f†
  std::vector<std::uint8_t> ext_ac;  // tc^a rows of h†
  std::vector<std::uint8_t> ext_bc;  // tc^b rows of g†
};

struct AssocResult {
  std::uint64_t pairs = 0;
  std::uint64_t violations = 0;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> first;  // (f, g)
};

enum class Variant { Scalar, Ssse3, Avx2, Avx512 };

AssocResult check_assoc_scalar(const AssocProblem& p);
AssocResult check_assoc_ssse3(const AssocProblem& p);
AssocResult check_assoc_avx2(const AssocProblem& p);
AssocResult check_assoc_avx512(const AssocProblem& p);  // AVX-512BW

// Best variant supported by the running CPU and by the problem shape.
Variant select_variant(const AssocProblem& p);
AssocResult check_assoc(const AssocProblem& p, Variant v);
AssocResult check_assoc(const AssocProblem& p);
const char* variant_name(Variant v);
bool cpu_supports(Variant v);

}  // namespace pe::kernels
