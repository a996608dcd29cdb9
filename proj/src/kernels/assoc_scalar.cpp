#include <cstdlib>
#include <cstring>

#include "assoc_common.hpp"

namespace pe::kernels {

AssocResult check_assoc_scalar(const AssocProblem& p) {
  AssocResult res;
  if (p.tb == 0 && p.a > 0) return res;
  std::uint64_t gs = detail::ipow(p.tc, p.b);
  for (std::uint64_t g = 0; g < gs; ++g) detail::scan_scalar(p, g, res);
  return res;
}

Variant select_variant(const AssocProblem& p) {
  if (p.ta > kStride || p.tb > kStride) return Variant::Scalar;
  // PE_KERNEL=scalar|ssse3|avx2|avx512bw caps the choice.
  if (const char* env = std::getenv("PE_KERNEL")) {
    for (Variant v : {Variant::Scalar, Variant::Ssse3, Variant::Avx2, Variant::Avx512})
      if (std::strcmp(env, variant_name(v)) == 0 && cpu_supports(v)) return v;
  }
  if (cpu_supports(Variant::Avx512)) return Variant::Avx512;
  if (cpu_supports(Variant::Avx2)) return Variant::Avx2;
  if (cpu_supports(Variant::Ssse3)) return Variant::Ssse3;
  return Variant::Scalar;
}

AssocResult check_assoc(const AssocProblem& p, Variant v) {
  switch (v) {
    case Variant::Avx512:
      return check_assoc_avx512(p);
    case Variant::Avx2:
      return check_assoc_avx2(p);
    case Variant::Ssse3:
      return check_assoc_ssse3(p);
    case Variant::Scalar:
      break;
  }
  return check_assoc_scalar(p);
}

AssocResult check_assoc(const AssocProblem& p) { return check_assoc(p, select_variant(p)); }

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::Avx512:
      return "avx512bw";
    case Variant::Avx2:
      return "avx2";
    case Variant::Ssse3:
      return "ssse3";
    case Variant::Scalar:
      break;
  }
  return "scalar";
}

bool cpu_supports(Variant v) {
#if defined(__x86_64__) || defined(__i386__)
  switch (v) {
    case Variant::Avx512:
      return __builtin_cpu_supports("avx512bw");
    case Variant::Avx2:
      return __builtin_cpu_supports("avx2");
    case Variant::Ssse3:
      return __builtin_cpu_supports("ssse3");
    case Variant::Scalar:
      return true;
  }
  return false;
#else
  return v == Variant::Scalar;
#endif
}

}  // namespace pe::kernels
