#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "pe/kernel.hpp"

namespace pe {

enum class ErrorCode {
  UnboundVar,
  StoupViolation,
  KindMismatch,
  AppMismatch,
  EscapingTyVar,
  NonComputationStoup
};

const char* to_string(ErrorCode c);
bool parse_error_code(const std::string& s, ErrorCode& out);

class TypeError : public std::runtime_error {
 public:
  TypeError(ErrorCode code, SourceSpan span, std::string detail);
  ErrorCode code() const { return code_; }
  const SourceSpan& span() const { return span_; }
  const std::string& detail() const { return detail_; }

 private:
  ErrorCode code_;
  SourceSpan span_;
  std::string detail_;
};

struct ConstantSig {
  std::string name;
  TypePtr scheme;
  std::string denotation_key;
};

using ConstantTable = std::map<std::string, ConstantSig>;

// The typing rules, read algorithmically. Returns the unique type of the
// subject and checks the ascription when present.
TypePtr typecheck(const Judgment& j, const ConstantTable& constants = {});

// Declarative reading: every type derivable for the subject by any rule
// whose conclusion matches, trying both application rules regardless of the
// shape of the context. Deduplicated up to alpha-equivalence.
std::vector<TypePtr> derivable_types(const Judgment& j, const ConstantTable& constants = {});

struct UnicityReport {
  std::size_t checked = 0;
  std::size_t failures = 0;
  std::vector<std::string> messages;
};

UnicityReport check_unicity(const std::vector<Judgment>& corpus,
                            const ConstantTable& constants = {});

// One instance of the substitution lemma: `host` types with `x : A` in Γ
// (part 1) or as the stoup binding (part 2), `replacement` types at A under
// the host's remaining context (with the stoup in part 2).
struct SubstitutionCase {
  Judgment host;
  std::string var;
  Judgment replacement;
  bool stoup_part = false;
};

struct SubstitutionReport {
  std::size_t part1 = 0;
  std::size_t part2 = 0;
  std::size_t failures = 0;
  std::vector<std::string> messages;
};

SubstitutionReport check_substitution_lemma(const std::vector<SubstitutionCase>& sample,
                                            const ConstantTable& constants = {});

}  // namespace pe
