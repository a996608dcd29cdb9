#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "pe/encodings.hpp"
#include "pe/interp.hpp"
#include "pe/typecheck.hpp"

namespace pe::lab {

using nlohmann::json;

enum class Status { Verified, Counterexample, OutOfBound };

const char* to_string(Status s);

struct Report {
  std::string theorem_id;
  sem::ModelConfig config;
  Status status = Status::Verified;
  json witness;  // null unless a counterexample or an out-of-bound condition
  json counts = json::object();
  std::vector<std::string> notes;
  double runtime_ms = 0;

  bool ok() const { return status == Status::Verified; }
  // Records a failure; only the first witness is kept.
  void fail(json w);
};

// Options shared by the randomized verifiers.
struct RandomOptions {
  std::uint64_t seed = 1;
  std::size_t count = 0;  // 0: the verifier's default
};

// ---------------------------------------------------------------------------
// Seeded generation of well-typed judgments

struct GenOptions {
  std::size_t max_depth = 3;
  std::size_t max_context = 3;
  bool allow_stoup = true;
  // Keep types small enough to interpret at bound 2.
  bool small_types = false;
  // Free type variables used in contexts and types.
  std::vector<std::string> value_vars{"X"};
  std::vector<std::string> comp_vars{"^Y"};
};

class TermGen {
 public:
  explicit TermGen(std::uint64_t seed, GenOptions opts = {}, ConstantTable consts = {});

  TypePtr type(std::size_t depth, bool computation);
  // A judgment that typechecks, with its synthesized type as ascription.
  Judgment judgment();
  // Γ | Δ ⊢ t : target, or null when no term was found.
  TermPtr term(std::vector<Binding>& gamma, const std::optional<Binding>& delta,
               const TypePtr& target, std::size_t depth);
  std::vector<SubstitutionCase> substitution_cases(const Judgment& j);

  std::mt19937_64& rng() { return rng_; }

 private:
  std::size_t pick(std::size_t n);
  bool coin(double p = 0.5);
  std::string fresh(const std::string& base);
  TermPtr eliminate(std::vector<Binding>& gamma, const std::optional<Binding>& delta,
                    const TypePtr& target, std::size_t depth);
  TermPtr spine(std::vector<Binding>& gamma, const std::optional<Binding>& delta, TermPtr head,
                TypePtr head_type, const TypePtr& target, std::size_t depth, bool stoup_used);

  std::mt19937_64 rng_;
  GenOptions opts_;
  ConstantTable consts_;
  std::size_t counter_ = 0;
};

// ---------------------------------------------------------------------------
// Verifiers. Each returns a report; out-of-bound conditions are reported
// rather than thrown.

Report verify_metatheory(const RandomOptions& ro);
Report verify_monad_laws(std::size_t max_size = 4);
Report verify_axioms(const sem::ModelConfig& cfg);
Report verify_identity_extension(const sem::ModelConfig& cfg);
Report verify_abstraction(const sem::ModelConfig& cfg, const RandomOptions& ro);
Report verify_bang_laws(const sem::ModelConfig& cfg);
Report verify_free_algebra(const sem::ModelConfig& cfg, std::size_t max_carrier = 3);
Report verify_bang_cardinality(const sem::ModelConfig& cfg, std::vector<std::size_t> sizes = {});
Report verify_rel_lifting(const sem::ModelConfig& cfg);
Report verify_algop(const sem::ModelConfig& cfg, std::vector<std::size_t> arities = {});
Report verify_handler(const sem::ModelConfig& cfg);
Report verify_encodings(const sem::ModelConfig& cfg);
Report verify_cbpv();

// All parametric elements of a closed polymorphic type.
std::vector<sem::ValueId> enumerate_parametric_elements(sem::Model& m, const TypePtr& poly);

// The types used by the identity-extension check.
std::vector<TypePtr> identity_extension_battery();
// The CBPV types of the translation corpus.
std::vector<CbpvPtr> cbpv_corpus();

// Named suites for the command-line driver.
struct Suite {
  std::string id;
  std::string description;
  std::vector<sem::ModelConfig> defaults;
  std::function<Report(const sem::ModelConfig&, const RandomOptions&, const json& extra)> run;
};
const std::vector<Suite>& suites();
const Suite* find_suite(const std::string& id);

// Helpers for the dual view of !A and the free algebra.
sem::ModelConfig exception_config(std::size_t exceptions, std::size_t bound, bool free);

json config_json(const sem::ModelConfig& cfg);
json report_json(const Report& r);

}  // namespace pe::lab
