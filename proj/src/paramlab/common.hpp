#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "pe/paramlab.hpp"
#include "pe/surface.hpp"

namespace pe::lab::detail {

template <class F>
Report run_report(const std::string& id, const sem::ModelConfig& cfg, F&& body) {
  Report r;
  r.theorem_id = id;
  r.config = cfg;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const sem::OutOfBound& e) {
    r.status = Status::OutOfBound;
    r.witness = json{{"reason", e.what()}};
  }
  r.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline ConstantTable constants_for(const sem::ModelConfig& cfg) {
  return make_constant_table(register_effect_constants(cfg.monad, cfg.exceptions));
}

// Elaborates surface text with the given context; the result is typechecked.
TermPtr elaborate(const std::string& text, const ConstantTable& consts,
                  const std::vector<Binding>& gamma = {},
                  const std::optional<Binding>& delta = std::nullopt);

// !A for a set variable A.
TypePtr bang_of_var(const std::string& a = "A");

// For A = S_n: the map [[!A]] -> T(n), k |-> k(T(n))(eta), as carrier indices of
// T(n). Requires T(n) to be available in the model.
std::vector<std::uint32_t> bang_to_free(sem::Model& m, std::size_t n);

// Carrier indices of a function value applied pointwise.
std::vector<std::uint32_t> table_of(sem::Model& m, sem::ValueId f, sem::ObjId cod);

std::string show_type(const TypePtr& t);

// The configuration with free algebras T(n) among the representatives for
// n in 0..min(bound, 2) and every n in `ns`; records a note when it changed.
sem::ModelConfig with_free_arities(sem::ModelConfig c, const std::vector<std::size_t>& ns,
                                   Report& r);

}  // namespace pe::lab::detail
