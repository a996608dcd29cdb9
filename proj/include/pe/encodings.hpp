#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pe/finmodel.hpp"
#include "pe/kernel.hpp"
#include "pe/surface.hpp"
#include "pe/typecheck.hpp"

namespace pe {

class PositivityError : public std::runtime_error {
 public:
  explicit PositivityError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class ValueCtor { Unit, Prod, Zero, Sum, ExistsV, Mu, Nu, ExistsC };
enum class CompCtor { UnitC, ProdC, ZeroC, Oplus, Copower, ExistsVC, ExistsCC, MuC, NuC };

// Arguments of a type constructor. Binding constructors (exists, mu, nu)
// use `binder` together with args[0].
struct CtorArgs {
  std::vector<TypePtr> args;
  std::string binder;
};

TypePtr encode_value_type(ValueCtor ctor, const CtorArgs& a);
TypePtr encode_comp_type(CompCtor ctor, const CtorArgs& a);
TypePtr encode_bang(const TypePtr& b);
// n-fold sum of 1; 0 and 1 are the empty and unit types.
TypePtr encode_numeral(int n);

// Strict positivity: `var` never occurs to the left of an odd number of
// arrows or linear arrows.
bool positive_in(const std::string& var, const TypePtr& body);

// If `t` has the shape of !B (up to alpha), returns B.
TypePtr match_bang(const TypePtr& t);

// Derived rules for bang and let, elaborated into kernel terms and checked.
// `gamma`/`delta` is the context of the conclusion.
TermPtr elaborate_bang_intro(const std::vector<Binding>& gamma, const TermPtr& t,
                             const ConstantTable& consts = {});
TermPtr elaborate_let(const std::vector<Binding>& gamma, const std::optional<Binding>& delta,
                      const std::string& x, const TermPtr& t, const TermPtr& u,
                      const ConstantTable& consts = {});

// Girard decomposition witnesses: forward : (A -> B) -> (!A -o B) and
// backward : (!A -o B) -> (A -> B).
std::pair<TermPtr, TermPtr> girard_iso_terms(const TypePtr& a, const TypePtr& b);

// Levy's call-by-push-value types.
struct CbpvType;
using CbpvPtr = std::shared_ptr<const CbpvType>;
enum class CbpvTag { Var, Unit, Sum, Prod, U, F, Fun, CProd };
struct CbpvType {
  CbpvTag tag;
  std::string name;  // Var
  std::vector<CbpvPtr> args;
};

CbpvPtr cbpv_var(std::string name);
CbpvPtr cbpv_unit();
CbpvPtr cbpv_sum(CbpvPtr a, CbpvPtr b);
CbpvPtr cbpv_prod(CbpvPtr a, CbpvPtr b);
CbpvPtr cbpv_u(CbpvPtr c);
CbpvPtr cbpv_f(CbpvPtr a);
CbpvPtr cbpv_fun(CbpvPtr a, CbpvPtr c);
CbpvPtr cbpv_cprod(CbpvPtr c, CbpvPtr d);
bool cbpv_is_computation(const CbpvPtr& t);
std::string cbpv_print(const CbpvPtr& t);

TypePtr cbpv_translate_type(const CbpvPtr& t);

// Signatures of the effect constants available for a monad.
std::vector<ConstantSig> register_effect_constants(MonadKind kind,
                                                   const std::vector<std::string>& exceptions);
ConstantTable make_constant_table(const std::vector<ConstantSig>& sigs);

// Elaboration of surface syntax into the kernel: expands type sugar and
// abbreviations, resolves definitions and constants, and expands term sugar
// (which needs the types of subterms).
class Elaborator {
 public:
  explicit Elaborator(ConstantTable consts = {});

  TypePtr type(const surface::STyPtr& t) const;
  TermPtr term(const std::vector<Binding>& gamma, const std::optional<Binding>& delta,
               const surface::STmPtr& t) const;
  Judgment judgment(const surface::Decl& d) const;

  void define_type(const std::string& name, TypePtr t);
  void define_term(const std::string& name, TermPtr t, TypePtr type);

  const ConstantTable& constants() const { return consts_; }
  const std::map<std::string, std::pair<TermPtr, TypePtr>>& definitions() const { return defs_; }
  const std::map<std::string, TypePtr>& type_definitions() const { return tydefs_; }

 private:
  TypePtr type_in(const surface::STyPtr& t, std::set<std::string>& bound) const;
  TermPtr term_in(std::vector<Binding>& gamma, const std::optional<Binding>& delta,
                  std::set<std::string>& tybound, const surface::STmPtr& t) const;
  TypePtr synth(const std::vector<Binding>& gamma, const std::optional<Binding>& delta,
                const TermPtr& t) const;

  ConstantTable consts_;
  std::map<std::string, TypePtr> tydefs_;
  std::map<std::string, std::pair<TermPtr, TypePtr>> defs_;
};

// Convenience: parse and elaborate closed-context text.
TypePtr read_type(const std::string& text);
TermPtr read_term(const std::string& text, const std::vector<Binding>& gamma = {},
                  const std::optional<Binding>& delta = std::nullopt,
                  const ConstantTable& consts = {});

}  // namespace pe
