#pragma once

#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pe {

struct SourcePos {
  int line = 0;
  int col = 0;
};

struct SourceSpan {
  std::string file;
  SourcePos start;
  SourcePos end;

  bool empty() const { return start.line == 0; }
  std::string to_string() const;
};

// Raised for references to type variables outside the permitted scope.
class ScopeError : public std::runtime_error {
 public:
  explicit ScopeError(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when a type is used at the wrong sort (value vs computation).
class KindError : public std::runtime_error {
 public:
  explicit KindError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class Kind { Value, Computation };

enum class TypeTag { VVar, CVar, Arrow, Lolli, ForallV, ForallC };

struct Type;
using TypePtr = std::shared_ptr<const Type>;

// Computation-variable names carry their `^` prefix, so the two variable
// sorts can never collide in a map keyed by name.
struct Type {
  TypeTag tag;
  std::string name;  // variable or binder
  TypePtr dom;       // Arrow / Lolli
  TypePtr cod;       // Arrow / Lolli codomain, Forall body
  SourceSpan span;
};

TypePtr vvar(std::string name, SourceSpan span = {});
TypePtr cvar(std::string name, SourceSpan span = {});
TypePtr arrow(TypePtr dom, TypePtr cod, SourceSpan span = {});
TypePtr lolli(TypePtr dom, TypePtr cod, SourceSpan span = {});
TypePtr forall_v(std::string binder, TypePtr body, SourceSpan span = {});
TypePtr forall_c(std::string binder, TypePtr body, SourceSpan span = {});
// Quantifier over `binder`, picking the sort from the name prefix.
TypePtr forall_any(std::string binder, TypePtr body, SourceSpan span = {});

bool is_cvar_name(const std::string& name);
bool is_forall(const Type& t);
bool is_var(const Type& t);

// Classifies a type. Throws KindError on a Lolli with a value-type side and
// ScopeError if `scope` is given and a free variable is not in it.
Kind classify_type(const TypePtr& t,
                   const std::set<std::string>* scope = nullptr);
bool is_computation(const TypePtr& t);

std::set<std::string> free_type_vars(const TypePtr& t);
void collect_free_type_vars(const TypePtr& t, std::set<std::string>& out);
void collect_all_type_names(const TypePtr& t, std::set<std::string>& out);

// A name of the same sort as `base` not contained in `avoid`.
std::string fresh_name(const std::string& base,
                       const std::set<std::string>& avoid);

// Capture-avoiding B[A/X]. Throws KindError when a computation variable is
// replaced by a type that is not a computation type.
TypePtr subst_type(const TypePtr& body, const std::string& var,
                   const TypePtr& replacement);

bool alpha_eq(const TypePtr& a, const TypePtr& b);

// Alpha-invariant structural key: bound variables become de Bruijn indices.
std::string type_key(const TypePtr& t);

enum class TermTag {
  Var,
  Lam,
  LinLam,
  App,
  TyLamV,
  TyLamC,
  TyAppV,
  TyAppC,
  Const
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  TermTag tag;
  std::string name;  // variable, binder or constant name
  TypePtr type;      // lambda annotation or type argument
  TermPtr fn;        // lambda body, application head, type-lambda body
  TermPtr arg;       // application argument
  SourceSpan span;
};

TermPtr var(std::string name, SourceSpan span = {});
TermPtr lam(std::string x, TypePtr ann, TermPtr body, SourceSpan span = {});
TermPtr linlam(std::string x, TypePtr ann, TermPtr body, SourceSpan span = {});
TermPtr app(TermPtr fn, TermPtr arg, SourceSpan span = {});
TermPtr app(TermPtr fn, std::initializer_list<TermPtr> args);
TermPtr tylam_v(std::string binder, TermPtr body, SourceSpan span = {});
TermPtr tylam_c(std::string binder, TermPtr body, SourceSpan span = {});
// Type lambda with sort chosen by the binder prefix.
TermPtr tylam(std::string binder, TermPtr body, SourceSpan span = {});
TermPtr tyapp_v(TermPtr fn, TypePtr arg, SourceSpan span = {});
TermPtr tyapp_c(TermPtr fn, TypePtr arg, SourceSpan span = {});
// Type application tagged by the classification of the argument.
TermPtr tyapp(TermPtr fn, TypePtr arg, SourceSpan span = {});
TermPtr constant(std::string name, SourceSpan span = {});

std::set<std::string> free_vars(const TermPtr& t);
std::set<std::string> free_type_vars(const TermPtr& t);
bool occurs_free(const TermPtr& t, const std::string& x);

// Capture-avoiding t[s/x]; renames both term and type binders of t that
// would capture free variables of s.
TermPtr subst_term(const TermPtr& body, const std::string& x,
                   const TermPtr& replacement);
// Capture-avoiding t[A/X] on the type annotations of a term.
TermPtr subst_type_in_term(const TermPtr& body, const std::string& var,
                           const TypePtr& replacement);

bool alpha_eq(const TermPtr& a, const TermPtr& b);
std::size_t term_size(const TermPtr& t);

struct Binding {
  std::string name;
  TypePtr type;
};

struct Judgment {
  std::vector<Binding> gamma;
  std::optional<Binding> delta;
  TermPtr subject;
  TypePtr ascription;  // may be null
  SourceSpan span;
};

}  // namespace pe
