#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pe/kernel.hpp"

namespace pe::surface {

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& msg, SourceSpan span, std::vector<std::string> expected);
  const SourceSpan& span() const { return span_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  SourceSpan span_;
  std::vector<std::string> expected_;
};

// Surface types: the kernel forms plus the derived-type sugar.
enum class STyKind {
  Var,       // X, ^X, or a type abbreviation
  Arrow,
  Lolli,
  Forall,    // sort from binder prefix
  Bang,      // !B
  Num,       // 0, 1, n-fold sum of 1
  Prod,      // A * B
  Sum,       // A + B
  Exists,    // exists X. B  /  exists ^X. B
  Mu,        // mu X. B
  Nu,        // nu X. B
  UnitC,     // 1o
  ZeroC,     // 0o
  ProdC,     // A *o B
  Oplus,     // A (+) B
  Copower,   // B . A
  ExistsAlg, // existso X. A  /  existso ^X. A
  MuC,       // muo ^X. A
  NuC,       // nuo ^X. A
};

struct STy;
using STyPtr = std::shared_ptr<const STy>;

struct STy {
  STyKind kind;
  std::string name;  // variable or binder
  std::vector<STyPtr> args;
  int num = 0;
  SourceSpan span;
};

enum class STmKind {
  Var,
  Lam,
  LinLam,
  App,
  TyLam,
  TyApp,
  Bang,
  Let,
  Pair,
  Fst,
  Snd,
  Inl,
  Inr,
  Case,
  OInl,
  OInr,
  OCase,
};

struct STm;
using STmPtr = std::shared_ptr<const STm>;

struct STm {
  STmKind kind;
  std::string name;   // variable / binder / first case binder
  std::string name2;  // second case binder
  STyPtr type;        // lambda annotation or type argument
  std::vector<STyPtr> tyargs;  // explicit type arguments of sugar forms
  std::vector<STmPtr> args;
  SourceSpan span;
};

enum class DeclKind { TypeDef, Def, Judge, Reject };

struct SBinding {
  std::string name;
  STyPtr type;
};

struct Decl {
  DeclKind kind;
  std::string name;        // TypeDef / Def name
  std::string error_code;  // Reject
  std::vector<SBinding> gamma;
  std::optional<SBinding> delta;
  STmPtr term;
  STyPtr type;  // TypeDef body, Def / Judge ascription
  SourceSpan span;
};

STyPtr parse_type(const std::string& text, const std::string& file = "");
STmPtr parse_term(const std::string& text, const std::string& file = "");
std::vector<Decl> parse_file(const std::string& text, const std::string& file = "");

std::string print(const STyPtr& t);
std::string print(const STmPtr& t);
std::string print(const Decl& d);

// Kernel printers; the output parses back to an alpha-equivalent AST.
std::string print(const TypePtr& t);
std::string print(const TermPtr& t);
std::string print(const Judgment& j);

// Lifts kernel ASTs into the surface representation (no sugar introduced).
STyPtr from_kernel(const TypePtr& t);
STmPtr from_kernel(const TermPtr& t);

bool is_keyword(const std::string& word);

}  // namespace pe::surface
