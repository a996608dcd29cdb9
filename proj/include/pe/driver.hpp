#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pe/encodings.hpp"
#include "pe/surface.hpp"
#include "pe/typecheck.hpp"

namespace pe {

// Outcome of one declaration of a .pe file.
struct DeclResult {
  surface::DeclKind kind = surface::DeclKind::Judge;
  std::string name;
  SourceSpan span;
  bool ok = false;
  std::string type_text;           // synthesized type when typing succeeded
  std::optional<ErrorCode> code;   // error raised by the typechecker, if any
  SourceSpan error_span;
  std::string message;
};

struct FileResult {
  std::string file;
  std::vector<DeclResult> decls;
  std::optional<std::string> syntax_error;
  SourceSpan syntax_span;

  bool ok() const;
};

// Processes declarations in order. Type abbreviations and definitions stay
// in scope for later declarations of the same session.
class Session {
 public:
  explicit Session(ConstantTable consts = {});

  DeclResult process(const surface::Decl& d);
  FileResult process_text(const std::string& text, const std::string& file = "");
  FileResult process_file(const std::string& path);

  // Elaborates and typechecks a judgment without recording anything.
  std::pair<Judgment, TypePtr> check(const surface::Decl& d) const;

  const Elaborator& elaborator() const { return elab_; }

 private:
  Elaborator elab_;
};

std::string read_file(const std::string& path);

}  // namespace pe
