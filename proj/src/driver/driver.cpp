#include "pe/driver.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pe {

bool FileResult::ok() const {
  if (syntax_error) return false;
  for (const auto& d : decls)
    if (!d.ok) return false;
  return true;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Session::Session(ConstantTable consts) : elab_(std::move(consts)) {}

std::pair<Judgment, TypePtr> Session::check(const surface::Decl& d) const {
  Judgment j = elab_.judgment(d);
  TypePtr t = typecheck(j, elab_.constants());
  return {std::move(j), std::move(t)};
}

DeclResult Session::process(const surface::Decl& d) {
  DeclResult r;
  r.kind = d.kind;
  r.name = d.name;
  r.span = d.span;
  try {
    switch (d.kind) {
      case surface::DeclKind::TypeDef: {
        TypePtr t = elab_.type(d.type);
        classify_type(t);
        elab_.define_type(d.name, t);
        r.type_text = surface::print(t);
        r.ok = true;
        break;
      }
      case surface::DeclKind::Def: {
        auto [j, t] = check(d);
        elab_.define_term(d.name, j.subject, t);
        r.type_text = surface::print(t);
        r.ok = true;
        break;
      }
      case surface::DeclKind::Judge: {
        r.type_text = surface::print(check(d).second);
        r.ok = true;
        break;
      }
      case surface::DeclKind::Reject: {
        ErrorCode want;
        if (!parse_error_code(d.error_code, want)) {
          r.message = "unknown error code " + d.error_code;
          break;
        }
        try {
          TypePtr t = check(d).second;
          r.type_text = surface::print(t);
          r.message = "expected " + d.error_code + " but the judgment typechecks at " + r.type_text;
        } catch (const TypeError& e) {
          r.code = e.code();
          r.error_span = e.span();
          r.ok = e.code() == want;
          r.message = r.ok ? std::string("rejected as expected: ") + e.detail()
                           : "expected " + d.error_code + " but got " + to_string(e.code()) +
                                 ": " + e.detail();
        }
        break;
      }
    }
  } catch (const TypeError& e) {
    r.ok = false;
    r.code = e.code();
    r.error_span = e.span();
    r.message = e.detail();
  } catch (const KindError& e) {
    r.ok = false;
    r.code = ErrorCode::KindMismatch;
    r.error_span = d.span;
    r.message = e.what();
  } catch (const ScopeError& e) {
    r.ok = false;
    r.error_span = d.span;
    r.message = e.what();
  }
  return r;
}

FileResult Session::process_text(const std::string& text, const std::string& file) {
  FileResult out;
  out.file = file;
  std::vector<surface::Decl> decls;
  try {
    decls = surface::parse_file(text, file);
  } catch (const surface::SyntaxError& e) {
    out.syntax_error = e.what();
    out.syntax_span = e.span();
    return out;
  }
  for (const auto& d : decls) out.decls.push_back(process(d));
  return out;
}

FileResult Session::process_file(const std::string& path) {
  return process_text(read_file(path), path);
}

}  // namespace pe
