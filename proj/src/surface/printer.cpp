#include "pe/surface.hpp"

namespace pe::surface {

namespace {

// Type precedence levels: 0 binders and arrows, 1 sums, 2 products, 3 prefix.
std::string ty(const STyPtr& t, int level);

std::string paren(bool p, const std::string& s) { return p ? "(" + s + ")" : s; }

std::string binder_form(const char* q, const STyPtr& t, int level) {
  return paren(level > 0, std::string(q) + " " + t->name + ". " + ty(t->args[0], 0));
}

std::string ty(const STyPtr& t, int level) {
  switch (t->kind) {
    case STyKind::Var:
      return t->name;
    case STyKind::Num:
      return std::to_string(t->num);
    case STyKind::UnitC:
      return "1o";
    case STyKind::ZeroC:
      return "0o";
    case STyKind::Arrow:
    case STyKind::Lolli:
      return paren(level > 0, ty(t->args[0], 1) + (t->kind == STyKind::Arrow ? " -> " : " -o ") +
                                  ty(t->args[1], 0));
    case STyKind::Forall:
      return binder_form("forall", t, level);
    case STyKind::Exists:
      return binder_form("exists", t, level);
    case STyKind::ExistsAlg:
      return binder_form("existso", t, level);
    case STyKind::Mu:
      return binder_form("mu", t, level);
    case STyKind::Nu:
      return binder_form("nu", t, level);
    case STyKind::MuC:
      return binder_form("muo", t, level);
    case STyKind::NuC:
      return binder_form("nuo", t, level);
    case STyKind::Sum:
    case STyKind::Oplus:
      return paren(level > 1, ty(t->args[0], 1) + (t->kind == STyKind::Sum ? " + " : " (+) ") +
                                  ty(t->args[1], 2));
    case STyKind::Prod:
    case STyKind::ProdC:
    case STyKind::Copower: {
      const char* op = t->kind == STyKind::Prod ? " * " : t->kind == STyKind::ProdC ? " *o " : " . ";
      return paren(level > 2, ty(t->args[0], 2) + op + ty(t->args[1], 3));
    }
    case STyKind::Bang:
      return "!" + ty(t->args[0], 3);
  }
  return "?";
}

std::string tyargs(const std::vector<STyPtr>& ts) {
  std::string s = "[";
  for (std::size_t i = 0; i < ts.size(); ++i) s += (i ? ", " : "") + ty(ts[i], 0);
  return s + "]";
}

// Term precedence levels: 0 binders, 1 application chains, 2 arguments.
std::string tm(const STmPtr& t, int level) {
  switch (t->kind) {
    case STmKind::Var:
      return t->name;
    case STmKind::Lam:
      return paren(level > 0, "fun " + t->name + " : " + ty(t->type, 0) + " => " + tm(t->args[0], 0));
    case STmKind::LinLam:
      return paren(level > 0,
                   "lfun " + t->name + " : " + ty(t->type, 0) + " => " + tm(t->args[0], 0));
    case STmKind::TyLam:
      return paren(level > 0, "Fun " + t->name + " => " + tm(t->args[0], 0));
    case STmKind::App:
      return paren(level > 1, tm(t->args[0], 1) + " " + tm(t->args[1], 2));
    case STmKind::TyApp:
      return tm(t->args[0], 2) + " @[" + ty(t->type, 0) + "]";
    case STmKind::Bang:
      return paren(level > 0, "bang " + tm(t->args[0], 0));
    case STmKind::Let:
      return paren(level > 0, "let " + t->name + " <= " + tm(t->args[0], 0) + " in " +
                                  tm(t->args[1], 0));
    case STmKind::Case:
    case STmKind::OCase:
      return paren(level > 0, std::string(t->kind == STmKind::Case ? "case" : "ocase") +
                                  tyargs(t->tyargs) + " " + tm(t->args[0], 0) + " of " + t->name +
                                  " => " + tm(t->args[1], 1) + " | " + t->name2 + " => " +
                                  tm(t->args[2], 0));
    case STmKind::Pair:
    case STmKind::Fst:
    case STmKind::Snd:
    case STmKind::Inl:
    case STmKind::Inr:
    case STmKind::OInl:
    case STmKind::OInr: {
      static const char* names[] = {"pair", "fst", "snd", "inl", "inr", "", "oinl", "oinr"};
      int idx = static_cast<int>(t->kind) - static_cast<int>(STmKind::Pair);
      std::string s = std::string(names[idx]) + tyargs(t->tyargs);
      for (const auto& a : t->args) s += " " + tm(a, 2);
      return paren(level > 1, s);
    }
  }
  return "?";
}

std::string binding(const SBinding& b) { return b.name + " : " + ty(b.type, 0); }

}  // namespace

std::string print(const STyPtr& t) { return ty(t, 0); }
std::string print(const STmPtr& t) { return tm(t, 0); }

std::string print(const Decl& d) {
  switch (d.kind) {
    case DeclKind::TypeDef:
      return "type " + d.name + " = " + print(d.type);
    case DeclKind::Def:
      return "def " + d.name + (d.type ? " : " + print(d.type) : "") + " = " + print(d.term);
    case DeclKind::Judge:
    case DeclKind::Reject: {
      std::string s = d.kind == DeclKind::Judge ? "judge " : "reject " + d.error_code + " ";
      for (std::size_t i = 0; i < d.gamma.size(); ++i) s += (i ? ", " : "") + binding(d.gamma[i]);
      if (!d.gamma.empty()) s += " ";
      if (d.delta) s += "| " + binding(*d.delta) + " ";
      s += "|- " + print(d.term);
      if (d.type) s += " : " + print(d.type);
      return s;
    }
  }
  return "";
}

STyPtr from_kernel(const TypePtr& t) {
  auto mk = [&](STyKind k, std::string name, std::vector<STyPtr> args) {
    return std::make_shared<STy>(STy{k, std::move(name), std::move(args), 0, t->span});
  };
  switch (t->tag) {
    case TypeTag::VVar:
    case TypeTag::CVar:
      return mk(STyKind::Var, t->name, {});
    case TypeTag::Arrow:
      return mk(STyKind::Arrow, "", {from_kernel(t->dom), from_kernel(t->cod)});
    case TypeTag::Lolli:
      return mk(STyKind::Lolli, "", {from_kernel(t->dom), from_kernel(t->cod)});
    case TypeTag::ForallV:
    case TypeTag::ForallC:
      return mk(STyKind::Forall, t->name, {from_kernel(t->cod)});
  }
  return nullptr;
}

STmPtr from_kernel(const TermPtr& t) {
  auto mk = [&](STmKind k, std::string name, STyPtr type, std::vector<STmPtr> args) {
    return std::make_shared<STm>(
        STm{k, std::move(name), "", std::move(type), {}, std::move(args), t->span});
  };
  switch (t->tag) {
    case TermTag::Var:
    case TermTag::Const:
      return mk(STmKind::Var, t->name, nullptr, {});
    case TermTag::Lam:
      return mk(STmKind::Lam, t->name, from_kernel(t->type), {from_kernel(t->fn)});
    case TermTag::LinLam:
      return mk(STmKind::LinLam, t->name, from_kernel(t->type), {from_kernel(t->fn)});
    case TermTag::App:
      return mk(STmKind::App, "", nullptr, {from_kernel(t->fn), from_kernel(t->arg)});
    case TermTag::TyLamV:
    case TermTag::TyLamC:
      return mk(STmKind::TyLam, t->name, nullptr, {from_kernel(t->fn)});
    case TermTag::TyAppV:
    case TermTag::TyAppC:
      return mk(STmKind::TyApp, "", from_kernel(t->type), {from_kernel(t->fn)});
  }
  return nullptr;
}

std::string print(const TypePtr& t) { return print(from_kernel(t)); }
std::string print(const TermPtr& t) { return print(from_kernel(t)); }

std::string print(const Judgment& j) {
  std::string s;
  for (std::size_t i = 0; i < j.gamma.size(); ++i)
    s += (i ? ", " : "") + j.gamma[i].name + " : " + print(j.gamma[i].type);
  if (!j.gamma.empty()) s += " ";
  if (j.delta) s += "| " + j.delta->name + " : " + print(j.delta->type) + " ";
  s += "|- " + print(j.subject);
  if (j.ascription) s += " : " + print(j.ascription);
  return s;
}

}  // namespace pe::surface
