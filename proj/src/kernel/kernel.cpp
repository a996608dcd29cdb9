#include "pe/kernel.hpp"

#include <cctype>
#include <functional>

namespace pe {

std::string SourceSpan::to_string() const {
  std::string s = file.empty() ? std::string("<input>") : file;
  if (!empty()) s += ":" + std::to_string(start.line) + ":" + std::to_string(start.col);
  return s;
}

namespace {

TypePtr make_type(TypeTag tag, std::string name, TypePtr dom, TypePtr cod,
                  SourceSpan span) {
  return std::make_shared<const Type>(
      Type{tag, std::move(name), std::move(dom), std::move(cod), std::move(span)});
}

TermPtr make_term(TermTag tag, std::string name, TypePtr type, TermPtr fn,
                  TermPtr arg, SourceSpan span) {
  return std::make_shared<const Term>(Term{tag, std::move(name), std::move(type),
                                           std::move(fn), std::move(arg),
                                           std::move(span)});
}

}  // namespace

TypePtr vvar(std::string name, SourceSpan span) {
  return make_type(TypeTag::VVar, std::move(name), nullptr, nullptr, std::move(span));
}
TypePtr cvar(std::string name, SourceSpan span) {
  if (!is_cvar_name(name)) name = "^" + name;
  return make_type(TypeTag::CVar, std::move(name), nullptr, nullptr, std::move(span));
}
TypePtr arrow(TypePtr dom, TypePtr cod, SourceSpan span) {
  return make_type(TypeTag::Arrow, "", std::move(dom), std::move(cod), std::move(span));
}
TypePtr lolli(TypePtr dom, TypePtr cod, SourceSpan span) {
  return make_type(TypeTag::Lolli, "", std::move(dom), std::move(cod), std::move(span));
}
TypePtr forall_v(std::string binder, TypePtr body, SourceSpan span) {
  return make_type(TypeTag::ForallV, std::move(binder), nullptr, std::move(body),
                   std::move(span));
}
TypePtr forall_c(std::string binder, TypePtr body, SourceSpan span) {
  if (!is_cvar_name(binder)) binder = "^" + binder;
  return make_type(TypeTag::ForallC, std::move(binder), nullptr, std::move(body),
                   std::move(span));
}
TypePtr forall_any(std::string binder, TypePtr body, SourceSpan span) {
  if (is_cvar_name(binder)) return forall_c(std::move(binder), std::move(body), std::move(span));
  return forall_v(std::move(binder), std::move(body), std::move(span));
}

bool is_cvar_name(const std::string& name) { return !name.empty() && name[0] == '^'; }
bool is_forall(const Type& t) {
  return t.tag == TypeTag::ForallV || t.tag == TypeTag::ForallC;
}
bool is_var(const Type& t) { return t.tag == TypeTag::VVar || t.tag == TypeTag::CVar; }

Kind classify_type(const TypePtr& t, const std::set<std::string>* scope) {
  switch (t->tag) {
    case TypeTag::VVar:
    case TypeTag::CVar:
      if (scope && !scope->count(t->name))
        throw ScopeError("type variable " + t->name + " is not in scope");
      return t->tag == TypeTag::CVar ? Kind::Computation : Kind::Value;
    case TypeTag::Arrow:
      classify_type(t->dom, scope);
      return classify_type(t->cod, scope);
    case TypeTag::Lolli:
      if (classify_type(t->dom, scope) != Kind::Computation)
        throw KindError("domain of -o must be a computation type");
      if (classify_type(t->cod, scope) != Kind::Computation)
        throw KindError("codomain of -o must be a computation type");
      return Kind::Value;
    case TypeTag::ForallV:
    case TypeTag::ForallC: {
      if (!scope) return classify_type(t->cod, nullptr);
      std::set<std::string> inner = *scope;
      inner.insert(t->name);
      return classify_type(t->cod, &inner);
    }
  }
  return Kind::Value;
}

bool is_computation(const TypePtr& t) {
  try {
    return classify_type(t) == Kind::Computation;
  } catch (const KindError&) {
    return false;
  }
}

void collect_free_type_vars(const TypePtr& t, std::set<std::string>& out) {
  // Iterate the bound set explicitly so that deep arrow spines stay cheap.
  std::function<void(const TypePtr&, std::vector<std::string>&)> go =
      [&](const TypePtr& u, std::vector<std::string>& bound) {
        switch (u->tag) {
          case TypeTag::VVar:
          case TypeTag::CVar:
            for (auto it = bound.rbegin(); it != bound.rend(); ++it)
              if (*it == u->name) return;
            out.insert(u->name);
            return;
          case TypeTag::Arrow:
          case TypeTag::Lolli:
            go(u->dom, bound);
            go(u->cod, bound);
            return;
          case TypeTag::ForallV:
          case TypeTag::ForallC:
            bound.push_back(u->name);
            go(u->cod, bound);
            bound.pop_back();
            return;
        }
      };
  std::vector<std::string> bound;
  go(t, bound);
}

std::set<std::string> free_type_vars(const TypePtr& t) {
  std::set<std::string> out;
  collect_free_type_vars(t, out);
  return out;
}

void collect_all_type_names(const TypePtr& t, std::set<std::string>& out) {
  if (!t->name.empty()) out.insert(t->name);
  if (t->dom) collect_all_type_names(t->dom, out);
  if (t->cod) collect_all_type_names(t->cod, out);
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  if (!avoid.count(base)) return base;
  std::string stem = base;
  while (stem.size() > 1 && std::isdigit(static_cast<unsigned char>(stem.back())))
    stem.pop_back();
  if (stem == "^") stem = base;
  for (int i = 1;; ++i) {
    std::string cand = stem + std::to_string(i);
    if (!avoid.count(cand)) return cand;
  }
}

namespace {

TypePtr subst_type_unchecked(const TypePtr& body, const std::string& var,
                             const TypePtr& repl, const std::set<std::string>& repl_ftv) {
  switch (body->tag) {
    case TypeTag::VVar:
    case TypeTag::CVar:
      return body->name == var ? repl : body;
    case TypeTag::Arrow:
    case TypeTag::Lolli: {
      TypePtr d = subst_type_unchecked(body->dom, var, repl, repl_ftv);
      TypePtr c = subst_type_unchecked(body->cod, var, repl, repl_ftv);
      if (d == body->dom && c == body->cod) return body;
      return body->tag == TypeTag::Arrow ? arrow(d, c, body->span) : lolli(d, c, body->span);
    }
    case TypeTag::ForallV:
    case TypeTag::ForallC: {
      if (body->name == var) return body;
      std::set<std::string> inner_ftv = free_type_vars(body->cod);
      if (!inner_ftv.count(var)) return body;
      std::string binder = body->name;
      TypePtr inner = body->cod;
      if (repl_ftv.count(binder)) {
        std::set<std::string> avoid = repl_ftv;
        avoid.insert(inner_ftv.begin(), inner_ftv.end());
        avoid.insert(var);
        std::string fresh = fresh_name(binder, avoid);
        TypePtr fv = is_cvar_name(binder) ? cvar(fresh) : vvar(fresh);
        inner = subst_type_unchecked(inner, binder, fv, {fresh});
        binder = fresh;
      }
      TypePtr nb = subst_type_unchecked(inner, var, repl, repl_ftv);
      return body->tag == TypeTag::ForallV ? forall_v(binder, nb, body->span)
                                           : forall_c(binder, nb, body->span);
    }
  }
  return body;
}

using Stack = std::vector<std::pair<std::string, std::string>>;

int lookup(const Stack& s, const std::string& name, bool left) {
  for (int i = static_cast<int>(s.size()) - 1; i >= 0; --i) {
    const std::string& n = left ? s[i].first : s[i].second;
    if (n == name) return i;
  }
  return -1;
}

bool alpha_types(const TypePtr& a, const TypePtr& b, Stack& s) {
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case TypeTag::VVar:
    case TypeTag::CVar: {
      int ia = lookup(s, a->name, true);
      int ib = lookup(s, b->name, false);
      if (ia != ib) return false;
      return ia >= 0 || a->name == b->name;
    }
    case TypeTag::Arrow:
    case TypeTag::Lolli:
      return alpha_types(a->dom, b->dom, s) && alpha_types(a->cod, b->cod, s);
    case TypeTag::ForallV:
    case TypeTag::ForallC: {
      s.emplace_back(a->name, b->name);
      bool ok = alpha_types(a->cod, b->cod, s);
      s.pop_back();
      return ok;
    }
  }
  return false;
}

void key_of(const TypePtr& t, std::vector<std::string>& bound, std::string& out) {
  switch (t->tag) {
    case TypeTag::VVar:
    case TypeTag::CVar: {
      for (int i = static_cast<int>(bound.size()) - 1; i >= 0; --i) {
        if (bound[i] == t->name) {
          out += '#';
          out += std::to_string(bound.size() - 1 - i);
          out += ' ';
          return;
        }
      }
      out += t->name;
      out += ' ';
      return;
    }
    case TypeTag::Arrow:
    case TypeTag::Lolli:
      out += t->tag == TypeTag::Arrow ? "(> " : "(o ";
      key_of(t->dom, bound, out);
      key_of(t->cod, bound, out);
      out += ") ";
      return;
    case TypeTag::ForallV:
    case TypeTag::ForallC:
      out += t->tag == TypeTag::ForallV ? "(A " : "(C ";
      bound.push_back(t->name);
      key_of(t->cod, bound, out);
      bound.pop_back();
      out += ") ";
      return;
  }
}

}  // namespace

TypePtr subst_type(const TypePtr& body, const std::string& var, const TypePtr& replacement) {
  if (is_cvar_name(var) && classify_type(replacement) != Kind::Computation)
    throw KindError("cannot substitute a value type for computation variable " + var);
  return subst_type_unchecked(body, var, replacement, free_type_vars(replacement));
}

bool alpha_eq(const TypePtr& a, const TypePtr& b) {
  Stack s;
  return alpha_types(a, b, s);
}

std::string type_key(const TypePtr& t) {
  std::vector<std::string> bound;
  std::string out;
  key_of(t, bound, out);
  return out;
}

// ---------------------------------------------------------------------------
// Terms

TermPtr var(std::string name, SourceSpan span) {
  return make_term(TermTag::Var, std::move(name), nullptr, nullptr, nullptr, std::move(span));
}
TermPtr lam(std::string x, TypePtr ann, TermPtr body, SourceSpan span) {
  return make_term(TermTag::Lam, std::move(x), std::move(ann), std::move(body), nullptr,
                   std::move(span));
}
TermPtr linlam(std::string x, TypePtr ann, TermPtr body, SourceSpan span) {
  return make_term(TermTag::LinLam, std::move(x), std::move(ann), std::move(body), nullptr,
                   std::move(span));
}
TermPtr app(TermPtr fn, TermPtr arg, SourceSpan span) {
  return make_term(TermTag::App, "", nullptr, std::move(fn), std::move(arg), std::move(span));
}
TermPtr app(TermPtr fn, std::initializer_list<TermPtr> args) {
  for (const auto& a : args) fn = app(fn, a);
  return fn;
}
TermPtr tylam_v(std::string binder, TermPtr body, SourceSpan span) {
  return make_term(TermTag::TyLamV, std::move(binder), nullptr, std::move(body), nullptr,
                   std::move(span));
}
TermPtr tylam_c(std::string binder, TermPtr body, SourceSpan span) {
  if (!is_cvar_name(binder)) binder = "^" + binder;
  return make_term(TermTag::TyLamC, std::move(binder), nullptr, std::move(body), nullptr,
                   std::move(span));
}
TermPtr tylam(std::string binder, TermPtr body, SourceSpan span) {
  if (is_cvar_name(binder)) return tylam_c(std::move(binder), std::move(body), std::move(span));
  return tylam_v(std::move(binder), std::move(body), std::move(span));
}
TermPtr tyapp_v(TermPtr fn, TypePtr arg, SourceSpan span) {
  return make_term(TermTag::TyAppV, "", std::move(arg), std::move(fn), nullptr, std::move(span));
}
TermPtr tyapp_c(TermPtr fn, TypePtr arg, SourceSpan span) {
  return make_term(TermTag::TyAppC, "", std::move(arg), std::move(fn), nullptr, std::move(span));
}
TermPtr tyapp(TermPtr fn, TypePtr arg, SourceSpan span) {
  if (is_computation(arg)) return tyapp_c(std::move(fn), std::move(arg), std::move(span));
  return tyapp_v(std::move(fn), std::move(arg), std::move(span));
}
TermPtr constant(std::string name, SourceSpan span) {
  return make_term(TermTag::Const, std::move(name), nullptr, nullptr, nullptr, std::move(span));
}

namespace {

void collect_fv(const TermPtr& t, std::vector<std::string>& bound, std::set<std::string>& out) {
  switch (t->tag) {
    case TermTag::Var:
      for (const auto& b : bound)
        if (b == t->name) return;
      out.insert(t->name);
      return;
    case TermTag::Lam:
    case TermTag::LinLam:
      bound.push_back(t->name);
      collect_fv(t->fn, bound, out);
      bound.pop_back();
      return;
    case TermTag::App:
      collect_fv(t->fn, bound, out);
      collect_fv(t->arg, bound, out);
      return;
    case TermTag::TyLamV:
    case TermTag::TyLamC:
    case TermTag::TyAppV:
    case TermTag::TyAppC:
      collect_fv(t->fn, bound, out);
      return;
    case TermTag::Const:
      return;
  }
}

void collect_ftv(const TermPtr& t, std::vector<std::string>& bound, std::set<std::string>& out) {
  auto add_type = [&](const TypePtr& ty) {
    for (const auto& v : free_type_vars(ty)) {
      bool b = false;
      for (const auto& n : bound) b = b || n == v;
      if (!b) out.insert(v);
    }
  };
  switch (t->tag) {
    case TermTag::Var:
    case TermTag::Const:
      return;
    case TermTag::Lam:
    case TermTag::LinLam:
      add_type(t->type);
      collect_ftv(t->fn, bound, out);
      return;
    case TermTag::App:
      collect_ftv(t->fn, bound, out);
      collect_ftv(t->arg, bound, out);
      return;
    case TermTag::TyLamV:
    case TermTag::TyLamC:
      bound.push_back(t->name);
      collect_ftv(t->fn, bound, out);
      bound.pop_back();
      return;
    case TermTag::TyAppV:
    case TermTag::TyAppC:
      add_type(t->type);
      collect_ftv(t->fn, bound, out);
      return;
  }
}

TermPtr rebuild(const TermPtr& t, TypePtr type, TermPtr fn, TermPtr arg) {
  if (type == t->type && fn == t->fn && arg == t->arg) return t;
  return make_term(t->tag, t->name, std::move(type), std::move(fn), std::move(arg), t->span);
}

TermPtr rebind(const TermPtr& t, std::string name, TypePtr type, TermPtr fn) {
  return make_term(t->tag, std::move(name), std::move(type), std::move(fn), nullptr, t->span);
}

}  // namespace

std::set<std::string> free_vars(const TermPtr& t) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  collect_fv(t, bound, out);
  return out;
}

std::set<std::string> free_type_vars(const TermPtr& t) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  collect_ftv(t, bound, out);
  return out;
}

bool occurs_free(const TermPtr& t, const std::string& x) { return free_vars(t).count(x) > 0; }

TermPtr subst_type_in_term(const TermPtr& body, const std::string& v, const TypePtr& repl) {
  switch (body->tag) {
    case TermTag::Var:
    case TermTag::Const:
      return body;
    case TermTag::Lam:
    case TermTag::LinLam:
      return rebuild(body, subst_type(body->type, v, repl), subst_type_in_term(body->fn, v, repl),
                     nullptr);
    case TermTag::App:
      return rebuild(body, nullptr, subst_type_in_term(body->fn, v, repl),
                     subst_type_in_term(body->arg, v, repl));
    case TermTag::TyAppV:
    case TermTag::TyAppC:
      return rebuild(body, subst_type(body->type, v, repl), subst_type_in_term(body->fn, v, repl),
                     nullptr);
    case TermTag::TyLamV:
    case TermTag::TyLamC: {
      if (body->name == v) return body;
      std::set<std::string> inner = free_type_vars(body->fn);
      if (!inner.count(v)) return body;
      std::set<std::string> repl_ftv = free_type_vars(repl);
      std::string binder = body->name;
      TermPtr b = body->fn;
      if (repl_ftv.count(binder)) {
        std::set<std::string> avoid = repl_ftv;
        avoid.insert(inner.begin(), inner.end());
        avoid.insert(v);
        std::string fresh = fresh_name(binder, avoid);
        b = subst_type_in_term(b, binder, is_cvar_name(binder) ? cvar(fresh) : vvar(fresh));
        binder = fresh;
      }
      return rebind(body, binder, nullptr, subst_type_in_term(b, v, repl));
    }
  }
  return body;
}

namespace {

TermPtr subst_term_impl(const TermPtr& body, const std::string& x, const TermPtr& s,
                        const std::set<std::string>& fv_s, const std::set<std::string>& ftv_s) {
  switch (body->tag) {
    case TermTag::Var:
      return body->name == x ? s : body;
    case TermTag::Const:
      return body;
    case TermTag::App:
      return rebuild(body, nullptr, subst_term_impl(body->fn, x, s, fv_s, ftv_s),
                     subst_term_impl(body->arg, x, s, fv_s, ftv_s));
    case TermTag::TyAppV:
    case TermTag::TyAppC:
      return rebuild(body, body->type, subst_term_impl(body->fn, x, s, fv_s, ftv_s), nullptr);
    case TermTag::Lam:
    case TermTag::LinLam: {
      if (body->name == x) return body;
      if (!occurs_free(body->fn, x)) return body;
      std::string y = body->name;
      TermPtr b = body->fn;
      if (fv_s.count(y)) {
        std::set<std::string> avoid = fv_s;
        auto inner = free_vars(b);
        avoid.insert(inner.begin(), inner.end());
        avoid.insert(x);
        std::string fresh = fresh_name(y, avoid);
        b = subst_term(b, y, var(fresh));
        y = fresh;
      }
      return rebind(body, y, body->type, subst_term_impl(b, x, s, fv_s, ftv_s));
    }
    case TermTag::TyLamV:
    case TermTag::TyLamC: {
      if (!occurs_free(body->fn, x)) return body;
      std::string binder = body->name;
      TermPtr b = body->fn;
      if (ftv_s.count(binder)) {
        std::set<std::string> avoid = ftv_s;
        auto inner = free_type_vars(b);
        avoid.insert(inner.begin(), inner.end());
        std::string fresh = fresh_name(binder, avoid);
        b = subst_type_in_term(b, binder, is_cvar_name(binder) ? cvar(fresh) : vvar(fresh));
        binder = fresh;
      }
      return rebind(body, binder, nullptr, subst_term_impl(b, x, s, fv_s, ftv_s));
    }
  }
  return body;
}

struct TermStacks {
  Stack terms;
  Stack types;
};

bool alpha_terms(const TermPtr& a, const TermPtr& b, TermStacks& s) {
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case TermTag::Var: {
      int ia = lookup(s.terms, a->name, true);
      int ib = lookup(s.terms, b->name, false);
      if (ia != ib) return false;
      return ia >= 0 || a->name == b->name;
    }
    case TermTag::Const:
      return a->name == b->name;
    case TermTag::Lam:
    case TermTag::LinLam: {
      if (!alpha_types(a->type, b->type, s.types)) return false;
      s.terms.emplace_back(a->name, b->name);
      bool ok = alpha_terms(a->fn, b->fn, s);
      s.terms.pop_back();
      return ok;
    }
    case TermTag::App:
      return alpha_terms(a->fn, b->fn, s) && alpha_terms(a->arg, b->arg, s);
    case TermTag::TyLamV:
    case TermTag::TyLamC: {
      s.types.emplace_back(a->name, b->name);
      bool ok = alpha_terms(a->fn, b->fn, s);
      s.types.pop_back();
      return ok;
    }
    case TermTag::TyAppV:
    case TermTag::TyAppC:
      return alpha_types(a->type, b->type, s.types) && alpha_terms(a->fn, b->fn, s);
  }
  return false;
}

}  // namespace

TermPtr subst_term(const TermPtr& body, const std::string& x, const TermPtr& replacement) {
  return subst_term_impl(body, x, replacement, free_vars(replacement),
                         free_type_vars(replacement));
}

bool alpha_eq(const TermPtr& a, const TermPtr& b) {
  TermStacks s;
  return alpha_terms(a, b, s);
}

std::size_t term_size(const TermPtr& t) {
  std::size_t n = 1;
  if (t->fn) n += term_size(t->fn);
  if (t->arg) n += term_size(t->arg);
  return n;
}

}  // namespace pe
