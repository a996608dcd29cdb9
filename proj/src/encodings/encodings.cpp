#include "pe/encodings.hpp"

#include <stdexcept>

namespace pe {

namespace {

std::set<std::string> ftv_all(const std::vector<TypePtr>& ts) {
  std::set<std::string> out;
  for (const auto& t : ts) collect_free_type_vars(t, out);
  return out;
}

void expect_arity(const CtorArgs& a, std::size_t n, const char* what) {
  if (a.args.size() != n)
    throw std::invalid_argument(std::string(what) + " expects " + std::to_string(n) +
                                " type argument(s)");
}

void expect_binder(const CtorArgs& a, bool computation, const char* what) {
  if (a.binder.empty() || is_cvar_name(a.binder) != computation)
    throw KindError(std::string(what) + " binds a " +
                    (computation ? "computation" : "value") + " type variable");
}

TypePtr unit_type() {
  TypePtr x = vvar("X");
  return forall_v("X", arrow(x, x));
}

TypePtr prod_type(const TypePtr& a, const TypePtr& b) {
  std::string x = fresh_name("X", ftv_all({a, b}));
  TypePtr xv = vvar(x);
  return forall_v(x, arrow(arrow(a, arrow(b, xv)), xv));
}

TypePtr sum_type(const TypePtr& a, const TypePtr& b) {
  std::string x = fresh_name("X", ftv_all({a, b}));
  TypePtr xv = vvar(x);
  return forall_v(x, arrow(arrow(a, xv), arrow(arrow(b, xv), xv)));
}

// exists X. B = forall Y. (forall X. (B -> Y)) -> Y, for either sort of X.
TypePtr exists_value(const std::string& binder, const TypePtr& body) {
  std::set<std::string> avoid = free_type_vars(body);
  avoid.insert(binder);
  std::string y = fresh_name("Y", avoid);
  TypePtr yv = vvar(y);
  return forall_v(y, arrow(forall_any(binder, arrow(body, yv)), yv));
}

// exists° X. A = forall ^Y. (forall X. (A -o ^Y)) -> ^Y, for either sort of X.
TypePtr exists_comp(const std::string& binder, const TypePtr& body) {
  std::set<std::string> avoid = free_type_vars(body);
  avoid.insert(binder);
  std::string y = fresh_name("^Y", avoid);
  TypePtr yv = cvar(y);
  return forall_c(y, arrow(forall_any(binder, lolli(body, yv)), yv));
}

TypePtr copower_type(const TypePtr& b, const TypePtr& a) {
  std::string x = fresh_name("^X", ftv_all({a, b}));
  TypePtr xv = cvar(x);
  return forall_c(x, arrow(arrow(b, lolli(a, xv)), xv));
}

bool positive_rec(const std::string& var, const TypePtr& t, bool positive) {
  switch (t->tag) {
    case TypeTag::VVar:
    case TypeTag::CVar:
      return t->name != var || positive;
    case TypeTag::Arrow:
    case TypeTag::Lolli:
      return positive_rec(var, t->dom, !positive) && positive_rec(var, t->cod, positive);
    case TypeTag::ForallV:
    case TypeTag::ForallC:
      if (t->name == var) return true;
      return positive_rec(var, t->cod, positive);
  }
  return true;
}

void require_positive(const std::string& var, const TypePtr& body) {
  if (!positive_in(var, body))
    throw PositivityError(var + " occurs negatively in " + surface::print(body));
}

}  // namespace

TypePtr encode_value_type(ValueCtor ctor, const CtorArgs& a) {
  switch (ctor) {
    case ValueCtor::Unit:
      expect_arity(a, 0, "1");
      return unit_type();
    case ValueCtor::Prod:
      expect_arity(a, 2, "product");
      return prod_type(a.args[0], a.args[1]);
    case ValueCtor::Zero:
      expect_arity(a, 0, "0");
      return forall_v("X", vvar("X"));
    case ValueCtor::Sum:
      expect_arity(a, 2, "sum");
      return sum_type(a.args[0], a.args[1]);
    case ValueCtor::ExistsV:
      expect_arity(a, 1, "exists");
      expect_binder(a, false, "exists");
      return exists_value(a.binder, a.args[0]);
    case ValueCtor::ExistsC:
      expect_arity(a, 1, "exists");
      expect_binder(a, true, "exists");
      return exists_value(a.binder, a.args[0]);
    case ValueCtor::Mu: {
      expect_arity(a, 1, "mu");
      expect_binder(a, false, "mu");
      require_positive(a.binder, a.args[0]);
      TypePtr x = vvar(a.binder);
      return forall_v(a.binder, arrow(arrow(a.args[0], x), x));
    }
    case ValueCtor::Nu: {
      expect_arity(a, 1, "nu");
      expect_binder(a, false, "nu");
      require_positive(a.binder, a.args[0]);
      TypePtr x = vvar(a.binder);
      return exists_value(a.binder, prod_type(arrow(x, a.args[0]), x));
    }
  }
  throw std::invalid_argument("unknown value type constructor");
}

TypePtr encode_comp_type(CompCtor ctor, const CtorArgs& a) {
  switch (ctor) {
    case CompCtor::UnitC:
      expect_arity(a, 0, "1o");
      return forall_c("^X", arrow(encode_value_type(ValueCtor::Zero, {}), cvar("X")));
    case CompCtor::ProdC: {
      expect_arity(a, 2, "computation product");
      std::string x = fresh_name("^X", ftv_all(a.args));
      TypePtr xv = cvar(x);
      return forall_c(x, arrow(sum_type(lolli(a.args[0], xv), lolli(a.args[1], xv)), xv));
    }
    case CompCtor::ZeroC:
      expect_arity(a, 0, "0o");
      return forall_c("^X", cvar("X"));
    case CompCtor::Oplus: {
      expect_arity(a, 2, "(+)");
      std::string x = fresh_name("^X", ftv_all(a.args));
      TypePtr xv = cvar(x);
      return forall_c(x, arrow(lolli(a.args[0], xv), arrow(lolli(a.args[1], xv), xv)));
    }
    case CompCtor::Copower:
      expect_arity(a, 2, "copower");
      return copower_type(a.args[0], a.args[1]);
    case CompCtor::ExistsVC:
      expect_arity(a, 1, "existso");
      expect_binder(a, false, "existso");
      return exists_comp(a.binder, a.args[0]);
    case CompCtor::ExistsCC:
      expect_arity(a, 1, "existso");
      expect_binder(a, true, "existso");
      return exists_comp(a.binder, a.args[0]);
    case CompCtor::MuC: {
      expect_arity(a, 1, "muo");
      expect_binder(a, true, "muo");
      require_positive(a.binder, a.args[0]);
      TypePtr x = cvar(a.binder);
      return forall_c(a.binder, arrow(lolli(a.args[0], x), x));
    }
    case CompCtor::NuC: {
      expect_arity(a, 1, "nuo");
      expect_binder(a, true, "nuo");
      require_positive(a.binder, a.args[0]);
      TypePtr x = cvar(a.binder);
      return exists_comp(a.binder, copower_type(lolli(x, a.args[0]), x));
    }
  }
  throw std::invalid_argument("unknown computation type constructor");
}

TypePtr encode_bang(const TypePtr& b) {
  std::string x = fresh_name("^X", free_type_vars(b));
  TypePtr xv = cvar(x);
  return forall_c(x, arrow(arrow(b, xv), xv));
}

TypePtr encode_numeral(int n) {
  if (n < 0) throw std::invalid_argument("negative numeral type");
  if (n == 0) return encode_value_type(ValueCtor::Zero, {});
  TypePtr t = unit_type();
  for (int i = 1; i < n; ++i) t = sum_type(t, unit_type());
  return t;
}

bool positive_in(const std::string& var, const TypePtr& body) {
  return positive_rec(var, body, true);
}

TypePtr match_bang(const TypePtr& t) {
  if (!t || t->tag != TypeTag::ForallC) return nullptr;
  const TypePtr& f = t->cod;
  if (f->tag != TypeTag::Arrow || f->cod->tag != TypeTag::CVar || f->cod->name != t->name)
    return nullptr;
  const TypePtr& k = f->dom;
  if (k->tag != TypeTag::Arrow || k->cod->tag != TypeTag::CVar || k->cod->name != t->name)
    return nullptr;
  if (free_type_vars(k->dom).count(t->name)) return nullptr;
  return k->dom;
}

namespace {

// Λ^X. λp : B -> ^X. p t, with ^X avoiding `avoid` and p avoiding fv(t).
TermPtr bang_term(const TermPtr& t, const TypePtr& b, std::set<std::string> avoid) {
  collect_free_type_vars(b, avoid);
  for (const auto& n : free_type_vars(t)) avoid.insert(n);
  std::string x = fresh_name("^X", avoid);
  std::string p = fresh_name("p", free_vars(t));
  TypePtr xv = cvar(x);
  return tylam_c(x, lam(p, arrow(b, xv), app(var(p), t)));
}

std::set<std::string> context_ftv(const std::vector<Binding>& gamma,
                                  const std::optional<Binding>& delta) {
  std::set<std::string> out;
  for (const auto& b : gamma) collect_free_type_vars(b.type, out);
  if (delta) collect_free_type_vars(delta->type, out);
  return out;
}

}  // namespace

TermPtr elaborate_bang_intro(const std::vector<Binding>& gamma, const TermPtr& t,
                             const ConstantTable& consts) {
  TypePtr b = typecheck(Judgment{gamma, std::nullopt, t, nullptr, t->span}, consts);
  TermPtr out = bang_term(t, b, context_ftv(gamma, std::nullopt));
  typecheck(Judgment{gamma, std::nullopt, out, encode_bang(b), t->span}, consts);
  return out;
}

TermPtr elaborate_let(const std::vector<Binding>& gamma, const std::optional<Binding>& delta,
                      const std::string& x, const TermPtr& t, const TermPtr& u,
                      const ConstantTable& consts) {
  TypePtr tt = typecheck(Judgment{gamma, delta, t, nullptr, t->span}, consts);
  TypePtr b = match_bang(tt);
  if (!b) throw TypeError(ErrorCode::AppMismatch, t->span, "let-bound term is not of a type !B");
  std::vector<Binding> inner = gamma;
  inner.push_back({x, b});
  TypePtr a = typecheck(Judgment{inner, std::nullopt, u, nullptr, u->span}, consts);
  if (!is_computation(a))
    throw TypeError(ErrorCode::KindMismatch, u->span, "let body is not of a computation type");
  TermPtr out = app(tyapp_c(t, a), lam(x, b, u));
  typecheck(Judgment{gamma, delta, out, a, t->span}, consts);
  return out;
}

std::pair<TermPtr, TermPtr> girard_iso_terms(const TypePtr& a, const TypePtr& b) {
  TypePtr bang_a = encode_bang(a);
  TermPtr forward =
      lam("f", arrow(a, b),
          linlam("z", bang_a, app(tyapp_c(var("z"), b), lam("x", a, app(var("f"), var("x"))))));
  TermPtr backward =
      lam("g", lolli(bang_a, b), lam("x", a, app(var("g"), bang_term(var("x"), a, {}))));
  return {forward, backward};
}

// ---------------------------------------------------------------------------
// Call-by-push-value

namespace {

CbpvPtr mk(CbpvTag tag, std::vector<CbpvPtr> args, std::string name = "") {
  return std::make_shared<CbpvType>(CbpvType{tag, std::move(name), std::move(args)});
}

}  // namespace

CbpvPtr cbpv_var(std::string name) { return mk(CbpvTag::Var, {}, std::move(name)); }
CbpvPtr cbpv_unit() { return mk(CbpvTag::Unit, {}); }
CbpvPtr cbpv_sum(CbpvPtr a, CbpvPtr b) { return mk(CbpvTag::Sum, {std::move(a), std::move(b)}); }
CbpvPtr cbpv_prod(CbpvPtr a, CbpvPtr b) { return mk(CbpvTag::Prod, {std::move(a), std::move(b)}); }
CbpvPtr cbpv_u(CbpvPtr c) { return mk(CbpvTag::U, {std::move(c)}); }
CbpvPtr cbpv_f(CbpvPtr a) { return mk(CbpvTag::F, {std::move(a)}); }
CbpvPtr cbpv_fun(CbpvPtr a, CbpvPtr c) { return mk(CbpvTag::Fun, {std::move(a), std::move(c)}); }
CbpvPtr cbpv_cprod(CbpvPtr c, CbpvPtr d) {
  return mk(CbpvTag::CProd, {std::move(c), std::move(d)});
}

bool cbpv_is_computation(const CbpvPtr& t) {
  switch (t->tag) {
    case CbpvTag::Var:
      return is_cvar_name(t->name);
    case CbpvTag::F:
    case CbpvTag::Fun:
    case CbpvTag::CProd:
      return true;
    default:
      return false;
  }
}

std::string cbpv_print(const CbpvPtr& t) {
  switch (t->tag) {
    case CbpvTag::Var:
      return t->name;
    case CbpvTag::Unit:
      return "1";
    case CbpvTag::Sum:
      return "(" + cbpv_print(t->args[0]) + " + " + cbpv_print(t->args[1]) + ")";
    case CbpvTag::Prod:
      return "(" + cbpv_print(t->args[0]) + " * " + cbpv_print(t->args[1]) + ")";
    case CbpvTag::U:
      return "U(" + cbpv_print(t->args[0]) + ")";
    case CbpvTag::F:
      return "F(" + cbpv_print(t->args[0]) + ")";
    case CbpvTag::Fun:
      return "(" + cbpv_print(t->args[0]) + " -> " + cbpv_print(t->args[1]) + ")";
    case CbpvTag::CProd:
      return "(" + cbpv_print(t->args[0]) + " & " + cbpv_print(t->args[1]) + ")";
  }
  return "?";
}

TypePtr cbpv_translate_type(const CbpvPtr& t) {
  auto tr = [](const CbpvPtr& s) { return cbpv_translate_type(s); };
  switch (t->tag) {
    case CbpvTag::Var:
      return is_cvar_name(t->name) ? cvar(t->name.substr(1)) : vvar(t->name);
    case CbpvTag::Unit:
      return encode_value_type(ValueCtor::Unit, {});
    case CbpvTag::Sum:
      return encode_value_type(ValueCtor::Sum, {{tr(t->args[0]), tr(t->args[1])}, ""});
    case CbpvTag::Prod:
      return encode_value_type(ValueCtor::Prod, {{tr(t->args[0]), tr(t->args[1])}, ""});
    case CbpvTag::U:
      return tr(t->args[0]);
    case CbpvTag::F:
      return encode_bang(tr(t->args[0]));
    case CbpvTag::Fun:
      return arrow(tr(t->args[0]), tr(t->args[1]));
    case CbpvTag::CProd:
      return encode_comp_type(CompCtor::ProdC, {{tr(t->args[0]), tr(t->args[1])}, ""});
  }
  throw std::invalid_argument("unknown CBPV type");
}

// ---------------------------------------------------------------------------
// Effect constants

std::vector<ConstantSig> register_effect_constants(MonadKind kind,
                                                   const std::vector<std::string>& exceptions) {
  std::vector<ConstantSig> out;
  switch (kind) {
    case MonadKind::Identity:
      break;
    case MonadKind::Powerset: {
      TypePtr x = cvar("X");
      out.push_back({"or", forall_c("^X", arrow(x, arrow(x, x))), "powerset.or"});
      break;
    }
    case MonadKind::Exception:
      for (const auto& e : exceptions) {
        out.push_back({"raise^" + e, forall_c("^X", cvar("X")), "exception.raise." + e});
        TypePtr x = vvar("X");
        TypePtr bang_x = encode_bang(x);
        out.push_back({"handle^" + e,
                       forall_v("X", lolli(arrow(encode_numeral(2), bang_x), bang_x)),
                       "exception.handle." + e});
      }
      break;
  }
  return out;
}

ConstantTable make_constant_table(const std::vector<ConstantSig>& sigs) {
  ConstantTable t;
  for (const auto& s : sigs) t[s.name] = s;
  return t;
}

// ---------------------------------------------------------------------------
// Elaboration

using surface::STmKind;
using surface::STyKind;

Elaborator::Elaborator(ConstantTable consts) : consts_(std::move(consts)) {}

TypePtr Elaborator::type(const surface::STyPtr& t) const {
  std::set<std::string> bound;
  return type_in(t, bound);
}

TypePtr Elaborator::type_in(const surface::STyPtr& t, std::set<std::string>& bound) const {
  auto sub = [&](std::size_t i) { return type_in(t->args[i], bound); };
  auto under = [&](const std::string& binder, std::size_t i) {
    bool had = bound.count(binder);
    bound.insert(binder);
    TypePtr r = type_in(t->args[i], bound);
    if (!had) bound.erase(binder);
    return r;
  };
  try {
    switch (t->kind) {
      case STyKind::Var: {
        if (!bound.count(t->name)) {
          auto it = tydefs_.find(t->name);
          if (it != tydefs_.end()) return it->second;
        }
        return is_cvar_name(t->name) ? cvar(t->name.substr(1), t->span) : vvar(t->name, t->span);
      }
      case STyKind::Arrow:
        return arrow(sub(0), sub(1), t->span);
      case STyKind::Lolli:
        return lolli(sub(0), sub(1), t->span);
      case STyKind::Forall:
        return forall_any(t->name, under(t->name, 0), t->span);
      case STyKind::Bang:
        return encode_bang(sub(0));
      case STyKind::Num:
        return encode_numeral(t->num);
      case STyKind::Prod:
        return encode_value_type(ValueCtor::Prod, {{sub(0), sub(1)}, ""});
      case STyKind::Sum:
        return encode_value_type(ValueCtor::Sum, {{sub(0), sub(1)}, ""});
      case STyKind::Exists:
        return encode_value_type(is_cvar_name(t->name) ? ValueCtor::ExistsC : ValueCtor::ExistsV,
                                 {{under(t->name, 0)}, t->name});
      case STyKind::Mu:
        return encode_value_type(ValueCtor::Mu, {{under(t->name, 0)}, t->name});
      case STyKind::Nu:
        return encode_value_type(ValueCtor::Nu, {{under(t->name, 0)}, t->name});
      case STyKind::UnitC:
        return encode_comp_type(CompCtor::UnitC, {});
      case STyKind::ZeroC:
        return encode_comp_type(CompCtor::ZeroC, {});
      case STyKind::ProdC:
        return encode_comp_type(CompCtor::ProdC, {{sub(0), sub(1)}, ""});
      case STyKind::Oplus:
        return encode_comp_type(CompCtor::Oplus, {{sub(0), sub(1)}, ""});
      case STyKind::Copower:
        return encode_comp_type(CompCtor::Copower, {{sub(0), sub(1)}, ""});
      case STyKind::ExistsAlg:
        return encode_comp_type(is_cvar_name(t->name) ? CompCtor::ExistsCC : CompCtor::ExistsVC,
                                {{under(t->name, 0)}, t->name});
      case STyKind::MuC:
        return encode_comp_type(CompCtor::MuC, {{under(t->name, 0)}, t->name});
      case STyKind::NuC:
        return encode_comp_type(CompCtor::NuC, {{under(t->name, 0)}, t->name});
    }
  } catch (const KindError& e) {
    throw TypeError(ErrorCode::KindMismatch, t->span, e.what());
  }
  throw std::invalid_argument("unknown surface type");
}

TypePtr Elaborator::synth(const std::vector<Binding>& gamma, const std::optional<Binding>& delta,
                          const TermPtr& t) const {
  std::optional<Binding> d;
  if (delta && occurs_free(t, delta->name)) d = delta;
  return typecheck(Judgment{gamma, d, t, nullptr, t->span}, consts_);
}

TermPtr Elaborator::term(const std::vector<Binding>& gamma, const std::optional<Binding>& delta,
                         const surface::STmPtr& t) const {
  std::vector<Binding> g = gamma;
  std::set<std::string> tybound;
  return term_in(g, delta, tybound, t);
}

TermPtr Elaborator::term_in(std::vector<Binding>& gamma, const std::optional<Binding>& delta,
                            std::set<std::string>& tybound, const surface::STmPtr& t) const {
  auto ty = [&](const surface::STyPtr& s) { return type_in(s, tybound); };
  auto sub = [&](std::size_t i, const std::optional<Binding>& d) {
    return term_in(gamma, d, tybound, t->args[i]);
  };
  // Elaborates args[i] with an extra Γ binding.
  auto with = [&](const std::string& x, const TypePtr& a, std::size_t i,
                  const std::optional<Binding>& d) {
    gamma.push_back({x, a});
    TermPtr r = term_in(gamma, d, tybound, t->args[i]);
    gamma.pop_back();
    return r;
  };
  // Type variables that a binder introduced here must avoid.
  auto avoid = [&](std::initializer_list<TermPtr> ts, std::initializer_list<TypePtr> tys) {
    std::set<std::string> out = context_ftv(gamma, delta);
    out.insert(tybound.begin(), tybound.end());
    for (const auto& s : ts)
      for (const auto& n : free_type_vars(s)) out.insert(n);
    for (const auto& s : tys) collect_free_type_vars(s, out);
    return out;
  };
  auto fresh_var = [](const std::string& base, std::initializer_list<TermPtr> ts) {
    std::set<std::string> used;
    for (const auto& s : ts)
      for (const auto& n : free_vars(s)) used.insert(n);
    return fresh_name(base, used);
  };

  switch (t->kind) {
    case STmKind::Var: {
      bool bound = delta && delta->name == t->name;
      for (const auto& b : gamma) bound = bound || b.name == t->name;
      if (!bound) {
        auto d = defs_.find(t->name);
        if (d != defs_.end()) return d->second.first;
        if (consts_.count(t->name)) return constant(t->name, t->span);
      }
      return var(t->name, t->span);
    }
    case STmKind::Lam: {
      TypePtr a = ty(t->type);
      return lam(t->name, a, with(t->name, a, 0, delta), t->span);
    }
    case STmKind::LinLam: {
      TypePtr a = ty(t->type);
      return linlam(t->name, a, term_in(gamma, Binding{t->name, a}, tybound, t->args[0]), t->span);
    }
    case STmKind::App:
      return app(sub(0, delta), sub(1, delta), t->span);
    case STmKind::TyLam: {
      bool had = tybound.count(t->name);
      tybound.insert(t->name);
      TermPtr body = sub(0, delta);
      if (!had) tybound.erase(t->name);
      return tylam(t->name, body, t->span);
    }
    case STmKind::TyApp:
      return tyapp(sub(0, delta), ty(t->type), t->span);
    case STmKind::Bang: {
      TermPtr body = sub(0, std::nullopt);
      TypePtr b = synth(gamma, std::nullopt, body);
      return bang_term(body, b, avoid({body}, {b}));
    }
    case STmKind::Let: {
      TermPtr bound = sub(0, delta);
      TypePtr bt = synth(gamma, delta, bound);
      TypePtr b = match_bang(bt);
      if (!b)
        throw TypeError(ErrorCode::AppMismatch, t->args[0]->span,
                        "let-bound term has type " + surface::print(bt) + ", not !B");
      TermPtr body = with(t->name, b, 1, std::nullopt);
      gamma.push_back({t->name, b});
      TypePtr a = synth(gamma, std::nullopt, body);
      gamma.pop_back();
      if (!is_computation(a))
        throw TypeError(ErrorCode::KindMismatch, t->args[1]->span,
                        "let body has value type " + surface::print(a));
      return app(tyapp_c(bound, a, t->span), lam(t->name, b, body), t->span);
    }
    case STmKind::Pair: {
      TypePtr a = ty(t->tyargs[0]), b = ty(t->tyargs[1]);
      TermPtr l = sub(0, delta), r = sub(1, delta);
      std::string x = fresh_name("X", avoid({l, r}, {a, b}));
      std::string k = fresh_var("k", {l, r});
      TypePtr xv = vvar(x);
      return tylam_v(x, lam(k, arrow(a, arrow(b, xv)), app(app(var(k), l), r)), t->span);
    }
    case STmKind::Fst:
    case STmKind::Snd: {
      TypePtr a = ty(t->tyargs[0]), b = ty(t->tyargs[1]);
      TermPtr p = sub(0, delta);
      std::string pick = t->kind == STmKind::Fst ? "a" : "b";
      TermPtr sel = lam("a", a, lam("b", b, var(pick)));
      return app(tyapp(p, t->kind == STmKind::Fst ? a : b), sel, t->span);
    }
    case STmKind::Inl:
    case STmKind::Inr: {
      TypePtr a = ty(t->tyargs[0]), b = ty(t->tyargs[1]);
      TermPtr v = sub(0, delta);
      std::string x = fresh_name("X", avoid({v}, {a, b}));
      std::string f = fresh_var("f", {v});
      std::string g = fresh_name("g", [&] {
        auto s = free_vars(v);
        s.insert(f);
        return s;
      }());
      TypePtr xv = vvar(x);
      TermPtr inj = app(var(t->kind == STmKind::Inl ? f : g), v);
      return tylam_v(x, lam(f, arrow(a, xv), lam(g, arrow(b, xv), inj)), t->span);
    }
    case STmKind::Case: {
      TypePtr a = ty(t->tyargs[0]), b = ty(t->tyargs[1]), c = ty(t->tyargs[2]);
      TermPtr s = sub(0, delta);
      TermPtr l = with(t->name, a, 1, std::nullopt);
      TermPtr r = with(t->name2, b, 2, std::nullopt);
      return app(app(tyapp(s, c), lam(t->name, a, l)), lam(t->name2, b, r), t->span);
    }
    case STmKind::OInl:
    case STmKind::OInr: {
      TypePtr a = ty(t->tyargs[0]), b = ty(t->tyargs[1]);
      TermPtr v = sub(0, delta);
      std::string x = fresh_name("^X", avoid({v}, {a, b}));
      std::string f = fresh_var("f", {v});
      std::string g = fresh_name("g", [&] {
        auto s = free_vars(v);
        s.insert(f);
        return s;
      }());
      TypePtr xv = cvar(x);
      TermPtr inj = app(var(t->kind == STmKind::OInl ? f : g), v);
      return tylam_c(x, lam(f, lolli(a, xv), lam(g, lolli(b, xv), inj)), t->span);
    }
    case STmKind::OCase: {
      TypePtr a = ty(t->tyargs[0]), b = ty(t->tyargs[1]), c = ty(t->tyargs[2]);
      TermPtr s = sub(0, delta);
      TermPtr l = term_in(gamma, Binding{t->name, a}, tybound, t->args[1]);
      TermPtr r = term_in(gamma, Binding{t->name2, b}, tybound, t->args[2]);
      return app(app(tyapp(s, c), linlam(t->name, a, l)), linlam(t->name2, b, r), t->span);
    }
  }
  throw std::invalid_argument("unknown surface term");
}

Judgment Elaborator::judgment(const surface::Decl& d) const {
  Judgment j;
  j.span = d.span;
  for (const auto& b : d.gamma) j.gamma.push_back({b.name, type(b.type)});
  if (d.delta) j.delta = Binding{d.delta->name, type(d.delta->type)};
  j.subject = term(j.gamma, j.delta, d.term);
  if (d.type) j.ascription = type(d.type);
  return j;
}

void Elaborator::define_type(const std::string& name, TypePtr t) {
  auto ftv = free_type_vars(t);
  if (!ftv.empty())
    throw ScopeError("type abbreviation " + name + " mentions free variable " + *ftv.begin());
  tydefs_[name] = std::move(t);
}

void Elaborator::define_term(const std::string& name, TermPtr t, TypePtr type) {
  auto fv = free_vars(t);
  if (!fv.empty())
    throw ScopeError("definition " + name + " mentions free variable " + *fv.begin());
  // Definitions are inlined, so a free type variable could be captured.
  auto ftv = free_type_vars(t);
  if (!ftv.empty())
    throw ScopeError("definition " + name + " mentions free type variable " + *ftv.begin());
  defs_[name] = {std::move(t), std::move(type)};
}

TypePtr read_type(const std::string& text) { return Elaborator().type(surface::parse_type(text)); }

TermPtr read_term(const std::string& text, const std::vector<Binding>& gamma,
                  const std::optional<Binding>& delta, const ConstantTable& consts) {
  return Elaborator(consts).term(gamma, delta, surface::parse_term(text));
}

}  // namespace pe
