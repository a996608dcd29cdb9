#include "pe/typecheck.hpp"

#include <optional>
#include <unordered_map>

#include "pe/surface.hpp"

namespace pe {

const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::UnboundVar:
      return "UnboundVar";
    case ErrorCode::StoupViolation:
      return "StoupViolation";
    case ErrorCode::KindMismatch:
      return "KindMismatch";
    case ErrorCode::AppMismatch:
      return "AppMismatch";
    case ErrorCode::EscapingTyVar:
      return "EscapingTyVar";
    case ErrorCode::NonComputationStoup:
      return "NonComputationStoup";
  }
  return "?";
}

bool parse_error_code(const std::string& s, ErrorCode& out) {
  for (ErrorCode c : {ErrorCode::UnboundVar, ErrorCode::StoupViolation, ErrorCode::KindMismatch,
                      ErrorCode::AppMismatch, ErrorCode::EscapingTyVar,
                      ErrorCode::NonComputationStoup}) {
    if (s == to_string(c)) {
      out = c;
      return true;
    }
  }
  return false;
}

TypeError::TypeError(ErrorCode code, SourceSpan span, std::string detail)
    : std::runtime_error(span.to_string() + ": " + to_string(code) + ": " + detail),
      code_(code),
      span_(std::move(span)),
      detail_(std::move(detail)) {}

namespace {

using surface::print;
using Stoup = std::optional<Binding>;

void check_kind(const TypePtr& t, const SourceSpan& span) {
  try {
    classify_type(t);
  } catch (const KindError& e) {
    throw TypeError(ErrorCode::KindMismatch, span, e.what());
  }
}

class Checker {
 public:
  Checker(std::vector<Binding> gamma, const ConstantTable& consts)
      : gamma_(std::move(gamma)), consts_(consts) {}

  TypePtr synth(const Stoup& delta, const TermPtr& t) {
    TypePtr out = rule(delta, t);
    if (delta && !is_computation(out))
      throw std::logic_error("rule produced an ill-formed judgment for " + print(t));
    return out;
  }

 private:
  const Binding* lookup(const std::string& x) const {
    for (auto it = gamma_.rbegin(); it != gamma_.rend(); ++it)
      if (it->name == x) return &*it;
    return nullptr;
  }

  std::set<std::string> context_ftv(const Stoup& delta) const {
    std::set<std::string> out;
    for (const auto& b : gamma_) collect_free_type_vars(b.type, out);
    if (delta) collect_free_type_vars(delta->type, out);
    return out;
  }

  TypePtr rule(const Stoup& delta, const TermPtr& t) {
    switch (t->tag) {
      case TermTag::Var: {
        if (delta && delta->name == t->name) return delta->type;
        const Binding* b = lookup(t->name);
        if (!b) throw TypeError(ErrorCode::UnboundVar, t->span, "unbound variable " + t->name);
        if (delta)
          throw TypeError(ErrorCode::StoupViolation, t->span,
                          "variable " + t->name + " used while stoup variable " + delta->name +
                              " is still unconsumed");
        return b->type;
      }
      case TermTag::Const: {
        auto it = consts_.find(t->name);
        if (it == consts_.end())
          throw TypeError(ErrorCode::UnboundVar, t->span, "unknown constant " + t->name);
        if (delta)
          throw TypeError(ErrorCode::StoupViolation, t->span,
                          "constant " + t->name + " used while stoup variable " + delta->name +
                              " is still unconsumed");
        return it->second.scheme;
      }
      case TermTag::Lam: {
        check_kind(t->type, t->span);
        if (delta && delta->name == t->name)
          throw TypeError(ErrorCode::StoupViolation, t->span,
                          "binder " + t->name + " shadows the stoup variable");
        gamma_.push_back({t->name, t->type});
        TypePtr body;
        try {
          body = synth(delta, t->fn);
        } catch (...) {
          gamma_.pop_back();
          throw;
        }
        gamma_.pop_back();
        return arrow(t->type, body);
      }
      case TermTag::LinLam: {
        check_kind(t->type, t->span);
        if (delta)
          throw TypeError(ErrorCode::StoupViolation, t->span,
                          "linear abstraction over " + t->name + " needs an empty stoup, but " +
                              delta->name + " is in the stoup");
        if (!is_computation(t->type))
          throw TypeError(ErrorCode::KindMismatch, t->span,
                          "linear binder " + t->name + " must have a computation type, got " +
                              print(t->type));
        TypePtr body = synth(Binding{t->name, t->type}, t->fn);
        return lolli(t->type, body);
      }
      case TermTag::App:
        return application(delta, t);
      case TermTag::TyLamV:
      case TermTag::TyLamC: {
        if (context_ftv(delta).count(t->name))
          throw TypeError(ErrorCode::EscapingTyVar, t->span,
                          "type variable " + t->name + " is free in the context");
        TypePtr body = synth(delta, t->fn);
        return t->tag == TermTag::TyLamV ? forall_v(t->name, body) : forall_c(t->name, body);
      }
      case TermTag::TyAppV:
      case TermTag::TyAppC: {
        check_kind(t->type, t->span);
        bool comp_arg = is_computation(t->type);
        if (t->tag == TermTag::TyAppC && !comp_arg)
          throw TypeError(ErrorCode::KindMismatch, t->span,
                          "computation type application to value type " + print(t->type));
        TypePtr head = synth(delta, t->fn);
        if (head->tag == TypeTag::ForallV) return subst_type(head->cod, head->name, t->type);
        if (head->tag == TypeTag::ForallC) {
          if (!comp_arg)
            throw TypeError(ErrorCode::KindMismatch, t->span,
                            "instantiating " + head->name + " with value type " + print(t->type));
          return subst_type(head->cod, head->name, t->type);
        }
        throw TypeError(ErrorCode::AppMismatch, t->span,
                        "type application of a term of type " + print(head));
      }
    }
    throw std::logic_error("unknown term node");
  }

  TypePtr application(const Stoup& delta, const TermPtr& t) {
    bool to_head = false;
    if (delta) {
      bool in_fn = occurs_free(t->fn, delta->name);
      bool in_arg = occurs_free(t->arg, delta->name);
      if (in_fn && in_arg)
        throw TypeError(ErrorCode::StoupViolation, t->span,
                        "stoup variable " + delta->name + " used more than once");
      if (!in_fn && !in_arg)
        throw TypeError(ErrorCode::StoupViolation, t->span,
                        "stoup variable " + delta->name + " is never used");
      to_head = in_fn;
    }
    TypePtr head = synth(to_head ? delta : Stoup{}, t->fn);
    if (head->tag == TypeTag::Arrow) {
      if (delta && !to_head)
        throw TypeError(ErrorCode::StoupViolation, t->arg->span,
                        "argument of an ordinary application uses stoup variable " +
                            delta->name);
      TypePtr a = synth(Stoup{}, t->arg);
      if (!alpha_eq(head->dom, a))
        throw TypeError(ErrorCode::AppMismatch, t->span,
                        "argument has type " + print(a) + " but the function expects " +
                            print(head->dom));
      return head->cod;
    }
    if (head->tag == TypeTag::Lolli) {
      TypePtr a = synth(delta, t->arg);
      if (!alpha_eq(head->dom, a))
        throw TypeError(ErrorCode::AppMismatch, t->span,
                        "argument has type " + print(a) + " but the function expects " +
                            print(head->dom));
      return head->cod;
    }
    throw TypeError(ErrorCode::AppMismatch, t->fn->span,
                    "applying a term of non-function type " + print(head));
  }

  std::vector<Binding> gamma_;
  const ConstantTable& consts_;
};

void check_context(const Judgment& j) {
  for (const auto& b : j.gamma) check_kind(b.type, j.span);
  if (j.delta) {
    try {
      classify_type(j.delta->type);
    } catch (const KindError& e) {
      throw TypeError(ErrorCode::KindMismatch, j.span, e.what());
    }
    if (!is_computation(j.delta->type))
      throw TypeError(ErrorCode::NonComputationStoup, j.span,
                      "stoup variable " + j.delta->name + " has value type " +
                          print(j.delta->type));
    for (const auto& b : j.gamma)
      if (b.name == j.delta->name)
        throw TypeError(ErrorCode::StoupViolation, j.span,
                        "variable " + b.name + " is bound both in the context and the stoup");
  }
  if (j.ascription) check_kind(j.ascription, j.span);
}

// Declarative derivation search, memoised on (node, stoup present).
class Deriver {
 public:
  Deriver(std::vector<Binding> gamma, Stoup delta, const ConstantTable& consts)
      : gamma_(std::move(gamma)), consts_(consts) {
    stoups_.push_back(std::move(delta));
    stoup_frames_.push_back(0);
    gamma_frames_.push_back(0);
  }

  std::vector<TypePtr> derive(bool with_stoup, const TermPtr& t) {
    if (with_stoup && !stoups_.back()) return {};
    Key key{t.get(), with_stoup, gamma_frames_.back(), stoup_frames_.back()};
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    std::vector<TypePtr> out;
    auto add = [&](const TypePtr& ty) {
      if (with_stoup && !is_computation(ty)) return;
      for (const auto& o : out)
        if (alpha_eq(o, ty)) return;
      out.push_back(ty);
    };
    const Stoup delta = with_stoup ? stoups_.back() : Stoup{};
    switch (t->tag) {
      case TermTag::Var:
        if (delta) {
          if (delta->name == t->name) add(delta->type);
        } else {
          for (auto g = gamma_.rbegin(); g != gamma_.rend(); ++g) {
            if (g->name == t->name) {
              add(g->type);
              break;
            }
          }
        }
        break;
      case TermTag::Const:
        if (!delta) {
          auto c = consts_.find(t->name);
          if (c != consts_.end()) add(c->second.scheme);
        }
        break;
      case TermTag::Lam:
        if (!well_kinded(t->type) || (delta && delta->name == t->name)) break;
        gamma_.push_back({t->name, t->type});
        gamma_frames_.push_back(++frames_);
        for (const auto& c : derive(with_stoup, t->fn)) add(arrow(t->type, c));
        gamma_frames_.pop_back();
        gamma_.pop_back();
        break;
      case TermTag::LinLam:
        if (delta || !well_kinded(t->type) || !is_computation(t->type)) break;
        stoups_.push_back(Binding{t->name, t->type});
        stoup_frames_.push_back(++frames_);
        for (const auto& c : derive(true, t->fn))
          if (is_computation(c)) add(lolli(t->type, c));
        stoup_frames_.pop_back();
        stoups_.pop_back();
        break;
      case TermTag::App: {
        for (const auto& f : derive(with_stoup, t->fn)) {
          if (f->tag != TypeTag::Arrow) continue;
          for (const auto& a : derive(false, t->arg))
            if (alpha_eq(f->dom, a)) add(f->cod);
        }
        for (const auto& f : derive(false, t->fn)) {
          if (f->tag != TypeTag::Lolli) continue;
          for (const auto& a : derive(with_stoup, t->arg))
            if (alpha_eq(f->dom, a)) add(f->cod);
        }
        break;
      }
      case TermTag::TyLamV:
      case TermTag::TyLamC: {
        std::set<std::string> ftv;
        for (const auto& b : gamma_) collect_free_type_vars(b.type, ftv);
        if (delta) collect_free_type_vars(delta->type, ftv);
        if (ftv.count(t->name)) break;
        for (const auto& b : derive(with_stoup, t->fn))
          add(t->tag == TermTag::TyLamV ? forall_v(t->name, b) : forall_c(t->name, b));
        break;
      }
      case TermTag::TyAppV:
      case TermTag::TyAppC: {
        if (!well_kinded(t->type)) break;
        for (const auto& f : derive(with_stoup, t->fn)) {
          if (f->tag == TypeTag::ForallV) add(subst_type(f->cod, f->name, t->type));
          if (f->tag == TypeTag::ForallC && is_computation(t->type))
            add(subst_type(f->cod, f->name, t->type));
        }
        break;
      }
    }
    memo_[key] = out;
    return out;
  }

 private:
  static bool well_kinded(const TypePtr& t) {
    try {
      classify_type(t);
      return true;
    } catch (const KindError&) {
      return false;
    }
  }

  // The same node may be shared between positions with different contexts,
  // so the key records the context frames as well.
  struct Key {
    const Term* node;
    bool with_stoup;
    int gamma_frame;
    int stoup_frame;
    bool operator==(const Key& o) const {
      return node == o.node && with_stoup == o.with_stoup && gamma_frame == o.gamma_frame &&
             stoup_frame == o.stoup_frame;
    }
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::size_t h = std::hash<const void*>()(k.node);
      h = h * 31 + static_cast<std::size_t>(k.gamma_frame);
      h = h * 31 + static_cast<std::size_t>(k.stoup_frame);
      return h * 2 + k.with_stoup;
    }
  };

  std::vector<Binding> gamma_;
  std::vector<Stoup> stoups_;
  const ConstantTable& consts_;
  std::vector<int> gamma_frames_;
  std::vector<int> stoup_frames_;
  int frames_ = 0;
  std::unordered_map<Key, std::vector<TypePtr>, KeyHash> memo_;
};

}  // namespace

TypePtr typecheck(const Judgment& j, const ConstantTable& constants) {
  check_context(j);
  Checker c(j.gamma, constants);
  TypePtr t = c.synth(j.delta, j.subject);
  if (j.ascription && !alpha_eq(t, j.ascription))
    throw TypeError(ErrorCode::AppMismatch, j.subject->span,
                    "term has type " + print(t) + " but is ascribed " + print(j.ascription));
  return t;
}

std::vector<TypePtr> derivable_types(const Judgment& j, const ConstantTable& constants) {
  try {
    check_context(j);
  } catch (const TypeError&) {
    return {};
  }
  Deriver d(j.gamma, j.delta, constants);
  return d.derive(j.delta.has_value(), j.subject);
}

UnicityReport check_unicity(const std::vector<Judgment>& corpus, const ConstantTable& constants) {
  UnicityReport rep;
  for (const auto& j : corpus) {
    ++rep.checked;
    auto all = derivable_types(j, constants);
    TypePtr algorithmic;
    try {
      algorithmic = typecheck(j, constants);
    } catch (const TypeError& e) {
      ++rep.failures;
      rep.messages.push_back(print(j) + ": algorithmic checker rejected: " + e.what());
      continue;
    }
    if (all.size() != 1 || !alpha_eq(all[0], algorithmic)) {
      ++rep.failures;
      std::string m = print(j) + ": derivable types {";
      for (std::size_t i = 0; i < all.size(); ++i) m += (i ? ", " : "") + print(all[i]);
      rep.messages.push_back(m + "} vs algorithmic " + print(algorithmic));
    }
  }
  return rep;
}

SubstitutionReport check_substitution_lemma(const std::vector<SubstitutionCase>& sample,
                                            const ConstantTable& constants) {
  SubstitutionReport rep;
  for (const auto& c : sample) {
    (c.stoup_part ? rep.part2 : rep.part1)++;
    try {
      TypePtr b = typecheck(c.host, constants);
      TypePtr a = typecheck(c.replacement, constants);
      Judgment result;
      result.subject = subst_term(c.host.subject, c.var, c.replacement.subject);
      if (c.stoup_part) {
        if (!c.host.delta || c.host.delta->name != c.var || !alpha_eq(c.host.delta->type, a))
          throw std::runtime_error("malformed stoup substitution case");
        result.gamma = c.host.gamma;
        result.delta = c.replacement.delta;
      } else {
        bool found = false;
        for (const auto& g : c.host.gamma) {
          if (g.name == c.var) {
            found = alpha_eq(g.type, a);
          } else {
            result.gamma.push_back(g);
          }
        }
        if (!found) throw std::runtime_error("malformed substitution case");
        result.delta = c.host.delta;
      }
      TypePtr got = typecheck(result, constants);
      if (!alpha_eq(got, b)) {
        ++rep.failures;
        rep.messages.push_back(print(result) + ": expected " + print(b) + ", got " + print(got));
      }
    } catch (const std::exception& e) {
      ++rep.failures;
      rep.messages.push_back(print(c.host) + " [" + c.var + " := " +
                             print(c.replacement.subject) + "]: " + e.what());
    }
  }
  return rep;
}

}  // namespace pe
