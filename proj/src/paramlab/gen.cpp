#include <algorithm>

#include "pe/paramlab.hpp"

namespace pe::lab {

namespace {

// The binding a name resolves to, accounting for shadowing.
bool visible(const std::vector<Binding>& gamma, std::size_t i) {
  for (std::size_t j = i + 1; j < gamma.size(); ++j)
    if (gamma[j].name == gamma[i].name) return false;
  return true;
}

TypePtr result_of(TypePtr t) {
  while (t->tag == TypeTag::Arrow || t->tag == TypeTag::Lolli) t = t->cod;
  return t;
}

}  // namespace

TermGen::TermGen(std::uint64_t seed, GenOptions opts, ConstantTable consts)
    : rng_(seed), opts_(std::move(opts)), consts_(std::move(consts)) {}

std::size_t TermGen::pick(std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
}

bool TermGen::coin(double p) { return std::bernoulli_distribution(p)(rng_); }

std::string TermGen::fresh(const std::string& base) { return base + std::to_string(++counter_); }

TypePtr TermGen::type(std::size_t depth, bool computation) {
  const auto& cv = opts_.comp_vars;
  const auto& vv = opts_.value_vars;
  // Closed leaves when no variable of the sort is in scope: 0o and 1.
  auto comp_leaf = [&]() {
    if (!cv.empty()) return cvar(cv[pick(cv.size())]);
    std::string b = fresh("^Z");
    return forall_c(b, cvar(b));
  };
  if (computation) {
    if (depth == 0 || coin(0.4)) return comp_leaf();
    std::size_t choice = pick(opts_.small_types ? 2 : 3);
    if (choice <= 1) return arrow(type(depth - 1, false), type(depth - 1, true));
    std::string b = fresh("^Z");
    GenOptions saved = opts_;
    opts_.comp_vars.push_back(b);
    TypePtr body = type(depth - 1, true);
    opts_ = saved;
    return forall_c(b, body);
  }
  if (depth == 0 || coin(0.35)) {
    if (!vv.empty() && coin(0.7)) return vvar(vv[pick(vv.size())]);
    if (cv.empty() && coin(0.5)) {
      std::string b = fresh("W");
      return forall_v(b, arrow(vvar(b), vvar(b)));
    }
    return comp_leaf();
  }
  std::size_t choice = pick(opts_.small_types ? 3 : 4);
  switch (choice) {
    case 0:
      return type(depth, true);
    case 1:
      return arrow(type(depth - 1, false), type(depth - 1, false));
    case 2:
      return lolli(type(depth - 1, true), type(depth - 1, true));
    default: {
      std::string b = fresh("W");
      GenOptions saved = opts_;
      opts_.value_vars.push_back(b);
      TypePtr body = type(depth - 1, false);
      opts_ = saved;
      return forall_v(b, body);
    }
  }
}

TermPtr TermGen::spine(std::vector<Binding>& gamma, const std::optional<Binding>& delta,
                       TermPtr head, TypePtr ht, const TypePtr& target, std::size_t depth,
                       bool stoup_used) {
  for (int step = 0; step < 5; ++step) {
    if (alpha_eq(ht, target) && (!delta || stoup_used)) return head;
    switch (ht->tag) {
      case TypeTag::Arrow: {
        if (depth == 0) return nullptr;
        TermPtr arg = term(gamma, std::nullopt, ht->dom, depth - 1);
        if (!arg) return nullptr;
        head = app(head, arg);
        ht = ht->cod;
        break;
      }
      case TypeTag::Lolli: {
        if (depth == 0) return nullptr;
        if (delta && stoup_used) return nullptr;
        TermPtr arg = term(gamma, delta, ht->dom, depth - 1);
        if (!arg) return nullptr;
        if (delta) stoup_used = true;
        head = app(head, arg);
        ht = ht->cod;
        break;
      }
      case TypeTag::ForallV:
      case TypeTag::ForallC: {
        bool comp = ht->tag == TypeTag::ForallC;
        TypePtr arg;
        bool aims = result_of(ht->cod)->name == ht->name &&
                    (result_of(ht->cod)->tag == TypeTag::VVar ||
                     result_of(ht->cod)->tag == TypeTag::CVar);
        if (aims && (!comp || is_computation(target)) && coin(0.7))
          arg = target;
        else
          arg = type(1, comp);
        head = tyapp(head, arg);  // tagged by the argument, as elaboration does
        ht = subst_type(ht->cod, ht->name, arg);
        break;
      }
      default:
        return nullptr;
    }
  }
  return nullptr;
}

TermPtr TermGen::eliminate(std::vector<Binding>& gamma, const std::optional<Binding>& delta,
                           const TypePtr& target, std::size_t depth) {
  std::vector<std::pair<TermPtr, TypePtr>> heads;
  for (std::size_t i = 0; i < gamma.size(); ++i)
    if (visible(gamma, i)) heads.emplace_back(var(gamma[i].name), gamma[i].type);
  for (const auto& [name, sig] : consts_) heads.emplace_back(constant(name), sig.scheme);
  std::shuffle(heads.begin(), heads.end(), rng_);
  for (auto& [h, ht] : heads)
    if (TermPtr t = spine(gamma, delta, h, ht, target, depth, false)) return t;
  return nullptr;
}

TermPtr TermGen::term(std::vector<Binding>& gamma, const std::optional<Binding>& delta,
                      const TypePtr& target, std::size_t depth) {
  enum Move { Var, Intro, Elim, Redex, LinRedex };
  std::vector<Move> moves{Var, Intro, Elim};
  if (depth > 0) {
    moves.push_back(Redex);
    if (delta) moves.push_back(LinRedex);
  }
  std::shuffle(moves.begin(), moves.end(), rng_);
  // Prefer the smaller moves most of the time so that terms stay small.
  if (coin(0.5)) std::stable_partition(moves.begin(), moves.end(), [](Move m) { return m == Var; });

  for (Move m : moves) {
    switch (m) {
      case Var: {
        if (delta) {
          if (alpha_eq(delta->type, target)) return var(delta->name);
          break;
        }
        std::vector<std::size_t> hits;
        for (std::size_t i = 0; i < gamma.size(); ++i)
          if (visible(gamma, i) && alpha_eq(gamma[i].type, target)) hits.push_back(i);
        if (!hits.empty()) return var(gamma[hits[pick(hits.size())]].name);
        break;
      }
      case Intro: {
        if (depth == 0) break;
        if (target->tag == TypeTag::Arrow) {
          std::string x = fresh("x");
          gamma.push_back({x, target->dom});
          TermPtr body = term(gamma, delta, target->cod, depth - 1);
          gamma.pop_back();
          if (body) return lam(x, target->dom, body);
        } else if (target->tag == TypeTag::Lolli && !delta) {
          std::string x = fresh("z");
          TermPtr body = term(gamma, Binding{x, target->dom}, target->cod, depth - 1);
          if (body) return linlam(x, target->dom, body);
        } else if (is_forall(*target)) {
          bool comp = target->tag == TypeTag::ForallC;
          std::string b = fresh(comp ? "^B" : "B");
          TypePtr body_t = subst_type(target->cod, target->name, comp ? cvar(b) : vvar(b));
          TermPtr body = term(gamma, delta, body_t, depth - 1);
          if (body) return comp ? tylam_c(b, body) : tylam_v(b, body);
        }
        break;
      }
      case Elim:
        if (TermPtr t = eliminate(gamma, delta, target, depth)) return t;
        break;
      case Redex: {
        if (delta && !is_computation(target)) break;
        TypePtr a = type(1, false);
        std::string x = fresh("x");
        gamma.push_back({x, a});
        TermPtr body = term(gamma, delta, target, depth - 1);
        gamma.pop_back();
        if (!body) break;
        TermPtr arg = term(gamma, std::nullopt, a, depth - 1);
        if (arg) return app(lam(x, a, body), arg);
        break;
      }
      case LinRedex: {
        std::string z = fresh("z");
        TermPtr body = term(gamma, Binding{z, delta->type}, target, depth - 1);
        if (body) return app(linlam(z, delta->type, body), var(delta->name));
        break;
      }
    }
  }
  return nullptr;
}

Judgment TermGen::judgment() {
  for (;;) {
    Judgment j;
    std::size_t k = pick(opts_.max_context + 1);
    std::size_t tdepth = opts_.small_types ? 1 : 2;
    for (std::size_t i = 0; i < k; ++i) j.gamma.push_back({fresh("v"), type(tdepth, false)});
    if (opts_.allow_stoup && coin(0.35)) j.delta = Binding{fresh("s"), type(tdepth, true)};
    TypePtr target;
    std::size_t shape = pick(3);
    if (j.delta)
      target = shape == 0 ? j.delta->type : type(tdepth, true);
    else if (shape == 0 && !j.gamma.empty())
      target = result_of(j.gamma[pick(j.gamma.size())].type);
    else
      target = type(tdepth, coin(0.5));
    std::vector<Binding> gamma = j.gamma;
    TermPtr t = term(gamma, j.delta, target, opts_.max_depth);
    if (!t) continue;
    j.subject = t;
    try {
      j.ascription = typecheck(j, consts_);
    } catch (const TypeError&) {
      continue;
    }
    return j;
  }
}

std::vector<SubstitutionCase> TermGen::substitution_cases(const Judgment& j) {
  std::vector<SubstitutionCase> out;
  for (std::size_t i = 0; i < j.gamma.size(); ++i) {
    if (!visible(j.gamma, i)) continue;
    Judgment r;
    for (std::size_t k = 0; k < j.gamma.size(); ++k)
      if (k != i) r.gamma.push_back(j.gamma[k]);
    std::vector<Binding> gamma = r.gamma;
    TermPtr s = term(gamma, std::nullopt, j.gamma[i].type, 2);
    if (!s) continue;
    r.subject = s;
    out.push_back({j, j.gamma[i].name, r, false});
  }
  if (j.delta) {
    Judgment r;
    r.gamma = j.gamma;
    if (coin(0.5)) r.delta = Binding{fresh("s"), type(1, true)};
    std::vector<Binding> gamma = r.gamma;
    TermPtr s = term(gamma, r.delta, j.delta->type, 2);
    if (!s && r.delta) {
      r.delta.reset();
      s = term(gamma, std::nullopt, j.delta->type, 2);
    }
    if (s) {
      r.subject = s;
      out.push_back({j, j.delta->name, r, true});
    }
  }
  return out;
}

}  // namespace pe::lab
