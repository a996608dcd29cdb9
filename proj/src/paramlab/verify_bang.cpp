#include <algorithm>
#include <set>

#include "common.hpp"
#include "pe/finmodel.hpp"

namespace pe::lab {

using namespace detail;
using sem::ObjId;
using sem::RelId;
using sem::Sort;
using sem::ValueId;

namespace {

struct LawInstance {
  std::string law;
  std::string lhs, rhs;
};

// Closed-up instances of the three bang laws. Free type variables A (a set)
// and ^C, ^D (algebras) range over all representatives. Every let body has
// type ^C, ^D or !A, so the bound term is only instantiated at objects
// isomorphic to representatives.
std::vector<LawInstance> bang_law_instances(bool exceptions) {
  std::vector<LawInstance> out{
      // beta: let x <= bang t in u == u[t/x]
      {"beta", "fun a : A => let x <= bang a in bang x", "fun a : A => bang a"},
      {"beta", "fun k : A -> ^C => fun a : A => let x <= bang a in k x",
       "fun k : A -> ^C => fun a : A => k a"},
      {"beta", "fun f : A -> A => fun a : A => let x <= bang (f a) in bang (f x)",
       "fun f : A -> A => fun a : A => bang (f (f a))"},
      {"beta",
       "fun h : ^C -o ^D => fun k : A -> ^C => fun a : A => let x <= bang a in h (k x)",
       "fun h : ^C -o ^D => fun k : A -> ^C => fun a : A => h (k a)"},
      // eta: y == let x <= y in bang x
      {"eta", "lfun y : !A => y", "lfun y : !A => let x <= y in bang x"},
      {"eta", "fun k : A -> ^C => lfun y : !A => y @[^C] k",
       "fun k : A -> ^C => lfun y : !A => (let x <= y in bang x) @[^C] k"},
      // kappa: u[let x <= s in t / y] == let x <= s in u[t/y], u linear in y
      {"kappa",
       "fun h : ^C -o ^D => fun k : A -> ^C => fun s : !A => h (let x <= s in k x)",
       "fun h : ^C -o ^D => fun k : A -> ^C => fun s : !A => let x <= s in h (k x)"},
      {"kappa", "fun k : A -> ^C => fun s : !A => (let x <= s in bang x) @[^C] k",
       "fun k : A -> ^C => fun s : !A => let x <= s in (bang x) @[^C] k"},
      {"kappa",
       "fun f : A -> A => fun s : !A => let w <= (let x <= s in bang (f x)) in bang (f w)",
       "fun f : A -> A => fun s : !A => let x <= s in let w <= bang (f x) in bang (f w)"},
      {"kappa", "fun k : A -> ^C => fun s : !A => (lfun w : ^C => w) (let x <= s in k x)",
       "fun k : A -> ^C => fun s : !A => let x <= s in (lfun w : ^C => w) (k x)"},
  };
  if (exceptions)
    out.push_back({"beta", "fun a : A => let x <= bang a in raise^e @[^C]",
                   "fun a : A => raise^e @[^C]"});
  return out;
}

std::vector<sem::Env> assignments(sem::Model& m, const std::set<std::string>& vars,
                                  std::size_t max_set) {
  std::vector<sem::Env> out{{}};
  for (const auto& v : vars) {
    Sort s = is_cvar_name(v) ? Sort::Alg : Sort::Set;
    std::vector<sem::Env> next;
    for (const auto& e : out)
      for (ObjId r : m.reps(s)) {
        if (s == Sort::Set && m.carrier_of(r).size() > max_set) continue;
        sem::Env e2 = e;
        e2[v] = r;
        next.push_back(std::move(e2));
      }
    out = std::move(next);
  }
  return out;
}

}  // namespace

Report verify_bang_laws(const sem::ModelConfig& cfg) {
  return run_report("bang-laws", cfg, [&](Report& r) {
    sem::ModelConfig c = with_free_arities(cfg, {}, r);
    r.config = c;
    ConstantTable consts = constants_for(c);
    sem::Model m(c, consts);
    bool raise_e = c.monad == MonadKind::Exception &&
                   std::find(c.exceptions.begin(), c.exceptions.end(), "e") != c.exceptions.end();
    auto instances = bang_law_instances(raise_e);
    std::map<std::string, std::size_t> per_law;
    std::size_t evaluations = 0;
    for (const auto& inst : instances) {
      TermPtr lhs = elaborate(inst.lhs, consts);
      TermPtr rhs = elaborate(inst.rhs, consts);
      Judgment jl, jr;
      jl.subject = lhs;
      jr.subject = rhs;
      TypePtr tl = typecheck(jl, consts), tr = typecheck(jr, consts);
      if (!alpha_eq(tl, tr)) {
        r.fail({{"law", inst.law}, {"lhs", inst.lhs}, {"detail", "sides have different types"}});
        continue;
      }
      std::set<std::string> vars = free_type_vars(lhs);
      for (const auto& v : free_type_vars(rhs)) vars.insert(v);
      for (const sem::Env& env : assignments(m, vars, 2)) {
        ValueId a = m.eval(env, {}, {}, lhs);
        ValueId b = m.eval(env, {}, {}, rhs);
        ++evaluations;
        ++per_law[inst.law];
        if (a != b) {
          json w{{"law", inst.law}, {"lhs", inst.lhs}, {"rhs", inst.rhs},
                 {"lhs-value", m.show(a)}, {"rhs-value", m.show(b)}};
          for (const auto& [x, o] : env) w["env"][x] = m.describe(o);
          r.fail(w);
        }
      }
    }
    r.counts = {{"instances", instances.size()}, {"evaluations", evaluations}};
    for (const auto& [law, n] : per_law) r.counts[law] = n;
  });
}

namespace {

// Checks the universal property of (t, unit) as a candidate free algebra on
// n generators against the given algebras; returns a violation or null.
json universal_violation(const fin::Alg& t, const fin::Table& unit, std::size_t n,
                         const std::vector<fin::Alg>& algs, std::size_t& checks) {
  for (std::size_t bi = 0; bi < algs.size(); ++bi) {
    const fin::Alg& b = algs[bi];
    auto homs = fin::enumerate_homs(t, b);
    for (const auto& f : fin::enumerate_functions(n, b.size)) {
      ++checks;
      std::size_t mediating = 0;
      for (const auto& h : homs) {
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) ok = h[unit[i]] == f[i];
        if (ok) ++mediating;
      }
      if (mediating != 1)
        return json{{"algebra-size", b.size}, {"algebra-index", bi}, {"f", f},
                    {"mediating-homomorphisms", mediating}};
    }
  }
  return nullptr;
}

}  // namespace

Report verify_free_algebra(const sem::ModelConfig& cfg, std::size_t max_carrier) {
  return run_report("free-algebra", cfg, [&](Report& r) {
    // Every algebra the mediating term is checked against must be a
    // representative, so the model bound covers the largest carrier.
    sem::ModelConfig c = cfg;
    if (c.bound < max_carrier) {
      c.bound = max_carrier;
      r.notes.push_back("model bound raised to the carrier bound " + std::to_string(max_carrier));
    }
    r.config = c;
    ConstantTable consts = constants_for(c);
    sem::Model m(c, consts);
    fin::MonadSpec spec = c.monad_spec();
    std::vector<fin::Alg> algs = fin::enumerate_algebras(spec, fin::Bound{max_carrier});
    std::size_t checks = 0, term_checks = 0;
    TermPtr mediator = elaborate("fun f : A -> ^B => lfun y : !A => let x <= y in f x", consts);

    for (std::size_t n = 0; n <= std::min<std::size_t>(2, cfg.bound); ++n) {
      fin::FreeAlgebra fa = fin::free_algebra(spec, n);
      json v = universal_violation(fa.alg, fa.unit, n, algs, checks);
      if (!v.is_null()) {
        v["generators"] = n;
        r.fail(v);
        continue;
      }
      // The mediating homomorphism is the denotation of the let term.
      std::vector<std::uint32_t> to_free = bang_to_free(m, n);
      ObjId sn = m.set_object(n);
      for (const fin::Alg& b : algs) {
        ObjId bo = m.alg_object(b);
        sem::Env env{{"A", sn}, {"^B", bo}};
        ValueId med = m.eval(env, {}, {}, mediator);
        auto homs = fin::enumerate_homs(fa.alg, b);
        ObjId fun_space = m.interp(env, arrow(vvar("A"), cvar("^B")));
        ObjId bang = m.interp(env, bang_of_var());
        for (ValueId f : m.carrier_of(fun_space).elems) {
          ++term_checks;
          fin::Table ft = table_of(m, f, bo);
          const fin::Table* h = nullptr;
          for (const auto& cand : homs) {
            bool ok = true;
            for (std::size_t i = 0; i < n && ok; ++i) ok = cand[fa.unit[i]] == ft[i];
            if (ok) h = &cand;
          }
          ValueId got = m.apply(med, f);
          const auto& elems = m.carrier_of(bang).elems;
          for (std::size_t k = 0; k < elems.size(); ++k) {
            std::uint32_t via_term = m.carrier_of(bo).index_of(m.apply(got, elems[k]));
            if (!h || (*h)[to_free[k]] != via_term) {
              r.fail({{"generators", n}, {"algebra-size", b.size}, {"f", ft},
                      {"detail", "let-term denotation differs from the mediating homomorphism"}});
              break;
            }
          }
        }
      }
    }

    // Negative control: a non-free algebra in place of T(n) must fail.
    json control = nullptr;
    std::size_t control_checks = 0;
    for (std::size_t n = 0; n <= 1 && control.is_null(); ++n)
      for (const fin::Alg& c : algs) {
        if (c.size != 2 || c.same_structure(fin::free_algebra(spec, n).alg)) continue;
        for (const auto& unit : fin::enumerate_functions(n, c.size)) {
          json v = universal_violation(c, unit, n, algs, control_checks);
          if (!v.is_null()) {
            control = v;
            control["generators"] = n;
            break;
          }
        }
        if (!control.is_null()) break;
      }
    if (spec.kind() != MonadKind::Identity && control.is_null())
      r.fail({{"detail", "negative control with a 2-point algebra found no violation"}});
    r.counts = {{"algebras", algs.size()},
                {"universal-checks", checks},
                {"term-checks", term_checks},
                {"negative-control", control}};
  });
}

Report verify_bang_cardinality(const sem::ModelConfig& cfg, std::vector<std::size_t> sizes) {
  return run_report("bang-cardinality", cfg, [&](Report& r) {
    if (sizes.empty()) {
      for (std::size_t n = 0; n <= std::min<std::size_t>(cfg.bound, 2); ++n)
        if (cfg.monad != MonadKind::Identity || n > 0) sizes.push_back(n);
    }
    sem::ModelConfig c = with_free_arities(cfg, sizes, r);
    r.config = c;
    sem::Model m(c, constants_for(c));
    fin::MonadSpec spec = c.monad_spec();
    for (std::size_t n : sizes) {
      ObjId bang = m.interp({{"A", m.set_object(n)}}, bang_of_var());
      std::size_t got = m.carrier_of(bang).size();
      std::size_t want = spec.t_size(n);
      r.counts["|!A| for |A|=" + std::to_string(n)] = got;
      r.counts["|TA| for |A|=" + std::to_string(n)] = want;
      if (got != want) {
        r.fail({{"A", n}, {"bang", got}, {"free", want}});
        continue;
      }
      std::vector<std::uint32_t> map = bang_to_free(m, n);
      std::set<std::uint32_t> image(map.begin(), map.end());
      if (image.size() != want)
        r.fail({{"A", n}, {"detail", "k |-> k(TA)(eta) is not a bijection"}, {"map", map}});
    }
  });
}

Report verify_rel_lifting(const sem::ModelConfig& cfg) {
  return run_report("rel-lifting", cfg, [&](Report& r) {
    sem::ModelConfig c = with_free_arities(cfg, {}, r);
    r.config = c;
    sem::Model m(c, constants_for(c));
    fin::MonadSpec spec = c.monad_spec();
    TypePtr bang = bang_of_var();
    std::size_t relations = 0, item3 = 0;
    std::size_t max = std::min<std::size_t>(cfg.bound, 2);
    std::vector<ObjId> algs = m.reps(Sort::Alg);

    for (std::size_t a = 0; a <= max; ++a)
      for (std::size_t b = 0; b <= max; ++b) {
        fin::FreeAlgebra ta = fin::free_algebra(spec, a), tb = fin::free_algebra(spec, b);
        std::vector<std::uint32_t> ma = bang_to_free(m, a), mb = bang_to_free(m, b);
        ObjId sa = m.set_object(a), sb = m.set_object(b);
        for (const fin::Rel& rel : fin::enumerate_set_relations(a, b)) {
          ++relations;
          // (i) the relational interpretation of !A at R, moved to TA x TB.
          sem::RelEnv rho{{"A", {sa, sb, m.intern_rel(sa, sb, rel)}}};
          RelId lifted = m.interp_rel(rho, bang);
          fin::Rel first(ta.alg.size, tb.alg.size);
          for (auto [x, y] : m.rel(lifted).list()) first.insert(ma[x], mb[y]);
          // (ii) the least admissible relation containing the units.
          fin::Rel gens(ta.alg.size, tb.alg.size);
          for (auto [x, y] : rel.list()) gens.insert(ta.unit[x], tb.unit[y]);
          fin::Rel second = fin::admissible_closure(gens, ta.alg, tb.alg);
          // (iii) T applied to the span A <- R -> B.
          auto pairs = rel.list();
          fin::Table p1, p2;
          for (auto [x, y] : pairs) {
            p1.push_back(x);
            p2.push_back(y);
          }
          fin::Table tp1 = spec.map(p1, pairs.size(), a), tp2 = spec.map(p2, pairs.size(), b);
          fin::Rel span(ta.alg.size, tb.alg.size);
          for (std::size_t w = 0; w < tp1.size(); ++w) span.insert(tp1[w], tp2[w]);
          fin::Rel third = fin::admissible_closure(span, ta.alg, tb.alg);
          if (first != second || second != third) {
            r.fail({{"A", a}, {"B", b}, {"R", pairs}, {"interp", first.list()},
                    {"closure", second.list()}, {"span", third.list()}});
            continue;
          }
          // Item 3: (!R -o Q)(f, g) iff (R -> Q)(f . eta, g . eta).
          for (std::size_t ci = 0; ci < algs.size(); ++ci)
            for (std::size_t di = 0; di < algs.size(); ++di) {
              const fin::Alg& c = m.materialize(algs[ci]);
              const fin::Alg& d = m.materialize(algs[di]);
              auto fs = fin::enumerate_homs(ta.alg, c);
              auto gs = fin::enumerate_homs(tb.alg, d);
              for (RelId q : m.rep_relations(Sort::Alg, ci, di)) {
                const fin::Rel& qr = m.rel(q);
                for (const auto& f : fs)
                  for (const auto& g : gs) {
                    ++item3;
                    bool lhs = true, rhs = true;
                    for (auto [u, v] : second.list())
                      if (!qr.contains(f[u], g[v])) lhs = false;
                    for (auto [x, y] : pairs)
                      if (!qr.contains(f[ta.unit[x]], g[tb.unit[y]])) rhs = false;
                    if (lhs != rhs)
                      r.fail({{"A", a}, {"B", b}, {"R", pairs}, {"f", f}, {"g", g},
                              {"Q", qr.list()}, {"detail", "item 3 equivalence fails"}});
                  }
              }
            }
        }
      }

    // Named instances: the diagonal, the empty relation and a graph.
    json named = json::object();
    {
      fin::FreeAlgebra t2 = fin::free_algebra(spec, std::min<std::size_t>(2, max));
      std::size_t n = std::min<std::size_t>(2, max);
      fin::Rel diag(t2.alg.size, t2.alg.size);
      for (std::size_t x = 0; x < n; ++x) diag.insert(t2.unit[x], t2.unit[x]);
      bool ok = fin::admissible_closure(diag, t2.alg, t2.alg) == fin::diagonal(t2.alg.size);
      named["diagonal-lifts-to-diagonal"] = ok;
      if (!ok) r.fail({{"instance", "diagonal"}});
      fin::Rel empty = fin::admissible_closure(fin::Rel(t2.alg.size, t2.alg.size), t2.alg, t2.alg);
      named["empty-lifting-size"] = empty.count();
      if (n >= 1) {
        fin::FreeAlgebra t1 = fin::free_algebra(spec, 1);
        fin::Table f{0, 0};  // the map 2 -> 1
        fin::Rel g(t2.alg.size, t1.alg.size);
        for (std::size_t x = 0; x < n; ++x) g.insert(t2.unit[x], t1.unit[f[x]]);
        fin::Rel lifted = fin::admissible_closure(g, t2.alg, t1.alg);
        bool graph_ok = n < 2 || lifted == fin::graph(spec.map(f, 2, 1), t1.alg.size);
        named["graph-lifts-to-graph-of-Tf"] = graph_ok;
        if (!graph_ok) r.fail({{"instance", "graph"}});
      }
    }
    r.counts = {{"relations", relations}, {"item3-checks", item3}, {"named", named}};
  });
}

}  // namespace pe::lab
