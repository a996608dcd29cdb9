#include <algorithm>
#include <set>

#include "common.hpp"
#include "pe/finmodel.hpp"

namespace pe::lab {

using sem::ObjId;
using sem::RelId;
using sem::Sort;
using sem::ValueId;

const char* to_string(Status s) {
  switch (s) {
    case Status::Verified:
      return "verified";
    case Status::Counterexample:
      return "counterexample";
    case Status::OutOfBound:
      return "out-of-bound";
  }
  return "?";
}

void Report::fail(json w) {
  if (status == Status::Verified) {
    status = Status::Counterexample;
    witness = std::move(w);
  }
}

namespace detail {

TermPtr elaborate(const std::string& text, const ConstantTable& consts,
                  const std::vector<Binding>& gamma, const std::optional<Binding>& delta) {
  Elaborator el(consts);
  TermPtr t = el.term(gamma, delta, surface::parse_term(text));
  Judgment j;
  j.gamma = gamma;
  j.delta = delta;
  j.subject = t;
  typecheck(j, consts);
  return t;
}

TypePtr bang_of_var(const std::string& a) { return encode_bang(vvar(a)); }

std::vector<std::uint32_t> bang_to_free(sem::Model& m, std::size_t n) {
  auto [tn, unit] = m.free_algebra(n);
  ObjId sn = m.set_object(n);
  sem::Env env{{"A", sn}};
  TypePtr bang = bang_of_var();
  ObjId b = m.interp(env, bang);
  const auto& tc = m.carrier_of(tn);
  std::vector<ValueId> eta_items;
  for (std::uint32_t u : unit) eta_items.push_back(tc.elems[u]);
  ValueId eta = m.fun(m.object(sn).carrier, eta_items);
  std::vector<std::uint32_t> out;
  std::vector<ValueId> elems = m.carrier_of(b).elems;
  for (ValueId k : elems) {
    ValueId at = m.instantiate(k, bang, env, tn);
    out.push_back(m.carrier_of(tn).index_of(m.apply(at, eta)));
  }
  return out;
}

std::vector<std::uint32_t> table_of(sem::Model& m, ValueId f, ObjId cod) {
  std::vector<std::uint32_t> out;
  for (ValueId r : m.value(f).items) out.push_back(m.carrier_of(cod).index_of(r));
  return out;
}

std::string show_type(const TypePtr& t) { return surface::print(t); }

sem::ModelConfig with_free_arities(sem::ModelConfig c, const std::vector<std::size_t>& ns,
                                   Report& r) {
  if (!c.include_free_algebras) r.notes.push_back("free algebras T(n) added to the representatives");
  c.include_free_algebras = true;
  if (c.free_arities.empty())
    for (std::size_t n = 0; n <= std::min<std::size_t>(c.bound, 2); ++n) c.free_arities.push_back(n);
  for (std::size_t n : ns)
    if (std::find(c.free_arities.begin(), c.free_arities.end(), n) == c.free_arities.end())
      c.free_arities.push_back(n);
  return c;
}


}  // namespace detail

using namespace detail;

// ---------------------------------------------------------------------------

Report verify_metatheory(const RandomOptions& ro) {
  sem::ModelConfig cfg = exception_config(1, 2, false);
  return run_report("metatheory", cfg, [&](Report& r) {
    std::size_t count = ro.count ? ro.count : 200;
    ConstantTable consts = constants_for(cfg);
    GenOptions go;
    go.max_depth = 4;
    TermGen gen(ro.seed, go, consts);
    std::vector<Judgment> corpus;
    std::vector<SubstitutionCase> cases;
    std::size_t stoup = 0, nodes = 0;
    while (corpus.size() < count) {
      Judgment j = gen.judgment();
      if (j.delta) ++stoup;
      nodes += term_size(j.subject);
      for (auto& c : gen.substitution_cases(j)) cases.push_back(std::move(c));
      corpus.push_back(std::move(j));
    }
    UnicityReport u = check_unicity(corpus, consts);
    SubstitutionReport s = check_substitution_lemma(cases, consts);
    r.counts = {{"terms", corpus.size()},
                {"stoup-terms", stoup},
                {"term-nodes", nodes},
                {"unicity-checked", u.checked},
                {"substitution-part1", s.part1},
                {"substitution-part2", s.part2}};
    if (u.failures) r.fail({{"lemma", "unicity"}, {"detail", u.messages.front()}});
    if (s.failures) r.fail({{"lemma", "substitution"}, {"detail", s.messages.front()}});
    if (s.part1 == 0 || s.part2 == 0)
      r.fail({{"lemma", "substitution"}, {"detail", "a part of the lemma had no instances"}});
  });
}

Report verify_monad_laws(std::size_t max_size) {
  sem::ModelConfig cfg;
  cfg.bound = max_size;
  return run_report("monad-laws", cfg, [&](Report& r) {
    std::vector<std::pair<std::string, fin::MonadSpec>> specs{
        {"identity", fin::MonadSpec::identity()},
        {"exception|E|=1", fin::MonadSpec::exception({"e"})},
        {"exception|E|=2", fin::MonadSpec::exception({"e1", "e2"})},
        {"powerset", fin::MonadSpec::powerset()}};
    for (const auto& [name, m] : specs) {
      fin::MonadLawReport lr = fin::check_monad_laws(m, max_size);
      r.counts[name] = {{"checks", lr.checks}, {"kernel", lr.kernel}};
      if (!lr.ok) r.fail({{"monad", name}, {"detail", lr.detail}});
    }
    r.notes.push_back("covers identity, exception with |E| = 1 and 2, and powerset");
  });
}

Report verify_axioms(const sem::ModelConfig& cfg) {
  return run_report("axioms", cfg, [&](Report& r) {
    fin::MonadSpec m = cfg.monad_spec();
    std::vector<fin::Alg> algs = fin::enumerate_algebras(m, fin::Bound{cfg.bound});
    std::vector<fin::FinSet> sets = fin::enumerate_sets(fin::Bound{cfg.bound});
    std::size_t r1 = 0, r2 = 0, r3 = 0, r4 = 0, closure = 0;

    // Set side: every relation is admissible, so (R1)-(R3) reduce to the
    // operations producing relations of the right shape.
    for (const auto& a : sets) {
      fin::Rel d = fin::diagonal(a.size);
      ++r1;
      if (d.left != a.size || d.right != a.size || d.count() != a.size)
        r.fail({{"axiom", "R1"}, {"side", "set"}, {"size", a.size}});
    }
    for (const auto& a : sets)
      for (const auto& b : sets)
        for (const auto& f : fin::enumerate_functions(a.size, b.size))
          for (const auto& rel : fin::enumerate_set_relations(b.size, b.size)) {
            fin::Rel p = fin::preimage(f, f, rel);
            ++r2;
            for (std::uint32_t x = 0; x < a.size; ++x)
              for (std::uint32_t y = 0; y < a.size; ++y)
                if (p.contains(x, y) != rel.contains(f[x], f[y]))
                  r.fail({{"axiom", "R2"}, {"side", "set"}});
          }

    // Algebra side.
    std::vector<std::vector<std::vector<fin::Rel>>> adm(algs.size());
    for (std::size_t i = 0; i < algs.size(); ++i) {
      adm[i].resize(algs.size());
      for (std::size_t j = 0; j < algs.size(); ++j)
        adm[i][j] = fin::enumerate_admissible_relations(algs[i], algs[j]);
    }
    for (std::size_t i = 0; i < algs.size(); ++i) {
      ++r1;
      if (!fin::is_admissible(fin::diagonal(algs[i].size), algs[i], algs[i]))
        r.fail({{"axiom", "R1"}, {"side", "algebra"}, {"algebra", i}});
    }
    for (std::size_t i = 0; i < algs.size(); ++i)
      for (std::size_t j = 0; j < algs.size(); ++j) {
        for (const auto& a : adm[i][j]) {
          ++r4;
          if (a.left != algs[i].size || a.right != algs[j].size)
            r.fail({{"axiom", "R4"}, {"algebras", {i, j}}});
          for (const auto& b : adm[i][j]) {
            ++r3;
            if (!fin::is_admissible(fin::intersection(a, b), algs[i], algs[j]))
              r.fail({{"axiom", "R3"}, {"algebras", {i, j}}});
          }
        }
        // Closure operator laws on all carrier relations.
        for (const auto& any : fin::enumerate_set_relations(algs[i].size, algs[j].size)) {
          ++closure;
          fin::Rel c = fin::admissible_closure(any, algs[i], algs[j]);
          if (!fin::rel_subset(any, c) || fin::admissible_closure(c, algs[i], algs[j]) != c ||
              !fin::is_admissible(c, algs[i], algs[j]))
            r.fail({{"axiom", "closure"}, {"algebras", {i, j}}});
        }
      }
    // (R2): preimages along pairs of homomorphisms f : A -> B, g : A' -> B'.
    for (std::size_t a = 0; a < algs.size(); ++a)
      for (std::size_t a2 = 0; a2 < algs.size(); ++a2)
        for (std::size_t b = 0; b < algs.size(); ++b)
          for (std::size_t b2 = 0; b2 < algs.size(); ++b2) {
            auto fs = fin::enumerate_homs(algs[a], algs[b]);
            auto gs = fin::enumerate_homs(algs[a2], algs[b2]);
            for (const auto& f : fs)
              for (const auto& g : gs)
                for (const auto& rel : adm[b][b2]) {
                  ++r2;
                  if (!fin::is_admissible(fin::preimage(f, g, rel), algs[a], algs[a2]))
                    r.fail({{"axiom", "R2"}, {"algebras", {a, a2, b, b2}}});
                }
          }
    r.counts = {{"algebras", algs.size()}, {"sets", sets.size()}, {"R1", r1},
                {"R2", r2},             {"R3", r3},             {"R4", r4},
                {"closure", closure}};
  });
}

std::vector<TypePtr> identity_extension_battery() {
  static const char* texts[] = {
      "X",
      "^Y",
      "X -> X",
      "X -> ^Y",
      "^Y -> ^Y",
      "^Y -o ^Y",
      "X -> X -> X",
      "(X -> X) -> X",
      "(X -> ^Y) -> ^Y",
      "(^Y -o ^Y) -> ^Y",
      "X -> (X -> ^Y) -> ^Y",
      "forall Z. Z -> Z",
      "forall Z. X -> Z -> X",
      "forall Z. (Z -> X) -> Z -> X",
      "forall ^Z. ^Z",
      "forall ^Z. ^Z -> ^Z",
      "forall ^Z. ^Z -> ^Z -> ^Z",
      "forall ^Z. (X -> ^Z) -> ^Z",
      "forall ^Z. (^Y -o ^Z) -> ^Z",
      "!X",
      "1",
      "2",
      "X * X",
      "X + 1",
  };
  std::vector<TypePtr> out;
  for (const char* t : texts) out.push_back(read_type(t));
  return out;
}

namespace {

// All assignments of representatives to the given variables.
std::vector<sem::Env> rep_assignments(sem::Model& m, const std::vector<std::string>& vars) {
  std::vector<sem::Env> out{{}};
  for (const auto& v : vars) {
    Sort s = is_cvar_name(v) ? Sort::Alg : Sort::Set;
    std::vector<sem::Env> next;
    for (const auto& e : out)
      for (ObjId r : m.reps(s)) {
        sem::Env e2 = e;
        e2[v] = r;
        next.push_back(std::move(e2));
      }
    out = std::move(next);
  }
  return out;
}

}  // namespace

Report verify_identity_extension(const sem::ModelConfig& cfg) {
  return run_report("identity-extension", cfg, [&](Report& r) {
    sem::Model m(cfg, constants_for(cfg));
    std::size_t types = 0, instances = 0, forall_c = 0;
    for (const TypePtr& t : identity_extension_battery()) {
      ++types;
      if (t->tag == TypeTag::ForallC) ++forall_c;
      auto ftv = free_type_vars(t);
      for (const sem::Env& env : rep_assignments(m, {ftv.begin(), ftv.end()})) {
        ++instances;
        ObjId o = m.interp(env, t);
        RelId rel = m.interp_rel(m.diagonal_env(env), t);
        bool ok = m.rel_left(rel) == o && m.rel_right(rel) == o &&
                  m.rel(rel) == fin::diagonal(m.carrier_of(o).size());
        if (!ok) {
          json w{{"type", show_type(t)}, {"relation-size", m.rel(rel).count()},
                 {"carrier-size", m.carrier_of(o).size()}};
          for (const auto& [x, obj] : env) w["env"][x] = m.describe(obj);
          r.fail(w);
        }
      }
    }
    r.counts = {{"types", types}, {"instances", instances}, {"forall-c-types", forall_c}};
  });
}

Report verify_abstraction(const sem::ModelConfig& cfg, const RandomOptions& ro) {
  return run_report("abstraction", cfg, [&](Report& r) {
    std::size_t count = ro.count ? ro.count : 100;
    ConstantTable consts = constants_for(cfg);
    sem::Model m(cfg, consts);
    GenOptions go;
    go.small_types = true;
    go.max_depth = 3;
    go.max_context = 2;
    TermGen gen(ro.seed, go, consts);
    std::mt19937_64& rng = gen.rng();
    auto pick = [&](std::size_t n) {
      return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    };

    std::size_t terms = 0, stoup_terms = 0, rel_envs = 0, pairs = 0, homs = 0, skipped = 0;
    while (terms < count) {
      Judgment j = gen.judgment();
      std::vector<Binding> ctx = j.gamma;
      if (j.delta) ctx.push_back(*j.delta);
      std::set<std::string> ftv = free_type_vars(j.subject);
      for (const auto& b : ctx) collect_free_type_vars(b.type, ftv);
      collect_free_type_vars(j.ascription, ftv);
      std::vector<std::string> vars(ftv.begin(), ftv.end());

      try {
        // Relational environments: all of them when few, else a seeded sample.
        std::vector<std::vector<sem::RelBinding>> choices;
        for (const auto& v : vars) {
          Sort s = is_cvar_name(v) ? Sort::Alg : Sort::Set;
          std::vector<sem::RelBinding> c;
          for (std::size_t i = 0; i < m.reps(s).size(); ++i)
            for (std::size_t k = 0; k < m.reps(s).size(); ++k)
              for (RelId rel : m.rep_relations(s, i, k))
                c.push_back({m.reps(s)[i], m.reps(s)[k], rel});
          choices.push_back(std::move(c));
        }
        double total = 1;
        for (const auto& c : choices) total *= static_cast<double>(c.size());
        std::vector<sem::RelEnv> rhos;
        if (total <= 128) {
          rhos.push_back({});
          for (std::size_t i = 0; i < vars.size(); ++i) {
            std::vector<sem::RelEnv> next;
            for (const auto& rho : rhos)
              for (const auto& b : choices[i]) {
                sem::RelEnv r2 = rho;
                r2[vars[i]] = b;
                next.push_back(std::move(r2));
              }
            rhos = std::move(next);
          }
        } else {
          for (int k = 0; k < 128; ++k) {
            sem::RelEnv rho;
            for (std::size_t i = 0; i < vars.size(); ++i)
              rho[vars[i]] = choices[i][pick(choices[i].size())];
            rhos.push_back(std::move(rho));
          }
        }

        for (const auto& rho : rhos) {
          ++rel_envs;
          sem::Env e1 = sem::Model::left_env(rho), e2 = sem::Model::right_env(rho);
          std::vector<std::vector<std::pair<ValueId, ValueId>>> related;
          bool vacuous = false;
          for (const auto& b : ctx) {
            RelId rel = m.interp_rel(rho, b.type);
            const auto& l = m.carrier_of(m.rel_left(rel)).elems;
            const auto& rr = m.carrier_of(m.rel_right(rel)).elems;
            std::vector<std::pair<ValueId, ValueId>> ps;
            for (auto [x, y] : m.rel(rel).list()) ps.emplace_back(l[x], rr[y]);
            if (ps.empty()) vacuous = true;
            related.push_back(std::move(ps));
          }
          if (vacuous) continue;
          // Every tuple of related arguments when there are few, else a sample.
          double tuples = 1;
          for (const auto& ps : related) tuples *= static_cast<double>(ps.size());
          bool exhaustive = tuples <= 64;
          std::size_t rounds = exhaustive ? static_cast<std::size_t>(tuples) : 16;
          for (std::size_t k = 0; k < rounds; ++k) {
            sem::TermEnv v1, v2;
            std::size_t code = k;
            for (std::size_t i = 0; i < ctx.size(); ++i) {
              std::size_t n = related[i].size();
              std::size_t at = exhaustive ? code % n : pick(n);
              code /= n;
              auto [a, b] = related[i][at];
              v1[ctx[i].name] = a;
              v2[ctx[i].name] = b;
            }
            ValueId d1 = m.eval(e1, ctx, v1, j.subject);
            ValueId d2 = m.eval(e2, ctx, v2, j.subject);
            ++pairs;
            if (!m.related(rho, j.ascription, d1, d2)) {
              json w{{"judgment", surface::print(j)}, {"left", m.show(d1)}, {"right", m.show(d2)}};
              for (const auto& [x, b] : rho)
                w["relations"][x] = {{"left", m.describe(b.left)},
                                     {"right", m.describe(b.right)},
                                     {"pairs", m.rel(b.rel).count()}};
              r.fail(w);
            }
          }
        }

        // Homomorphism property in the stoup variable.
        if (j.delta) {
          ++stoup_terms;
          std::set<std::string> fv = ftv;
          for (const sem::Env& env : rep_assignments(m, vars)) {
            ObjId dobj = m.interp(env, j.delta->type);
            ObjId bobj = m.interp(env, j.ascription);
            std::vector<ValueId> dom = m.carrier_of(dobj).elems;
            sem::TermEnv vals;
            bool empty = false;
            for (const auto& b : j.gamma) {
              const auto& c = m.carrier_of(m.interp(env, b.type)).elems;
              if (c.empty()) {
                empty = true;
                break;
              }
              vals[b.name] = c[pick(c.size())];
            }
            if (empty) continue;
            fin::Table table;
            for (ValueId d : dom) {
              vals[j.delta->name] = d;
              table.push_back(m.carrier_of(bobj).index_of(m.eval(env, ctx, vals, j.subject)));
            }
            ++homs;
            if (!fin::is_homomorphism(table, m.materialize(dobj), m.materialize(bobj)))
              r.fail({{"judgment", surface::print(j)}, {"property", "homomorphism"}});
          }
        }
        ++terms;
      } catch (const sem::OutOfBound&) {
        ++skipped;
      }
    }
    r.counts = {{"terms", terms},       {"stoup-terms", stoup_terms},
                {"relational-envs", rel_envs}, {"related-pairs", pairs},
                {"homomorphism-checks", homs}, {"skipped-out-of-bound", skipped}};
  });
}

}  // namespace pe::lab
