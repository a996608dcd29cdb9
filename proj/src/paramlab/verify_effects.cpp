#include <algorithm>
#include <set>

#include "common.hpp"
#include "pe/finmodel.hpp"

namespace pe::lab {

using namespace detail;
using sem::ObjId;
using sem::Sort;
using sem::ValueId;

namespace {

// A family of n-ary operations, one table per algebra representative, each
// indexed by the tuple encoded in base |C| (first component most significant).
using Family = std::vector<fin::Table>;

fin::Table decode(std::size_t code, std::size_t n, std::size_t base) {
  fin::Table t(n);
  for (std::size_t i = n; i-- > 0;) {
    t[i] = static_cast<std::uint32_t>(code % base);
    code /= base;
  }
  return t;
}

std::size_t encode(const fin::Table& t, std::size_t base) {
  std::size_t code = 0;
  for (std::uint32_t x : t) code = code * base + x;
  return code;
}

std::size_t power(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

// All families of n-ary operations commuting with every homomorphism between
// the given algebras, by backtracking over cells with forced propagation.
class NaturalFamilies {
 public:
  NaturalFamilies(const std::vector<fin::Alg>& algs, std::size_t n) : algs_(algs), n_(n) {
    for (std::size_t c = 0; c < algs.size(); ++c) {
      offset_.push_back(cells_);
      cells_ += power(algs[c].size, n);
    }
    owner_.resize(cells_);
    for (std::size_t c = 0; c < algs.size(); ++c)
      for (std::size_t t = 0; t < power(algs[c].size, n); ++t) owner_[offset_[c] + t] = c;
    edges_.resize(cells_);
    for (std::size_t c = 0; c < algs.size(); ++c)
      for (std::size_t d = 0; d < algs.size(); ++d)
        for (const auto& h : fin::enumerate_homs(algs[c], algs[d])) {
          homs_.push_back(h);
          std::size_t hi = homs_.size() - 1;
          for (std::size_t t = 0; t < power(algs[c].size, n); ++t) {
            fin::Table tup = decode(t, n, algs[c].size);
            for (auto& x : tup) x = h[x];
            edges_[offset_[c] + t].push_back({offset_[d] + encode(tup, algs[d].size), hi});
          }
        }
    order_.resize(cells_);
    for (std::size_t i = 0; i < cells_; ++i) order_[i] = i;
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      return edges_[a].size() > edges_[b].size();
    });
  }

  std::vector<Family> solve() {
    value_.assign(cells_, kUnset);
    out_.clear();
    search(0);
    return out_;
  }

 private:
  static constexpr std::uint32_t kUnset = ~0u;
  struct Edge {
    std::size_t target;
    std::size_t hom;
  };

  bool assign(std::size_t cell, std::uint32_t v, std::vector<std::size_t>& trail) {
    std::vector<std::pair<std::size_t, std::uint32_t>> queue{{cell, v}};
    while (!queue.empty()) {
      auto [c, x] = queue.back();
      queue.pop_back();
      if (value_[c] != kUnset) {
        if (value_[c] != x) return false;
        continue;
      }
      value_[c] = x;
      trail.push_back(c);
      for (const Edge& e : edges_[c]) queue.push_back({e.target, homs_[e.hom][x]});
    }
    return true;
  }

  void search(std::size_t pos) {
    while (pos < cells_ && value_[order_[pos]] != kUnset) ++pos;
    if (pos == cells_) {
      Family f;
      for (std::size_t c = 0; c < algs_.size(); ++c)
        f.emplace_back(value_.begin() + offset_[c],
                       value_.begin() + offset_[c] + power(algs_[c].size, n_));
      out_.push_back(std::move(f));
      return;
    }
    std::size_t cell = order_[pos];
    for (std::uint32_t v = 0; v < algs_[owner_[cell]].size; ++v) {
      std::vector<std::size_t> trail;
      if (assign(cell, v, trail)) search(pos + 1);
      for (std::size_t c : trail) value_[c] = kUnset;
    }
  }

  const std::vector<fin::Alg>& algs_;
  std::size_t n_;
  std::size_t cells_ = 0;
  std::vector<std::size_t> offset_, owner_, order_;
  std::vector<fin::Table> homs_;
  std::vector<std::vector<Edge>> edges_;
  std::vector<std::uint32_t> value_;
  std::vector<Family> out_;
};

// The family induced by an element u of T(n): a_C(t) = xi_C(T(t)(u)).
Family family_of(const fin::MonadSpec& spec, const std::vector<fin::Alg>& algs,
                 const std::vector<fin::Table>& ems, std::size_t n, std::uint32_t u) {
  Family f;
  for (std::size_t c = 0; c < algs.size(); ++c) {
    fin::Table table;
    for (std::size_t t = 0; t < power(algs[c].size, n); ++t) {
      fin::Table tup = decode(t, n, algs[c].size);
      table.push_back(ems[c][spec.map(tup, n, algs[c].size)[u]]);
    }
    f.push_back(std::move(table));
  }
  return f;
}

TypePtr operation_type(std::size_t n) {
  TypePtr body = cvar("^X");
  for (std::size_t i = 0; i < n; ++i) body = arrow(cvar("^X"), body);
  return forall_c("^X", body);
}

// The family of a parametric element of the operation type.
Family family_of_value(sem::Model& m, ValueId p, std::size_t n) {
  Family f;
  const auto& reps = m.reps(Sort::Alg);
  for (std::size_t c = 0; c < reps.size(); ++c) {
    const auto& car = m.carrier_of(reps[c]);
    ValueId comp = m.component(p, c);
    fin::Table table;
    for (std::size_t t = 0; t < power(car.size(), n); ++t) {
      fin::Table tup = decode(t, n, car.size());
      ValueId v = comp;
      for (std::uint32_t x : tup) v = m.apply(v, car.elems[x]);
      table.push_back(car.index_of(v));
    }
    f.push_back(std::move(table));
  }
  return f;
}

}  // namespace

Report verify_algop(const sem::ModelConfig& cfg, std::vector<std::size_t> arities) {
  return run_report("algop", cfg, [&](Report& r) {
    if (arities.empty()) {
      if (cfg.monad == MonadKind::Powerset)
        arities = {1, 2};
      else
        arities = {0, 1, 2};
    }
    sem::ModelConfig c = with_free_arities(cfg, arities, r);
    r.config = c;
    ConstantTable consts = constants_for(c);
    sem::Model m(c, consts);
    fin::MonadSpec spec = c.monad_spec();
    std::vector<fin::Alg> algs;
    std::vector<fin::Table> ems;
    for (ObjId o : m.reps(Sort::Alg)) {
      algs.push_back(m.materialize(o));
      ems.push_back(fin::em_structure(spec, algs.back()));
    }

    json per_arity = json::array();
    for (std::size_t n : arities) {
      auto [tn, unit] = m.free_algebra(n);
      auto free_rep = m.rep_index(Sort::Alg, tn);
      if (!free_rep) throw sem::OutOfBound("T(" + std::to_string(n) + ") is not a representative");
      std::size_t gens_code = encode(unit, algs[*free_rep].size);

      std::vector<Family> ops = NaturalFamilies(algs, n).solve();
      std::size_t gen = spec.t_size(n);
      std::vector<ValueId> params = m.carrier_of(m.interp({}, operation_type(n))).elems;
      json row{{"n", n}, {"operations", ops.size()}, {"generic-effects", gen},
               {"parametric-elements", params.size()}};
      per_arity.push_back(row);
      if (ops.size() != gen || params.size() != gen) {
        r.fail(row);
        continue;
      }
      std::set<Family> op_set(ops.begin(), ops.end());
      // generic effect -> operation -> generic effect
      for (std::uint32_t u = 0; u < gen; ++u) {
        Family f = family_of(spec, algs, ems, n, u);
        if (!op_set.count(f)) r.fail({{"n", n}, {"u", u}, {"detail", "induced family is not natural"}});
        if (f[*free_rep][gens_code] != u)
          r.fail({{"n", n}, {"u", u}, {"detail", "generic effect roundtrip fails"}});
      }
      // operation -> generic effect -> operation
      for (const Family& f : ops)
        if (family_of(spec, algs, ems, n, f[*free_rep][gens_code]) != f)
          r.fail({{"n", n}, {"detail", "operation roundtrip fails"}});
      // parametric element <-> operation
      std::set<Family> from_params;
      for (ValueId p : params) {
        Family f = family_of_value(m, p, n);
        if (!op_set.count(f))
          r.fail({{"n", n}, {"element", m.show(p)}, {"detail", "not a natural family"}});
        from_params.insert(f);
      }
      if (from_params.size() != params.size() || from_params != op_set)
        r.fail({{"n", n}, {"detail", "parametric elements and operations differ"}});

      if (spec.kind() == MonadKind::Powerset && n == 2) {
        Family ors = family_of_value(m, m.constant_value("or"), 2);
        bool natural = op_set.count(ors) != 0;
        bool generic = ors == family_of(spec, algs, ems, 2, 2);  // {a, b} has mask 3
        r.counts["or-natural"] = natural;
        r.counts["or-is-union-of-generators"] = generic;
        if (!natural || !generic) r.fail({{"detail", "or is not the join operation"}});
      }
    }
    r.counts["arities"] = per_arity;
    r.counts["algebras"] = algs.size();
  });
}

Report verify_handler(const sem::ModelConfig& cfg) {
  return run_report("handler", cfg, [&](Report& r) {
    if (cfg.monad != MonadKind::Exception || cfg.exceptions.empty())
      throw std::invalid_argument("handler needs the exception monad");
    ConstantTable consts = constants_for(cfg);
    sem::Model m(cfg, consts);
    fin::MonadSpec spec = cfg.monad_spec();
    const std::string e = cfg.exceptions.front();
    const ConstantSig& sig = consts.at("handle^" + e);
    const TypePtr& scheme = sig.scheme;
    const TypePtr& lin = scheme->cod;

    ValueId handle = m.constant_value(sig.name);
    ObjId poly = m.interp({}, scheme);
    bool member = m.carrier_of(poly).contains(handle);
    r.counts["parametric-elements"] = m.carrier_of(poly).size();
    r.counts["member"] = member;
    if (!member) r.fail({{"detail", "the handler is not an element of its type"}});

    ValueId left = m.eval_closed(
        elaborate("Fun Z => fun f : 1 -> Z => fun g : 1 -> Z => f (Fun X => fun x : X => x)", consts));
    ValueId right = m.eval_closed(
        elaborate("Fun Z => fun f : 1 -> Z => fun g : 1 -> Z => g (Fun X => fun x : X => x)", consts));

    const std::size_t raised = 0;  // index of e among the exceptions
    std::map<std::string, std::size_t> cases;
    json table = json::array();
    const auto& sets = m.reps(Sort::Set);
    for (std::size_t k = 0; k < sets.size(); ++k) {
      sem::Env env{{scheme->name, sets[k]}};
      ObjId d = m.interp(env, lin->dom), b = m.interp(env, lin->cod);
      ValueId comp = m.component(handle, k);
      fin::Table tbl = table_of(m, comp, b);
      if (!fin::is_homomorphism(tbl, m.materialize(d), m.materialize(b)))
        r.fail({{"X", k}, {"detail", "component is not a homomorphism"}});
      std::vector<std::uint32_t> to_free = bang_to_free(m, k);
      const auto& bc = m.carrier_of(b);
      std::size_t raise_e = k + raised;
      std::set<std::pair<std::uint32_t, std::uint32_t>> pairs;
      const auto& dom = m.carrier_of(d).elems;
      for (std::size_t i = 0; i < dom.size(); ++i) {
        std::uint32_t p = to_free[bc.index_of(m.apply(dom[i], left))];
        std::uint32_t q = to_free[bc.index_of(m.apply(dom[i], right))];
        std::uint32_t got = to_free[tbl[i]];
        pairs.insert({p, q});
        std::string kind = p < k ? "left returns a value" : p == raise_e ? "left raises " + e
                                                                         : "left raises another";
        std::uint32_t want = p == raise_e ? q : p;
        ++cases[kind];
        if (got != want)
          r.fail({{"X", k}, {"left", spec.element_label(k, p)}, {"right", spec.element_label(k, q)},
                  {"result", spec.element_label(k, got)}});
        if (k == std::min<std::size_t>(1, sets.size() - 1))
          table.push_back({{"left", spec.element_label(k, p)},
                           {"right", spec.element_label(k, q)},
                           {"result", spec.element_label(k, got)},
                           {"case", kind}});
      }
      if (pairs.size() != dom.size() || dom.size() != spec.t_size(k) * spec.t_size(k))
        r.fail({{"X", k}, {"detail", "2 -> !X is not !X x !X"}});
    }

    // Relation preservation of the components: against every R between
    // representative sets, which includes the graphs of all functions.
    std::size_t relations = 0, natural = 0;
    for (std::size_t k = 0; k < sets.size(); ++k)
      for (std::size_t l = 0; l < sets.size(); ++l) {
        ValueId hk = m.component(handle, k), hl = m.component(handle, l);
        for (const fin::Rel& rel : fin::enumerate_set_relations(k, l)) {
          ++relations;
          sem::RelEnv rho{{scheme->name, {sets[k], sets[l], m.intern_rel(sets[k], sets[l], rel)}}};
          if (!m.related(rho, lin, hk, hl))
            r.fail({{"X", k}, {"Y", l}, {"R", rel.list()}, {"detail", "handler does not preserve R"}});
        }
        // Naturality on the free algebras: T f commutes with the case split.
        for (const auto& f : fin::enumerate_functions(k, l)) {
          ++natural;
          fin::Table tf = spec.map(f, k, l);
          auto h = [&](std::size_t n, std::uint32_t a, std::uint32_t b2) {
            return a == n + raised ? b2 : a;
          };
          for (std::uint32_t p = 0; p < spec.t_size(k); ++p)
            for (std::uint32_t q = 0; q < spec.t_size(k); ++q)
              if (h(l, tf[p], tf[q]) != tf[h(k, p, q)])
                r.fail({{"f", f}, {"detail", "free handler is not natural"}});
        }
      }
    r.counts["relations"] = relations;
    r.counts["naturality-checks"] = natural;
    json case_rows = json::array();
    case_rows.push_back({{"case", "left returns a value"}, {"result", "the value"},
                         {"instances", cases["left returns a value"]}});
    case_rows.push_back({{"case", "left raises " + e}, {"result", "right"},
                         {"instances", cases["left raises " + e]}});
    case_rows.push_back({{"case", "left raises another"}, {"result", "the same exception"},
                         {"instances", cases["left raises another"]}});
    r.counts["case-split"] = case_rows;
    r.counts["table"] = table;
  });
}

Report verify_encodings(const sem::ModelConfig& cfg) {
  return run_report("encodings", cfg, [&](Report& r) {
    ConstantTable consts = constants_for(cfg);
    sem::Model m(cfg, consts);
    const auto& algs = m.reps(Sort::Alg);

    // 0° is initial.
    TypePtr zero = encode_comp_type(CompCtor::ZeroC, {});
    if (!alpha_eq(zero, read_type("forall ^X. ^X")) || !alpha_eq(zero, read_type("0o")))
      r.fail({{"detail", "0o is not forall ^X. ^X"}});
    ObjId z = m.interp({}, zero);
    r.counts["zero-size"] = m.carrier_of(z).size();
    for (ObjId c : algs) {
      std::size_t homs = fin::enumerate_homs(m.materialize(z), m.materialize(c)).size();
      if (homs != 1) r.fail({{"target", m.describe(c)}, {"homomorphisms-from-zero", homs}});
    }

    // The coproduct of algebras.
    TermPtr inl = elaborate("lfun a : ^A => oinl [^A, ^B] a", consts);
    TermPtr inr = elaborate("lfun b : ^B => oinr [^A, ^B] b", consts);
    TypePtr oplus = read_type("^A (+) ^B");
    std::size_t mediators = 0;
    for (ObjId ca : algs)
      for (ObjId cb : algs) {
        sem::Env env{{"^A", ca}, {"^B", cb}};
        ObjId o = m.interp(env, oplus);
        const fin::Alg& oa = m.materialize(o);
        fin::Table il = table_of(m, m.eval(env, {}, {}, inl), o);
        fin::Table ir = table_of(m, m.eval(env, {}, {}, inr), o);
        if (!fin::is_homomorphism(il, m.materialize(ca), oa) ||
            !fin::is_homomorphism(ir, m.materialize(cb), oa))
          r.fail({{"A", m.describe(ca)}, {"B", m.describe(cb)}, {"detail", "injection is not linear"}});
        for (ObjId ce : algs) {
          const fin::Alg& ea = m.materialize(ce);
          auto hs = fin::enumerate_homs(oa, ea);
          for (const auto& f : fin::enumerate_homs(m.materialize(ca), ea))
            for (const auto& g : fin::enumerate_homs(m.materialize(cb), ea)) {
              ++mediators;
              std::size_t count = 0;
              for (const auto& h : hs) {
                bool ok = true;
                for (std::size_t i = 0; i < f.size() && ok; ++i) ok = h[il[i]] == f[i];
                for (std::size_t i = 0; i < g.size() && ok; ++i) ok = h[ir[i]] == g[i];
                if (ok) ++count;
              }
              if (count != 1)
                r.fail({{"A", m.describe(ca)}, {"B", m.describe(cb)}, {"C", m.describe(ce)},
                        {"f", f}, {"g", g}, {"mediators", count}});
            }
        }
      }
    r.counts["mediator-checks"] = mediators;

    // A° ≅ forall X°. (A° -o X°) -> X°.
    TermPtr fwd = elaborate("lfun x : ^A => Fun ^X => fun k : ^A -o ^X => k x", consts);
    TermPtr bwd = elaborate(
        "lfun p : (forall ^X. (^A -o ^X) -> ^X) => p @[^A] (lfun y : ^A => y)", consts);
    TypePtr yoneda = read_type("forall ^X. (^A -o ^X) -> ^X");
    std::size_t yoneda_checks = 0;
    for (ObjId ca : algs) {
      sem::Env env{{"^A", ca}};
      ValueId f = m.eval(env, {}, {}, fwd), g = m.eval(env, {}, {}, bwd);
      for (ValueId a : m.carrier_of(ca).elems) {
        ++yoneda_checks;
        if (m.apply(g, m.apply(f, a)) != a) r.fail({{"A", m.describe(ca)}, {"detail", "bwd . fwd"}});
      }
      ObjId y = m.interp(env, yoneda);
      for (ValueId p : m.carrier_of(y).elems) {
        ++yoneda_checks;
        if (m.apply(f, m.apply(g, p)) != p) r.fail({{"A", m.describe(ca)}, {"detail", "fwd . bwd"}});
      }
    }
    r.counts["yoneda-checks"] = yoneda_checks;

    // Girard's decomposition A -> B = !A -o B.
    auto [gf, gb] = girard_iso_terms(vvar("A"), cvar("^B"));
    TypePtr plain = arrow(vvar("A"), cvar("^B"));
    TypePtr linear = lolli(bang_of_var(), cvar("^B"));
    std::size_t girard = 0;
    for (ObjId sa : m.reps(Sort::Set))
      for (ObjId cb : algs) {
        sem::Env env{{"A", sa}, {"^B", cb}};
        ValueId f = m.eval(env, {}, {}, gf), g = m.eval(env, {}, {}, gb);
        for (ValueId k : m.carrier_of(m.interp(env, plain)).elems) {
          ++girard;
          if (m.apply(g, m.apply(f, k)) != k)
            r.fail({{"A", m.describe(sa)}, {"B", m.describe(cb)}, {"detail", "backward . forward"}});
        }
        for (ValueId k : m.carrier_of(m.interp(env, linear)).elems) {
          ++girard;
          if (m.apply(f, m.apply(g, k)) != k)
            r.fail({{"A", m.describe(sa)}, {"B", m.describe(cb)}, {"detail", "forward . backward"}});
        }
      }
    r.counts["girard-checks"] = girard;
  });
}

namespace {

struct CbpvCase {
  CbpvPtr type;
  std::string expected;  // the translation, written in surface syntax
};

std::vector<CbpvCase> cbpv_cases() {
  CbpvPtr x = cbpv_var("X"), y = cbpv_var("Y"), c = cbpv_var("^C");
  CbpvPtr one = cbpv_unit();
  return {
      {cbpv_f(one), "!1"},
      {cbpv_u(cbpv_f(one)), "!1"},
      {cbpv_sum(one, one), "1 + 1"},
      {cbpv_prod(x, y), "X * Y"},
      {cbpv_fun(x, cbpv_f(x)), "X -> !X"},
      {cbpv_u(cbpv_fun(x, cbpv_f(cbpv_sum(x, one)))), "X -> !(X + 1)"},
      {cbpv_cprod(cbpv_f(x), cbpv_fun(y, cbpv_f(x))), "!X *o (Y -> !X)"},
      {cbpv_f(cbpv_u(c)), "!^C"},
      {cbpv_fun(x, cbpv_fun(y, cbpv_f(cbpv_prod(x, y)))), "X -> Y -> !(X * Y)"},
      {cbpv_fun(cbpv_u(cbpv_f(one)), cbpv_cprod(c, cbpv_f(one))), "!1 -> ^C *o !1"},
  };
}

}  // namespace

std::vector<CbpvPtr> cbpv_corpus() {
  std::vector<CbpvPtr> out;
  for (const auto& c : cbpv_cases()) out.push_back(c.type);
  return out;
}

Report verify_cbpv() {
  sem::ModelConfig cfg;
  return run_report("cbpv", cfg, [&](Report& r) {
    json rows = json::array();
    for (const auto& c : cbpv_cases()) {
      json row{{"cbpv", cbpv_print(c.type)}, {"expected", c.expected}};
      try {
        TypePtr got = cbpv_translate_type(c.type);
        TypePtr want = read_type(c.expected);
        row["translation"] = show_type(got);
        bool same = alpha_eq(got, want);
        // Computation types are value types too; only the converse is constrained.
        bool sort_ok = !cbpv_is_computation(c.type) || is_computation(got);
        Judgment j;
        j.subject = lam("x", got, var("x"));
        j.ascription = arrow(got, got);
        typecheck(j);
        row["ok"] = same && sort_ok;
        if (!same) r.fail({{"cbpv", row["cbpv"]}, {"detail", "unexpected translation"}});
        if (!sort_ok) r.fail({{"cbpv", row["cbpv"]}, {"detail", "sort not preserved"}});
      } catch (const std::exception& ex) {
        row["ok"] = false;
        r.fail({{"cbpv", row["cbpv"]}, {"detail", ex.what()}});
      }
      rows.push_back(row);
    }
    r.counts["types"] = rows.size();
    r.counts["corpus"] = rows;
  });
}

}  // namespace pe::lab
