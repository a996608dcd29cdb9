#include <algorithm>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "pe/encodings.hpp"
#include "pe/interp.hpp"
#include "pe/io.hpp"
#include "pe/paramlab.hpp"

namespace pe::sem {
namespace {

// Independent oracle for closed types forall X. X^k -> X. A family picks a
// k-ary operation on each carrier; it is parametric when every relation
// between two carriers that contains their points (if any) is preserved.
struct Carrier0 {
  std::size_t size;
  int point;  // -1 for a bare set
};

using Op = std::vector<std::size_t>;  // indexed by the k-tuple in base `size`

std::vector<Op> all_ops(std::size_t n, std::size_t k) {
  std::size_t cells = 1;
  for (std::size_t i = 0; i < k; ++i) cells *= n;
  std::vector<Op> out;
  if (n == 0) {
    if (cells == 0) out.push_back({});
    return out;
  }
  std::size_t total = 1;
  for (std::size_t i = 0; i < cells; ++i) total *= n;
  for (std::size_t code = 0; code < total; ++code) {
    Op op(cells);
    std::size_t c = code;
    for (auto& v : op) {
      v = c % n;
      c /= n;
    }
    out.push_back(op);
  }
  return out;
}

// Does every allowed relation between a and b relate op f to op g?
bool preserves(const Carrier0& a, const Carrier0& b, const Op& f, const Op& g, std::size_t k) {
  std::size_t cells = a.size * b.size;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cells); ++mask) {
    auto in = [&](std::size_t x, std::size_t y) { return (mask >> (x * b.size + y)) & 1; };
    if (a.point >= 0 && !in(a.point, b.point)) continue;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t x = 0; x < a.size; ++x)
      for (std::size_t y = 0; y < b.size; ++y)
        if (in(x, y)) pairs.push_back({x, y});
    // Every k-tuple of related pairs.
    std::vector<std::size_t> pick(k, 0);
    if (k > 0 && pairs.empty()) continue;
    for (;;) {
      std::size_t ia = 0, ib = 0;
      for (std::size_t i = k; i-- > 0;) {
        ia = ia * a.size + pairs[pick[i]].first;
        ib = ib * b.size + pairs[pick[i]].second;
      }
      if (!in(f[ia], g[ib])) return false;
      std::size_t i = 0;
      while (i < k && ++pick[i] == pairs.size()) pick[i++] = 0;
      if (i == k) break;
    }
  }
  return true;
}

std::size_t oracle_count(const std::vector<Carrier0>& cs, std::size_t k) {
  std::vector<std::vector<Op>> ops;
  for (const auto& c : cs) {
    std::vector<Op> keep;
    for (const Op& op : all_ops(c.size, k)) {
      if (preserves(c, c, op, op, k)) keep.push_back(op);
    }
    ops.push_back(keep);
  }
  std::vector<std::size_t> choice(cs.size(), 0);
  std::size_t count = 0;
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == cs.size()) {
      ++count;
      return;
    }
    for (std::size_t c = 0; c < ops[i].size(); ++c) {
      choice[i] = c;
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j)
        ok = preserves(cs[j], cs[i], ops[j][choice[j]], ops[i][c], k) &&
             preserves(cs[i], cs[j], ops[i][c], ops[j][choice[j]], k);
      if (ok) go(i + 1);
    }
  };
  go(0);
  return count;
}

std::size_t model_count(const ModelConfig& cfg, const std::string& type) {
  Model m(cfg);
  return m.carrier_of(m.interp({}, read_type(type))).size();
}

ModelConfig exc(bool free) { return lab::exception_config(1, 2, free); }

TEST_SUITE("interp") {

TEST_CASE("parametric elements of computation-polymorphic types") {
  // Pointed sets up to size 2; the free algebra T(2) is a pointed 3-set.
  std::vector<Carrier0> reps = {{1, 0}, {2, 0}, {2, 1}};
  std::vector<Carrier0> with_free = {{1, 0}, {2, 0}, {2, 1}, {3, 2}};
  CHECK(oracle_count(reps, 2) == 4);
  CHECK(model_count(exc(false), "forall ^X. ^X -> ^X -> ^X") == 4);
  CHECK(oracle_count(with_free, 2) == 3);
  CHECK(model_count(exc(true), "forall ^X. ^X -> ^X -> ^X") == 3);
  CHECK(oracle_count(reps, 1) == 2);
  CHECK(model_count(exc(false), "forall ^X. ^X -> ^X") == 2);
  CHECK(oracle_count(reps, 0) == 1);
  CHECK(model_count(exc(false), "forall ^X. ^X") == 1);
}

TEST_CASE("parametric elements of value-polymorphic types") {
  std::vector<Carrier0> sets = {{0, -1}, {1, -1}, {2, -1}};
  ModelConfig cfg = exc(false);
  CHECK(oracle_count(sets, 2) == 2);
  CHECK(model_count(cfg, "forall X. X -> X -> X") == 2);
  CHECK(oracle_count(sets, 1) == 1);
  CHECK(model_count(cfg, "forall X. X -> X") == 1);
}

TEST_CASE("sizes of bang types track T") {
  ModelConfig cfg = exc(true);
  Model m(cfg);
  for (int n = 0; n <= 2; ++n) {
    CAPTURE(n);
    CHECK(m.carrier_of(m.interp({}, encode_bang(encode_numeral(n)))).size() == n + 1u);
  }
}

std::set<std::string> dumped(Model& m, const TypePtr& t) {
  std::set<std::string> out;
  for (ValueId v : m.carrier_of(m.interp({}, t)).elems) out.insert(io::dump_value(m, {}, t, v).dump());
  return out;
}

TEST_CASE("naive and propagating enumeration agree") {
  // Every pair here is small enough for the naive product filter.
  const std::vector<std::pair<std::string, bool>> cases = {
      {"forall X. X -> X", false},
      {"forall X. X -> X -> X", false},
      {"forall X. (X -> X) -> X -> X", false},
      {"forall ^X. ^X -> ^X -> ^X", false},
      {"forall ^X. (1 -> ^X) -> ^X", false},
      {"forall ^X. (2 -> ^X) -> ^X", false},
      {"forall ^X. (^X -> ^X) -> ^X -> ^X", false},
      {"forall X. forall ^Y. (X -> ^Y) -> X -> ^Y", false},
      {"!2", false},
      {"forall X. X -> X -> X", true},
      {"forall X. (X -> X) -> X -> X", true},
      {"forall ^X. (1 -> ^X) -> ^X", true},
  };
  for (const auto& [text, free] : cases) {
    CAPTURE(text);
    CAPTURE(free);
    TypePtr t = read_type(text);
    Model naive(exc(free)), prop(exc(free));
    naive.strategy = ForallStrategy::Naive;
    prop.strategy = ForallStrategy::Propagate;
    std::set<std::string> a = dumped(naive, t);
    std::set<std::string> b = dumped(prop, t);
    CHECK(a == b);
    CHECK(!a.empty());
    CHECK(naive.stats().forall_naive > 0);
    CHECK(prop.stats().forall_propagate > 0);
  }
}

TEST_CASE("evaluation examples") {
  SUBCASE("identity applied returns its argument") {
    Model m(exc(false));
    TermPtr t = read_term("(fun x : 2 => x) b", {{"b", encode_numeral(2)}});
    ObjId two = m.interp({}, encode_numeral(2));
    for (ValueId b : m.carrier_of(two).elems) {
      ValueId out = m.eval({}, {{"b", encode_numeral(2)}}, {{"b", b}}, t);
      CHECK(out == b);
    }
  }
  SUBCASE("bang of a unit value lands in a two-element carrier") {
    Model m(exc(true));
    TermPtr t = read_term("bang u", {{"u", encode_numeral(1)}});
    ObjId one = m.interp({}, encode_numeral(1));
    ValueId u = m.carrier_of(one).elems.at(0);
    ValueId v = m.eval({}, {{"u", encode_numeral(1)}}, {{"u", u}}, t);
    const Carrier& c = m.carrier_of(m.interp({}, encode_bang(encode_numeral(1))));
    CHECK(c.size() == 2);
    CHECK(c.contains(v));
  }
  SUBCASE("or is union in the free powerset algebra") {
    ModelConfig cfg;
    cfg.monad = MonadKind::Powerset;
    cfg.exceptions.clear();
    cfg.include_free_algebras = true;
    Model m(cfg, make_constant_table(register_effect_constants(MonadKind::Powerset, {})));
    auto [obj, unit] = m.free_algebra(2);
    const Carrier& c = m.carrier_of(obj);
    REQUIRE(c.size() == 3);
    std::vector<Binding> ctx = {{"p", cvar("B")}, {"q", cvar("B")}};
    TermPtr t = read_term("or @[^B] p q", ctx, std::nullopt, m.constants());
    // Index = mask - 1: {0} = 0, {1} = 1, {0,1} = 2.
    ValueId out = m.eval({{"^B", obj}}, ctx, {{"p", c.elems[0]}, {"q", c.elems[1]}}, t);
    CHECK(out == c.elems[2]);
    out = m.eval({{"^B", obj}}, ctx, {{"p", c.elems[1]}, {"q", c.elems[1]}}, t);
    CHECK(out == c.elems[1]);
  }
}

TEST_CASE("projections do not depend on the chosen isomorphism") {
  Model m(exc(true));
  m.check_projection_invariance = true;
  const std::vector<std::string> terms = {
      "(Fun ^X => fun x : ^X => x) @[!1]",
      "(Fun ^X => fun x : ^X => fun y : ^X => x) @[!2]",
      "Fun X => fun f : X -> !X => fun x : X => let y <= f x in f y",
      "(Fun X => fun x : X => bang x) @[2]",
  };
  for (const auto& text : terms) {
    CAPTURE(text);
    TermPtr t = read_term(text);
    CHECK_NOTHROW(m.eval_closed(t));
  }
}

TEST_CASE("identity extension on the battery") {
  Model m(exc(false));
  std::size_t checked = 0;
  for (const TypePtr& t : lab::identity_extension_battery()) {
    std::set<std::string> ftv = free_type_vars(t);
    Env env;
    for (const auto& v : ftv)
      env[v] = is_cvar_name(v) ? m.reps(Sort::Alg).back() : m.reps(Sort::Set).back();
    RelEnv rho = m.diagonal_env(env);
    RelId r = m.interp_rel(rho, t);
    ObjId o = m.interp(env, t);
    CHECK(m.rel(r) == fin::diagonal(m.carrier_of(o).size()));
    ++checked;
  }
  CHECK(checked >= 20);
}

TEST_CASE("denotations of closed terms are related to themselves") {
  lab::GenOptions opts;
  opts.small_types = true;
  opts.value_vars.clear();
  opts.comp_vars.clear();
  opts.max_context = 0;
  opts.allow_stoup = false;
  lab::TermGen gen(17, opts);
  Model m(exc(false));
  std::size_t checked = 0;
  for (int i = 0; i < 40 && checked < 15; ++i) {
    Judgment j = gen.judgment();
    if (!j.gamma.empty() || j.delta) continue;
    try {
      ValueId v = m.eval_closed(j.subject);
      CHECK(m.related({}, j.ascription, v, v));
      ++checked;
    } catch (const OutOfBound&) {
    }
  }
  CHECK(checked >= 10);
}

}  // TEST_SUITE

}  // namespace
}  // namespace pe::sem
