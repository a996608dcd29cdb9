#include <cstdint>
#include <vector>

#include "doctest.h"
#include "pe/finmodel.hpp"

namespace pe::fin {
namespace {

// Commutative idempotent semigroups on 0..n-1, by brute force over all tables.
std::size_t count_semilattices(std::size_t n) {
  std::size_t cells = n * n, total = 1, found = 0;
  for (std::size_t i = 0; i < cells; ++i) total *= n;
  for (std::size_t code = 0; code < total; ++code) {
    std::vector<std::size_t> op(cells);
    std::size_t c = code;
    for (auto& v : op) {
      v = c % n;
      c /= n;
    }
    auto at = [&](std::size_t x, std::size_t y) { return op[x * n + y]; };
    bool ok = true;
    for (std::size_t x = 0; x < n && ok; ++x)
      for (std::size_t y = 0; y < n && ok; ++y) {
        if (at(x, x) != x || at(x, y) != at(y, x)) ok = false;
        for (std::size_t z = 0; z < n && ok; ++z)
          if (at(at(x, y), z) != at(x, at(y, z))) ok = false;
      }
    found += ok;
  }
  return found;
}

// Admissibility straight from the definition: a subset of the product that
// contains every pair of raise points and is closed under pairwise joins.
bool admissible_by_definition(const Rel& r, const Alg& a, const Alg& b) {
  for (std::size_t e = 0; e < a.raise.size(); ++e)
    if (!r.contains(a.raise[e], b.raise[e])) return false;
  if (!a.join.empty()) {
    auto pairs = r.list();
    for (auto [x1, y1] : pairs)
      for (auto [x2, y2] : pairs)
        if (!r.contains(a.op_join(x1, x2), b.op_join(y1, y2))) return false;
  }
  return true;
}

TEST_SUITE("finmodel") {

TEST_CASE("sizes of T n") {
  MonadSpec id = MonadSpec::identity();
  MonadSpec ex1 = MonadSpec::exception({"e"});
  MonadSpec ex2 = MonadSpec::exception({"e1", "e2"});
  MonadSpec ps = MonadSpec::powerset();
  for (std::size_t n = 0; n <= 4; ++n) {
    CHECK(id.t_size(n) == n);
    CHECK(ex1.t_size(n) == n + 1);
    CHECK(ex2.t_size(n) == n + 2);
    CHECK(ps.t_size(n) == (std::size_t{1} << n) - 1);
  }
}

TEST_CASE("monad laws hold exhaustively") {
  for (const MonadSpec& m : {MonadSpec::identity(), MonadSpec::exception({"e"}),
                             MonadSpec::exception({"e1", "e2"}), MonadSpec::powerset()}) {
    CAPTURE(m.key());
    MonadLawReport r = check_monad_laws(m, 3);
    CHECK(r.ok);
    CHECK(r.checks > 0);
  }
}

TEST_CASE("powerset extension is union of images") {
  MonadSpec ps = MonadSpec::powerset();
  // f : 2 -> P+(2), f(0) = {1}, f(1) = {0, 1}; indices are mask - 1.
  Table f = {1, 2};
  Table ext = ps.extend(f, 2, 2);
  CHECK(ext[0] == 1);  // {0} -> {1}
  CHECK(ext[1] == 2);  // {1} -> {0,1}
  CHECK(ext[2] == 2);  // {0,1} -> {0,1}
}

TEST_CASE("algebra enumeration matches brute-force counts") {
  MonadSpec ex1 = MonadSpec::exception({"e"});
  MonadSpec ex2 = MonadSpec::exception({"e1", "e2"});
  MonadSpec ps = MonadSpec::powerset();
  for (std::size_t n = 1; n <= 3; ++n) {
    CAPTURE(n);
    // A pointed set per exception: n^|E| tables.
    CHECK(enumerate_algebras(ex1, n).size() == n);
    CHECK(enumerate_algebras(ex2, n).size() == n * n);
    CHECK(enumerate_algebras(ps, n).size() == count_semilattices(n));
    for (const Alg& a : enumerate_algebras(ps, n)) {
      CHECK(is_algebra(ps, a));
      CHECK(check_em_laws(ps, a, em_structure(ps, a)));
    }
  }
  CHECK(count_semilattices(3) == 9);
  // The exception algebra needs a point, the powerset algebra can be empty.
  CHECK(enumerate_algebras(ex1, 0).empty());
}

TEST_CASE("free algebras satisfy the laws") {
  for (const MonadSpec& m : {MonadSpec::exception({"e"}), MonadSpec::powerset()}) {
    // T(T 3) is too large to materialise for the powerset monad.
    for (std::size_t n = 0; n <= 2; ++n) {
      FreeAlgebra f = free_algebra(m, n);
      CHECK(f.alg.size == m.t_size(n));
      CHECK(is_algebra(m, f.alg));
      CHECK(check_em_laws(m, f.alg, em_structure(m, f.alg)));
      CHECK(f.unit == m.unit(n));
    }
  }
}

TEST_CASE("admissible relations agree with the definition") {
  for (const MonadSpec& m : {MonadSpec::exception({"e"}), MonadSpec::powerset()}) {
    for (std::size_t p = 1; p <= 2; ++p)
      for (std::size_t q = 1; q <= 2; ++q)
        for (const Alg& a : enumerate_algebras(m, p))
          for (const Alg& b : enumerate_algebras(m, q)) {
            std::size_t expected = 0;
            for (const Rel& r : enumerate_set_relations(p, q)) {
              bool def = admissible_by_definition(r, a, b);
              CHECK(is_admissible(r, a, b) == def);
              expected += def;
              // The closure is the least admissible superset.
              Rel cl = admissible_closure(r, a, b);
              CHECK(rel_subset(r, cl));
              CHECK(admissible_by_definition(cl, a, b));
              for (const Rel& s : enumerate_set_relations(p, q))
                if (rel_subset(r, s) && admissible_by_definition(s, a, b))
                  CHECK(rel_subset(cl, s));
            }
            CHECK(enumerate_admissible_relations(a, b).size() == expected);
          }
  }
}

TEST_CASE("relation combinators") {
  Table f = {1, 0, 1};
  Rel g = graph(f, 2);
  CHECK(g.count() == 3);
  CHECK(g.contains(0, 1));
  CHECK(g.contains(1, 0));
  CHECK(opposite(g).contains(1, 0));
  CHECK(opposite(g).contains(0, 1));
  CHECK(preimage(Table{0, 1}, Table{0, 1}, diagonal(2)) == diagonal(2));
  CHECK(intersection(full_relation(2, 2), diagonal(2)) == diagonal(2));
  CHECK(enumerate_set_relations(2, 2).size() == 16);
}

TEST_CASE("homomorphisms") {
  MonadSpec ex = MonadSpec::exception({"e"});
  Alg one = enumerate_algebras(ex, 1)[0];
  for (const Alg& b : enumerate_algebras(ex, 2)) {
    // Out of the terminal point only the raise point is reachable.
    auto homs = enumerate_homs(one, b);
    REQUIRE(homs.size() == 1);
    CHECK(homs[0][0] == b.raise[0]);
  }
  CHECK(enumerate_functions(2, 3).size() == 9);
}

}  // TEST_SUITE

}  // namespace
}  // namespace pe::fin
