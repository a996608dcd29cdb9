#include "doctest.h"
#include "pe/encodings.hpp"
#include "pe/kernel.hpp"
#include "pe/surface.hpp"

namespace pe {
namespace {

TEST_SUITE("kernel") {

TEST_CASE("classification of the two sorts") {
  CHECK(classify_type(vvar("X")) == Kind::Value);
  CHECK(classify_type(cvar("B")) == Kind::Computation);
  CHECK(is_computation(arrow(vvar("X"), cvar("B"))));
  CHECK_FALSE(is_computation(arrow(cvar("B"), vvar("X"))));
  // A -o B is itself a value type even when both sides are computations.
  CHECK_FALSE(is_computation(lolli(cvar("A"), cvar("B"))));
  CHECK_THROWS_AS(classify_type(lolli(vvar("X"), cvar("B"))), KindError);
  CHECK(is_computation(forall_v("X", arrow(vvar("X"), cvar("B")))));
  CHECK(is_computation(encode_bang(vvar("A"))));
}

TEST_CASE("scope checking") {
  std::set<std::string> scope{"X"};
  CHECK_NOTHROW(classify_type(arrow(vvar("X"), vvar("X")), &scope));
  CHECK_THROWS_AS(classify_type(arrow(vvar("X"), vvar("Y")), &scope), ScopeError);
  CHECK_NOTHROW(classify_type(forall_v("Y", vvar("Y")), &scope));
}

TEST_CASE("alpha equivalence ignores binder names but not sorts") {
  TypePtr a = forall_v("X", arrow(vvar("X"), vvar("X")));
  TypePtr b = forall_v("Y", arrow(vvar("Y"), vvar("Y")));
  TypePtr c = forall_c("^Y", arrow(cvar("Y"), cvar("Y")));
  CHECK(alpha_eq(a, b));
  CHECK_FALSE(alpha_eq(a, c));
  CHECK(type_key(a) == type_key(b));
  CHECK(type_key(a) != type_key(c));
}

TEST_CASE("type substitution avoids capture") {
  // (forall Y. X -> Y)[Y/X] must rename the binder.
  TypePtr body = forall_v("Y", arrow(vvar("X"), vvar("Y")));
  TypePtr out = subst_type(body, "X", vvar("Y"));
  REQUIRE(out->tag == TypeTag::ForallV);
  CHECK(out->name != "Y");
  CHECK(free_type_vars(out) == std::set<std::string>{"Y"});
  CHECK(alpha_eq(out, forall_v("Z", arrow(vvar("Y"), vvar("Z")))));
}

TEST_CASE("substituting a value type for a computation variable is a kind error") {
  CHECK_THROWS_AS(subst_type(cvar("X"), "^X", vvar("A")), KindError);
  CHECK(alpha_eq(subst_type(cvar("X"), "^X", cvar("B")), cvar("B")));
}

TEST_CASE("term substitution avoids capture of term and type binders") {
  // (fun y : X => x)[y/x] renames y.
  TermPtr t = lam("y", vvar("X"), var("x"));
  TermPtr out = subst_term(t, "x", var("y"));
  REQUIRE(out->tag == TermTag::Lam);
  CHECK(out->name != "y");
  CHECK(free_vars(out) == std::set<std::string>{"y"});
  // (Fun Y => x)[s/x] where s mentions Y free renames the type binder.
  TermPtr u = tylam_v("Y", var("x"));
  TermPtr s = lam("z", vvar("Y"), var("z"));
  TermPtr out2 = subst_term(u, "x", s);
  CHECK(out2->name != "Y");
  CHECK(free_type_vars(out2).count("Y") == 1);
}

TEST_CASE("fresh names keep their sort") {
  std::string v = fresh_name("X", {"X", "X1"});
  std::string c = fresh_name("^X", {"^X"});
  CHECK(v != "X");
  CHECK(v != "X1");
  CHECK_FALSE(is_cvar_name(v));
  CHECK(is_cvar_name(c));
  CHECK(c != "^X");
}

TEST_CASE("numerals and bang encodings") {
  // 0 = forall X. X, 1 = forall X. X -> X.
  CHECK(alpha_eq(encode_numeral(0), read_type("forall X. X")));
  CHECK(alpha_eq(encode_numeral(1), read_type("forall X. X -> X")));
  CHECK(alpha_eq(encode_bang(vvar("A")), read_type("forall ^X. (A -> ^X) -> ^X")));
  CHECK(alpha_eq(match_bang(read_type("forall ^Y. (A -> ^Y) -> ^Y")), vvar("A")));
  CHECK(match_bang(read_type("forall ^Y. (A -> ^Y) -> A -> ^Y")) == nullptr);
}

TEST_CASE("positivity") {
  CHECK(positive_in("X", read_type("1 + Y * X")));
  CHECK_FALSE(positive_in("X", arrow(vvar("X"), vvar("Y"))));
  // Left of two arrows counts as positive.
  CHECK(positive_in("X", arrow(arrow(vvar("X"), vvar("Y")), vvar("Y"))));
  CHECK_THROWS_AS(read_type("mu X. X -> 1"), PositivityError);
}

}  // TEST_SUITE

}  // namespace
}  // namespace pe
