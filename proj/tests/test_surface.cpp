#include <string>
#include <vector>

#include "doctest.h"
#include "pe/encodings.hpp"
#include "pe/paramlab.hpp"
#include "pe/surface.hpp"

namespace pe {
namespace {

TEST_SUITE("surface") {

TEST_CASE("kernel printing round-trips through the parser") {
  const std::vector<std::string> types = {
      "X",
      "^B",
      "X -> ^B",
      "(X -> Y) -> Z",
      "forall X. X -> X",
      "forall ^X. (A -> ^X) -> ^X",
      "(^A -o ^B) -> ^C",
      "forall X. forall ^Y. (X -> ^Y) -> X -> ^Y",
  };
  for (const auto& text : types) {
    CAPTURE(text);
    TypePtr t = read_type(text);
    TypePtr back = read_type(surface::print(t));
    CHECK(alpha_eq(t, back));
  }
}

TEST_CASE("generated judgments round-trip") {
  lab::TermGen gen(7);
  for (int i = 0; i < 100; ++i) {
    Judgment j = gen.judgment();
    std::string text = "judge " + surface::print(j);
    CAPTURE(text);
    auto decls = surface::parse_file(text);
    REQUIRE(decls.size() == 1);
    Elaborator el;
    Judgment back = el.judgment(decls[0]);
    CHECK(alpha_eq(back.subject, j.subject));
    CHECK(alpha_eq(back.ascription, j.ascription));
    CHECK(back.delta.has_value() == j.delta.has_value());
    CHECK(back.gamma.size() == j.gamma.size());
  }
}

TEST_CASE("sugar elaborates to the polymorphic encodings") {
  // Right-hand sides are written out in kernel syntax only.
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"!A", "forall ^X. (A -> ^X) -> ^X"},
      {"1", "forall X. X -> X"},
      {"0", "forall X. X"},
      {"A * B", "forall X. (A -> B -> X) -> X"},
      {"A + B", "forall X. (A -> X) -> (B -> X) -> X"},
      {"2", "forall X. ((forall Y. Y -> Y) -> X) -> ((forall Y. Y -> Y) -> X) -> X"},
      {"exists X. X -> A", "forall Y. (forall X. (X -> A) -> Y) -> Y"},
      {"mu X. A -> X", "forall X. ((A -> X) -> X) -> X"},
      {"1o", "forall ^X. (forall Y. Y) -> ^X"},
      {"0o", "forall ^X. ^X"},
      {"^A *o ^B",
       "forall ^X. (forall Z. ((^A -o ^X) -> Z) -> ((^B -o ^X) -> Z) -> Z) -> ^X"},
      {"^A (+) ^B", "forall ^X. (^A -o ^X) -> (^B -o ^X) -> ^X"},
      {"A . ^B", "forall ^X. (A -> ^B -o ^X) -> ^X"},
      {"existso X. ^A", "forall ^Y. (forall X. ^A -o ^Y) -> ^Y"},
      {"existso ^X. ^A", "forall ^Y. (forall ^X. ^A -o ^Y) -> ^Y"},
      {"muo ^X. ^A (+) ^X",
       "forall ^X. ((forall ^Z. (^A -o ^Z) -> (^X -o ^Z) -> ^Z) -o ^X) -> ^X"},
  };
  for (const auto& [sugar, kernel] : cases) {
    CAPTURE(sugar);
    CHECK(alpha_eq(read_type(sugar), read_type(kernel)));
  }
}

TEST_CASE("syntax errors carry a span and the expected tokens") {
  try {
    surface::parse_term("fun x : X =>");
    FAIL("expected a syntax error");
  } catch (const surface::SyntaxError& e) {
    CHECK(e.span().start.line == 1);
    CHECK_FALSE(e.expected().empty());
  }
  CHECK_THROWS_AS(surface::parse_type("forall . X"), surface::SyntaxError);
  CHECK_THROWS_AS(surface::parse_file("judge |- x : "), surface::SyntaxError);
}

TEST_CASE("comments and spans in files") {
  auto decls = surface::parse_file("-- a comment\njudge x : X |- x : X\n", "f.pe");
  REQUIRE(decls.size() == 1);
  CHECK(decls[0].span.file == "f.pe");
  CHECK(decls[0].span.start.line == 2);
}

}  // TEST_SUITE

}  // namespace
}  // namespace pe
