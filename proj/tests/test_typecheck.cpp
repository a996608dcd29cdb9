#include <string>
#include <vector>

#include "doctest.h"
#include "pe/driver.hpp"
#include "pe/paramlab.hpp"

#ifndef PE_CORPUS_DIR
#error "PE_CORPUS_DIR must point at tests/corpus"
#endif

namespace pe {
namespace {

ConstantTable effect_constants(MonadKind k, std::vector<std::string> e = {"e"}) {
  return make_constant_table(register_effect_constants(k, std::move(e)));
}

FileResult run_corpus(const std::string& name, MonadKind k) {
  Session s(effect_constants(k));
  return s.process_file(std::string(PE_CORPUS_DIR) + "/" + name);
}

ErrorCode code_of(const std::string& judge_text) {
  Session s(effect_constants(MonadKind::Exception));
  FileResult r = s.process_text(judge_text);
  REQUIRE(r.decls.size() == 1);
  REQUIRE(r.decls[0].code.has_value());
  return *r.decls[0].code;
}

TEST_SUITE("typecheck") {

TEST_CASE("positive corpus agrees with the hand-derived types") {
  FileResult r = run_corpus("positive.pe", MonadKind::Exception);
  REQUIRE_FALSE(r.syntax_error);
  std::size_t judged = 0;
  for (const auto& d : r.decls) {
    CAPTURE(d.span.to_string());
    CAPTURE(d.message);
    CHECK(d.ok);
    if (d.kind == surface::DeclKind::Judge) ++judged;
  }
  CHECK(judged >= 30);
}

TEST_CASE("negative corpus raises the expected codes") {
  FileResult r = run_corpus("negative.pe", MonadKind::Exception);
  REQUIRE_FALSE(r.syntax_error);
  std::size_t rejected = 0;
  for (const auto& d : r.decls) {
    CAPTURE(d.span.to_string());
    CAPTURE(d.message);
    CHECK(d.ok);
    CHECK(d.kind == surface::DeclKind::Reject);
    ++rejected;
  }
  CHECK(rejected >= 15);
}

TEST_CASE("powerset corpus") {
  FileResult r = run_corpus("powerset.pe", MonadKind::Powerset);
  CHECK(r.ok());
  // Without the powerset constants `or` is unbound.
  FileResult bad = run_corpus("powerset.pe", MonadKind::Exception);
  CHECK_FALSE(bad.ok());
}

TEST_CASE("stoup misuse") {
  FileResult r = run_corpus("stoup_misuse.pe", MonadKind::Exception);
  REQUIRE(r.decls.size() == 1);
  CHECK_FALSE(r.ok());
  REQUIRE(r.decls[0].code.has_value());
  CHECK(*r.decls[0].code == ErrorCode::StoupViolation);
  CHECK(r.decls[0].error_span.start.line == 2);
}

TEST_CASE("a reject with the wrong code is a failure") {
  Session s(effect_constants(MonadKind::Exception));
  FileResult r = s.process_text("reject EscapingTyVar |- x\n");
  REQUIRE(r.decls.size() == 1);
  CHECK_FALSE(r.decls[0].ok);
  CHECK(r.decls[0].code == ErrorCode::UnboundVar);
}

TEST_CASE("each rejection carries exactly the code of its cause") {
  CHECK(code_of("judge |- y") == ErrorCode::UnboundVar);
  CHECK(code_of("judge | x : X |- x") == ErrorCode::NonComputationStoup);
  CHECK(code_of("judge x : X |- Fun X => x") == ErrorCode::EscapingTyVar);
  CHECK(code_of("judge |- fun x : X => x x") == ErrorCode::AppMismatch);
  CHECK(code_of("judge f : ^A -> ^B | x : ^A |- f x") == ErrorCode::StoupViolation);
}

TEST_CASE("bang elaborates to the encoding") {
  Elaborator el;
  TermPtr t = read_term("bang b", {{"b", vvar("B")}});
  TypePtr ty = typecheck(Judgment{{{"b", vvar("B")}}, std::nullopt, t, nullptr, {}});
  CHECK(alpha_eq(ty, read_type("forall ^X. (B -> ^X) -> ^X")));
}

TEST_CASE("definitions and abbreviations stay in scope") {
  Session s;
  FileResult r = s.process_text(
      "type Bool = 1 + 1\n"
      "def not : Bool -> Bool = fun b : Bool => case [1, 1, Bool] b of x => inr [1, 1] x | y => inl [1, 1] y\n"
      "def id : forall X. X -> X = Fun X => fun x : X => x\n"
      "judge c : Bool |- id @[Bool] (not (not c)) : Bool\n");
  for (const auto& d : r.decls) {
    CAPTURE(d.message);
    CHECK(d.ok);
  }
}

TEST_CASE("abbreviations and definitions must be closed") {
  Session s;
  FileResult r = s.process_text("type P = X * X\n");
  CHECK_FALSE(r.ok());
  FileResult d = s.process_text("def k = fun x : X => x\n");
  CHECK_FALSE(d.ok());
}

TEST_CASE("declarative derivations agree with the algorithm") {
  lab::TermGen gen(11);
  for (int i = 0; i < 60; ++i) {
    Judgment j = gen.judgment();
    auto all = derivable_types(j);
    REQUIRE(all.size() == 1);
    CHECK(alpha_eq(all[0], typecheck(j)));
  }
}

TEST_CASE("unicity and substitution on a seeded corpus") {
  lab::TermGen gen(3);
  std::vector<Judgment> corpus;
  std::vector<SubstitutionCase> cases;
  for (int i = 0; i < 80; ++i) {
    corpus.push_back(gen.judgment());
    for (auto& c : gen.substitution_cases(corpus.back())) cases.push_back(c);
  }
  UnicityReport u = check_unicity(corpus);
  CHECK(u.checked == corpus.size());
  CHECK(u.failures == 0);
  SubstitutionReport s = check_substitution_lemma(cases);
  CHECK(s.failures == 0);
  CHECK(s.part1 > 0);
  CHECK(s.part2 > 0);
}

TEST_CASE("weakening does not change the type") {
  lab::TermGen gen(5);
  for (int i = 0; i < 50; ++i) {
    Judgment j = gen.judgment();
    TypePtr before = typecheck(j);
    Judgment w = j;
    w.gamma.insert(w.gamma.begin(), Binding{"unused_w", vvar("W")});
    CHECK(alpha_eq(typecheck(w), before));
  }
}

}  // TEST_SUITE

}  // namespace
}  // namespace pe
