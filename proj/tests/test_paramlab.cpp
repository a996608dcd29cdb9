#include <set>
#include <string>

#include "doctest.h"
#include "pe/paramlab.hpp"

namespace pe::lab {
namespace {

std::string stable(Report r) {
  r.runtime_ms = 0;
  return report_json(r).dump();
}

TEST_SUITE("paramlab") {

TEST_CASE("term generation is deterministic per seed") {
  TermGen a(42), b(42), c(43);
  std::string sa, sb, sc;
  for (int i = 0; i < 20; ++i) {
    sa += surface::print(a.judgment()) + "\n";
    sb += surface::print(b.judgment()) + "\n";
    sc += surface::print(c.judgment()) + "\n";
  }
  CHECK(sa == sb);
  CHECK(sa != sc);
}

TEST_CASE("generated judgments typecheck at their ascription") {
  TermGen g(9);
  for (int i = 0; i < 100; ++i) {
    Judgment j = g.judgment();
    REQUIRE(j.ascription);
    CHECK(alpha_eq(typecheck(j), j.ascription));
  }
}

TEST_CASE("reports are reproducible") {
  RandomOptions ro;
  ro.seed = 5;
  ro.count = 40;
  CHECK(stable(verify_metatheory(ro)) == stable(verify_metatheory(ro)));
  sem::ModelConfig cfg = exception_config(1, 2, false);
  CHECK(stable(verify_abstraction(cfg, ro)) == stable(verify_abstraction(cfg, ro)));
}

TEST_CASE("report shape") {
  Report r = verify_cbpv();
  json j = report_json(r);
  for (const char* key : {"theorem-id", "config", "bound", "status", "runtime-ms"})
    CHECK(j.contains(key));
  CHECK(j.at("status") == "verified");
  Report f;
  f.fail({{"first", 1}});
  f.fail({{"second", 2}});
  CHECK(f.status == Status::Counterexample);
  CHECK(f.witness.at("first") == 1);
}

TEST_CASE("suite registry") {
  std::set<std::string> ids;
  for (const auto& s : suites()) {
    CHECK_FALSE(s.defaults.empty());
    ids.insert(s.id);
  }
  CHECK(ids.size() == 13);
  CHECK(find_suite("bang-laws") != nullptr);
  CHECK(find_suite("nope") == nullptr);
}

TEST_CASE("cheap verifiers pass") {
  CHECK(verify_cbpv().ok());
  CHECK(verify_axioms(exception_config(1, 2, false)).ok());
  CHECK(verify_bang_laws(exception_config(1, 2, true)).ok());
}

TEST_CASE("the CBPV translation lands in the right sort") {
  for (const CbpvPtr& t : cbpv_corpus()) {
    CAPTURE(cbpv_print(t));
    TypePtr out = cbpv_translate_type(t);
    if (cbpv_is_computation(t)) CHECK(is_computation(out));
  }
  // F A = !A and U B = B.
  CbpvPtr a = cbpv_var("A");
  CHECK(alpha_eq(cbpv_translate_type(cbpv_f(a)), read_type("!A")));
  CHECK(alpha_eq(cbpv_translate_type(cbpv_u(cbpv_f(a))), read_type("!A")));
}

}  // TEST_SUITE

}  // namespace
}  // namespace pe::lab
