// Acceptance run: one timed pass/fail line per criterion. Expected values
// are derived here from first principles, not read back from the verifiers.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pe/driver.hpp"
#include "pe/paramlab.hpp"

#ifndef PE_CORPUS_DIR
#error "PE_CORPUS_DIR must point at tests/corpus"
#endif

namespace {

using namespace pe;
using lab::json;
using lab::Report;

struct Outcome {
  bool pass = true;
  std::string summary;
  std::vector<std::string> problems;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      pass = false;
      problems.push_back(what);
    }
  }
};

struct Criterion {
  int id;
  std::string name;
  double limit_s;
  std::function<Outcome()> run;
};

// Accepts a report and records its status.
void expect_verified(Outcome& o, const Report& r) {
  if (r.ok()) return;
  std::string w = r.witness.is_null() ? "" : " " + r.witness.dump();
  o.require(false, r.theorem_id + " " + lab::to_string(r.status) + w);
}

std::size_t exception_t_size(std::size_t n, std::size_t e) { return n + e; }
std::size_t powerset_t_size(std::size_t n) { return (std::size_t{1} << n) - 1; }

ConstantTable effect_constants(MonadKind k) {
  return make_constant_table(register_effect_constants(k, {"e"}));
}

std::string corpus(const std::string& name) { return std::string(PE_CORPUS_DIR) + "/" + name; }

// ---------------------------------------------------------------------------

Outcome typing_corpus() {
  Outcome o;
  std::size_t positive = 0, negative = 0;
  struct File {
    const char* name;
    MonadKind monad;
  };
  const File files[] = {{"positive.pe", MonadKind::Exception},
                        {"negative.pe", MonadKind::Exception},
                        {"powerset.pe", MonadKind::Powerset},
                        {"handle.pe", MonadKind::Exception}};
  std::string text_all;
  for (const File& f : files) {
    std::string text = read_file(corpus(f.name));
    text_all += text;
    // Every positive judgment carries its hand-derived type.
    for (const auto& d : surface::parse_file(text, f.name))
      if (d.kind == surface::DeclKind::Judge)
        o.require(d.type != nullptr, std::string(f.name) + ": judgment without a derived type");
    Session s(effect_constants(f.monad));
    FileResult r = s.process_text(text, f.name);
    o.require(!r.syntax_error, std::string(f.name) + ": syntax error");
    for (const auto& d : r.decls) {
      o.require(d.ok, d.span.to_string() + ": " + d.message);
      if (d.kind == surface::DeclKind::Judge) ++positive;
      if (d.kind == surface::DeclKind::Reject) ++negative;
    }
  }
  // The misuse file must fail, and only with a stoup violation.
  Session s(effect_constants(MonadKind::Exception));
  FileResult misuse = s.process_file(corpus("stoup_misuse.pe"));
  for (const auto& d : misuse.decls) {
    o.require(!d.ok && d.code == ErrorCode::StoupViolation, "stoup misuse not rejected");
    ++negative;
  }
  // Coverage of the required forms.
  for (const char* form : {"| x : ^A |- x : ^A", "bang", "let", "pair", "case", "exists",
                           "mu X.", "nu X.", "1o", "0o", "*o", "(+)", "existso", "muo", "nuo",
                           " . ^B", "raise^e", "handle^e", "or @["})
    o.require(text_all.find(form) != std::string::npos, std::string("corpus lacks ") + form);
  o.require(positive >= 30, "fewer than 30 positive judgments");
  o.require(negative >= 15, "fewer than 15 negative judgments");
  o.summary = std::to_string(positive) + " positive, " + std::to_string(negative) + " negative";
  return o;
}

Outcome metatheory() {
  Outcome o;
  lab::RandomOptions ro;
  ro.seed = 1;
  ro.count = 200;
  Report r = lab::verify_metatheory(ro);
  expect_verified(o, r);
  o.require(r.counts.value("terms", 0) == 200, "not 200 terms");
  o.require(r.counts.value("unicity-checked", 0) == 200, "unicity not checked on every term");
  o.require(r.counts.value("substitution-part1", 0) > 0, "no part-1 substitution instances");
  o.require(r.counts.value("substitution-part2", 0) > 0, "no part-2 substitution instances");
  o.summary = "200 terms, substitution " + std::to_string(r.counts.value("substitution-part1", 0)) +
              " + " + std::to_string(r.counts.value("substitution-part2", 0)) + " instances";
  return o;
}

Outcome monad_laws() {
  Outcome o;
  Report r = lab::verify_monad_laws(4);
  expect_verified(o, r);
  std::uint64_t total = 0;
  for (const char* m : {"identity", "exception|E|=1", "exception|E|=2", "powerset"}) {
    o.require(r.counts.contains(m), std::string("monad not covered: ") + m);
    if (r.counts.contains(m)) total += r.counts[m].value("checks", std::uint64_t{0});
  }
  std::string kernel = r.counts.contains("powerset") ? r.counts["powerset"].value("kernel", "") : "";
  o.summary = std::to_string(total) + " checks, sets up to 4, kernel " + kernel;
  return o;
}

Outcome axioms() {
  Outcome o;
  sem::ModelConfig ps;
  ps.monad = MonadKind::Powerset;
  ps.exceptions.clear();
  ps.bound = 2;
  Report a = lab::verify_axioms(lab::exception_config(1, 2, false));
  Report b = lab::verify_axioms(ps);
  expect_verified(o, a);
  expect_verified(o, b);
  o.summary = "exception |E|=1 and powerset at bound 2";
  return o;
}

Outcome identity_extension() {
  Outcome o;
  Report r = lab::verify_identity_extension(lab::exception_config(1, 2, false));
  expect_verified(o, r);
  std::size_t types = r.counts.value("types", 0), fc = r.counts.value("forall-c-types", 0);
  o.require(types >= 20, "battery smaller than 20");
  o.require(fc >= 1, "no computation quantifier in the battery");
  o.summary = std::to_string(types) + " types, " + std::to_string(fc) + " with forall ^X";
  return o;
}

Outcome abstraction() {
  Outcome o;
  lab::RandomOptions ro;
  ro.seed = 1;
  ro.count = 100;
  Report r = lab::verify_abstraction(lab::exception_config(1, 2, false), ro);
  expect_verified(o, r);
  o.require(r.counts.value("terms", 0) == 100, "not 100 terms");
  o.require(r.counts.value("stoup-terms", 0) > 0, "no stoup-typed terms");
  o.summary = "100 terms, " + std::to_string(r.counts.value("related-pairs", 0)) +
              " related pairs, " + std::to_string(r.counts.value("homomorphism-checks", 0)) +
              " homomorphism checks";
  return o;
}

Outcome bang_laws() {
  Outcome o;
  Report r = lab::verify_bang_laws(lab::exception_config(1, 2, true));
  expect_verified(o, r);
  for (const char* k : {"beta", "eta", "kappa"})
    o.require(r.counts.value(k, 0) > 0, std::string("no ") + k + " instances");
  o.summary = "beta " + std::to_string(r.counts.value("beta", 0)) + ", eta " +
              std::to_string(r.counts.value("eta", 0)) + ", kappa " +
              std::to_string(r.counts.value("kappa", 0));
  return o;
}

Outcome free_algebra() {
  Outcome o;
  Report r = lab::verify_free_algebra(lab::exception_config(1, 2, false), 3);
  expect_verified(o, r);
  // Pointed sets of size 1..3: 1 + 2 + 3 labelled algebras.
  o.require(r.counts.value("algebras", 0) == 6, "expected the 6 pointed sets of size <= 3");
  o.summary = std::to_string(r.counts.value("universal-checks", 0)) + " universal checks over " +
              std::to_string(r.counts.value("algebras", 0)) + " algebras";
  return o;
}

Outcome bang_cardinality() {
  Outcome o;
  Report exc = lab::verify_bang_cardinality(lab::exception_config(1, 2, true), {});
  sem::ModelConfig id;
  id.monad = MonadKind::Identity;
  id.exceptions.clear();
  Report idr = lab::verify_bang_cardinality(id, {1, 2});
  expect_verified(o, exc);
  expect_verified(o, idr);
  std::string got;
  for (std::size_t n : {0, 1, 2}) {
    std::string key = "|!A| for |A|=" + std::to_string(n);
    std::size_t v = exc.counts.value(key, std::size_t{0});
    o.require(v == exception_t_size(n, 1), "exception " + key);
    got += std::to_string(v) + " ";
  }
  for (std::size_t n : {1, 2}) {
    std::string key = "|!A| for |A|=" + std::to_string(n);
    std::size_t v = idr.counts.value(key, std::size_t{0});
    o.require(v == n, "identity " + key);
    got += std::to_string(v) + " ";
  }
  o.summary = "sizes " + got + "(exception 0,1,2 then identity 1,2)";
  return o;
}

Outcome rel_lifting() {
  Outcome o;
  Report r = lab::verify_rel_lifting(lab::exception_config(1, 2, false));
  expect_verified(o, r);
  // All relations between sets of size 0..2: sum over p, q of 2^(pq).
  std::size_t all = 0;
  for (std::size_t p = 0; p <= 2; ++p)
    for (std::size_t q = 0; q <= 2; ++q) all += std::size_t{1} << (p * q);
  o.require(r.counts.value("relations", 0) == all, "not every relation was lifted");
  o.summary = std::to_string(all) + " relations, " +
              std::to_string(r.counts.value("item3-checks", 0)) + " item-3 checks";
  return o;
}

// Each arity entry must show the same cardinality for the three sets.
void check_arities(Outcome& o, const Report& r, const std::vector<std::size_t>& ns,
                   const std::function<std::size_t(std::size_t)>& expected, std::string& got) {
  for (std::size_t n : ns) {
    bool found = false;
    for (const auto& a : r.counts.value("arities", json::array())) {
      if (a.value("n", std::size_t{99}) != n) continue;
      found = true;
      std::size_t e = expected(n);
      for (const char* k : {"operations", "generic-effects", "parametric-elements"})
        o.require(a.value(k, std::size_t{0}) == e,
                  std::string(k) + " at n=" + std::to_string(n) + " is not " + std::to_string(e));
      got += std::to_string(a.value("operations", std::size_t{0})) + " ";
    }
    o.require(found, "arity " + std::to_string(n) + " missing");
  }
}

Outcome algop() {
  Outcome o;
  Report exc = lab::verify_algop(lab::exception_config(1, 2, true), {0, 1, 2});
  sem::ModelConfig ps;
  ps.monad = MonadKind::Powerset;
  ps.exceptions.clear();
  ps.bound = 3;
  ps.include_free_algebras = true;
  Report pr = lab::verify_algop(ps, {2});
  expect_verified(o, exc);
  expect_verified(o, pr);
  std::string got;
  check_arities(o, exc, {0, 1, 2}, [](std::size_t n) { return exception_t_size(n, 1); }, got);
  check_arities(o, pr, {2}, powerset_t_size, got);
  o.summary = "cardinalities " + got + "(exception n=0,1,2 then powerset n=2)";
  return o;
}

// The handler's displayed case split, recomputed from its rule.
void check_handler_table(Outcome& o, const Report& r, const std::string& handled) {
  const json& table = r.counts.value("table", json::array());
  o.require(!table.empty(), "no case-split table");
  for (const auto& row : table) {
    std::string left = row.value("left", ""), right = row.value("right", "");
    std::string want = left == "inr(" + handled + ")" ? right : left;
    o.require(row.value("result", "") == want, "case split row " + row.dump());
  }
}

Outcome handler() {
  Outcome o;
  Report one = lab::verify_handler(lab::exception_config(1, 2, true));
  Report two = lab::verify_handler(lab::exception_config(2, 2, true));
  expect_verified(o, one);
  expect_verified(o, two);
  o.require(one.counts.value("member", false), "|E|=1: not in the interpretation of the scheme");
  o.require(two.counts.value("member", false), "|E|=2: not in the interpretation of the scheme");
  check_handler_table(o, one, "e");
  check_handler_table(o, two, "e1");
  o.summary = "|E|=1 and |E|=2, case-split rows " +
              std::to_string(one.counts.value("table", json::array()).size()) + " + " +
              std::to_string(two.counts.value("table", json::array()).size());
  return o;
}

Outcome encodings() {
  Outcome o;
  Report r = lab::verify_encodings(lab::exception_config(1, 2, true));
  expect_verified(o, r);
  // |0o| is the single raise point.
  o.require(r.counts.value("zero-size", 0) == 1, "0o is not a singleton");
  for (const char* k : {"mediator-checks", "yoneda-checks", "girard-checks"})
    o.require(r.counts.value(k, 0) > 0, std::string("no ") + k);
  o.summary = "mediators " + std::to_string(r.counts.value("mediator-checks", 0)) + ", Yoneda " +
              std::to_string(r.counts.value("yoneda-checks", 0)) + ", Girard " +
              std::to_string(r.counts.value("girard-checks", 0));
  return o;
}

Outcome cbpv() {
  Outcome o;
  Report r = lab::verify_cbpv();
  expect_verified(o, r);
  const json& rows = r.counts.value("corpus", json::array());
  o.require(rows.size() == 10, "corpus is not 10 types");
  for (const auto& row : rows) {
    // The expected translation, written in surface syntax, must elaborate to
    // the same kernel type.
    TypePtr want = read_type(row.value("expected", ""));
    TypePtr got = read_type(row.value("translation", ""));
    o.require(alpha_eq(want, got), "translation of " + row.value("cbpv", ""));
  }
  o.summary = std::to_string(rows.size()) + " types";
  return o;
}

}  // namespace

// With arguments, runs only the listed criteria.
int main(int argc, char** argv) {
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  const std::vector<Criterion> criteria = {
      {1, "typing corpus", 1, typing_corpus},
      {2, "unicity and substitution", 10, metatheory},
      {3, "monad laws", 5, monad_laws},
      {4, "relational axioms", 30, axioms},
      {5, "identity extension", 60, identity_extension},
      {6, "abstraction theorem", 120, abstraction},
      {7, "bang laws", 60, bang_laws},
      {8, "free algebra", 60, free_algebra},
      {9, "cardinality of !A", 120, bang_cardinality},
      {10, "relational lifting", 120, rel_lifting},
      {11, "algebraic operations", 300, algop},
      {12, "exception handler", 120, handler},
      {13, "encodings", 300, encodings},
      {14, "CBPV translation", 1, cbpv},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.problems.push_back(std::string("threw: ") + e.what());
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (s > c.limit_s) {
      o.pass = false;
      o.problems.push_back("exceeded the time limit");
    }
    char head[160];
    std::snprintf(head, sizeof head, "criterion %2d  %s  %-26s %9.3f s (limit %g s)  ", c.id,
                  o.pass ? "PASS" : "FAIL", c.name.c_str(), s, c.limit_s);
    std::cout << head << o.summary << "\n";
    for (const auto& p : o.problems) std::cout << "    " << p << "\n";
    std::cout.flush();
    if (!o.pass) ++failed;
  }
  std::cout << (failed ? "FAILED: " + std::to_string(failed) + " criteria" : "all criteria passed")
            << "\n";
  return failed ? 1 : 0;
}
