#include "doctest.h"
#include "pe/io.hpp"

namespace pe::io {
namespace {

TEST_SUITE("io") {

TEST_CASE("model configuration round-trips") {
  sem::ModelConfig c;
  c.monad = MonadKind::Exception;
  c.exceptions = {"e1", "e2"};
  c.bound = 3;
  c.include_free_algebras = true;
  c.free_arities = {2};
  json j = model_config_json(c);
  CHECK(j.at("monad") == "exception");
  CHECK(j.at("E") == json::array({"e1", "e2"}));
  sem::ModelConfig back = model_config_from_json(j);
  CHECK(back.key() == c.key());
  CHECK(model_config_json(back) == j);
}

TEST_CASE("missing keys keep the base values") {
  sem::ModelConfig base;
  base.bound = 3;
  sem::ModelConfig c = model_config_from_json(json{{"monad", "powerset"}}, base);
  CHECK(c.monad == MonadKind::Powerset);
  CHECK(c.bound == 3);
  CHECK(c.exceptions.empty());
}

TEST_CASE("malformed configurations are rejected") {
  CHECK_THROWS_AS(model_config_from_json(json::array()), ConfigError);
  CHECK_THROWS_AS(model_config_from_json(json{{"monad", "state"}}), ConfigError);
  CHECK_THROWS_AS(model_config_from_json(json{{"bound", "two"}}), ConfigError);
  CHECK_THROWS_AS(model_config_from_json(json{{"colour", 1}}), ConfigError);
  CHECK_THROWS_AS(parse_monad("list"), ConfigError);
}

TEST_CASE("constant tables round-trip") {
  ConstantTable t = make_constant_table(register_effect_constants(MonadKind::Exception, {"e"}));
  REQUIRE(t.count("raise^e"));
  REQUIRE(t.count("handle^e"));
  ConstantTable back = constant_table_from_json(constant_table_json(t));
  REQUIRE(back.size() == t.size());
  for (const auto& [name, sig] : t) {
    CAPTURE(name);
    CHECK(alpha_eq(back.at(name).scheme, sig.scheme));
    CHECK(back.at(name).denotation_key == sig.denotation_key);
  }
  CHECK_THROWS_AS(constant_table_from_json(json::object()), ConfigError);
}

TEST_CASE("type errors and declarations serialise with spans") {
  Session s;
  FileResult r = s.process_text("judge |- x\n", "t.pe");
  json j = file_result_json(r);
  CHECK(j.at("ok") == false);
  const json& d = j.at("decls").at(0);
  CHECK(d.at("kind") == "judge");
  CHECK(d.at("error").at("code") == "UnboundVar");
  CHECK(d.at("error").at("span").at("file") == "t.pe");
  CHECK(d.at("error").at("span").at("start").at("line") == 1);

  FileResult bad = s.process_text("judge |- (", "u.pe");
  json jb = file_result_json(bad);
  CHECK(jb.at("error").at("code") == "SyntaxError");
}

TEST_CASE("denotation dumps") {
  sem::Model m(sem::ModelConfig{});
  TypePtr t = read_type("forall X. X -> X");
  sem::ObjId o = m.interp({}, t);
  json obj = dump_object(m, o);
  CHECK(obj.at("size") == 1);
  json v = dump_value(m, {}, t, m.carrier_of(o).elems[0]);
  CHECK(v.is_object());
  // One entry per set representative, each the identity table.
  CHECK(v.size() == m.reps(sem::Sort::Set).size());
}

}  // TEST_SUITE

}  // namespace
}  // namespace pe::io
