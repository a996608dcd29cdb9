#include "common.hpp"
#include "pe/io.hpp"

namespace pe::lab {

sem::ModelConfig exception_config(std::size_t exceptions, std::size_t bound, bool free) {
  sem::ModelConfig c;
  c.monad = MonadKind::Exception;
  c.exceptions.clear();
  if (exceptions == 1) {
    c.exceptions.push_back("e");
  } else {
    for (std::size_t i = 1; i <= exceptions; ++i) c.exceptions.push_back("e" + std::to_string(i));
  }
  c.bound = bound;
  c.include_free_algebras = free;
  return c;
}

namespace {

sem::ModelConfig config(MonadKind k, std::size_t bound, bool free) {
  sem::ModelConfig c;
  c.monad = k;
  if (k != MonadKind::Exception) c.exceptions.clear();
  c.bound = bound;
  c.include_free_algebras = free;
  return c;
}

std::vector<std::size_t> sizes_from(const json& extra, const char* key) {
  std::vector<std::size_t> out;
  if (extra.is_object() && extra.contains(key)) {
    const json& v = extra.at(key);
    if (v.is_array())
      for (const auto& x : v) out.push_back(x.get<std::size_t>());
    else
      out.push_back(v.get<std::size_t>());
  }
  return out;
}

std::vector<Suite> make_suites() {
  std::vector<Suite> s;
  s.push_back({"metatheory", "unicity of types and the two substitution lemmas",
               {exception_config(1, 2, false)},
               [](const sem::ModelConfig&, const RandomOptions& ro, const json&) {
                 return verify_metatheory(ro);
               }});
  s.push_back({"monad-laws", "monad laws on small sets",
               {config(MonadKind::Identity, 4, false)},
               [](const sem::ModelConfig& c, const RandomOptions&, const json&) {
                 return verify_monad_laws(c.bound);
               }});
  s.push_back({"axioms", "relational axioms of the admissible relations",
               {exception_config(1, 2, false), config(MonadKind::Powerset, 2, false)},
               [](const sem::ModelConfig& c, const RandomOptions&, const json&) {
                 return verify_axioms(c);
               }});
  s.push_back({"identity-extension", "identity extension on a battery of types",
               {exception_config(1, 2, false)},
               [](const sem::ModelConfig& c, const RandomOptions&, const json&) {
                 return verify_identity_extension(c);
               }});
  s.push_back({"abstraction", "abstraction theorem on seeded terms",
               {exception_config(1, 2, false)},
               [](const sem::ModelConfig& c, const RandomOptions& ro, const json&) {
                 return verify_abstraction(c, ro);
               }});
  s.push_back({"bang-laws", "beta, eta and commuting conversions for bang",
               {exception_config(1, 2, true)},
               [](const sem::ModelConfig& c, const RandomOptions&, const json&) {
                 return verify_bang_laws(c);
               }});
  s.push_back({"free-algebra", "universal property of the free algebras",
               {exception_config(1, 2, false)},
               [](const sem::ModelConfig& c, const RandomOptions&, const json&) {
                 return verify_free_algebra(c);
               }});
  s.push_back({"bang-cardinality", "the size of !A agrees with TA",
               {exception_config(1, 2, true), config(MonadKind::Identity, 2, true)},
               [](const sem::ModelConfig& c, const RandomOptions&, const json& extra) {
                 return verify_bang_cardinality(c, sizes_from(extra, "sizes"));
               }});
  s.push_back({"rel-lifting", "three characterisations of the relational lifting",
               {exception_config(1, 2, false)},
               [](const sem::ModelConfig& c, const RandomOptions&, const json&) {
                 return verify_rel_lifting(c);
               }});
  s.push_back({"algop", "algebraic operations, generic effects and parametric elements",
               {exception_config(1, 2, true), config(MonadKind::Powerset, 3, true)},
               [](const sem::ModelConfig& c, const RandomOptions&, const json& extra) {
                 return verify_algop(c, sizes_from(extra, "n"));
               }});
  s.push_back({"handler", "the exception handler is a natural homomorphism",
               {exception_config(1, 2, true), exception_config(2, 2, true)},
               [](const sem::ModelConfig& c, const RandomOptions&, const json&) {
                 return verify_handler(c);
               }});
  s.push_back({"encodings", "initiality, coproducts, Yoneda and Girard isomorphisms",
               {exception_config(1, 2, true)},
               [](const sem::ModelConfig& c, const RandomOptions&, const json&) {
                 return verify_encodings(c);
               }});
  s.push_back({"cbpv", "translation of call-by-push-value types",
               {config(MonadKind::Identity, 2, false)},
               [](const sem::ModelConfig&, const RandomOptions&, const json&) {
                 return verify_cbpv();
               }});
  return s;
}

}  // namespace

const std::vector<Suite>& suites() {
  static const std::vector<Suite> s = make_suites();
  return s;
}

const Suite* find_suite(const std::string& id) {
  for (const auto& s : suites())
    if (s.id == id) return &s;
  return nullptr;
}

std::vector<sem::ValueId> enumerate_parametric_elements(sem::Model& m, const TypePtr& poly) {
  return m.carrier_of(m.interp({}, poly)).elems;
}

json config_json(const sem::ModelConfig& cfg) { return io::model_config_json(cfg); }

json report_json(const Report& r) {
  json j{{"theorem-id", r.theorem_id},
         {"config", config_json(r.config)},
         {"bound", r.config.bound},
         {"status", to_string(r.status)},
         {"runtime-ms", r.runtime_ms}};
  if (!r.witness.is_null()) j["witness"] = r.witness;
  if (!r.counts.empty()) j["counts"] = r.counts;
  if (!r.notes.empty()) j["notes"] = r.notes;
  return j;
}

}  // namespace pe::lab
