#include "pe/io.hpp"

#include "pe/surface.hpp"

namespace pe::io {

json span_json(const SourceSpan& s) {
  return json{{"file", s.file},
              {"start", {{"line", s.start.line}, {"col", s.start.col}}},
              {"end", {{"line", s.end.line}, {"col", s.end.col}}}};
}

json type_error_json(const TypeError& e) {
  return json{{"code", to_string(e.code())}, {"span", span_json(e.span())}, {"detail", e.detail()}};
}

json decl_result_json(const DeclResult& d) {
  static const char* kinds[] = {"type", "def", "judge", "reject"};
  json j{{"kind", kinds[static_cast<int>(d.kind)]}, {"span", span_json(d.span)}, {"ok", d.ok}};
  if (!d.name.empty()) j["name"] = d.name;
  if (!d.type_text.empty()) j["type"] = d.type_text;
  if (d.code)
    j["error"] = {{"code", to_string(*d.code)}, {"span", span_json(d.error_span)}, {"detail", d.message}};
  else if (!d.message.empty())
    j["message"] = d.message;
  return j;
}

json file_result_json(const FileResult& f) {
  json j{{"file", f.file}, {"ok", f.ok()}, {"decls", json::array()}};
  for (const auto& d : f.decls) j["decls"].push_back(decl_result_json(d));
  if (f.syntax_error)
    j["error"] = {{"code", "SyntaxError"}, {"span", span_json(f.syntax_span)}, {"detail", *f.syntax_error}};
  return j;
}

json constant_table_json(const ConstantTable& t) {
  json out = json::array();
  for (const auto& [name, sig] : t)
    out.push_back({{"name", name}, {"type-text", surface::print(sig.scheme)},
                   {"denotation-key", sig.denotation_key}});
  return out;
}

ConstantTable constant_table_from_json(const json& j) {
  ConstantTable t;
  if (!j.is_array()) throw ConfigError("constant table must be an array");
  for (const auto& e : j) {
    ConstantSig s;
    s.name = e.at("name").get<std::string>();
    s.scheme = read_type(e.at("type-text").get<std::string>());
    s.denotation_key = e.at("denotation-key").get<std::string>();
    t[s.name] = s;
  }
  return t;
}

MonadKind parse_monad(const std::string& s) {
  if (s == "identity") return MonadKind::Identity;
  if (s == "exception" || s == "exceptions") return MonadKind::Exception;
  if (s == "powerset") return MonadKind::Powerset;
  throw ConfigError("unknown monad '" + s + "' (expected identity, exception or powerset)");
}

const char* monad_name(MonadKind k) {
  switch (k) {
    case MonadKind::Identity:
      return "identity";
    case MonadKind::Exception:
      return "exception";
    case MonadKind::Powerset:
      return "powerset";
  }
  return "?";
}

sem::ModelConfig model_config_from_json(const json& j, sem::ModelConfig c) {
  if (!j.is_object()) throw ConfigError("model configuration must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "monad") {
        c.monad = parse_monad(v.get<std::string>());
      } else if (key == "E") {
        c.exceptions = v.get<std::vector<std::string>>();
      } else if (key == "bound") {
        c.bound = v.get<std::size_t>();
      } else if (key == "include-free-algebras") {
        c.include_free_algebras = v.get<bool>();
      } else if (key == "free-arities") {
        c.free_arities = v.get<std::vector<std::size_t>>();
      } else {
        throw ConfigError("unknown configuration key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad configuration value: ") + e.what());
  }
  if (c.monad != MonadKind::Exception) c.exceptions.clear();
  return c;
}

json model_config_json(const sem::ModelConfig& cfg) {
  json j{{"monad", monad_name(cfg.monad)},
         {"E", cfg.monad == MonadKind::Exception ? cfg.exceptions : std::vector<std::string>{}},
         {"bound", cfg.bound},
         {"include-free-algebras", cfg.include_free_algebras}};
  if (!cfg.free_arities.empty()) j["free-arities"] = cfg.free_arities;
  return j;
}

namespace {

std::string object_key(const sem::Model& m, sem::ObjId o) {
  const std::string& l = m.object(o).label;
  return l.empty() ? "#" + std::to_string(o) : l;
}

}  // namespace

json dump_object(const sem::Model& m, sem::ObjId o) {
  const sem::Object& ob = m.object(o);
  const sem::Carrier& c = m.carrier_of(o);
  json labels = json::array();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (ob.alg == sem::AlgKind::Base && i < ob.base.labels.size())
      labels.push_back(ob.base.labels[i]);
    else if (ob.alg == sem::AlgKind::Structural)
      labels.push_back(m.show(c.elems[i]));
    else
      labels.push_back(std::to_string(i));
  }
  json j{{"object", object_key(m, o)}, {"size", c.size()}, {"labels", labels}};
  return j;
}

json dump_value(sem::Model& m, const sem::Env& env, const TypePtr& t, sem::ValueId v) {
  switch (t->tag) {
    case TypeTag::VVar:
    case TypeTag::CVar:
      return m.carrier_of(env.at(t->name)).index_of(v);
    case TypeTag::Arrow:
    case TypeTag::Lolli: {
      json out = json::array();
      for (sem::ValueId x : m.carrier_of(m.interp(env, t->dom)).elems)
        out.push_back(dump_value(m, env, t->cod, m.apply(v, x)));
      return out;
    }
    case TypeTag::ForallV:
    case TypeTag::ForallC: {
      sem::Sort s = t->tag == TypeTag::ForallV ? sem::Sort::Set : sem::Sort::Alg;
      json out = json::object();
      const auto& reps = m.reps(s);
      for (std::size_t i = 0; i < reps.size(); ++i) {
        sem::Env inner = env;
        inner[t->name] = reps[i];
        out[object_key(m, reps[i])] = dump_value(m, inner, t->cod, m.component(v, i));
      }
      return out;
    }
  }
  return nullptr;
}

}  // namespace pe::io
