#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"
#include "pe/driver.hpp"
#include "pe/interp.hpp"

namespace pe::io {

using nlohmann::json;

// A malformed model configuration.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& msg) : std::invalid_argument(msg) {}
};

json span_json(const SourceSpan& s);
// {code, span, detail}
json type_error_json(const TypeError& e);
json decl_result_json(const DeclResult& d);
json file_result_json(const FileResult& f);

// [{name, type-text, denotation-key}]
json constant_table_json(const ConstantTable& t);
ConstantTable constant_table_from_json(const json& j);

// {monad, E, bound, include-free-algebras}; missing keys keep the values of
// `base`.
sem::ModelConfig model_config_from_json(const json& j, sem::ModelConfig base = {});
json model_config_json(const sem::ModelConfig& cfg);
MonadKind parse_monad(const std::string& s);
const char* monad_name(MonadKind k);

// Denotation dumps: objects as sizes plus labels, functions as arrays over
// the domain carrier, polymorphic values as maps from object labels.
json dump_object(const sem::Model& m, sem::ObjId o);
json dump_value(sem::Model& m, const sem::Env& env, const TypePtr& type, sem::ValueId v);

}  // namespace pe::io
