// Command-line driver: check, elaborate, eval and verify.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pe/driver.hpp"
#include "pe/io.hpp"
#include "pe/paramlab.hpp"

namespace {

using nlohmann::json;

enum Exit { kOk = 0, kFailure = 1, kUsage = 2, kOutOfBound = 3 };

struct Options {
  std::string config_file;
  std::optional<std::string> monad;
  std::optional<std::string> exceptions;
  std::optional<std::size_t> bound;
  bool free_algebras = false;
  std::string format = "text";
  std::uint64_t seed = 1;
};

// Flags override the JSON config file, which overrides the defaults.
std::optional<pe::sem::ModelConfig> model_config(const Options& o, bool* explicit_cfg = nullptr) {
  pe::sem::ModelConfig c;
  bool given = false;
  if (!o.config_file.empty()) {
    json j;
    try {
      j = json::parse(pe::read_file(o.config_file));
    } catch (const json::exception& e) {
      throw pe::io::ConfigError(o.config_file + ": " + e.what());
    } catch (const std::runtime_error& e) {
      throw pe::io::ConfigError(e.what());
    }
    c = pe::io::model_config_from_json(j, c);
    given = true;
  }
  if (o.monad) {
    c.monad = pe::io::parse_monad(*o.monad);
    if (c.monad != pe::MonadKind::Exception) c.exceptions.clear();
    else if (c.exceptions.empty()) c.exceptions = {"e"};
    given = true;
  }
  if (o.exceptions) {
    c.exceptions.clear();
    std::stringstream ss(*o.exceptions);
    for (std::string e; std::getline(ss, e, ',');)
      if (!e.empty()) c.exceptions.push_back(e);
    given = true;
  }
  if (o.bound) {
    c.bound = *o.bound;
    given = true;
  }
  if (o.free_algebras) {
    c.include_free_algebras = true;
    given = true;
  }
  if (c.monad == pe::MonadKind::Exception && c.exceptions.empty())
    throw pe::io::ConfigError("the exception monad needs at least one exception");
  if (explicit_cfg) *explicit_cfg = given;
  return c;
}

pe::ConstantTable constants(const pe::sem::ModelConfig& c) {
  return pe::make_constant_table(pe::register_effect_constants(c.monad, c.exceptions));
}

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

// ---------------------------------------------------------------------------

int cmd_check(const Options& o, const std::vector<std::string>& files) {
  pe::sem::ModelConfig cfg = *model_config(o);
  bool all_ok = true;
  json out = json::array();
  for (const auto& f : files) {
    pe::Session session(constants(cfg));
    pe::FileResult r;
    try {
      r = session.process_file(f);
    } catch (const std::runtime_error& e) {
      std::cerr << "pe: " << e.what() << "\n";
      return kUsage;
    }
    all_ok = all_ok && r.ok();
    if (o.format == "json") {
      out.push_back(pe::io::file_result_json(r));
      continue;
    }
    if (r.syntax_error) {
      std::cout << r.syntax_span.to_string() << ": SyntaxError: " << *r.syntax_error << "\n";
      continue;
    }
    for (const auto& d : r.decls) {
      std::cout << d.span.to_string() << ": ";
      if (d.ok && d.kind == pe::surface::DeclKind::Reject) {
        std::cout << "ok rejected " << pe::to_string(*d.code) << "\n";
      } else if (d.ok) {
        std::cout << "ok";
        if (!d.name.empty()) std::cout << " " << d.name;
        std::cout << " : " << d.type_text << "\n";
      } else if (d.code) {
        std::cout << "error " << pe::to_string(*d.code) << " at " << d.error_span.to_string()
                  << ": " << d.message << "\n";
      } else {
        std::cout << "error: " << d.message << "\n";
      }
    }
    std::cout << f << ": " << (r.ok() ? "ok" : "FAILED") << " (" << r.decls.size()
              << " declarations)\n";
  }
  if (o.format == "json") print_json(out);
  return all_ok ? kOk : kFailure;
}

int cmd_elaborate(const Options& o, const std::string& input, bool is_term) {
  pe::sem::ModelConfig cfg = *model_config(o);
  pe::Session session(constants(cfg));
  json out = json::array();
  auto emit = [&](const std::string& what, const pe::Judgment& j, const pe::TypePtr& t) {
    if (o.format == "json") {
      out.push_back({{"decl", what}, {"term", pe::surface::print(j.subject)},
                     {"type", pe::surface::print(t)}});
    } else {
      std::cout << what << " = " << pe::surface::print(j.subject) << "\n    : "
                << pe::surface::print(t) << "\n";
    }
  };
  try {
    std::vector<pe::surface::Decl> decls;
    if (is_term) {
      pe::surface::Decl d;
      d.kind = pe::surface::DeclKind::Judge;
      d.term = pe::surface::parse_term(input);
      decls.push_back(d);
    } else {
      decls = pe::surface::parse_file(pe::read_file(input), input);
    }
    for (const auto& d : decls) {
      if (d.kind == pe::surface::DeclKind::TypeDef) {
        pe::DeclResult r = session.process(d);
        if (!r.ok) throw std::runtime_error(r.message);
        if (o.format == "json")
          out.push_back({{"decl", "type " + d.name}, {"type", r.type_text}});
        else
          std::cout << "type " << d.name << " = " << r.type_text << "\n";
        continue;
      }
      if (d.kind == pe::surface::DeclKind::Reject) continue;
      auto [j, t] = session.check(d);
      emit(d.kind == pe::surface::DeclKind::Def ? "def " + d.name : "judge", j, t);
      if (d.kind == pe::surface::DeclKind::Def) session.process(d);
    }
  } catch (const pe::TypeError& e) {
    if (o.format == "json")
      print_json(pe::io::type_error_json(e));
    else
      std::cout << e.span().to_string() << ": " << pe::to_string(e.code()) << ": " << e.detail()
                << "\n";
    return kFailure;
  } catch (const pe::surface::SyntaxError& e) {
    std::cout << e.span().to_string() << ": SyntaxError: " << e.what() << "\n";
    return kFailure;
  }
  if (o.format == "json") print_json(out);
  return kOk;
}

pe::sem::ObjId resolve_object(pe::sem::Model& m, const std::string& name, const std::string& what) {
  bool comp = pe::is_cvar_name(name);
  if (!comp) {
    try {
      std::size_t n = std::stoul(what);
      if (what.find_first_not_of("0123456789") == std::string::npos) return m.set_object(n);
    } catch (const std::exception&) {
    }
    if (what.size() > 1 && what[0] == 'S') return m.set_object(std::stoul(what.substr(1)));
    throw pe::io::ConfigError("value variable " + name + " needs a set size, got '" + what + "'");
  }
  if (what.size() > 1 && what[0] == 'T' &&
      what.find_first_not_of("0123456789", 1) == std::string::npos)
    return m.free_algebra(std::stoul(what.substr(1))).first;
  for (pe::sem::ObjId r : m.reps(pe::sem::Sort::Alg))
    if (m.object(r).label == what) return r;
  throw pe::io::ConfigError("unknown algebra '" + what + "' for " + name);
}

int cmd_eval(const Options& o, const std::string& text, const std::string& defs,
             const std::vector<std::string>& env_args) {
  pe::sem::ModelConfig cfg = *model_config(o);
  pe::ConstantTable consts = constants(cfg);
  pe::Session session(consts);
  if (!defs.empty()) {
    pe::FileResult r = session.process_file(defs);
    if (!r.ok()) {
      std::cerr << "pe: " << defs << " does not typecheck\n";
      return kFailure;
    }
  }
  try {
    pe::Judgment j;
    j.subject = session.elaborator().term({}, std::nullopt, pe::surface::parse_term(text));
    pe::TypePtr t = pe::typecheck(j, consts);
    pe::sem::Model m(cfg, consts);
    pe::sem::Env env;
    for (const auto& a : env_args) {
      auto eq = a.find('=');
      if (eq == std::string::npos) throw pe::io::ConfigError("--env expects NAME=OBJECT");
      std::string name = a.substr(0, eq);
      env[name] = resolve_object(m, name, a.substr(eq + 1));
    }
    for (const auto& v : pe::free_type_vars(t))
      if (!env.count(v)) throw pe::io::ConfigError("free type variable " + v + " needs --env");
    pe::sem::ValueId v = m.eval(env, {}, {}, j.subject);
    pe::sem::ObjId obj = m.interp(env, t);
    if (o.format == "json") {
      print_json({{"term", pe::surface::print(j.subject)},
                  {"type", pe::surface::print(t)},
                  {"config", pe::io::model_config_json(cfg)},
                  {"carrier", pe::io::dump_object(m, obj)},
                  {"index", m.carrier_of(obj).index_of(v)},
                  {"value", pe::io::dump_value(m, env, t, v)}});
    } else {
      std::cout << m.show(v) << " : " << pe::surface::print(t) << "\n";
      std::cout << "element " << m.carrier_of(obj).index_of(v) << " of " << m.describe(obj)
                << "\n";
    }
  } catch (const pe::TypeError& e) {
    if (o.format == "json")
      print_json(pe::io::type_error_json(e));
    else
      std::cout << pe::to_string(e.code()) << ": " << e.detail() << "\n";
    return kFailure;
  } catch (const pe::surface::SyntaxError& e) {
    std::cout << "SyntaxError: " << e.what() << "\n";
    return kFailure;
  }
  return kOk;
}

std::string summarize(const json& counts) {
  std::string s;
  for (const auto& [k, v] : counts.items()) {
    std::string text = v.dump();
    if (v.is_structured() && text.size() > 160) continue;
    if (!s.empty()) s += ", ";
    s += k + "=" + text;
  }
  return s;
}

int cmd_verify(const Options& o, const std::string& suite, std::size_t count,
               const std::vector<std::size_t>& arities, bool stable) {
  bool explicit_cfg = false;
  pe::sem::ModelConfig cfg = *model_config(o, &explicit_cfg);
  std::vector<const pe::lab::Suite*> todo;
  if (suite == "all") {
    for (const auto& s : pe::lab::suites()) todo.push_back(&s);
  } else if (const auto* s = pe::lab::find_suite(suite)) {
    todo.push_back(s);
  } else {
    std::cerr << "pe: unknown suite '" << suite << "'; available:";
    for (const auto& s : pe::lab::suites()) std::cerr << " " << s.id;
    std::cerr << " all\n";
    return kUsage;
  }
  pe::lab::RandomOptions ro;
  ro.seed = o.seed;
  ro.count = count;
  json extra = json::object();
  if (!arities.empty()) extra["n"] = arities;

  bool failed = false, out_of_bound = false;
  double total = 0;
  for (const auto* s : todo) {
    std::vector<pe::sem::ModelConfig> configs =
        explicit_cfg ? std::vector<pe::sem::ModelConfig>{cfg} : s->defaults;
    for (const auto& c : configs) {
      pe::lab::Report r = s->run(c, ro, extra);
      if (stable) r.runtime_ms = 0;
      total += r.runtime_ms;
      failed = failed || r.status == pe::lab::Status::Counterexample;
      out_of_bound = out_of_bound || r.status == pe::lab::Status::OutOfBound;
      if (o.format == "json") {
        std::cout << pe::lab::report_json(r).dump() << "\n";
        continue;
      }
      std::printf("%-20s %-15s %-42s %9.1f ms\n", r.theorem_id.c_str(), to_string(r.status),
                  r.config.key().c_str(), r.runtime_ms);
      std::string sum = summarize(r.counts);
      if (!sum.empty()) std::printf("    %s\n", sum.c_str());
      for (const auto& n : r.notes) std::printf("    note: %s\n", n.c_str());
      if (!r.witness.is_null()) std::printf("    witness: %s\n", r.witness.dump().c_str());
    }
  }
  if (o.format != "json" && todo.size() > 1) std::printf("total %.1f ms\n", total);
  if (failed) return kFailure;
  if (out_of_bound) return kOutOfBound;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pe: typechecker, finite-model interpreter and parametricity checker"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_file, "JSON model configuration file");
    sub->add_option("--monad", o.monad, "identity, exception or powerset");
    sub->add_option("--exceptions", o.exceptions, "comma-separated exception names");
    sub->add_option("--bound", o.bound, "largest enumerated carrier");
    sub->add_flag("--include-free-algebras", o.free_algebras, "add free algebras T(n)");
    sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--seed", o.seed, "seed for randomized corpora");
  };

  std::vector<std::string> files;
  auto* check = app.add_subcommand("check", "parse and typecheck .pe files");
  add_common(check);
  check->add_option("files", files, "input files")->required();

  std::string input;
  bool is_term = false;
  auto* elab = app.add_subcommand("elaborate", "print the kernel form of every declaration");
  add_common(elab);
  elab->add_option("input", input, "a .pe file, or a term with --term")->required();
  elab->add_flag("--term", is_term, "treat the input as a term");

  std::string term, defs;
  std::vector<std::string> env_args;
  auto* eval = app.add_subcommand("eval", "evaluate a closed term in the finite model");
  add_common(eval);
  eval->add_option("term", term, "term in surface syntax")->required();
  eval->add_option("--defs", defs, "a .pe file whose definitions are in scope");
  eval->add_option("--env", env_args, "type variable assignment, e.g. A=2 or ^C=T1");

  std::string suite;
  std::size_t count = 0;
  std::vector<std::size_t> arities;
  bool stable = false;
  auto* verify = app.add_subcommand("verify", "run a verification suite (or all)");
  add_common(verify);
  verify->add_option("suite", suite, "suite name or 'all'")->required();
  verify->add_option("--count", count, "number of random terms");
  verify->add_option("--n", arities, "arities for algop");
  verify->add_flag("--stable", stable, "report zero runtimes so output is byte-stable");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*check) return cmd_check(o, files);
    if (*elab) return cmd_elaborate(o, input, is_term);
    if (*eval) return cmd_eval(o, term, defs, env_args);
    if (*verify) return cmd_verify(o, suite, count, arities, stable);
  } catch (const pe::io::ConfigError& e) {
    std::cerr << "pe: " << e.what() << "\n";
    return kUsage;
  } catch (const pe::sem::OutOfBound& e) {
    std::cerr << "pe: out of bound: " << e.what() << "\n";
    return kOutOfBound;
  } catch (const std::invalid_argument& e) {
    std::cerr << "pe: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "pe: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}
