#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pe/finmodel.hpp"
#include "pe/kernel.hpp"
#include "pe/typecheck.hpp"

namespace pe::sem {

// Raised when a computation needs an object or a table beyond the limits of
// the configured finite model.
class OutOfBound : public std::runtime_error {
 public:
  explicit OutOfBound(const std::string& msg) : std::runtime_error(msg) {}
};

struct ModelConfig {
  MonadKind monad = MonadKind::Exception;
  std::vector<std::string> exceptions{"e"};
  std::size_t bound = 2;
  bool include_free_algebras = false;
  // Arities n whose free algebras T(n) join the representatives; empty means
  // 0..min(bound, 2).
  std::vector<std::size_t> free_arities;
  // Largest carrier or relation table the model will materialise.
  std::size_t max_elements = std::size_t{1} << 22;

  fin::MonadSpec monad_spec() const;
  std::string key() const;
};

using ValueId = std::uint32_t;
using CarrierId = std::uint32_t;
using ObjId = std::uint32_t;
using RelId = std::uint32_t;

enum class ValueKind : std::uint8_t { Ground, Fun, Poly };
enum class Sort : std::uint8_t { Set, Alg };

// Semantic values. Ground elements are indices of base carriers; functions
// are tables over an interned domain carrier; polymorphic values have one
// component per representative object of the quantified sort.
struct Value {
  ValueKind kind = ValueKind::Ground;
  std::uint32_t ground = 0;  // Ground index, Poly sort
  CarrierId dom = 0;         // Fun domain
  std::vector<ValueId> items;

  bool operator==(const Value& o) const {
    return kind == o.kind && ground == o.ground && dom == o.dom && items == o.items;
  }
};

struct Carrier {
  std::vector<ValueId> elems;
  std::unordered_map<ValueId, std::uint32_t> index;

  std::size_t size() const { return elems.size(); }
  bool contains(ValueId v) const { return index.count(v) != 0; }
  std::uint32_t index_of(ValueId v) const;
};

using Env = std::map<std::string, ObjId>;

// How the algebra structure of an object is given.
enum class AlgKind : std::uint8_t {
  None,        // a bare set
  Base,        // explicit operation tables on carrier indices
  Structural,  // the interpretation of a computation type: operations are
               // computed from the type (pointwise, componentwise)
};

struct Object {
  CarrierId carrier = 0;
  AlgKind alg = AlgKind::None;
  fin::Alg base;  // Base
  TypePtr type;   // Structural
  Env env;        // Structural, restricted to the free variables of `type`
  std::string label;
};

struct RelBinding {
  ObjId left = 0;
  ObjId right = 0;
  RelId rel = 0;
};
using RelEnv = std::map<std::string, RelBinding>;
using TermEnv = std::map<std::string, ValueId>;
using IsoEnv = std::map<std::string, fin::Table>;

enum class ForallStrategy {
  Auto,       // naive when the candidate product is small, else propagation
  Naive,      // enumerate whole components and filter
  Propagate,  // cell-level constraint propagation
};

struct ModelStats {
  std::uint64_t forall_naive = 0;
  std::uint64_t forall_propagate = 0;
  std::uint64_t csp_nodes = 0;
  std::uint64_t transports = 0;
};

class Model {
 public:
  explicit Model(ModelConfig cfg, ConstantTable consts = {});
  Model(const Model&) = delete;
  Model& operator=(const Model&) = delete;

  const ModelConfig& config() const { return cfg_; }
  const fin::MonadSpec& monad() const { return monad_; }
  const ConstantTable& constants() const { return consts_; }
  void set_constants(ConstantTable consts) { consts_ = std::move(consts); }

  ForallStrategy strategy = ForallStrategy::Auto;
  // Re-project through a second isomorphism whenever one exists and compare.
  bool check_projection_invariance = false;
  const ModelStats& stats() const { return stats_; }

  // Representative objects: sets of size 0..bound; enumerated algebras plus
  // (optionally) free algebras.
  const std::vector<ObjId>& reps(Sort s) const { return s == Sort::Set ? set_reps_ : alg_reps_; }
  std::optional<std::size_t> rep_index(Sort s, ObjId o) const;
  ObjId set_object(std::size_t n);
  ObjId alg_object(const fin::Alg& a, const std::string& label = "");
  // The free algebra T(n) and its unit n -> T(n), as carrier indices.
  std::pair<ObjId, fin::Table> free_algebra(std::size_t n);

  // Values.
  ValueId ground(std::uint32_t i);
  ValueId fun(CarrierId dom, std::vector<ValueId> results);
  ValueId poly(Sort s, std::vector<ValueId> comps);
  const Value& value(ValueId v) const { return values_[v]; }
  const Carrier& carrier(CarrierId c) const { return carriers_[c]; }
  const Object& object(ObjId o) const { return objects_[o]; }
  const Carrier& carrier_of(ObjId o) const { return carriers_[objects_[o].carrier]; }
  CarrierId intern_carrier(std::vector<ValueId> elems);
  ValueId apply(ValueId f, ValueId x) const;
  ValueId component(ValueId p, std::size_t rep) const;

  // Algebra structure.
  bool has_algebra(ObjId o) const { return objects_[o].alg != AlgKind::None; }
  ValueId raise(ObjId o, std::size_t e);
  ValueId join(ObjId o, ValueId a, ValueId b);
  // Operation tables on carrier indices (cached).
  const fin::Alg& materialize(ObjId o);

  // Relations.
  RelId intern_rel(ObjId left, ObjId right, fin::Rel r);
  const fin::Rel& rel(RelId r) const { return rels_[r].rel; }
  ObjId rel_left(RelId r) const { return rels_[r].left; }
  ObjId rel_right(RelId r) const { return rels_[r].right; }
  RelId diagonal(ObjId o);
  // All admissible relations between two representatives of one sort.
  const std::vector<RelId>& rep_relations(Sort s, std::size_t i, std::size_t j);
  RelEnv diagonal_env(const Env& env);
  static Env left_env(const RelEnv& rho);
  static Env right_env(const RelEnv& rho);

  // Types.
  ObjId interp(const Env& env, const TypePtr& t);
  RelId interp_rel(const RelEnv& rho, const TypePtr& t);
  bool related(const RelEnv& rho, const TypePtr& t, ValueId a, ValueId b);

  // Groupoid action of isomorphisms (tables from src to tgt carrier indices).
  ValueId transport(const TypePtr& t, const Env& src, const Env& tgt, const IsoEnv& isos,
                    ValueId v);
  // The component of a polymorphic value at an arbitrary object.
  ValueId instantiate(ValueId p, const TypePtr& forall_type, const Env& env, ObjId target);

  // Terms. `ctx` gives the types of the free term variables in `vals`.
  ValueId eval(const Env& env, const std::vector<Binding>& ctx, const TermEnv& vals,
               const TermPtr& t);
  ValueId eval_closed(const TermPtr& t) { return eval({}, {}, {}, t); }
  ValueId constant_value(const std::string& name);

  std::string show(ValueId v) const;
  std::string describe(ObjId o) const;

 private:
  struct TypeInfo {
    TypePtr keep;
    std::string key;
    std::vector<std::string> ftv;
  };
  struct RelEntry {
    ObjId left, right;
    fin::Rel rel;
  };
  struct ValueHash {
    std::size_t operator()(const Value& v) const;
  };
  struct VecHash {
    std::size_t operator()(const std::vector<ValueId>& v) const;
  };
  struct Iso {
    std::size_t rep;
    fin::Table table;
    std::optional<fin::Table> second;
  };

  const TypeInfo& info(const TypePtr& t);
  std::string env_key(const TypeInfo& ti, const Env& env) const;
  std::string relenv_key(const TypeInfo& ti, const RelEnv& rho) const;
  ObjId new_object(Object o);
  ObjId interp_uncached(const Env& env, const TypePtr& t);
  ObjId interp_function_space(const Env& env, const TypePtr& t);
  ObjId interp_forall(const Env& env, const TypePtr& t);
  double estimate(const Env& env, const TypePtr& t);
  ValueId raise_in(const Env& env, const TypePtr& t, std::size_t e);
  ValueId join_in(const Env& env, const TypePtr& t, ValueId a, ValueId b);
  int compare(ValueId a, ValueId b) const;
  fin::Rel relate_tables(const RelEnv& rho, const TypePtr& t, const std::vector<ValueId>& le,
                         const std::vector<ValueId>& re);
  std::vector<std::vector<ValueId>> forall_naive(const Env& env, const TypePtr& t);
  std::vector<std::vector<ValueId>> forall_propagate(const Env& env, const TypePtr& t);
  bool prefer_naive(const Env& env, const TypePtr& t);
  void check_size(double n, const std::string& what) const;
  const Iso& find_iso(Sort s, ObjId target);
  using HeadTypes = std::unordered_map<const Term*, TypePtr>;
  ValueId eval_in(Env& env, TermEnv& vals, const HeadTypes& heads, const TermPtr& t);
  // Types of subterms, recording the head type of every type application.
  TypePtr synth(std::vector<Binding>& ctx, const TermPtr& t, HeadTypes& heads);
  ValueId make_constant(const ConstantSig& sig);

  ModelConfig cfg_;
  fin::MonadSpec monad_;
  ConstantTable consts_;
  ModelStats stats_;

  std::deque<Value> values_;
  std::unordered_map<Value, ValueId, ValueHash> value_ids_;
  std::deque<Carrier> carriers_;
  std::unordered_map<std::vector<ValueId>, CarrierId, VecHash> carrier_ids_;
  std::deque<Object> objects_;
  std::deque<RelEntry> rels_;
  std::unordered_map<std::string, RelId> rel_ids_;

  std::vector<ObjId> set_reps_, alg_reps_;
  std::map<std::size_t, std::pair<ObjId, fin::Table>> free_;
  std::map<std::size_t, ObjId> set_objects_;

  std::unordered_map<const Type*, TypeInfo> type_info_;
  std::unordered_map<std::string, ObjId> interp_cache_;
  std::unordered_map<std::string, RelId> rel_cache_;
  std::map<std::tuple<int, std::size_t, std::size_t>, std::vector<RelId>> rep_rel_cache_;
  std::unordered_map<ObjId, fin::Alg> materialized_;
  std::unordered_map<ObjId, RelId> diagonals_;
  std::map<std::pair<int, ObjId>, Iso> isos_;
  std::map<std::string, ValueId> constant_cache_;
};

}  // namespace pe::sem
