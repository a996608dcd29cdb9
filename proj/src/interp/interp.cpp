#include "pe/interp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "pe/encodings.hpp"
#include "pe/surface.hpp"

namespace pe::sem {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

Sort binder_sort(const Type& t) {
  return t.tag == TypeTag::ForallC ? Sort::Alg : Sort::Set;
}

Sort binder_sort(const Term& t) {
  return t.tag == TermTag::TyLamC ? Sort::Alg : Sort::Set;
}

fin::Table invert(const fin::Table& t) {
  fin::Table inv(t.size());
  for (std::uint32_t i = 0; i < t.size(); ++i) inv[t[i]] = i;
  return inv;
}

}  // namespace

fin::MonadSpec ModelConfig::monad_spec() const {
  switch (monad) {
    case MonadKind::Identity:
      return fin::MonadSpec::identity();
    case MonadKind::Exception:
      return fin::MonadSpec::exception(exceptions);
    case MonadKind::Powerset:
      return fin::MonadSpec::powerset();
  }
  throw std::logic_error("unknown monad");
}

std::string ModelConfig::key() const {
  std::string k = monad_spec().key() + ",bound=" + std::to_string(bound);
  if (include_free_algebras) {
    k += ",free";
    for (std::size_t n : free_arities) k += ":" + std::to_string(n);
  }
  return k;
}

std::uint32_t Carrier::index_of(ValueId v) const {
  auto it = index.find(v);
  if (it == index.end()) throw std::logic_error("value is not an element of the carrier");
  return it->second;
}

std::size_t Model::ValueHash::operator()(const Value& v) const {
  std::size_t h = mix(static_cast<std::size_t>(v.kind), v.ground);
  h = mix(h, v.dom);
  for (ValueId i : v.items) h = mix(h, i);
  return h;
}

std::size_t Model::VecHash::operator()(const std::vector<ValueId>& v) const {
  std::size_t h = v.size();
  for (ValueId i : v) h = mix(h, i);
  return h;
}

Model::Model(ModelConfig cfg, ConstantTable consts)
    : cfg_(std::move(cfg)), monad_(cfg_.monad_spec()), consts_(std::move(consts)) {
  for (std::size_t n = 0; n <= cfg_.bound; ++n) set_reps_.push_back(set_object(n));

  std::vector<ObjId> algs;
  auto add = [&](ObjId o) {
    if (std::find(algs.begin(), algs.end(), o) == algs.end()) algs.push_back(o);
  };
  std::size_t idx = 0;
  for (const fin::Alg& a : fin::enumerate_algebras(monad_, fin::Bound{cfg_.bound}))
    add(alg_object(a, "A" + std::to_string(idx++)));
  if (cfg_.include_free_algebras) {
    std::vector<std::size_t> arities = cfg_.free_arities;
    if (arities.empty())
      for (std::size_t n = 0; n <= std::min<std::size_t>(cfg_.bound, 2); ++n) arities.push_back(n);
    for (std::size_t n : arities) add(free_algebra(n).first);
  }
  std::stable_sort(algs.begin(), algs.end(), [&](ObjId a, ObjId b) {
    return carrier_of(a).size() < carrier_of(b).size();
  });
  alg_reps_ = algs;
}

std::optional<std::size_t> Model::rep_index(Sort s, ObjId o) const {
  const auto& r = reps(s);
  auto it = std::find(r.begin(), r.end(), o);
  if (it == r.end()) return std::nullopt;
  return static_cast<std::size_t>(it - r.begin());
}

ObjId Model::new_object(Object o) {
  objects_.push_back(std::move(o));
  return static_cast<ObjId>(objects_.size() - 1);
}

ObjId Model::set_object(std::size_t n) {
  auto it = set_objects_.find(n);
  if (it != set_objects_.end()) return it->second;
  std::vector<ValueId> elems;
  for (std::uint32_t i = 0; i < n; ++i) elems.push_back(ground(i));
  Object o;
  o.carrier = intern_carrier(std::move(elems));
  o.label = "S" + std::to_string(n);
  ObjId id = new_object(std::move(o));
  set_objects_[n] = id;
  return id;
}

ObjId Model::alg_object(const fin::Alg& a, const std::string& label) {
  for (ObjId o = 0; o < objects_.size(); ++o)
    if (objects_[o].alg == AlgKind::Base && objects_[o].base.same_structure(a)) return o;
  std::vector<ValueId> elems;
  for (std::uint32_t i = 0; i < a.size; ++i) elems.push_back(ground(i));
  Object o;
  o.carrier = intern_carrier(std::move(elems));
  o.alg = AlgKind::Base;
  o.base = a;
  o.label = label.empty() ? "A" + std::to_string(objects_.size()) : label;
  return new_object(std::move(o));
}

std::pair<ObjId, fin::Table> Model::free_algebra(std::size_t n) {
  auto it = free_.find(n);
  if (it != free_.end()) return it->second;
  fin::FreeAlgebra f = fin::free_algebra(monad_, n);
  ObjId o = alg_object(f.alg, "T" + std::to_string(n));
  free_[n] = {o, f.unit};
  return free_[n];
}

ValueId Model::ground(std::uint32_t i) {
  Value v;
  v.kind = ValueKind::Ground;
  v.ground = i;
  auto it = value_ids_.find(v);
  if (it != value_ids_.end()) return it->second;
  values_.push_back(v);
  ValueId id = static_cast<ValueId>(values_.size() - 1);
  value_ids_.emplace(std::move(v), id);
  return id;
}

ValueId Model::fun(CarrierId dom, std::vector<ValueId> results) {
  if (results.size() != carriers_[dom].size())
    throw std::logic_error("function table does not match its domain");
  Value v;
  v.kind = ValueKind::Fun;
  v.dom = dom;
  v.items = std::move(results);
  auto it = value_ids_.find(v);
  if (it != value_ids_.end()) return it->second;
  values_.push_back(v);
  ValueId id = static_cast<ValueId>(values_.size() - 1);
  value_ids_.emplace(std::move(v), id);
  return id;
}

ValueId Model::poly(Sort s, std::vector<ValueId> comps) {
  Value v;
  v.kind = ValueKind::Poly;
  v.ground = static_cast<std::uint32_t>(s);
  v.items = std::move(comps);
  auto it = value_ids_.find(v);
  if (it != value_ids_.end()) return it->second;
  values_.push_back(v);
  ValueId id = static_cast<ValueId>(values_.size() - 1);
  value_ids_.emplace(std::move(v), id);
  return id;
}

CarrierId Model::intern_carrier(std::vector<ValueId> elems) {
  auto it = carrier_ids_.find(elems);
  if (it != carrier_ids_.end()) return it->second;
  Carrier c;
  c.elems = elems;
  for (std::uint32_t i = 0; i < elems.size(); ++i) c.index.emplace(elems[i], i);
  carriers_.push_back(std::move(c));
  CarrierId id = static_cast<CarrierId>(carriers_.size() - 1);
  carrier_ids_.emplace(std::move(elems), id);
  return id;
}

ValueId Model::apply(ValueId f, ValueId x) const {
  const Value& fv = values_[f];
  if (fv.kind != ValueKind::Fun) throw std::logic_error("applying a non-function value");
  return fv.items[carriers_[fv.dom].index_of(x)];
}

ValueId Model::component(ValueId p, std::size_t rep) const {
  const Value& pv = values_[p];
  if (pv.kind != ValueKind::Poly) throw std::logic_error("projecting a non-polymorphic value");
  return pv.items.at(rep);
}

int Model::compare(ValueId a, ValueId b) const {
  if (a == b) return 0;
  const Value& x = values_[a];
  const Value& y = values_[b];
  if (x.kind != y.kind) return x.kind < y.kind ? -1 : 1;
  if (x.kind == ValueKind::Ground || x.ground != y.ground) return x.ground < y.ground ? -1 : 1;
  std::size_t n = std::min(x.items.size(), y.items.size());
  for (std::size_t i = 0; i < n; ++i)
    if (int c = compare(x.items[i], y.items[i])) return c;
  if (x.items.size() != y.items.size()) return x.items.size() < y.items.size() ? -1 : 1;
  if (x.dom != y.dom) return x.dom < y.dom ? -1 : 1;
  return 0;
}

// ---------------------------------------------------------------------------
// Algebra structure

ValueId Model::raise_in(const Env& env, const TypePtr& t, std::size_t e) {
  switch (t->tag) {
    case TypeTag::CVar:
    case TypeTag::VVar:
      return raise(env.at(t->name), e);
    case TypeTag::Arrow: {
      ObjId d = interp(env, t->dom);
      ValueId r = raise_in(env, t->cod, e);
      return fun(objects_[d].carrier, std::vector<ValueId>(carrier_of(d).size(), r));
    }
    case TypeTag::ForallV:
    case TypeTag::ForallC: {
      Sort s = binder_sort(*t);
      std::vector<ValueId> comps;
      Env inner = env;
      for (ObjId r : reps(s)) {
        inner[t->name] = r;
        comps.push_back(raise_in(inner, t->cod, e));
      }
      return poly(s, std::move(comps));
    }
    case TypeTag::Lolli:
      break;
  }
  throw std::logic_error("raise on a value type");
}

ValueId Model::join_in(const Env& env, const TypePtr& t, ValueId a, ValueId b) {
  switch (t->tag) {
    case TypeTag::CVar:
    case TypeTag::VVar:
      return join(env.at(t->name), a, b);
    case TypeTag::Arrow: {
      const Value& fa = values_[a];
      CarrierId dom = fa.dom;
      std::vector<ValueId> xs = fa.items, ys = values_[b].items;
      std::vector<ValueId> out;
      for (std::size_t i = 0; i < xs.size(); ++i) out.push_back(join_in(env, t->cod, xs[i], ys[i]));
      return fun(dom, std::move(out));
    }
    case TypeTag::ForallV:
    case TypeTag::ForallC: {
      Sort s = binder_sort(*t);
      std::vector<ValueId> xs = values_[a].items, ys = values_[b].items;
      std::vector<ValueId> comps;
      Env inner = env;
      for (std::size_t k = 0; k < reps(s).size(); ++k) {
        inner[t->name] = reps(s)[k];
        comps.push_back(join_in(inner, t->cod, xs[k], ys[k]));
      }
      return poly(s, std::move(comps));
    }
    case TypeTag::Lolli:
      break;
  }
  throw std::logic_error("join on a value type");
}

ValueId Model::raise(ObjId o, std::size_t e) {
  const Object& ob = objects_[o];
  switch (ob.alg) {
    case AlgKind::Base:
      return carrier_of(o).elems[ob.base.raise.at(e)];
    case AlgKind::Structural: {
      TypePtr t = ob.type;
      Env env = ob.env;
      return raise_in(env, t, e);
    }
    case AlgKind::None:
      break;
  }
  throw std::logic_error("raise on an object without algebra structure");
}

ValueId Model::join(ObjId o, ValueId a, ValueId b) {
  const Object& ob = objects_[o];
  switch (ob.alg) {
    case AlgKind::Base: {
      const Carrier& c = carrier_of(o);
      return c.elems[ob.base.op_join(c.index_of(a), c.index_of(b))];
    }
    case AlgKind::Structural: {
      TypePtr t = ob.type;
      Env env = ob.env;
      return join_in(env, t, a, b);
    }
    case AlgKind::None:
      break;
  }
  throw std::logic_error("join on an object without algebra structure");
}

const fin::Alg& Model::materialize(ObjId o) {
  auto it = materialized_.find(o);
  if (it != materialized_.end()) return it->second;
  if (objects_[o].alg == AlgKind::None)
    throw std::logic_error("materialising an object without algebra structure");
  if (objects_[o].alg == AlgKind::Base) return materialized_[o] = objects_[o].base;
  fin::Alg a;
  std::vector<ValueId> elems = carrier_of(o).elems;
  a.size = elems.size();
  for (std::size_t e = 0; e < monad_.num_exceptions(); ++e)
    a.raise.push_back(carrier_of(o).index_of(raise(o, e)));
  if (monad_.kind() == MonadKind::Powerset) {
    a.join.assign(a.size * a.size, 0);
    for (std::size_t x = 0; x < a.size; ++x)
      for (std::size_t y = x; y < a.size; ++y) {
        std::uint32_t z = carrier_of(o).index_of(join(o, elems[x], elems[y]));
        a.join[x * a.size + y] = a.join[y * a.size + x] = z;
      }
  }
  return materialized_[o] = std::move(a);
}

// ---------------------------------------------------------------------------
// Relations

RelId Model::intern_rel(ObjId left, ObjId right, fin::Rel r) {
  std::string key = std::to_string(left) + ":" + std::to_string(right) + ":";
  for (std::uint64_t w : r.pairs.words()) key += std::to_string(w) + ",";
  auto it = rel_ids_.find(key);
  if (it != rel_ids_.end()) return it->second;
  rels_.push_back(RelEntry{left, right, std::move(r)});
  RelId id = static_cast<RelId>(rels_.size() - 1);
  rel_ids_.emplace(std::move(key), id);
  return id;
}

RelId Model::diagonal(ObjId o) {
  auto it = diagonals_.find(o);
  if (it != diagonals_.end()) return it->second;
  RelId r = intern_rel(o, o, fin::diagonal(carrier_of(o).size()));
  diagonals_[o] = r;
  return r;
}

const std::vector<RelId>& Model::rep_relations(Sort s, std::size_t i, std::size_t j) {
  auto key = std::make_tuple(static_cast<int>(s), i, j);
  auto it = rep_rel_cache_.find(key);
  if (it != rep_rel_cache_.end()) return it->second;
  ObjId a = reps(s).at(i), b = reps(s).at(j);
  std::vector<fin::Rel> rs;
  if (s == Sort::Set) {
    std::size_t n = carrier_of(a).size(), m = carrier_of(b).size();
    if (n * m > 20)
      throw OutOfBound("too many relations between sets of sizes " + std::to_string(n) + " and " +
                       std::to_string(m));
    rs = fin::enumerate_set_relations(n, m);
  } else {
    rs = fin::enumerate_admissible_relations(materialize(a), materialize(b));
  }
  std::vector<RelId> ids;
  for (auto& r : rs) ids.push_back(intern_rel(a, b, std::move(r)));
  return rep_rel_cache_[key] = std::move(ids);
}

RelEnv Model::diagonal_env(const Env& env) {
  RelEnv rho;
  for (const auto& [x, o] : env) rho[x] = RelBinding{o, o, diagonal(o)};
  return rho;
}

Env Model::left_env(const RelEnv& rho) {
  Env e;
  for (const auto& [x, b] : rho) e[x] = b.left;
  return e;
}

Env Model::right_env(const RelEnv& rho) {
  Env e;
  for (const auto& [x, b] : rho) e[x] = b.right;
  return e;
}

// ---------------------------------------------------------------------------
// Types

const Model::TypeInfo& Model::info(const TypePtr& t) {
  auto it = type_info_.find(t.get());
  if (it != type_info_.end()) return it->second;
  TypeInfo ti;
  ti.keep = t;
  ti.key = type_key(t);
  for (const auto& v : free_type_vars(t)) ti.ftv.push_back(v);
  return type_info_[t.get()] = std::move(ti);
}

std::string Model::env_key(const TypeInfo& ti, const Env& env) const {
  std::string k = ti.key + "|";
  for (const auto& v : ti.ftv) {
    auto it = env.find(v);
    if (it == env.end()) throw std::invalid_argument("unbound type variable " + v);
    k += v + "=" + std::to_string(it->second) + ";";
  }
  return k;
}

std::string Model::relenv_key(const TypeInfo& ti, const RelEnv& rho) const {
  std::string k = ti.key + "|";
  for (const auto& v : ti.ftv) {
    auto it = rho.find(v);
    if (it == rho.end()) throw std::invalid_argument("unbound type variable " + v);
    k += v + "=" + std::to_string(it->second.left) + "," + std::to_string(it->second.right) +
         "," + std::to_string(it->second.rel) + ";";
  }
  return k;
}

void Model::check_size(double n, const std::string& what) const {
  if (n <= static_cast<double>(cfg_.max_elements)) return;
  std::ostringstream os;
  if (std::isinf(n))
    os << "unboundedly many";
  else
    os << std::setprecision(3) << n;
  throw OutOfBound(what + " would need " + os.str() + " elements (limit " +
                   std::to_string(cfg_.max_elements) + ")");
}

ObjId Model::interp(const Env& env, const TypePtr& t) {
  if (t->tag == TypeTag::VVar || t->tag == TypeTag::CVar) {
    auto it = env.find(t->name);
    if (it == env.end()) throw std::invalid_argument("unbound type variable " + t->name);
    return it->second;
  }
  const TypeInfo& ti = info(t);
  std::string key = env_key(ti, env);
  auto it = interp_cache_.find(key);
  if (it != interp_cache_.end()) return it->second;
  ObjId o = interp_uncached(env, t);
  interp_cache_[key] = o;
  return o;
}

ObjId Model::interp_uncached(const Env& env, const TypePtr& t) {
  ObjId o = (t->tag == TypeTag::Arrow || t->tag == TypeTag::Lolli) ? interp_function_space(env, t)
                                                                    : interp_forall(env, t);
  Object& ob = objects_[o];
  ob.type = t;
  for (const auto& v : info(t).ftv) ob.env[v] = env.at(v);
  if (is_computation(t)) ob.alg = AlgKind::Structural;
  return o;
}

ObjId Model::interp_function_space(const Env& env, const TypePtr& t) {
  ObjId d = interp(env, t->dom);
  ObjId c = interp(env, t->cod);
  CarrierId dc = objects_[d].carrier;
  std::vector<ValueId> dom_elems = carrier_of(d).elems;
  std::vector<ValueId> cod_elems = carrier_of(c).elems;
  std::vector<ValueId> elems;
  if (t->tag == TypeTag::Arrow) {
    double count = std::pow(static_cast<double>(cod_elems.size()), dom_elems.size());
    check_size(count * std::max<std::size_t>(1, dom_elems.size()), "function space");
    std::size_t n = dom_elems.size(), m = cod_elems.size();
    if (m > 0 || n == 0) {
      std::vector<std::uint32_t> digits(n, 0);
      for (;;) {
        std::vector<ValueId> items(n);
        for (std::size_t i = 0; i < n; ++i) items[i] = cod_elems[digits[i]];
        elems.push_back(fun(dc, std::move(items)));
        std::size_t i = 0;
        while (i < n && ++digits[i] == m) digits[i++] = 0;
        if (i == n) break;
      }
    }
  } else {
    double bound = std::pow(static_cast<double>(cod_elems.size()), dom_elems.size());
    if (bound > static_cast<double>(cfg_.max_elements)) check_size(bound, "homomorphism space");
    for (const fin::Table& h : fin::enumerate_homs(materialize(d), materialize(c))) {
      std::vector<ValueId> items(h.size());
      for (std::size_t i = 0; i < h.size(); ++i) items[i] = cod_elems[h[i]];
      elems.push_back(fun(dc, std::move(items)));
    }
  }
  Object o;
  o.carrier = intern_carrier(std::move(elems));
  return new_object(std::move(o));
}

double Model::estimate(const Env& env, const TypePtr& t) {
  switch (t->tag) {
    case TypeTag::VVar:
    case TypeTag::CVar:
      return static_cast<double>(carrier_of(env.at(t->name)).size());
    case TypeTag::Arrow:
    case TypeTag::Lolli:
      return std::pow(estimate(env, t->cod), estimate(env, t->dom));
    case TypeTag::ForallV:
    case TypeTag::ForallC: {
      double p = 1;
      Env inner = env;
      for (ObjId r : reps(binder_sort(*t))) {
        inner[t->name] = r;
        p *= estimate(inner, t->cod);
      }
      return p;
    }
  }
  return INFINITY;
}

bool Model::prefer_naive(const Env& env, const TypePtr& t) {
  double product = 1;
  Env inner = env;
  for (ObjId r : reps(binder_sort(*t))) {
    inner[t->name] = r;
    double s = estimate(inner, t->cod);
    if (s > 512) return false;
    product *= s;
  }
  return product <= 1e6;
}

ObjId Model::interp_forall(const Env& env, const TypePtr& t) {
  bool naive = strategy == ForallStrategy::Naive ||
               (strategy == ForallStrategy::Auto && prefer_naive(env, t));
  std::vector<std::vector<ValueId>> sols = naive ? forall_naive(env, t) : forall_propagate(env, t);
  Sort s = binder_sort(*t);
  std::vector<ValueId> elems;
  elems.reserve(sols.size());
  for (auto& comps : sols) elems.push_back(poly(s, std::move(comps)));
  std::sort(elems.begin(), elems.end(), [&](ValueId a, ValueId b) { return compare(a, b) < 0; });
  Object o;
  o.carrier = intern_carrier(std::move(elems));
  return new_object(std::move(o));
}

std::vector<std::vector<ValueId>> Model::forall_naive(const Env& env, const TypePtr& t) {
  ++stats_.forall_naive;
  Sort s = binder_sort(*t);
  const std::vector<ObjId> rs = reps(s);
  std::size_t k = rs.size();
  Env outer;
  for (const auto& v : info(t).ftv) outer[v] = env.at(v);
  RelEnv base = diagonal_env(outer);

  std::vector<std::vector<ValueId>> comps(k);
  Env inner = outer;
  for (std::size_t i = 0; i < k; ++i) {
    inner[t->name] = rs[i];
    ObjId o = interp(inner, t->cod);
    comps[i] = carrier_of(o).elems;
  }
  // allowed[i][j]: pairs related by the body at every admissible relation.
  std::vector<std::vector<fin::Rel>> allowed(k, std::vector<fin::Rel>(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      fin::Rel acc = fin::full_relation(comps[i].size(), comps[j].size());
      for (RelId r : rep_relations(s, i, j)) {
        RelEnv rho = base;
        rho[t->name] = RelBinding{rs[i], rs[j], r};
        acc = fin::intersection(acc, rel(interp_rel(rho, t->cod)));
      }
      allowed[i][j] = std::move(acc);
    }

  std::vector<std::vector<ValueId>> out;
  std::vector<std::uint32_t> choice(k, 0);
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == k) {
      std::vector<ValueId> sol(k);
      for (std::size_t j = 0; j < k; ++j) sol[j] = comps[j][choice[j]];
      out.push_back(std::move(sol));
      check_size(static_cast<double>(out.size()), "parametric subset");
      return;
    }
    for (std::uint32_t c = 0; c < comps[i].size(); ++c) {
      if (!allowed[i][i].contains(c, c)) continue;
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j)
        ok = allowed[j][i].contains(choice[j], c) && allowed[i][j].contains(c, choice[j]);
      if (!ok) continue;
      choice[i] = c;
      go(i + 1);
    }
  };
  go(0);
  return out;
}

namespace {

struct Ternary {
  std::uint32_t a, b, c;  // value at c must equal join(value at a, value at b)
  std::uint32_t rep;
};

struct Binary {
  std::uint32_t i, j;
  fin::Rel rel;
};

}  // namespace

std::vector<std::vector<ValueId>> Model::forall_propagate(const Env& env, const TypePtr& t) {
  ++stats_.forall_propagate;
  Sort s = binder_sort(*t);
  const std::vector<ObjId> rs = reps(s);
  std::size_t k = rs.size();
  Env outer;
  for (const auto& v : info(t).ftv) outer[v] = env.at(v);
  RelEnv base = diagonal_env(outer);

  // Spine of the body: A1 => ... => An => Y.
  std::vector<TypePtr> args;
  std::vector<bool> linear;
  TypePtr y = t->cod;
  while (y->tag == TypeTag::Arrow || y->tag == TypeTag::Lolli) {
    args.push_back(y->dom);
    linear.push_back(y->tag == TypeTag::Lolli);
    y = y->cod;
  }
  std::size_t n = args.size();

  struct RepData {
    std::vector<ObjId> arg_objs;
    std::vector<std::size_t> sizes, radix;
    ObjId y = 0;
    std::size_t cells = 0, first = 0;
  };
  std::vector<RepData> data(k);
  std::size_t total = 0;
  Env inner = outer;
  for (std::size_t r = 0; r < k; ++r) {
    inner[t->name] = rs[r];
    RepData& d = data[r];
    double cells = 1;
    for (const TypePtr& a : args) {
      d.arg_objs.push_back(interp(inner, a));
      d.sizes.push_back(carrier_of(d.arg_objs.back()).size());
      cells *= static_cast<double>(d.sizes.back());
    }
    check_size(cells, "argument table");
    d.radix.assign(n, 1);
    for (std::size_t i = n; i-- > 1;) d.radix[i - 1] = d.radix[i] * d.sizes[i];
    d.cells = static_cast<std::size_t>(cells);
    d.y = interp(inner, y);
    d.first = total;
    total += d.cells;
  }
  check_size(static_cast<double>(total), "constraint problem");

  std::vector<std::uint32_t> cell_rep(total);
  std::vector<fin::Bitset> domain(total);
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t c = 0; c < data[r].cells; ++c) {
      cell_rep[data[r].first + c] = static_cast<std::uint32_t>(r);
      domain[data[r].first + c] = fin::Bitset(carrier_of(data[r].y).size(), true);
    }

  // Relational constraints.
  std::unordered_map<std::uint64_t, std::size_t> binary_index;
  std::vector<Binary> binaries;
  for (std::size_t r1 = 0; r1 < k; ++r1)
    for (std::size_t r2 = 0; r2 < k; ++r2)
      for (RelId rid : rep_relations(s, r1, r2)) {
        RelEnv rho = base;
        rho[t->name] = RelBinding{rs[r1], rs[r2], rid};
        std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> arg_pairs;
        bool empty = false;
        for (const TypePtr& a : args) {
          arg_pairs.push_back(rel(interp_rel(rho, a)).list());
          if (arg_pairs.back().empty()) empty = true;
        }
        if (empty) continue;
        const fin::Rel& ry = rel(interp_rel(rho, y));
        std::vector<std::size_t> digit(n, 0);
        for (;;) {
          std::size_t c1 = data[r1].first, c2 = data[r2].first;
          for (std::size_t i = 0; i < n; ++i) {
            c1 += arg_pairs[i][digit[i]].first * data[r1].radix[i];
            c2 += arg_pairs[i][digit[i]].second * data[r2].radix[i];
          }
          if (c1 == c2) {
            fin::Bitset diag(ry.left);
            for (std::size_t v = 0; v < ry.left; ++v)
              if (ry.contains(v, v)) diag.set(v);
            domain[c1] &= diag;
          } else {
            std::uint64_t key = (static_cast<std::uint64_t>(c1) << 32) | c2;
            auto it = binary_index.find(key);
            if (it == binary_index.end()) {
              binary_index.emplace(key, binaries.size());
              binaries.push_back(Binary{static_cast<std::uint32_t>(c1),
                                        static_cast<std::uint32_t>(c2), ry});
            } else {
              binaries[it->second].rel = fin::intersection(binaries[it->second].rel, ry);
            }
          }
          std::size_t i = 0;
          while (i < n && ++digit[i] == arg_pairs[i].size()) digit[i++] = 0;
          if (i == n) break;
        }
      }

  // Linear positions: the function must be a homomorphism in that argument.
  std::vector<Ternary> ternaries;
  for (std::size_t p = 0; p < n; ++p) {
    if (!linear[p]) continue;
    for (std::size_t r = 0; r < k; ++r) {
      const RepData& d = data[r];
      const fin::Alg ap = materialize(d.arg_objs[p]);
      const fin::Alg ay = materialize(d.y);
      std::vector<std::size_t> digit(n, 0);
      for (;;) {
        std::size_t rest = d.first;
        for (std::size_t i = 0; i < n; ++i)
          if (i != p) rest += digit[i] * d.radix[i];
        for (std::size_t e = 0; e < ap.raise.size(); ++e) {
          std::size_t c = rest + ap.raise[e] * d.radix[p];
          fin::Bitset only(ay.size);
          only.set(ay.raise[e]);
          domain[c] &= only;
        }
        if (monad_.kind() == MonadKind::Powerset)
          for (std::uint32_t x = 0; x < ap.size; ++x)
            for (std::uint32_t z = x + 1; z < ap.size; ++z)
              ternaries.push_back(Ternary{static_cast<std::uint32_t>(rest + x * d.radix[p]),
                                          static_cast<std::uint32_t>(rest + z * d.radix[p]),
                                          static_cast<std::uint32_t>(
                                              rest + ap.op_join(x, z) * d.radix[p]),
                                          static_cast<std::uint32_t>(r)});
        std::size_t i = 0;
        while (i < n) {
          if (i == p) {
            ++i;
            continue;
          }
          if (++digit[i] < d.sizes[i]) break;
          digit[i++] = 0;
        }
        if (i >= n) break;
      }
    }
  }

  std::vector<std::vector<ValueId>> out;
  for (const fin::Bitset& d : domain)
    if (d.none()) return out;

  std::vector<const fin::Alg*> yalg(k, nullptr);
  if (!ternaries.empty())
    for (std::size_t r = 0; r < k; ++r) yalg[r] = &materialize(data[r].y);

  // Adjacency.
  std::vector<std::vector<std::uint32_t>> adj(total), tern_of(total);
  for (std::uint32_t b = 0; b < binaries.size(); ++b) {
    adj[binaries[b].i].push_back(b);
    adj[binaries[b].j].push_back(b);
  }
  for (std::uint32_t q = 0; q < ternaries.size(); ++q) {
    const Ternary& tc = ternaries[q];
    tern_of[tc.a].push_back(q);
    if (tc.b != tc.a) tern_of[tc.b].push_back(q);
    if (tc.c != tc.a && tc.c != tc.b) tern_of[tc.c].push_back(q);
  }

  // Arc consistency on the binary constraints before search.
  auto revise = [&](std::uint32_t x, std::uint32_t other, const fin::Rel& r, bool x_left) {
    bool changed = false;
    for (std::size_t v = domain[x].next(0); v < domain[x].size(); v = domain[x].next(v + 1)) {
      bool support = false;
      for (std::size_t w = domain[other].next(0); w < domain[other].size() && !support;
           w = domain[other].next(w + 1))
        support = x_left ? r.contains(v, w) : r.contains(w, v);
      if (!support) {
        domain[x].reset(v);
        changed = true;
      }
    }
    return changed;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (const Binary& b : binaries) {
      changed |= revise(b.i, b.j, b.rel, true);
      changed |= revise(b.j, b.i, b.rel, false);
      if (domain[b.i].none() || domain[b.j].none()) return out;
    }
  }

  std::vector<std::int64_t> value(total, -1);
  std::vector<std::pair<std::uint32_t, fin::Bitset>> trail;
  auto restrict_to = [&](std::uint32_t x, const fin::Bitset& keep) {
    fin::Bitset next = domain[x];
    next &= keep;
    if (next == domain[x]) return true;
    trail.emplace_back(x, domain[x]);
    domain[x] = std::move(next);
    return domain[x].any();
  };
  auto propagate = [&](std::uint32_t x) {
    std::uint32_t v = static_cast<std::uint32_t>(value[x]);
    for (std::uint32_t b : adj[x]) {
      const Binary& bc = binaries[b];
      bool left = bc.i == x;
      std::uint32_t other = left ? bc.j : bc.i;
      if (value[other] >= 0) {
        bool ok = left ? bc.rel.contains(v, value[other]) : bc.rel.contains(value[other], v);
        if (!ok) return false;
        continue;
      }
      fin::Bitset keep(domain[other].size());
      for (std::size_t w = domain[other].next(0); w < domain[other].size();
           w = domain[other].next(w + 1))
        if (left ? bc.rel.contains(v, w) : bc.rel.contains(w, v)) keep.set(w);
      if (!restrict_to(other, keep)) return false;
    }
    for (std::uint32_t q : tern_of[x]) {
      const Ternary& tc = ternaries[q];
      const fin::Alg& ya = *yalg[tc.rep];
      std::uint32_t cells[3] = {tc.a, tc.b, tc.c};
      std::int64_t unassigned = -1;
      bool two = false;
      for (std::uint32_t c : cells)
        if (value[c] < 0) {
          if (unassigned >= 0 && unassigned != c) two = true;
          unassigned = c;
        }
      if (two) continue;
      auto holds = [&](std::int64_t u, std::uint32_t val) {
        auto at = [&](std::uint32_t c) {
          return c == u ? val : static_cast<std::uint32_t>(value[c]);
        };
        return ya.op_join(at(tc.a), at(tc.b)) == at(tc.c);
      };
      if (unassigned < 0) {
        if (!holds(-1, 0)) return false;
        continue;
      }
      std::uint32_t u = static_cast<std::uint32_t>(unassigned);
      fin::Bitset keep(domain[u].size());
      for (std::size_t w = domain[u].next(0); w < domain[u].size(); w = domain[u].next(w + 1))
        if (holds(u, static_cast<std::uint32_t>(w))) keep.set(w);
      if (!restrict_to(u, keep)) return false;
    }
    return true;
  };

  auto emit = [&]() {
    std::vector<ValueId> comps(k);
    for (std::size_t r = 0; r < k; ++r) {
      const RepData& d = data[r];
      const Carrier& yc = carrier_of(d.y);
      std::function<ValueId(std::size_t, std::size_t)> build = [&](std::size_t level,
                                                                   std::size_t offset) {
        if (level == n) return yc.elems[value[d.first + offset]];
        std::vector<ValueId> items(d.sizes[level]);
        for (std::size_t j = 0; j < d.sizes[level]; ++j)
          items[j] = build(level + 1, offset + j * d.radix[level]);
        return fun(objects_[d.arg_objs[level]].carrier, std::move(items));
      };
      comps[r] = build(0, 0);
    }
    out.push_back(std::move(comps));
    check_size(static_cast<double>(out.size()), "parametric subset");
  };

  std::function<void(std::size_t)> search = [&](std::size_t assigned) {
    ++stats_.csp_nodes;
    if (assigned == total) {
      emit();
      return;
    }
    std::uint32_t best = 0;
    std::size_t best_count = SIZE_MAX;
    for (std::uint32_t c = 0; c < total; ++c)
      if (value[c] < 0) {
        std::size_t cnt = domain[c].count();
        if (cnt < best_count) {
          best = c;
          best_count = cnt;
          if (cnt <= 1) break;
        }
      }
    fin::Bitset options = domain[best];
    for (std::size_t v = options.next(0); v < options.size(); v = options.next(v + 1)) {
      std::size_t mark = trail.size();
      value[best] = static_cast<std::int64_t>(v);
      if (propagate(best)) search(assigned + 1);
      value[best] = -1;
      while (trail.size() > mark) {
        domain[trail.back().first] = std::move(trail.back().second);
        trail.pop_back();
      }
    }
  };
  search(0);
  return out;
}

RelId Model::interp_rel(const RelEnv& rho, const TypePtr& t) {
  if (t->tag == TypeTag::VVar || t->tag == TypeTag::CVar) {
    auto it = rho.find(t->name);
    if (it == rho.end()) throw std::invalid_argument("unbound type variable " + t->name);
    return it->second.rel;
  }
  const TypeInfo& ti = info(t);
  std::string key = relenv_key(ti, rho);
  auto it = rel_cache_.find(key);
  if (it != rel_cache_.end()) return it->second;
  ObjId l = interp(left_env(rho), t);
  ObjId r = interp(right_env(rho), t);
  std::vector<ValueId> le = carrier_of(l).elems, re = carrier_of(r).elems;
  check_size(static_cast<double>(le.size()) * static_cast<double>(re.size()), "relation table");
  fin::Rel out = relate_tables(rho, t, le, re);
  RelId id = intern_rel(l, r, std::move(out));
  rel_cache_[key] = id;
  return id;
}

// The relation table of a compound type, computed from the tables of its
// parts. Parts whose tables would be too large fall back to `related`.
fin::Rel Model::relate_tables(const RelEnv& rho, const TypePtr& t, const std::vector<ValueId>& le,
                              const std::vector<ValueId>& re) {
  fin::Rel out(le.size(), re.size());
  // A part's table pays off when it is not much larger than the number of
  // pairs that will be looked up in it.
  auto size_hint = [&](const Env& e, const TypePtr& u) {
    if (u->tag == TypeTag::VVar || u->tag == TypeTag::CVar)
      return static_cast<double>(carrier_of(e.at(u->name)).size());
    auto it = interp_cache_.find(env_key(info(u), e));
    if (it != interp_cache_.end()) return static_cast<double>(carrier_of(it->second).size());
    return estimate(e, u);
  };
  auto small = [&](const RelEnv& r, const TypePtr& u, double lookups) {
    double ab = size_hint(left_env(r), u) * size_hint(right_env(r), u);
    return ab <= static_cast<double>(cfg_.max_elements) && ab <= 4 * lookups;
  };
  auto pointwise = [&]() {
    for (std::size_t i = 0; i < le.size(); ++i)
      for (std::size_t j = 0; j < re.size(); ++j)
        if (related(rho, t, le[i], re[j])) out.insert(i, j);
  };
  switch (t->tag) {
    case TypeTag::Arrow:
    case TypeTag::Lolli: {
      double lookups = static_cast<double>(le.size()) * static_cast<double>(re.size());
      if (!small(rho, t->cod, lookups)) {
        pointwise();
        break;
      }
      RelId rd = interp_rel(rho, t->dom);
      RelId rc = interp_rel(rho, t->cod);
      const auto dom_pairs = rels_[rd].rel.list();
      const Carrier& dl = carrier_of(rels_[rd].left);
      const Carrier& dr = carrier_of(rels_[rd].right);
      const Carrier& cl = carrier_of(rels_[rc].left);
      const Carrier& cr = carrier_of(rels_[rc].right);
      const fin::Rel& cod = rels_[rc].rel;
      for (std::size_t i = 0; i < le.size(); ++i)
        for (std::size_t j = 0; j < re.size(); ++j) {
          bool ok = true;
          for (const auto& [x, y] : dom_pairs)
            if (!cod.contains(cl.index_of(apply(le[i], dl.elems[x])),
                              cr.index_of(apply(re[j], dr.elems[y])))) {
              ok = false;
              break;
            }
          if (ok) out.insert(i, j);
        }
      break;
    }
    case TypeTag::ForallV:
    case TypeTag::ForallC: {
      Sort s = binder_sort(*t);
      const std::vector<ObjId> rs = reps(s);
      out = fin::full_relation(le.size(), re.size());
      RelEnv inner = rho;
      for (std::size_t i = 0; i < rs.size() && out.count() > 0; ++i)
        for (std::size_t j = 0; j < rs.size() && out.count() > 0; ++j)
          for (RelId r : rep_relations(s, i, j)) {
            inner[t->name] = RelBinding{rs[i], rs[j], r};
            if (!small(inner, t->cod, static_cast<double>(out.count()))) {
              for (auto [a, b] : out.list())
                if (!related(inner, t->cod, component(le[a], i), component(re[b], j)))
                  out.pairs.reset(a * out.right + b);
              continue;
            }
            RelId rc = interp_rel(inner, t->cod);
            const Carrier& cl = carrier_of(rels_[rc].left);
            const Carrier& cr = carrier_of(rels_[rc].right);
            const fin::Rel& cod = rels_[rc].rel;
            for (auto [a, b] : out.list())
              if (!cod.contains(cl.index_of(component(le[a], i)),
                                cr.index_of(component(re[b], j))))
                out.pairs.reset(a * out.right + b);
          }
      break;
    }
    default:
      pointwise();
  }
  return out;
}

bool Model::related(const RelEnv& rho, const TypePtr& t, ValueId a, ValueId b) {
  switch (t->tag) {
    case TypeTag::VVar:
    case TypeTag::CVar: {
      const RelBinding& rb = rho.at(t->name);
      return rels_[rb.rel].rel.contains(carrier_of(rb.left).index_of(a),
                                        carrier_of(rb.right).index_of(b));
    }
    case TypeTag::Arrow:
    case TypeTag::Lolli: {
      RelId rd = interp_rel(rho, t->dom);
      const std::vector<ValueId>& l = carrier_of(rels_[rd].left).elems;
      const std::vector<ValueId>& r = carrier_of(rels_[rd].right).elems;
      for (const auto& [i, j] : rels_[rd].rel.list())
        if (!related(rho, t->cod, apply(a, l[i]), apply(b, r[j]))) return false;
      return true;
    }
    case TypeTag::ForallV:
    case TypeTag::ForallC: {
      Sort s = binder_sort(*t);
      const std::vector<ObjId> rs = reps(s);
      RelEnv inner = rho;
      for (std::size_t i = 0; i < rs.size(); ++i)
        for (std::size_t j = 0; j < rs.size(); ++j)
          for (RelId r : rep_relations(s, i, j)) {
            inner[t->name] = RelBinding{rs[i], rs[j], r};
            if (!related(inner, t->cod, component(a, i), component(b, j))) return false;
          }
      return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Isomorphisms

ValueId Model::transport(const TypePtr& t, const Env& src, const Env& tgt, const IsoEnv& isos,
                         ValueId v) {
  const TypeInfo& ti = info(t);
  bool touched = false;
  for (const auto& x : ti.ftv)
    if (isos.count(x)) touched = true;
  if (!touched) return v;
  ++stats_.transports;
  switch (t->tag) {
    case TypeTag::VVar:
    case TypeTag::CVar: {
      const fin::Table& tab = isos.at(t->name);
      return carrier_of(tgt.at(t->name)).elems[tab[carrier_of(src.at(t->name)).index_of(v)]];
    }
    case TypeTag::Arrow:
    case TypeTag::Lolli: {
      IsoEnv inv;
      for (const auto& [x, tab] : isos) inv[x] = invert(tab);
      ObjId td = interp(tgt, t->dom);
      std::vector<ValueId> dom_elems = carrier_of(td).elems;
      std::vector<ValueId> items;
      items.reserve(dom_elems.size());
      for (ValueId y : dom_elems) {
        ValueId x = transport(t->dom, tgt, src, inv, y);
        items.push_back(transport(t->cod, src, tgt, isos, apply(v, x)));
      }
      return fun(objects_[td].carrier, std::move(items));
    }
    case TypeTag::ForallV:
    case TypeTag::ForallC: {
      Sort s = binder_sort(*t);
      IsoEnv rest = isos;
      rest.erase(t->name);
      Env s2 = src, t2 = tgt;
      std::vector<ValueId> comps;
      for (std::size_t k = 0; k < reps(s).size(); ++k) {
        s2[t->name] = t2[t->name] = reps(s)[k];
        comps.push_back(transport(t->cod, s2, t2, rest, component(v, k)));
      }
      return poly(s, std::move(comps));
    }
  }
  return v;
}

const Model::Iso& Model::find_iso(Sort s, ObjId target) {
  auto key = std::make_pair(static_cast<int>(s), target);
  auto it = isos_.find(key);
  if (it != isos_.end()) return it->second;
  std::size_t n = carrier_of(target).size();
  std::vector<fin::Table> found;
  std::size_t which = 0;
  if (s == Sort::Set) {
    if (n > cfg_.bound)
      throw OutOfBound("no representative set of size " + std::to_string(n));
    which = n;
    fin::Table id(n);
    std::iota(id.begin(), id.end(), 0);
    found.push_back(id);
    if (n >= 2) {
      std::swap(id[0], id[1]);
      found.push_back(id);
    }
  } else {
    if (!has_algebra(target)) throw std::logic_error("instantiating at a non-algebra");
    const fin::Alg tgt = materialize(target);
    for (std::size_t r = 0; r < alg_reps_.size() && found.empty(); ++r) {
      const fin::Alg& a = materialize(alg_reps_[r]);
      if (a.size != n) continue;
      fin::Table perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      do {
        bool ok = true;
        for (std::size_t e = 0; e < a.raise.size() && ok; ++e) ok = perm[a.raise[e]] == tgt.raise[e];
        for (std::uint32_t x = 0; x < n && ok && !a.join.empty(); ++x)
          for (std::uint32_t y = 0; y < n && ok; ++y)
            ok = perm[a.op_join(x, y)] == tgt.op_join(perm[x], perm[y]);
        if (ok) {
          which = r;
          found.push_back(perm);
          if (found.size() == 2) break;
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
    if (found.empty())
      throw OutOfBound("no representative algebra is isomorphic to " + describe(target));
  }
  Iso iso{which, found[0], std::nullopt};
  if (found.size() > 1) iso.second = found[1];
  return isos_[key] = std::move(iso);
}

ValueId Model::instantiate(ValueId p, const TypePtr& forall_type, const Env& env, ObjId target) {
  Sort s = binder_sort(*forall_type);
  if (auto k = rep_index(s, target)) return component(p, *k);
  const TypePtr& body = forall_type->cod;
  const auto& ftv = info(body).ftv;
  if (std::find(ftv.begin(), ftv.end(), forall_type->name) == ftv.end()) {
    if (reps(s).empty()) throw OutOfBound("no representatives");
    return component(p, 0);
  }
  const Iso iso = find_iso(s, target);
  Env src = env, tgt = env;
  src[forall_type->name] = reps(s)[iso.rep];
  tgt[forall_type->name] = target;
  ValueId c = component(p, iso.rep);
  ValueId out = transport(body, src, tgt, {{forall_type->name, iso.table}}, c);
  if (check_projection_invariance && iso.second) {
    ValueId again = transport(body, src, tgt, {{forall_type->name, *iso.second}}, c);
    if (again != out) throw std::logic_error("projection depends on the chosen isomorphism");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Terms

TypePtr Model::synth(std::vector<Binding>& ctx, const TermPtr& t, HeadTypes& heads) {
  switch (t->tag) {
    case TermTag::Var:
      for (auto it = ctx.rbegin(); it != ctx.rend(); ++it)
        if (it->name == t->name) return it->type;
      throw std::invalid_argument("unbound variable " + t->name);
    case TermTag::Const: {
      auto it = consts_.find(t->name);
      if (it == consts_.end()) throw std::invalid_argument("unknown constant " + t->name);
      return it->second.scheme;
    }
    case TermTag::Lam:
    case TermTag::LinLam: {
      ctx.push_back({t->name, t->type});
      TypePtr body = synth(ctx, t->fn, heads);
      ctx.pop_back();
      return t->tag == TermTag::Lam ? arrow(t->type, body) : lolli(t->type, body);
    }
    case TermTag::App: {
      TypePtr f = synth(ctx, t->fn, heads);
      synth(ctx, t->arg, heads);
      if (f->tag != TypeTag::Arrow && f->tag != TypeTag::Lolli)
        throw std::invalid_argument("applying a term of non-function type");
      return f->cod;
    }
    case TermTag::TyLamV:
      return forall_v(t->name, synth(ctx, t->fn, heads));
    case TermTag::TyLamC:
      return forall_c(t->name, synth(ctx, t->fn, heads));
    case TermTag::TyAppV:
    case TermTag::TyAppC: {
      TypePtr f = synth(ctx, t->fn, heads);
      if (!is_forall(*f)) throw std::invalid_argument("type application of a non-polymorphic term");
      heads[t.get()] = f;
      return subst_type(f->cod, f->name, t->type);
    }
  }
  throw std::logic_error("unknown term");
}

ValueId Model::eval(const Env& env, const std::vector<Binding>& ctx, const TermEnv& vals,
                    const TermPtr& t) {
  HeadTypes heads;
  std::vector<Binding> c = ctx;
  synth(c, t, heads);
  Env e = env;
  TermEnv v = vals;
  return eval_in(e, v, heads, t);
}

ValueId Model::eval_in(Env& env, TermEnv& vals, const HeadTypes& heads, const TermPtr& t) {
  switch (t->tag) {
    case TermTag::Var: {
      auto it = vals.find(t->name);
      if (it == vals.end()) throw std::invalid_argument("no value for variable " + t->name);
      return it->second;
    }
    case TermTag::Const:
      return constant_value(t->name);
    case TermTag::Lam:
    case TermTag::LinLam: {
      ObjId d = interp(env, t->type);
      std::vector<ValueId> dom = carrier_of(d).elems;
      auto saved = vals.find(t->name);
      std::optional<ValueId> old;
      if (saved != vals.end()) old = saved->second;
      std::vector<ValueId> items;
      items.reserve(dom.size());
      for (ValueId x : dom) {
        vals[t->name] = x;
        items.push_back(eval_in(env, vals, heads, t->fn));
      }
      if (old)
        vals[t->name] = *old;
      else
        vals.erase(t->name);
      return fun(objects_[d].carrier, std::move(items));
    }
    case TermTag::App: {
      ValueId f = eval_in(env, vals, heads, t->fn);
      ValueId x = eval_in(env, vals, heads, t->arg);
      return apply(f, x);
    }
    case TermTag::TyLamV:
    case TermTag::TyLamC: {
      Sort s = binder_sort(*t);
      auto saved = env.find(t->name);
      std::optional<ObjId> old;
      if (saved != env.end()) old = saved->second;
      std::vector<ValueId> comps;
      for (ObjId r : reps(s)) {
        env[t->name] = r;
        comps.push_back(eval_in(env, vals, heads, t->fn));
      }
      if (old)
        env[t->name] = *old;
      else
        env.erase(t->name);
      return poly(s, std::move(comps));
    }
    case TermTag::TyAppV:
    case TermTag::TyAppC: {
      ValueId p = eval_in(env, vals, heads, t->fn);
      ObjId target = interp(env, t->type);
      return instantiate(p, heads.at(t.get()), env, target);
    }
  }
  throw std::logic_error("unknown term");
}

ValueId Model::constant_value(const std::string& name) {
  auto it = constant_cache_.find(name);
  if (it != constant_cache_.end()) return it->second;
  auto sig = consts_.find(name);
  if (sig == consts_.end()) throw std::invalid_argument("unknown constant " + name);
  ValueId v = make_constant(sig->second);
  constant_cache_[name] = v;
  return v;
}

ValueId Model::make_constant(const ConstantSig& sig) {
  const std::string& key = sig.denotation_key;
  if (key == "powerset.or") {
    if (monad_.kind() != MonadKind::Powerset)
      throw std::invalid_argument("or needs the powerset monad");
    std::vector<ValueId> comps;
    for (ObjId r : alg_reps_) {
      CarrierId c = objects_[r].carrier;
      std::vector<ValueId> elems = carrier(c).elems;
      std::vector<ValueId> outer;
      for (ValueId x : elems) {
        std::vector<ValueId> inner;
        for (ValueId y : elems) inner.push_back(join(r, x, y));
        outer.push_back(fun(c, std::move(inner)));
      }
      comps.push_back(fun(c, std::move(outer)));
    }
    return poly(Sort::Alg, std::move(comps));
  }
  auto exception_index = [&](const std::string& prefix) {
    std::string e = key.substr(prefix.size());
    const auto& ex = monad_.exceptions();
    auto pos = std::find(ex.begin(), ex.end(), e);
    if (monad_.kind() != MonadKind::Exception || pos == ex.end())
      throw std::invalid_argument("unknown exception " + e);
    return static_cast<std::size_t>(pos - ex.begin());
  };
  const std::string raise_prefix = "exception.raise.";
  const std::string handle_prefix = "exception.handle.";
  if (key.rfind(raise_prefix, 0) == 0) {
    std::size_t e = exception_index(raise_prefix);
    std::vector<ValueId> comps;
    for (ObjId r : alg_reps_) comps.push_back(raise(r, e));
    return poly(Sort::Alg, std::move(comps));
  }
  if (key.rfind(handle_prefix, 0) == 0) {
    std::size_t e = exception_index(handle_prefix);
    const TypePtr& scheme = sig.scheme;  // forall X. (2 -> !X) -o !X
    const TypePtr& lin = scheme->cod;
    TypePtr unit = forall_v("X", arrow(vvar("X"), vvar("X")));
    TermPtr star = tylam_v("X", lam("x", vvar("X"), var("x")));
    auto injection = [&](const char* pick) {
      TypePtr z = vvar("Z");
      return tylam_v("Z", lam("f", arrow(unit, z), lam("g", arrow(unit, z), app(var(pick), star))));
    };
    ValueId left = eval_closed(injection("f"));
    ValueId right = eval_closed(injection("g"));
    std::vector<ValueId> comps;
    for (ObjId r : set_reps_) {
      Env env{{scheme->name, r}};
      ObjId d = interp(env, lin->dom);
      ObjId b = interp(env, lin->cod);
      ValueId fail = raise(b, e);
      std::vector<ValueId> dom = carrier_of(d).elems;
      std::vector<ValueId> items;
      for (ValueId f : dom) {
        ValueId p = apply(f, left);
        items.push_back(p == fail ? apply(f, right) : p);
      }
      comps.push_back(fun(objects_[d].carrier, std::move(items)));
    }
    return poly(Sort::Set, std::move(comps));
  }
  throw std::invalid_argument("unknown denotation key " + key);
}

// ---------------------------------------------------------------------------
// Display

std::string Model::show(ValueId v) const {
  const Value& x = values_[v];
  std::ostringstream os;
  switch (x.kind) {
    case ValueKind::Ground:
      os << '#' << x.ground;
      break;
    case ValueKind::Fun:
    case ValueKind::Poly: {
      os << (x.kind == ValueKind::Fun ? '[' : '<');
      for (std::size_t i = 0; i < x.items.size(); ++i) os << (i ? " " : "") << show(x.items[i]);
      os << (x.kind == ValueKind::Fun ? ']' : '>');
      break;
    }
  }
  return os.str();
}

std::string Model::describe(ObjId o) const {
  const Object& ob = objects_[o];
  std::string label = ob.label;
  if (label.empty() && ob.type) label = surface::print(ob.type);
  if (label.empty()) label = "#" + std::to_string(o);
  return label + " (size " + std::to_string(carrier_of(o).size()) + ")";
}

}  // namespace pe::sem
