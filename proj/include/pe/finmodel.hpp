#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pe {

enum class MonadKind { Identity, Exception, Powerset };

}  // namespace pe

namespace pe::fin {

using Table = std::vector<std::uint32_t>;

class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::size_t n, bool value = false);

  std::size_t size() const { return n_; }
  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  std::size_t count() const;
  bool any() const;
  bool none() const { return !any(); }
  // Index of the first set bit at or after `from`, or size() if none.
  std::size_t next(std::size_t from) const;
  Bitset& operator&=(const Bitset& o);
  Bitset& operator|=(const Bitset& o);
  bool operator==(const Bitset& o) const { return n_ == o.n_ && words_ == o.words_; }
  bool operator!=(const Bitset& o) const { return !(*this == o); }
  bool subset_of(const Bitset& o) const;
  std::size_t hash() const;
  const std::vector<std::uint64_t>& words() const { return words_; }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

struct FinSet {
  std::size_t size = 0;
  std::vector<std::string> labels;
};

class MonadSpec {
 public:
  static MonadSpec identity();
  static MonadSpec exception(std::vector<std::string> names);
  static MonadSpec powerset();

  MonadKind kind() const { return kind_; }
  const std::vector<std::string>& exceptions() const { return exceptions_; }
  std::size_t num_exceptions() const { return exceptions_.size(); }
  std::string key() const;

  // |T n|. Exceptions: inl a = a, inr e = n + e. Powerset: the nonempty
  // subset with bitmask m has index m - 1.
  std::size_t t_size(std::size_t n) const;
  FinSet object(const FinSet& a) const;
  Table unit(std::size_t n) const;
  // For f : n -> T m, the Kleisli extension f† : T n -> T m.
  Table extend(const Table& f, std::size_t n, std::size_t m) const;
  // For f : n -> m, T f : T n -> T m.
  Table map(const Table& f, std::size_t n, std::size_t m) const;
  std::string element_label(std::size_t n, std::uint32_t x,
                            const std::vector<std::string>& labels = {}) const;

 private:
  MonadKind kind_ = MonadKind::Identity;
  std::vector<std::string> exceptions_;
};

// A finite algebra for one of the configured monads, given by operation
// tables on the carrier 0..size-1.
struct Alg {
  std::size_t size = 0;
  Table raise;  // exception monad: one point per exception
  Table join;   // powerset monad: size*size table
  std::optional<Table> em;
  std::vector<std::string> labels;

  bool same_structure(const Alg& o) const {
    return size == o.size && raise == o.raise && join == o.join;
  }
  std::uint32_t op_join(std::uint32_t x, std::uint32_t y) const { return join[x * size + y]; }
};

struct Hom {
  Alg dom;
  Alg cod;
  Table table;
};

struct Bound {
  std::size_t max_carrier = 2;
};

// A binary relation between carriers of sizes left and right.
struct Rel {
  std::size_t left = 0;
  std::size_t right = 0;
  Bitset pairs;

  Rel() = default;
  Rel(std::size_t l, std::size_t r) : left(l), right(r), pairs(l * r) {}
  bool contains(std::size_t i, std::size_t j) const { return pairs.test(i * right + j); }
  void insert(std::size_t i, std::size_t j) { pairs.set(i * right + j); }
  std::size_t count() const { return pairs.count(); }
  std::vector<std::pair<std::uint32_t, std::uint32_t>> list() const;
  bool operator==(const Rel& o) const {
    return left == o.left && right == o.right && pairs == o.pairs;
  }
  bool operator!=(const Rel& o) const { return !(*this == o); }
};

std::vector<FinSet> enumerate_sets(Bound b);
std::vector<Alg> enumerate_algebras(const MonadSpec& m, std::size_t size);
std::vector<Alg> enumerate_algebras(const MonadSpec& m, Bound b);

struct FreeAlgebra {
  Alg alg;
  Table unit;
};
FreeAlgebra free_algebra(const MonadSpec& m, std::size_t n);

// Structure laws of the algebraic presentation (semilattice laws, one
// point per exception).
bool is_algebra(const MonadSpec& m, const Alg& a);
// The Eilenberg-Moore structure map T(carrier) -> carrier determined by the
// operation tables.
Table em_structure(const MonadSpec& m, const Alg& a);
// Checks xi . eta = id and xi . T xi = xi . mu.
bool check_em_laws(const MonadSpec& m, const Alg& a, const Table& xi);

bool is_homomorphism(const Table& f, const Alg& dom, const Alg& cod);
std::vector<Table> enumerate_homs(const Alg& dom, const Alg& cod);
std::vector<Table> enumerate_functions(std::size_t n, std::size_t m);

bool carries_subalgebra(const Bitset& s, const Alg& a);
Alg product(const Alg& a, const Alg& b);
Alg plain_algebra(std::size_t n);  // no operations: a bare set

Rel diagonal(std::size_t n);
Rel opposite(const Rel& r);
// {(x, y) | (f x, g y) in r} for f : n -> r.left, g : m -> r.right.
Rel preimage(const Table& f, const Table& g, const Rel& r);
Rel graph(const Table& f, std::size_t cod_size);
Rel intersection(const Rel& a, const Rel& b);
Rel full_relation(std::size_t n, std::size_t m);
bool rel_subset(const Rel& a, const Rel& b);

bool is_admissible(const Rel& r, const Alg& a, const Alg& b);
Rel admissible_closure(const Rel& r, const Alg& a, const Alg& b);

// All closed subsets of 0..n-1 under a closure operator, in lectic order.
std::vector<Bitset> enumerate_closed_sets(std::size_t n,
                                          const std::function<Bitset(const Bitset&)>& close);
std::vector<Rel> enumerate_set_relations(std::size_t n, std::size_t m);
std::vector<Rel> enumerate_admissible_relations(const Alg& a, const Alg& b);

// Monad laws on all sets up to `max_size`.
struct MonadLawReport {
  bool ok = true;
  std::uint64_t checks = 0;
  std::string detail;
  std::string kernel;
};
MonadLawReport check_monad_laws(const MonadSpec& m, std::size_t max_size);

}  // namespace pe::fin
