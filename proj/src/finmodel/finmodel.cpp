#include "pe/finmodel.hpp"

#include <algorithm>
#include <bit>

#include "pe/kernels.hpp"

namespace pe::fin {

// ---------------------------------------------------------------------------
// Bitset

Bitset::Bitset(std::size_t n, bool value) : n_(n), words_((n + 63) / 64, 0) {
  if (value) {
    for (auto& w : words_) w = ~std::uint64_t{0};
    if (n % 64) words_.back() = (std::uint64_t{1} << (n % 64)) - 1;
  }
}

std::size_t Bitset::count() const {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

bool Bitset::any() const {
  for (auto w : words_)
    if (w) return true;
  return false;
}

std::size_t Bitset::next(std::size_t from) const {
  if (from >= n_) return n_;
  std::size_t wi = from >> 6;
  std::uint64_t w = words_[wi] & (~std::uint64_t{0} << (from & 63));
  for (;;) {
    if (w) return std::min(n_, wi * 64 + static_cast<std::size_t>(std::countr_zero(w)));
    if (++wi >= words_.size()) return n_;
    w = words_[wi];
  }
}

Bitset& Bitset::operator&=(const Bitset& o) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
  return *this;
}

Bitset& Bitset::operator|=(const Bitset& o) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
  return *this;
}

bool Bitset::subset_of(const Bitset& o) const {
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & ~o.words_[i]) return false;
  return true;
}

std::size_t Bitset::hash() const {
  std::size_t h = 1469598103934665603ull ^ n_;
  for (auto w : words_) h = (h ^ w) * 1099511628211ull;
  return h;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> Rel::list() const {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  for (std::size_t k = pairs.next(0); k < pairs.size(); k = pairs.next(k + 1))
    out.emplace_back(static_cast<std::uint32_t>(k / right), static_cast<std::uint32_t>(k % right));
  return out;
}

// ---------------------------------------------------------------------------
// Monads

MonadSpec MonadSpec::identity() { return MonadSpec(); }

MonadSpec MonadSpec::exception(std::vector<std::string> names) {
  MonadSpec m;
  m.kind_ = MonadKind::Exception;
  m.exceptions_ = std::move(names);
  return m;
}

MonadSpec MonadSpec::powerset() {
  MonadSpec m;
  m.kind_ = MonadKind::Powerset;
  return m;
}

std::string MonadSpec::key() const {
  switch (kind_) {
    case MonadKind::Identity:
      return "identity";
    case MonadKind::Powerset:
      return "powerset";
    case MonadKind::Exception: {
      std::string s = "exception(";
      for (std::size_t i = 0; i < exceptions_.size(); ++i) s += (i ? "," : "") + exceptions_[i];
      return s + ")";
    }
  }
  return "";
}

std::size_t MonadSpec::t_size(std::size_t n) const {
  switch (kind_) {
    case MonadKind::Identity:
      return n;
    case MonadKind::Exception:
      return n + exceptions_.size();
    case MonadKind::Powerset:
      if (n >= 63) throw std::length_error("powerset of a set that is too large");
      return (std::size_t{1} << n) - 1;
  }
  return 0;
}

FinSet MonadSpec::object(const FinSet& a) const {
  FinSet out;
  out.size = t_size(a.size);
  for (std::uint32_t x = 0; x < out.size; ++x) out.labels.push_back(element_label(a.size, x, a.labels));
  return out;
}

Table MonadSpec::unit(std::size_t n) const {
  Table t(n);
  for (std::uint32_t a = 0; a < n; ++a)
    t[a] = kind_ == MonadKind::Powerset ? (std::uint32_t{1} << a) - 1 : a;
  return t;
}

Table MonadSpec::extend(const Table& f, std::size_t n, std::size_t m) const {
  Table out(t_size(n));
  switch (kind_) {
    case MonadKind::Identity:
      return f;
    case MonadKind::Exception:
      for (std::uint32_t x = 0; x < out.size(); ++x)
        out[x] = x < n ? f[x] : static_cast<std::uint32_t>(m + (x - n));
      return out;
    case MonadKind::Powerset:
      for (std::uint32_t x = 0; x < out.size(); ++x) {
        std::uint32_t mask = x + 1, acc = 0;
        for (std::uint32_t a = 0; a < n; ++a)
          if (mask >> a & 1u) acc |= f[a] + 1;
        out[x] = acc - 1;
      }
      return out;
  }
  return out;
}

Table MonadSpec::map(const Table& f, std::size_t n, std::size_t m) const {
  Table eta = unit(m);
  Table g(n);
  for (std::size_t a = 0; a < n; ++a) g[a] = eta[f[a]];
  return extend(g, n, m);
}

std::string MonadSpec::element_label(std::size_t n, std::uint32_t x,
                                     const std::vector<std::string>& labels) const {
  auto base = [&](std::uint32_t a) {
    return a < labels.size() ? labels[a] : std::to_string(a);
  };
  switch (kind_) {
    case MonadKind::Identity:
      return base(x);
    case MonadKind::Exception:
      if (x < n) return "inl(" + base(x) + ")";
      return "inr(" + exceptions_[x - n] + ")";
    case MonadKind::Powerset: {
      std::string s = "{";
      bool first = true;
      for (std::uint32_t a = 0; a < n; ++a) {
        if ((x + 1) >> a & 1u) {
          s += (first ? "" : ",") + base(a);
          first = false;
        }
      }
      return s + "}";
    }
  }
  return "";
}

// ---------------------------------------------------------------------------
// Algebras

std::vector<FinSet> enumerate_sets(Bound b) {
  std::vector<FinSet> out;
  for (std::size_t n = 0; n <= b.max_carrier; ++n) out.push_back(FinSet{n, {}});
  return out;
}

bool is_algebra(const MonadSpec& m, const Alg& a) {
  switch (m.kind()) {
    case MonadKind::Identity:
      return a.raise.empty() && a.join.empty();
    case MonadKind::Exception:
      if (a.raise.size() != m.num_exceptions() || !a.join.empty()) return false;
      for (auto r : a.raise)
        if (r >= a.size) return false;
      return true;
    case MonadKind::Powerset: {
      if (!a.raise.empty() || a.join.size() != a.size * a.size) return false;
      for (std::uint32_t x = 0; x < a.size; ++x) {
        if (a.op_join(x, x) != x) return false;
        for (std::uint32_t y = 0; y < a.size; ++y) {
          if (a.op_join(x, y) != a.op_join(y, x)) return false;
          for (std::uint32_t z = 0; z < a.size; ++z)
            if (a.op_join(x, a.op_join(y, z)) != a.op_join(a.op_join(x, y), z)) return false;
        }
      }
      return true;
    }
  }
  return false;
}

std::vector<Alg> enumerate_algebras(const MonadSpec& m, std::size_t n) {
  std::vector<Alg> out;
  switch (m.kind()) {
    case MonadKind::Identity:
      out.push_back(plain_algebra(n));
      break;
    case MonadKind::Exception: {
      std::size_t k = m.num_exceptions();
      if (n == 0 && k > 0) break;
      Table pts(k, 0);
      for (;;) {
        Alg a;
        a.size = n;
        a.raise = pts;
        out.push_back(a);
        std::size_t i = 0;
        while (i < k && ++pts[i] == n) pts[i++] = 0;
        if (i == k) break;
      }
      break;
    }
    case MonadKind::Powerset: {
      std::vector<std::pair<std::uint32_t, std::uint32_t>> cells;
      for (std::uint32_t x = 0; x < n; ++x)
        for (std::uint32_t y = x + 1; y < n; ++y) cells.emplace_back(x, y);
      Table vals(cells.size(), 0);
      for (;;) {
        Alg a;
        a.size = n;
        a.join.assign(n * n, 0);
        for (std::uint32_t x = 0; x < n; ++x) a.join[x * n + x] = x;
        for (std::size_t c = 0; c < cells.size(); ++c) {
          a.join[cells[c].first * n + cells[c].second] = vals[c];
          a.join[cells[c].second * n + cells[c].first] = vals[c];
        }
        if (is_algebra(m, a)) out.push_back(a);
        std::size_t i = 0;
        while (i < cells.size() && ++vals[i] == n) vals[i++] = 0;
        if (i == cells.size()) break;
      }
      break;
    }
  }
  return out;
}

std::vector<Alg> enumerate_algebras(const MonadSpec& m, Bound b) {
  std::vector<Alg> out;
  for (std::size_t n = 0; n <= b.max_carrier; ++n) {
    auto part = enumerate_algebras(m, n);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

Alg plain_algebra(std::size_t n) {
  Alg a;
  a.size = n;
  return a;
}

FreeAlgebra free_algebra(const MonadSpec& m, std::size_t n) {
  FreeAlgebra f;
  f.alg.size = m.t_size(n);
  f.unit = m.unit(n);
  if (m.kind() == MonadKind::Exception)
    for (std::size_t e = 0; e < m.num_exceptions(); ++e)
      f.alg.raise.push_back(static_cast<std::uint32_t>(n + e));
  if (m.kind() == MonadKind::Powerset) {
    std::size_t s = f.alg.size;
    f.alg.join.resize(s * s);
    for (std::uint32_t x = 0; x < s; ++x)
      for (std::uint32_t y = 0; y < s; ++y) f.alg.join[x * s + y] = ((x + 1) | (y + 1)) - 1;
  }
  for (std::uint32_t x = 0; x < f.alg.size; ++x) f.alg.labels.push_back(m.element_label(n, x));
  f.alg.em = em_structure(m, f.alg);
  return f;
}

Table em_structure(const MonadSpec& m, const Alg& a) {
  std::size_t n = a.size;
  Table xi(m.t_size(n));
  for (std::uint32_t z = 0; z < xi.size(); ++z) {
    switch (m.kind()) {
      case MonadKind::Identity:
        xi[z] = z;
        break;
      case MonadKind::Exception:
        xi[z] = z < n ? z : a.raise[z - n];
        break;
      case MonadKind::Powerset: {
        std::uint32_t mask = z + 1;
        std::uint32_t acc = static_cast<std::uint32_t>(std::countr_zero(mask));
        for (std::uint32_t x = acc + 1; x < n; ++x)
          if (mask >> x & 1u) acc = a.op_join(acc, x);
        xi[z] = acc;
        break;
      }
    }
  }
  return xi;
}

bool check_em_laws(const MonadSpec& m, const Alg& a, const Table& xi) {
  std::size_t n = a.size;
  std::size_t tn = m.t_size(n);
  if (xi.size() != tn) return false;
  Table eta = m.unit(n);
  for (std::uint32_t x = 0; x < n; ++x)
    if (xi[eta[x]] != x) return false;
  if (m.t_size(tn) > (std::size_t{1} << 22))
    throw std::length_error("T(T A) too large for the associativity square");
  Table id(tn);
  for (std::uint32_t z = 0; z < tn; ++z) id[z] = z;
  Table mu = m.extend(id, tn, n);
  Table txi = m.map(xi, tn, n);
  for (std::size_t z = 0; z < mu.size(); ++z)
    if (xi[mu[z]] != xi[txi[z]]) return false;
  return true;
}

bool is_homomorphism(const Table& f, const Alg& dom, const Alg& cod) {
  if (f.size() != dom.size) return false;
  for (auto v : f)
    if (v >= cod.size) return false;
  if (dom.raise.size() != cod.raise.size()) return false;
  for (std::size_t e = 0; e < dom.raise.size(); ++e)
    if (f[dom.raise[e]] != cod.raise[e]) return false;
  if (!dom.join.empty() || !cod.join.empty()) {
    if (dom.join.empty() != cod.join.empty()) return false;
    for (std::uint32_t x = 0; x < dom.size; ++x)
      for (std::uint32_t y = 0; y < dom.size; ++y)
        if (f[dom.op_join(x, y)] != cod.op_join(f[x], f[y])) return false;
  }
  return true;
}

std::vector<Table> enumerate_homs(const Alg& dom, const Alg& cod) {
  std::vector<Table> out;
  std::size_t n = dom.size;
  if (dom.raise.size() != cod.raise.size()) return out;
  Table f(n, 0);
  std::vector<int> fixed(n, -1);
  for (std::size_t e = 0; e < dom.raise.size(); ++e) {
    int& slot = fixed[dom.raise[e]];
    if (slot >= 0 && slot != static_cast<int>(cod.raise[e])) return out;
    slot = static_cast<int>(cod.raise[e]);
  }
  if (n > 0 && cod.size == 0) return out;
  bool joins = !dom.join.empty();
  // Consistent with every join whose operands and result are assigned.
  auto ok_upto = [&](std::uint32_t p) {
    if (!joins) return true;
    for (std::uint32_t x = 0; x <= p; ++x) {
      std::uint32_t y = p;
      std::uint32_t j = dom.op_join(x, y);
      if (j <= p && f[j] != cod.op_join(f[x], f[y])) return false;
      for (std::uint32_t z = 0; z < p; ++z) {
        std::uint32_t jj = dom.op_join(x, z);
        if (jj == p && f[p] != cod.op_join(f[x], f[z])) return false;
      }
    }
    return true;
  };
  std::function<void(std::uint32_t)> go = [&](std::uint32_t p) {
    if (p == n) {
      out.push_back(f);
      return;
    }
    for (std::uint32_t v = 0; v < cod.size; ++v) {
      if (fixed[p] >= 0 && static_cast<int>(v) != fixed[p]) continue;
      f[p] = v;
      if (ok_upto(p)) go(p + 1);
    }
  };
  go(0);
  return out;
}

std::vector<Table> enumerate_functions(std::size_t n, std::size_t m) {
  std::vector<Table> out;
  if (n > 0 && m == 0) return out;
  Table f(n, 0);
  for (;;) {
    out.push_back(f);
    std::size_t i = 0;
    while (i < n && ++f[i] == m) f[i++] = 0;
    if (i == n) break;
  }
  return out;
}

bool carries_subalgebra(const Bitset& s, const Alg& a) {
  for (auto r : a.raise)
    if (!s.test(r)) return false;
  if (!a.join.empty()) {
    for (std::size_t x = s.next(0); x < s.size(); x = s.next(x + 1))
      for (std::size_t y = s.next(x + 1); y < s.size(); y = s.next(y + 1))
        if (!s.test(a.op_join(static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y))))
          return false;
  }
  return true;
}

Alg product(const Alg& a, const Alg& b) {
  Alg p;
  p.size = a.size * b.size;
  if (p.size == 0) return p;  // an empty carrier has no tables to compare
  if (a.raise.size() != b.raise.size() || a.join.empty() != b.join.empty())
    throw std::invalid_argument("product of algebras with different signatures");
  for (std::size_t e = 0; e < a.raise.size(); ++e)
    p.raise.push_back(static_cast<std::uint32_t>(a.raise[e] * b.size + b.raise[e]));
  if (!a.join.empty()) {
    p.join.resize(p.size * p.size);
    for (std::uint32_t i = 0; i < a.size; ++i)
      for (std::uint32_t j = 0; j < b.size; ++j)
        for (std::uint32_t k = 0; k < a.size; ++k)
          for (std::uint32_t l = 0; l < b.size; ++l)
            p.join[(i * b.size + j) * p.size + (k * b.size + l)] =
                static_cast<std::uint32_t>(a.op_join(i, k) * b.size + b.op_join(j, l));
  }
  return p;
}

// ---------------------------------------------------------------------------
// Relations

Rel diagonal(std::size_t n) {
  Rel r(n, n);
  for (std::size_t i = 0; i < n; ++i) r.insert(i, i);
  return r;
}

Rel opposite(const Rel& r) {
  Rel o(r.right, r.left);
  for (auto [i, j] : r.list()) o.insert(j, i);
  return o;
}

Rel preimage(const Table& f, const Table& g, const Rel& r) {
  Rel out(f.size(), g.size());
  for (std::size_t x = 0; x < f.size(); ++x)
    for (std::size_t y = 0; y < g.size(); ++y)
      if (r.contains(f[x], g[y])) out.insert(x, y);
  return out;
}

Rel graph(const Table& f, std::size_t cod_size) {
  Rel r(f.size(), cod_size);
  for (std::size_t x = 0; x < f.size(); ++x) r.insert(x, f[x]);
  return r;
}

Rel intersection(const Rel& a, const Rel& b) {
  Rel r = a;
  r.pairs &= b.pairs;
  return r;
}

Rel full_relation(std::size_t n, std::size_t m) {
  Rel r(n, m);
  r.pairs = Bitset(n * m, true);
  return r;
}

bool rel_subset(const Rel& a, const Rel& b) { return a.pairs.subset_of(b.pairs); }

bool is_admissible(const Rel& r, const Alg& a, const Alg& b) {
  return carries_subalgebra(r.pairs, product(a, b));
}

namespace {

Bitset close_in(const Alg& p, Bitset s) {
  for (auto r : p.raise) s.set(r);
  if (p.join.empty()) return s;
  std::vector<std::uint32_t> members;
  for (std::size_t x = s.next(0); x < s.size(); x = s.next(x + 1))
    members.push_back(static_cast<std::uint32_t>(x));
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      std::uint32_t z = p.op_join(members[i], members[j]);
      if (!s.test(z)) {
        s.set(z);
        members.push_back(z);
      }
    }
  }
  return s;
}

}  // namespace

Rel admissible_closure(const Rel& r, const Alg& a, const Alg& b) {
  Alg p = product(a, b);
  Rel out(r.left, r.right);
  out.pairs = close_in(p, r.pairs);
  return out;
}

std::vector<Bitset> enumerate_closed_sets(std::size_t n,
                                          const std::function<Bitset(const Bitset&)>& close) {
  std::vector<Bitset> out;
  Bitset a = close(Bitset(n));
  out.push_back(a);
  for (;;) {
    bool advanced = false;
    Bitset cur = a;
    for (std::size_t ii = n; ii-- > 0;) {
      if (cur.test(ii)) {
        cur.reset(ii);
        continue;
      }
      Bitset cand = cur;
      cand.set(ii);
      Bitset b = close(cand);
      bool canonical = true;
      for (std::size_t j = 0; j < ii && canonical; ++j)
        if (b.test(j) && !cur.test(j)) canonical = false;
      if (canonical) {
        a = b;
        out.push_back(a);
        advanced = true;
        break;
      }
    }
    if (!advanced) break;
  }
  return out;
}

std::vector<Rel> enumerate_set_relations(std::size_t n, std::size_t m) {
  if (n * m > 24) throw std::length_error("too many relations to enumerate");
  std::vector<Rel> out;
  std::uint64_t total = std::uint64_t{1} << (n * m);
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    Rel r(n, m);
    for (std::size_t k = 0; k < n * m; ++k)
      if (mask >> k & 1u) r.pairs.set(k);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<Rel> enumerate_admissible_relations(const Alg& a, const Alg& b) {
  if (a.raise.empty() && a.join.empty() && b.raise.empty() && b.join.empty())
    return enumerate_set_relations(a.size, b.size);
  Alg p = product(a, b);
  std::vector<Rel> out;
  for (auto& s : enumerate_closed_sets(p.size, [&](const Bitset& x) { return close_in(p, x); })) {
    Rel r(a.size, b.size);
    r.pairs = std::move(s);
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Monad laws

namespace {

std::uint64_t ipow(std::uint64_t b, std::size_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

// Decodes the mixed-radix index of a function n -> base.
Table decode(std::uint64_t idx, std::size_t n, std::size_t base) {
  Table f(n);
  for (std::size_t i = 0; i < n; ++i) {
    f[i] = static_cast<std::uint32_t>(idx % base);
    idx /= base;
  }
  return f;
}

void fill_rows(const MonadSpec& m, std::size_t n, std::size_t k, std::vector<std::uint8_t>& rows,
               std::uint8_t pad) {
  std::size_t tk = m.t_size(k);
  std::uint64_t count = ipow(tk, n);
  rows.assign(count * kernels::kStride, pad);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    Table ext = m.extend(decode(idx, n, tk), n, k);
    for (std::size_t s = 0; s < ext.size(); ++s)
      rows[idx * kernels::kStride + s] = static_cast<std::uint8_t>(ext[s]);
  }
}

std::string show(const Table& t) {
  std::string s = "[";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
  return s + "]";
}

}  // namespace

MonadLawReport check_monad_laws(const MonadSpec& m, std::size_t max_size) {
  MonadLawReport rep;
  if (m.t_size(max_size) > kernels::kStride)
    throw std::length_error("monad-law tables support |T A| <= 16");
  auto fail = [&](std::string msg) {
    if (rep.ok) rep.detail = std::move(msg);
    rep.ok = false;
  };
  for (std::size_t n = 0; n <= max_size; ++n) {
    // eta† = id
    Table eta = m.unit(n);
    Table ext = m.extend(eta, n, n);
    ++rep.checks;
    for (std::uint32_t z = 0; z < ext.size(); ++z)
      if (ext[z] != z) fail("eta-dagger is not the identity at |A|=" + std::to_string(n));
    for (std::size_t k = 0; k <= max_size; ++k) {
      // f† . eta = f
      std::size_t tk = m.t_size(k);
      std::uint64_t count = ipow(tk, n);
      for (std::uint64_t idx = 0; idx < count; ++idx) {
        Table f = decode(idx, n, tk);
        Table fe = m.extend(f, n, k);
        ++rep.checks;
        for (std::size_t a = 0; a < n; ++a)
          if (fe[eta[a]] != f[a])
            fail("f-dagger . eta != f for f=" + show(f) + " : " + std::to_string(n) + " -> T" +
                 std::to_string(k));
      }
    }
  }
  kernels::Variant variant = kernels::Variant::Scalar;
  for (std::size_t a = 0; a <= max_size; ++a) {
    for (std::size_t b = 0; b <= max_size; ++b) {
      kernels::AssocProblem p;
      p.a = a;
      p.b = b;
      p.ta = m.t_size(a);
      p.tb = m.t_size(b);
      fill_rows(m, a, b, p.ext_ab, 0x80);
      for (std::size_t c = 0; c <= max_size; ++c) {
        p.tc = m.t_size(c);
        fill_rows(m, a, c, p.ext_ac, 0);
        fill_rows(m, b, c, p.ext_bc, 0);
        variant = kernels::select_variant(p);
        auto res = kernels::check_assoc(p, variant);
        rep.checks += res.pairs;
        if (res.violations && res.first) {
          fail("(g-dagger . f)-dagger != g-dagger . f-dagger for f=" +
               show(decode(res.first->first, a, p.tb)) +
               " g=" + show(decode(res.first->second, b, p.tc)) + " at sizes " +
               std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c));
        }
      }
    }
  }
  rep.kernel = kernels::variant_name(kernels::select_variant(kernels::AssocProblem{
      max_size, max_size, m.t_size(max_size), m.t_size(max_size), m.t_size(max_size), {}, {}, {}}));
  return rep;
}

}  // namespace pe::fin
