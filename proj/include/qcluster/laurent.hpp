#pragma once

// Sparse multivariate Laurent polynomials with exact coefficients.
//
// A LaurentPoly<R> is a finite map from exponent vectors (negative entries
// allowed) to nonzero coefficients in R, kept in canonical form: terms sorted
// in descending graded-lex order, no zero coefficient stored. Exponents are
// 32-bit; any arithmetic that would overflow one throws ExponentOverflow.

#include <boost/container/small_vector.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <map>
#include <queue>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coefficients.hpp"
#include "errors.hpp"

namespace qcluster {

using Exponent = std::int32_t;

namespace detail {

inline Exponent checked_add(Exponent a, Exponent b) {
  Exponent r;
  if (__builtin_add_overflow(a, b, &r)) throw ExponentOverflow("exponent overflow in addition");
  return r;
}

inline Exponent checked_mul(Exponent a, std::int64_t n) {
  std::int64_t r;
  if (__builtin_mul_overflow(static_cast<std::int64_t>(a), n, &r) ||
      r > std::numeric_limits<Exponent>::max() || r < std::numeric_limits<Exponent>::min()) {
    throw ExponentOverflow("exponent overflow in power");
  }
  return static_cast<Exponent>(r);
}

}  // namespace detail

/// Exponent vector with its total degree cached.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::size_t nvars) : exps_(nvars, 0) {}
  explicit Monomial(const std::vector<Exponent>& e) : exps_(e.begin(), e.end()) { recompute_degree(); }
  Monomial(std::initializer_list<Exponent> e) : exps_(e) { recompute_degree(); }

  std::size_t size() const { return exps_.size(); }
  Exponent operator[](std::size_t i) const { return exps_[i]; }
  std::int64_t degree() const { return degree_; }
  std::span<const Exponent> exponents() const { return {exps_.data(), exps_.size()}; }
  std::vector<Exponent> to_vector() const { return {exps_.begin(), exps_.end()}; }

  void set(std::size_t i, Exponent v) {
    degree_ += static_cast<std::int64_t>(v) - exps_[i];
    exps_[i] = v;
  }

  bool is_one() const {
    return std::all_of(exps_.begin(), exps_.end(), [](Exponent e) { return e == 0; });
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial r;
    r.exps_.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r.exps_[i] = detail::checked_add(a.exps_[i], b.exps_[i]);
    r.degree_ = a.degree_ + b.degree_;
    return r;
  }

  friend Monomial operator/(const Monomial& a, const Monomial& b) {
    Monomial r;
    r.exps_.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      Exponent r_i;
      if (__builtin_sub_overflow(a.exps_[i], b.exps_[i], &r_i)) throw ExponentOverflow("exponent overflow in quotient");
      r.exps_[i] = r_i;
    }
    r.degree_ = a.degree_ - b.degree_;
    return r;
  }

  Monomial pow(std::int64_t n) const {
    Monomial r;
    r.exps_.resize(size());
    for (std::size_t i = 0; i < size(); ++i) r.exps_[i] = detail::checked_mul(exps_[i], n);
    r.degree_ = degree_ * n;
    return r;
  }

  friend bool operator==(const Monomial& a, const Monomial& b) {
    if (a.degree_ != b.degree_ || a.exps_.size() != b.exps_.size()) return false;
    return std::equal(a.exps_.begin(), a.exps_.end(), b.exps_.begin());
  }

  /// Graded lexicographic comparison: -1, 0, +1.
  friend int grlex_compare(const Monomial& a, const Monomial& b) {
    if (a.degree_ != b.degree_) return a.degree_ < b.degree_ ? -1 : 1;
    const std::size_t n = a.exps_.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (a.exps_[i] != b.exps_[i]) return a.exps_[i] < b.exps_[i] ? -1 : 1;
    }
    return 0;
  }

  /// Graded lexicographic order: total degree first, then lexicographic.
  friend bool grlex_less(const Monomial& a, const Monomial& b) { return grlex_compare(a, b) < 0; }

  std::size_t hash() const {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (Exponent e : exps_) {
      h ^= static_cast<std::uint32_t>(e);
      h *= 0x100000001b3ULL;
    }
    return h;
  }

 private:
  void recompute_degree() {
    degree_ = 0;
    for (Exponent e : exps_) degree_ += e;
  }

  boost::container::small_vector<Exponent, 12> exps_;
  std::int64_t degree_ = 0;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

/// Descending graded-lex order, the canonical term order.
struct GrlexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const { return grlex_less(b, a); }
};

namespace detail {

// Monomials of one operation packed into a single 128-bit mixed-radix key:
// the total degree (minus its minimum) is the most significant digit, then
// the exponents x_0, x_1, ... each relative to a per-polynomial offset. Keys
// of operands encoded in the same radix system add under multiplication, and
// integer order on keys is the grlex order.
using Key = unsigned __int128;

struct PackedSpace {
  std::vector<std::uint64_t> radix;
  std::vector<Key> stride;
  Key deg_stride = 0;
  bool ok = false;

  explicit PackedSpace(const std::vector<std::int64_t>& range) {
    const std::size_t n = range.size();
    radix.resize(n);
    stride.resize(n);
    Key st = 1;
    std::uint64_t deg_range = 0;
    for (std::size_t i = n; i-- > 0;) {
      stride[i] = st;
      radix[i] = static_cast<std::uint64_t>(range[i]) + 1;
      if (__builtin_mul_overflow(st, static_cast<Key>(radix[i]), &st)) return;
      deg_range += static_cast<std::uint64_t>(range[i]);
    }
    deg_stride = st;
    Key total;
    if (__builtin_mul_overflow(st, static_cast<Key>(deg_range + 1), &total)) return;
    ok = true;
  }

  Key encode(const Monomial& m, const std::vector<std::int64_t>& lo, std::int64_t deg_lo) const {
    Key k = static_cast<Key>(m.degree() - deg_lo) * deg_stride;
    for (std::size_t i = 0; i < radix.size(); ++i) k += static_cast<Key>(m[i] - lo[i]) * stride[i];
    return k;
  }

  /// Digits of k, least significant last: fields[i] = exponent_i - lo_i.
  void digits(Key k, std::vector<std::int64_t>& fields) const {
    for (std::size_t i = radix.size(); i-- > 0;) {
      fields[i] = static_cast<std::int64_t>(k % radix[i]);
      k /= radix[i];
    }
  }

  Monomial decode(Key k, const std::vector<std::int64_t>& lo, std::vector<std::int64_t>& scratch) const {
    digits(k, scratch);
    Monomial m(radix.size());
    for (std::size_t i = 0; i < radix.size(); ++i) m.set(i, static_cast<Exponent>(scratch[i] + lo[i]));
    return m;
  }
};

inline std::int64_t sum(const std::vector<std::int64_t>& v) {
  std::int64_t s = 0;
  for (auto x : v) s += x;
  return s;
}

}  // namespace detail

template <CoefficientRing R>
class LaurentPoly {
 public:
  using Coeff = R;
  using Traits = ring_traits<R>;
  using Term = std::pair<Monomial, R>;

  LaurentPoly() = default;
  explicit LaurentPoly(std::size_t nvars) : nvars_(nvars) {}

  static LaurentPoly zero(std::size_t nvars) { return LaurentPoly(nvars); }

  static LaurentPoly constant(std::size_t nvars, R c) {
    return monomial(nvars, Monomial(nvars), std::move(c));
  }

  static LaurentPoly one(std::size_t nvars) { return constant(nvars, Traits::one()); }

  static LaurentPoly monomial(std::size_t nvars, Monomial m, R c) {
    if (m.size() != nvars) throw ArityMismatch("monomial arity differs from nvars");
    LaurentPoly p(nvars);
    if (!Traits::is_zero(c)) p.terms_.emplace_back(std::move(m), std::move(c));
    return p;
  }

  /// The generator x_i (optionally raised to a power).
  static LaurentPoly variable(std::size_t nvars, std::size_t i, Exponent power = 1) {
    if (i >= nvars) throw IndexOutOfRange("variable index " + std::to_string(i) + " >= nvars");
    Monomial m(nvars);
    m.set(i, power);
    return monomial(nvars, std::move(m), Traits::one());
  }

  /// Builds a canonical polynomial from arbitrary terms (merges duplicates, drops zeros).
  static LaurentPoly from_terms(std::size_t nvars, std::vector<Term> terms) {
    for (const auto& t : terms) {
      if (t.first.size() != nvars) throw ArityMismatch("term arity differs from nvars");
    }
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return grlex_less(b.first, a.first); });
    LaurentPoly p(nvars);
    for (auto& t : terms) {
      if (!p.terms_.empty() && p.terms_.back().first == t.first) {
        p.terms_.back().second += t.second;
        if (Traits::is_zero(p.terms_.back().second)) p.terms_.pop_back();
      } else if (!Traits::is_zero(t.second)) {
        p.terms_.push_back(std::move(t));
      }
    }
    return p;
  }

  /// Adopts terms already in strictly descending order with nonzero coefficients.
  static LaurentPoly from_sorted_terms(std::size_t nvars, std::vector<Term> terms) {
    LaurentPoly p(nvars);
    p.terms_ = std::move(terms);
    return p;
  }

  std::size_t nvars() const { return nvars_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_monomial() const { return terms_.size() == 1; }
  bool is_constant() const { return is_zero() || (terms_.size() == 1 && terms_.front().first.is_one()); }

  /// Leading (grlex-largest) term. Undefined on zero.
  const Term& leading() const { return terms_.front(); }
  const Term& trailing() const { return terms_.back(); }

  R coefficient(const Monomial& m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const Term& t, const Monomial& x) { return grlex_less(x, t.first); });
    if (it != terms_.end() && it->first == m) return it->second;
    return Traits::zero();
  }

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.nvars_ != b.nvars_ || a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
      if (!(a.terms_[i].first == b.terms_[i].first) || !(a.terms_[i].second == b.terms_[i].second)) return false;
    }
    return true;
  }

  LaurentPoly operator-() const {
    LaurentPoly r = *this;
    for (auto& t : r.terms_) t.second = -t.second;
    return r;
  }

  friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) { return merge(a, b, false); }
  friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) { return merge(a, b, true); }
  LaurentPoly& operator+=(const LaurentPoly& b) { return *this = *this + b; }
  LaurentPoly& operator-=(const LaurentPoly& b) { return *this = *this - b; }

  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    check_arity(a, b);
    if (a.is_zero() || b.is_zero()) return LaurentPoly(a.nvars_);
    if (a.size() < b.size()) return multiply(b, a);
    return multiply(a, b);
  }
  LaurentPoly& operator*=(const LaurentPoly& b) { return *this = *this * b; }

  /// Multiplication by a ring scalar.
  LaurentPoly scaled(const R& c) const {
    if (Traits::is_zero(c)) return LaurentPoly(nvars_);
    LaurentPoly r = *this;
    for (auto& t : r.terms_) t.second *= c;
    return r;
  }

  /// Multiplication by a monomial c * x^m (order-preserving, no re-sort).
  LaurentPoly shifted(const Monomial& m, const R& c) const {
    if (Traits::is_zero(c)) return LaurentPoly(nvars_);
    LaurentPoly r(nvars_);
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.emplace_back(t.first * m, t.second * c);
    // Coefficients over an integral domain never vanish here.
    return r;
  }

  /// Per-variable minimum and maximum exponents (zeros for the zero polynomial).
  void exponent_bounds(std::vector<std::int64_t>& lo, std::vector<std::int64_t>& hi) const {
    lo.assign(nvars_, 0);
    hi.assign(nvars_, 0);
    bool first = true;
    for (const auto& [m, c] : terms_) {
      for (std::size_t i = 0; i < nvars_; ++i) {
        if (first || m[i] < lo[i]) lo[i] = m[i];
        if (first || m[i] > hi[i]) hi[i] = m[i];
      }
      first = false;
    }
  }

  static void check_arity(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.nvars_ != b.nvars_) {
      throw ArityMismatch("arity mismatch: " + std::to_string(a.nvars_) + " vs " + std::to_string(b.nvars_));
    }
  }

 private:
  static LaurentPoly merge(const LaurentPoly& a, const LaurentPoly& b, bool negate_b) {
    check_arity(a, b);
    LaurentPoly r(a.nvars_);
    r.terms_.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      if (j == b.size() || (i < a.size() && grlex_less(b.terms_[j].first, a.terms_[i].first))) {
        r.terms_.push_back(a.terms_[i++]);
      } else if (i == a.size() || grlex_less(a.terms_[i].first, b.terms_[j].first)) {
        r.terms_.emplace_back(b.terms_[j].first, negate_b ? R(-b.terms_[j].second) : b.terms_[j].second);
        ++j;
      } else {
        R c = negate_b ? R(a.terms_[i].second - b.terms_[j].second) : R(a.terms_[i].second + b.terms_[j].second);
        if (!Traits::is_zero(c)) r.terms_.emplace_back(a.terms_[i].first, std::move(c));
        ++i;
        ++j;
      }
    }
    return r;
  }

  static LaurentPoly multiply(const LaurentPoly& big, const LaurentPoly& small) {
    if (small.is_monomial()) return big.shifted(small.terms_[0].first, small.terms_[0].second);
    if (auto r = multiply_packed(big, small)) return std::move(*r);
    return multiply_generic(big, small);
  }

  // Heap merge of the |small| sorted rows big * small_j on packed keys; the
  // output comes out in descending order and needs no hashing or sorting.
  static std::optional<LaurentPoly> multiply_packed(const LaurentPoly& big, const LaurentPoly& small) {
    const std::size_t n = big.nvars_;
    std::vector<std::int64_t> lo_a(n), hi_a(n), lo_b(n), hi_b(n), lo(n), range(n);
    big.exponent_bounds(lo_a, hi_a);
    small.exponent_bounds(lo_b, hi_b);
    for (std::size_t i = 0; i < n; ++i) {
      lo[i] = lo_a[i] + lo_b[i];
      range[i] = hi_a[i] + hi_b[i] - lo[i];
      if (lo[i] < std::numeric_limits<Exponent>::min() || lo[i] + range[i] > std::numeric_limits<Exponent>::max()) {
        throw ExponentOverflow("exponent overflow in product");
      }
    }
    detail::PackedSpace space(range);
    if (!space.ok) return std::nullopt;
    std::vector<detail::Key> ka(big.size()), kb(small.size());
    const auto dlo_a = detail::sum(lo_a), dlo_b = detail::sum(lo_b);
    for (std::size_t i = 0; i < big.size(); ++i) ka[i] = space.encode(big.terms_[i].first, lo_a, dlo_a);
    for (std::size_t j = 0; j < small.size(); ++j) kb[j] = space.encode(small.terms_[j].first, lo_b, dlo_b);

    const std::size_t m = small.size();
    std::vector<std::size_t> row(m, 0);
    std::vector<detail::Key> key(m);
    std::vector<std::uint32_t> heap(m);
    for (std::size_t j = 0; j < m; ++j) {
      key[j] = ka[0] + kb[j];
      heap[j] = static_cast<std::uint32_t>(j);
    }
    auto less = [&](std::uint32_t x, std::uint32_t y) { return key[x] < key[y]; };
    std::make_heap(heap.begin(), heap.end(), less);

    std::vector<std::pair<detail::Key, R>> out;
    while (!heap.empty()) {
      const detail::Key k = key[heap.front()];
      R c = Traits::zero();
      while (!heap.empty() && key[heap.front()] == k) {
        std::pop_heap(heap.begin(), heap.end(), less);
        const std::uint32_t j = heap.back();
        Traits::add_product(c, big.terms_[row[j]].second, small.terms_[j].second);
        if (++row[j] < big.size()) {
          key[j] = ka[row[j]] + kb[j];
          std::push_heap(heap.begin(), heap.end(), less);
        } else {
          heap.pop_back();
        }
      }
      if (!Traits::is_zero(c)) out.emplace_back(k, std::move(c));
    }
    LaurentPoly r(n);
    r.terms_.reserve(out.size());
    std::vector<std::int64_t> scratch(n);
    for (auto& [k, c] : out) r.terms_.emplace_back(space.decode(k, lo, scratch), std::move(c));
    return r;
  }

  static LaurentPoly multiply_generic(const LaurentPoly& big, const LaurentPoly& small) {
    struct Entry {
      Monomial m;
      std::size_t i, j;
    };
    auto less = [](const Entry& x, const Entry& y) { return grlex_less(x.m, y.m); };
    std::vector<Entry> heap;
    heap.reserve(small.size());
    for (std::size_t j = 0; j < small.size(); ++j) heap.push_back({big.terms_[0].first * small.terms_[j].first, 0, j});
    std::make_heap(heap.begin(), heap.end(), less);

    LaurentPoly r(big.nvars_);
    while (!heap.empty()) {
      std::pop_heap(heap.begin(), heap.end(), less);
      Entry top = std::move(heap.back());
      heap.pop_back();
      R c = Traits::zero();
      auto take = [&](Entry& e) {
        Traits::add_product(c, big.terms_[e.i].second, small.terms_[e.j].second);
        if (++e.i < big.size()) {
          e.m = big.terms_[e.i].first * small.terms_[e.j].first;
          heap.push_back(std::move(e));
          std::push_heap(heap.begin(), heap.end(), less);
        }
      };
      Monomial m = top.m;
      take(top);
      while (!heap.empty() && heap.front().m == m) {
        std::pop_heap(heap.begin(), heap.end(), less);
        Entry e = std::move(heap.back());
        heap.pop_back();
        take(e);
      }
      if (!Traits::is_zero(c)) r.terms_.emplace_back(std::move(m), std::move(c));
    }
    return r;
  }

  std::size_t nvars_ = 0;
  std::vector<Term> terms_;
};

template <CoefficientRing R>
LaurentPoly<R> pow(const LaurentPoly<R>& p, std::int64_t n) {
  if (n < 0) throw std::invalid_argument("pow: negative exponent; use a monomial inverse instead");
  LaurentPoly<R> result = LaurentPoly<R>::one(p.nvars());
  if (n == 0) return result;
  if (p.is_monomial()) {
    const auto& [m, c] = p.leading();
    R cn = ring_traits<R>::one();
    for (std::int64_t i = 0; i < n; ++i) cn *= c;
    return LaurentPoly<R>::monomial(p.nvars(), m.pow(n), std::move(cn));
  }
  LaurentPoly<R> base = p;
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n > 0) base *= base;
  }
  return result;
}

/// Per-variable minimum exponents (zeros for the zero polynomial).
template <CoefficientRing R>
std::vector<Exponent> min_exponents(const LaurentPoly<R>& p) {
  std::vector<Exponent> lo(p.nvars(), 0);
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    for (std::size_t i = 0; i < p.nvars(); ++i) lo[i] = first ? m[i] : std::min(lo[i], m[i]);
    first = false;
  }
  return lo;
}

template <CoefficientRing R>
std::vector<Exponent> max_exponents(const LaurentPoly<R>& p) {
  std::vector<Exponent> hi(p.nvars(), 0);
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    for (std::size_t i = 0; i < p.nvars(); ++i) hi[i] = first ? m[i] : std::max(hi[i], m[i]);
    first = false;
  }
  return hi;
}

/// True iff no term of p has a negative exponent in any of the listed variables.
template <CoefficientRing R>
bool is_polynomial_in(const LaurentPoly<R>& p, std::span<const std::size_t> vars) {
  for (const auto& [m, c] : p.terms()) {
    for (std::size_t v : vars) {
      if (m[v] < 0) return false;
    }
  }
  return true;
}

template <CoefficientRing R>
bool is_polynomial(const LaurentPoly<R>& p) {
  for (const auto& [m, c] : p.terms()) {
    for (Exponent e : m.exponents()) {
      if (e < 0) return false;
    }
  }
  return true;
}

namespace detail {

/// Heap division on packed keys. Returns nullopt when the monomials do not fit
/// a 128-bit key, otherwise the division result (nullopt inside = remainder).
/// `lo`, `hi` bound the quotient exponents and `floor_m` its trailing monomial.
template <CoefficientRing R>
std::optional<std::optional<LaurentPoly<R>>> packed_divide(const LaurentPoly<R>& p, const LaurentPoly<R>& q,
                                                           const std::vector<std::int64_t>& s_lo,
                                                           const std::vector<std::int64_t>& s_hi,
                                                           const Monomial& floor_m) {
  using Poly = LaurentPoly<R>;
  using Traits = ring_traits<R>;
  const std::size_t n = p.nvars();
  std::vector<std::int64_t> p_lo, p_hi, q_lo, q_hi;
  p.exponent_bounds(p_lo, p_hi);
  q.exponent_bounds(q_lo, q_hi);
  std::vector<std::int64_t> range(n);
  for (std::size_t i = 0; i < n; ++i) range[i] = p_hi[i] - p_lo[i];
  PackedSpace space(range);
  if (!space.ok) return std::nullopt;

  const auto& pt = p.terms();
  const auto& qt = q.terms();
  std::vector<Key> kp(pt.size()), kq(qt.size());
  const auto dp = sum(p_lo), dq = sum(q_lo), ds = sum(s_lo);
  for (std::size_t i = 0; i < pt.size(); ++i) kp[i] = space.encode(pt[i].first, p_lo, dp);
  for (std::size_t i = 0; i < qt.size(); ++i) kq[i] = space.encode(qt[i].first, q_lo, dq);
  const Key k_floor = space.encode(floor_m, s_lo, ds);
  std::vector<std::int64_t> lead_fields(n), fields(n), s_range(n);
  space.digits(kq[0], lead_fields);
  for (std::size_t i = 0; i < n; ++i) s_range[i] = s_hi[i] - s_lo[i];
  const R& qlc = qt[0].second;

  std::vector<Key> ks;            // quotient keys (quotient offsets)
  std::vector<R> sc;              // quotient coefficients
  std::vector<std::size_t> row;   // next divisor term index per quotient term
  std::vector<Key> key;           // current product key per quotient term
  std::vector<std::uint32_t> heap;
  auto less = [&](std::uint32_t x, std::uint32_t y) { return key[x] < key[y]; };

  std::size_t pi = 0;
  while (pi < pt.size() || !heap.empty()) {
    Key k;
    R c = Traits::zero();
    if (heap.empty() || (pi < pt.size() && kp[pi] >= key[heap.front()])) {
      k = kp[pi];
      c = pt[pi].second;
      ++pi;
    } else {
      k = key[heap.front()];
    }
    while (!heap.empty() && key[heap.front()] == k) {
      std::pop_heap(heap.begin(), heap.end(), less);
      const std::uint32_t j = heap.back();
      Traits::sub_product(c, qt[row[j]].second, sc[j]);
      if (++row[j] < qt.size()) {
        key[j] = kq[row[j]] + ks[j];
        std::push_heap(heap.begin(), heap.end(), less);
      } else {
        heap.pop_back();
      }
    }
    if (Traits::is_zero(c)) continue;

    space.digits(k, fields);
    for (std::size_t i = 0; i < n; ++i) {
      const std::int64_t f = fields[i] - lead_fields[i];
      if (f < 0 || f > s_range[i]) return std::optional<Poly>{};
    }
    const Key t = k - kq[0];
    if (t < k_floor) return std::optional<Poly>{};
    auto tc = Traits::divide(c, qlc);
    if (!tc) return std::optional<Poly>{};
    ks.push_back(t);
    sc.push_back(std::move(*tc));
    row.push_back(1);
    key.push_back(kq[1] + t);
    heap.push_back(static_cast<std::uint32_t>(ks.size() - 1));
    std::push_heap(heap.begin(), heap.end(), less);
  }

  std::vector<typename Poly::Term> terms;
  terms.reserve(ks.size());
  std::vector<std::int64_t> scratch(n);
  for (std::size_t j = 0; j < ks.size(); ++j) terms.emplace_back(space.decode(ks[j], s_lo, scratch), std::move(sc[j]));
  return std::optional<Poly>{Poly::from_sorted_terms(n, std::move(terms))};
}

}  // namespace detail

/// Exact quotient p / q in the Laurent ring, or nullopt if q does not divide p.
///
/// Quotient terms are produced in descending grlex order; the subtracted
/// products q_i s_j (i >= 1) are merged through a heap holding one entry per
/// quotient term. Since the order is compatible with multiplication of
/// Laurent monomials, lt(p) = lt(s) lt(q) and tt(p) = tt(s) tt(q) whenever
/// p = s q; together with the per-variable exponent window this bounds the
/// candidate quotient monomials, so the loop terminates on non-divisible input.
template <CoefficientRing R>
std::optional<LaurentPoly<R>> try_exact_div(const LaurentPoly<R>& p, const LaurentPoly<R>& q) {
  using Poly = LaurentPoly<R>;
  using Traits = ring_traits<R>;
  Poly::check_arity(p, q);
  const std::size_t n = p.nvars();
  if (q.is_zero()) return std::nullopt;
  if (p.is_zero()) return Poly(n);

  if (q.is_monomial()) {
    const auto& [qm, qc] = q.leading();
    std::vector<typename Poly::Term> out;
    out.reserve(p.size());
    for (const auto& [m, c] : p.terms()) {
      auto d = Traits::divide(c, qc);
      if (!d) return std::nullopt;
      out.emplace_back(m / qm, std::move(*d));
    }
    return Poly::from_sorted_terms(n, std::move(out));
  }

  const auto p_lo = min_exponents(p), p_hi = max_exponents(p);
  const auto q_lo = min_exponents(q), q_hi = max_exponents(q);
  std::vector<std::int64_t> lo(n), hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = static_cast<std::int64_t>(p_lo[i]) - q_lo[i];
    hi[i] = static_cast<std::int64_t>(p_hi[i]) - q_hi[i];
    if (lo[i] > hi[i]) return std::nullopt;
  }
  const Monomial floor_m = p.trailing().first / q.trailing().first;
  for (std::size_t i = 0; i < n; ++i) {
    if (floor_m[i] < lo[i] || floor_m[i] > hi[i]) return std::nullopt;
  }
  if (auto r = detail::packed_divide(p, q, lo, hi, floor_m)) return std::move(*r);

  const auto& qt = q.terms();
  const auto& pt = p.terms();
  const auto& [qlm, qlc] = q.leading();
  std::vector<typename Poly::Term> s;

  struct Entry {
    Monomial m;
    std::size_t i, j;  // product q_i * s_j
  };
  auto less = [](const Entry& x, const Entry& y) { return grlex_less(x.m, y.m); };
  std::vector<Entry> heap;
  std::size_t pi = 0;

  while (pi < pt.size() || !heap.empty()) {
    Monomial m;
    R c = Traits::zero();
    if (heap.empty() || (pi < pt.size() && !grlex_less(pt[pi].first, heap.front().m))) {
      m = pt[pi].first;
      c = pt[pi].second;
      ++pi;
    } else {
      m = heap.front().m;
    }
    while (!heap.empty() && heap.front().m == m) {
      std::pop_heap(heap.begin(), heap.end(), less);
      Entry e = std::move(heap.back());
      heap.pop_back();
      Traits::sub_product(c, qt[e.i].second, s[e.j].second);
      if (++e.i < qt.size()) {
        e.m = qt[e.i].first * s[e.j].first;
        heap.push_back(std::move(e));
        std::push_heap(heap.begin(), heap.end(), less);
      }
    }
    if (Traits::is_zero(c)) continue;

    Monomial tm = m / qlm;
    if (grlex_less(tm, floor_m)) return std::nullopt;
    for (std::size_t i = 0; i < n; ++i) {
      if (tm[i] < lo[i] || tm[i] > hi[i]) return std::nullopt;
    }
    auto tc = Traits::divide(c, qlc);
    if (!tc) return std::nullopt;
    s.emplace_back(std::move(tm), std::move(*tc));
    heap.push_back({qt[1].first * s.back().first, 1, s.size() - 1});
    std::push_heap(heap.begin(), heap.end(), less);
  }
  return Poly::from_sorted_terms(n, std::move(s));
}

/// Exact quotient; throws NotDivisible when the division leaves a remainder.
template <CoefficientRing R>
LaurentPoly<R> exact_div(const LaurentPoly<R>& p, const LaurentPoly<R>& q, std::string_view context = {}) {
  if (q.is_zero()) throw NotDivisible("division by zero" + (context.empty() ? std::string{} : ": " + std::string(context)));
  auto r = try_exact_div(p, q);
  if (!r) {
    throw NotDivisible("not divisible (" + std::to_string(p.size()) + " terms by " + std::to_string(q.size()) +
                       " terms)" + (context.empty() ? std::string{} : ": " + std::string(context)));
  }
  return std::move(*r);
}

/// Inverse of a unit-coefficient monomial, or nullopt if p is not a unit.
template <CoefficientRing R>
std::optional<LaurentPoly<R>> unit_inverse(const LaurentPoly<R>& p) {
  if (!p.is_monomial()) return std::nullopt;
  const auto& [m, c] = p.leading();
  auto inv = ring_traits<R>::inverse(c);
  if (!inv) return std::nullopt;
  return LaurentPoly<R>::monomial(p.nvars(), Monomial(p.nvars()) / m, std::move(*inv));
}

/// Substitutes every variable x_i of p by images[i]; all images share one
/// target arity. A variable appearing with a negative exponent must map to a
/// unit (a monomial with invertible coefficient).
template <CoefficientRing R>
LaurentPoly<R> substitute(const LaurentPoly<R>& p, std::span<const LaurentPoly<R>> images) {
  using Poly = LaurentPoly<R>;
  if (images.size() != p.nvars()) throw ArityMismatch("substitute: need one image per variable");
  const std::size_t target = images.empty() ? 0 : images[0].nvars();
  for (const auto& im : images) {
    if (im.nvars() != target) throw ArityMismatch("substitute: images have different arities");
  }
  const auto lo = min_exponents(p), hi = max_exponents(p);

  // powers[i][e - lo[i]] = images[i]^e
  std::vector<std::vector<std::optional<Poly>>> powers(p.nvars());
  std::vector<std::optional<Poly>> inverses(p.nvars());
  for (std::size_t i = 0; i < p.nvars(); ++i) {
    if (lo[i] < 0) {
      inverses[i] = unit_inverse(images[i]);
      if (!inverses[i]) {
        throw NonInvertibleSubstitution("variable " + std::to_string(i) +
                                        " has a negative exponent but its image is not a unit");
      }
    }
    powers[i].resize(static_cast<std::size_t>(hi[i] - lo[i] + 1));
  }
  auto power_of = [&](std::size_t i, Exponent e) -> const Poly& {
    auto& slot = powers[i][static_cast<std::size_t>(e - lo[i])];
    if (!slot) slot = e >= 0 ? pow(images[i], e) : pow(*inverses[i], -static_cast<std::int64_t>(e));
    return *slot;
  };

  Poly result(target);
  for (const auto& [m, c] : p.terms()) {
    Poly term = Poly::constant(target, c);
    for (std::size_t i = 0; i < p.nvars() && !term.is_zero(); ++i) {
      if (m[i] != 0) term *= power_of(i, m[i]);
    }
    result += term;
  }
  return result;
}

/// Substitution that tolerates non-unit images of negatively powered
/// variables by clearing denominators: writes p = x^lo * N with N a polynomial
/// in those variables and returns (N(images), prod images_i^(-lo_i)), so that
/// p(images) = first / second as a rational function.
template <CoefficientRing R>
std::pair<LaurentPoly<R>, LaurentPoly<R>> substitute_cleared(const LaurentPoly<R>& p,
                                                             std::span<const LaurentPoly<R>> images) {
  using Poly = LaurentPoly<R>;
  if (images.size() != p.nvars()) throw ArityMismatch("substitute: need one image per variable");
  const std::size_t target = images.empty() ? 0 : images[0].nvars();
  auto lo = min_exponents(p);
  Monomial shift(p.nvars());
  Poly denominator = Poly::one(target);
  for (std::size_t i = 0; i < p.nvars(); ++i) {
    if (lo[i] < 0) {
      shift.set(i, -lo[i]);
      denominator *= pow(images[i], -static_cast<std::int64_t>(lo[i]));
    }
  }
  Poly numerator = substitute(p.shifted(shift, ring_traits<R>::one()), images);
  return {std::move(numerator), std::move(denominator)};
}

/// Partial substitution: listed variables are replaced, all others map to themselves.
template <CoefficientRing R>
LaurentPoly<R> substitute(const LaurentPoly<R>& p, const std::map<std::size_t, LaurentPoly<R>>& assignment) {
  std::vector<LaurentPoly<R>> images;
  images.reserve(p.nvars());
  for (std::size_t i = 0; i < p.nvars(); ++i) {
    auto it = assignment.find(i);
    images.push_back(it != assignment.end() ? it->second : LaurentPoly<R>::variable(p.nvars(), i));
  }
  return substitute(p, std::span<const LaurentPoly<R>>(images));
}

/// Maps an integer polynomial into the Gaussian integers.
inline LaurentPoly<Gaussian> to_gaussian(const LaurentPoly<Integer>& p) {
  std::vector<LaurentPoly<Gaussian>::Term> terms;
  terms.reserve(p.size());
  for (const auto& [m, c] : p.terms()) terms.emplace_back(m, Gaussian{c, Integer(0)});
  return LaurentPoly<Gaussian>::from_terms(p.nvars(), std::move(terms));
}

/// Renders p with the given generator names, terms in canonical order.
template <CoefficientRing R>
std::string to_string(const LaurentPoly<R>& p, std::span<const std::string> names = {}) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    std::string coeff = ring_traits<R>::to_string(c);
    bool negative = !coeff.empty() && coeff[0] == '-';
    if (negative) coeff.erase(0, 1);
    out += first ? (negative ? "-" : "") : (negative ? " - " : " + ");
    first = false;
    std::string mono;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += i < names.size() ? names[i] : "x" + std::to_string(i + 1);
      if (m[i] != 1) mono += "^" + std::to_string(m[i]);
    }
    if (mono.empty()) {
      out += coeff;
    } else if (coeff == "1") {
      out += mono;
    } else {
      out += coeff + "*" + mono;
    }
  }
  return out;
}

}  // namespace qcluster
