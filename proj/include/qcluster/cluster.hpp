#pragma once

// Cluster seeds and mutations, optionally with frozen coefficient rows.

#include <algorithm>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "laurent.hpp"
#include "matrix.hpp"

namespace qcluster {

template <CoefficientRing R>
struct Seed {
  using Poly = LaurentPoly<R>;

  std::vector<Poly> x;               // mutable cluster variables
  IntMatrix B;                       // n x n exchange matrix
  IntMatrix frozen_rows;             // m x n coefficient rows (m may be 0)
  std::vector<Poly> frozen_values;   // m coefficients; never mutated

  std::size_t n() const { return x.size(); }
  std::size_t m() const { return frozen_values.size(); }
  bool has_coefficients() const { return !frozen_values.empty(); }

  /// The (n+m) x n augmented matrix [B; frozen_rows].
  IntMatrix augmented() const { return has_coefficients() ? IntMatrix::stack(B, frozen_rows) : B; }

  friend bool operator==(const Seed& a, const Seed& b) {
    return a.x == b.x && a.B == b.B && a.frozen_rows == b.frozen_rows && a.frozen_values == b.frozen_values;
  }
};

template <CoefficientRing R>
bool check_skew(const Seed<R>& s) {
  return s.B.is_skew_symmetric();
}

template <CoefficientRing R>
bool seed_equal(const Seed<R>& a, const Seed<R>& b) {
  return a == b;
}

/// Validates shapes; throws ArityMismatch / Mismatch on malformed seeds.
template <CoefficientRing R>
void validate_seed(const Seed<R>& s) {
  const std::size_t n = s.n();
  if (s.B.rows() != n || s.B.cols() != n) throw ArityMismatch("seed: B must be n x n");
  if (!s.B.is_skew_symmetric()) throw Mismatch("seed: B is not skew-symmetric");
  if (s.m() > 0 && (s.frozen_rows.rows() != s.m() || s.frozen_rows.cols() != n)) {
    throw ArityMismatch("seed: frozen_rows must be m x n");
  }
  if (s.m() == 0 && s.frozen_rows.rows() != 0) throw ArityMismatch("seed: frozen_rows without frozen_values");
  std::size_t nv = n ? s.x[0].nvars() : 0;
  for (const auto& v : s.x)
    if (v.nvars() != nv) throw ArityMismatch("seed: cluster variables over different generator sets");
  for (const auto& v : s.frozen_values)
    if (v.nvars() != nv) throw ArityMismatch("seed: frozen values over a different generator set");
}

namespace detail {

inline std::int64_t pos(std::int64_t v) { return v > 0 ? v : 0; }

inline int sgn(std::int64_t v) { return (v > 0) - (v < 0); }

/// Matrix mutation of the augmented (rows x n) matrix in direction k.
inline IntMatrix mutate_matrix(const IntMatrix& M, std::size_t k) {
  IntMatrix out = M;
  for (std::size_t i = 0; i < M.rows(); ++i) {
    for (std::size_t j = 0; j < M.cols(); ++j) {
      if (i == k || j == k) {
        out(i, j) = -M(i, j);
      } else {
        out(i, j) = M(i, j) + sgn(M(i, k)) * pos(M(i, k) * M(k, j));
      }
    }
  }
  return out;
}

template <CoefficientRing R>
LaurentPoly<R> power_product(const std::vector<const LaurentPoly<R>*>& base, const std::vector<std::int64_t>& exps,
                             std::size_t nvars) {
  auto result = LaurentPoly<R>::one(nvars);
  for (std::size_t j = 0; j < base.size(); ++j) {
    if (exps[j] != 0) result *= pow(*base[j], exps[j]);
  }
  return result;
}

}  // namespace detail

/// The two exchange monomials of direction k: (prod x^[B_jk]+, prod x^[-B_jk]+),
/// frozen values included through the frozen rows.
template <CoefficientRing R>
std::pair<LaurentPoly<R>, LaurentPoly<R>> exchange_terms(const Seed<R>& s, std::size_t k) {
  const std::size_t n = s.n();
  const std::size_t nv = s.x[k].nvars();
  std::vector<const LaurentPoly<R>*> base;
  std::vector<std::int64_t> plus, minus;
  for (std::size_t j = 0; j < n; ++j) {
    base.push_back(&s.x[j]);
    plus.push_back(detail::pos(s.B(j, k)));
    minus.push_back(detail::pos(-s.B(j, k)));
  }
  for (std::size_t f = 0; f < s.m(); ++f) {
    base.push_back(&s.frozen_values[f]);
    plus.push_back(detail::pos(s.frozen_rows(f, k)));
    minus.push_back(detail::pos(-s.frozen_rows(f, k)));
  }
  return {detail::power_product(base, plus, nv), detail::power_product(base, minus, nv)};
}

/// Mutation in direction k (0-based). Division by x_k must be exact; a
/// remainder means the Laurent phenomenon failed and is reported as NotDivisible.
template <CoefficientRing R>
Seed<R> mutate(const Seed<R>& s, std::size_t k) {
  if (k >= s.n()) {
    throw IndexOutOfRange("mutate: direction " + std::to_string(k + 1) + " outside 1.." + std::to_string(s.n()));
  }
  auto [p, q] = exchange_terms(s, k);
  Seed<R> out = s;
  out.x[k] = exact_div(p + q, s.x[k], "mutation in direction " + std::to_string(k + 1));
  IntMatrix full = detail::mutate_matrix(s.augmented(), k);
  out.B = full.block(0, 0, s.n(), s.n());
  if (s.has_coefficients()) out.frozen_rows = full.block(s.n(), 0, s.m(), s.n());
  return out;
}

/// Checks that the directions in `set` pairwise commute (B_ij = 0).
template <CoefficientRing R>
void check_commuting(const Seed<R>& s, std::span<const std::size_t> set) {
  for (std::size_t a : set) {
    if (a >= s.n()) throw IndexOutOfRange("compound mutation: direction " + std::to_string(a + 1) + " out of range");
    for (std::size_t b : set) {
      if (s.B(a, b) != 0) {
        throw NonCommutingSet("directions " + std::to_string(a + 1) + " and " + std::to_string(b + 1) +
                              " do not commute (B = " + std::to_string(s.B(a, b)) + ")");
      }
    }
  }
}

template <CoefficientRing R>
Seed<R> mutate_sequence(Seed<R> s, std::span<const std::size_t> order) {
  for (std::size_t k : order) s = mutate(s, k);
  return s;
}

/// Composition of pairwise commuting mutations. With `cross_check`, the set is
/// also applied in reverse order and the two results must agree exactly.
template <CoefficientRing R>
Seed<R> compound_mutate(const Seed<R>& s, std::span<const std::size_t> set, bool cross_check = true) {
  check_commuting(s, set);
  Seed<R> forward = mutate_sequence(s, set);
  if (cross_check && set.size() > 1) {
    std::vector<std::size_t> rev(set.rbegin(), set.rend());
    if (!(mutate_sequence(s, std::span<const std::size_t>(rev)) == forward)) {
      throw Mismatch("compound mutation depends on the order of its directions");
    }
  }
  return forward;
}

/// Uniform random mutation path of the given length with no immediate repeats.
inline std::vector<std::size_t> random_path(std::size_t n, std::size_t length, std::mt19937_64& rng) {
  std::vector<std::size_t> path;
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  while (path.size() < length) {
    std::size_t k = pick(rng);
    if (n > 1 && !path.empty() && path.back() == k) continue;
    path.push_back(k);
  }
  return path;
}

}  // namespace qcluster
