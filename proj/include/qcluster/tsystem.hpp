#pragma once

// Generalized bipartite T-systems
//   T_{a,j;k+1} T_{a,j;k-1} = T_{a,j+1;k} T_{a,j-1;k} + q_a prod_{(b,i)} T_{b,i;k}^{A^{i,j}_{b,a}}
// on a finite window of spectral indices j, the cluster seed realizing them,
// and the bipartite walk and polynomiality checks.
//
// Sites (a, j) with 0 <= a < r and j in [j_min, j_max] are numbered
// a * width + (j - j_min). Matrices indexed by sites have the row site first:
// A(site(b,i), site(a,j)) = A^{i,j}_{b,a}. Seed positions 0..N-1 hold the even
// slice, N..2N-1 the odd slice; frozen row a holds q_a.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "cartan.hpp"
#include "cluster.hpp"
#include "errors.hpp"
#include "laurent.hpp"
#include "matrix.hpp"
#include "qsystem.hpp"
#include "serialize.hpp"

namespace qcluster {

enum class Boundary { Unit, Strict };

struct TSystemSpec {
  std::string kind;                 // "lie" or "quiver"
  std::optional<CartanData> cartan;  // kind == "lie"
  IntMatrix gamma;                  // kind == "quiver"
  std::size_t r = 0;
  long j_min = 0;
  long j_max = 0;
  std::vector<long> q;              // q_a
  Boundary boundary = Boundary::Unit;
  IntMatrix A;
  IntMatrix P;

  std::size_t width() const { return static_cast<std::size_t>(j_max - j_min + 1); }
  std::size_t sites() const { return r * width(); }
  bool in_window(long j) const { return j >= j_min && j <= j_max; }
  std::size_t site(std::size_t a, long j) const { return a * width() + static_cast<std::size_t>(j - j_min); }
  std::size_t root_of(std::size_t s) const { return s / width(); }
  long j_of(std::size_t s) const { return j_min + static_cast<long>(s % width()); }
  /// Distance from j to the nearest window edge (0 on the edge).
  long depth(long j) const { return std::min(j - j_min, j_max - j); }
  IntMatrix C() const { return P - A; }
};

namespace detail {

inline void check_window(long j_min, long j_max) {
  if (j_max < j_min) {
    throw InvalidWindow("empty window [" + std::to_string(j_min) + "," + std::to_string(j_max) + "]");
  }
}

inline IntMatrix shift_matrix(std::size_t r, long j_min, long j_max) {
  const auto w = static_cast<std::size_t>(j_max - j_min + 1);
  IntMatrix P(r * w, r * w);
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t i = 0; i + 1 < w; ++i) {
      P(a * w + i, a * w + i + 1) = 1;
      P(a * w + i + 1, a * w + i) = 1;
    }
  return P;
}

inline std::vector<long> broadcast_q(std::vector<long> q, std::size_t r) {
  if (q.empty()) q = {-1};
  if (q.size() == 1) q.assign(r, q[0]);
  if (q.size() != r) throw ArityMismatch("T-system: need one q per node or a single q");
  return q;
}

/// True iff the quiver with arrows i -> j whenever gamma(i,j) > 0 has no cycle.
inline bool acyclic(const IntMatrix& gamma) {
  const std::size_t n = gamma.rows();
  std::vector<int> state(n, 0);
  std::function<bool(std::size_t)> dfs = [&](std::size_t v) {
    state[v] = 1;
    for (std::size_t w = 0; w < n; ++w) {
      if (gamma(v, w) <= 0) continue;
      if (state[w] == 1 || (state[w] == 0 && !dfs(w))) return false;
    }
    state[v] = 2;
    return true;
  };
  for (std::size_t v = 0; v < n; ++v)
    if (state[v] == 0 && !dfs(v)) return false;
  return true;
}

}  // namespace detail

/// T-system of the KR modules of a simply-laced algebra: A^{ij}_{ab} = delta_ij [-C_ab]_+.
inline TSystemSpec lie_tsystem(const CartanData& cd, long j_min, long j_max, std::vector<long> q = {-1},
                               Boundary boundary = Boundary::Unit) {
  detail::check_window(j_min, j_max);
  if (!cd.simply_laced()) throw InvalidType("bipartite T-systems need a simply-laced algebra, got " + cd.name());
  TSystemSpec s;
  s.kind = "lie";
  s.cartan = cd;
  s.r = cd.r();
  s.j_min = j_min;
  s.j_max = j_max;
  s.q = detail::broadcast_q(std::move(q), s.r);
  s.boundary = boundary;
  s.P = detail::shift_matrix(s.r, j_min, j_max);
  s.A = IntMatrix(s.sites(), s.sites());
  for (std::size_t a = 0; a < s.r; ++a)
    for (std::size_t b = 0; b < s.r; ++b)
      if (a != b && cd.C(a, b) < 0)
        for (long j = j_min; j <= j_max; ++j) s.A(s.site(a, j), s.site(b, j)) = -cd.C(a, b);
  return s;
}

/// T-system of an acyclic quiver: A^{j+1,j}_{b,a} = [Gamma_ab]_+, A^{j-1,j}_{b,a} = [Gamma_ba]_+.
inline TSystemSpec quiver_tsystem(const IntMatrix& gamma, long j_min, long j_max, std::vector<long> q = {-1},
                                  Boundary boundary = Boundary::Unit) {
  detail::check_window(j_min, j_max);
  if (!gamma.is_skew_symmetric()) throw InvalidType("quiver matrix must be skew-symmetric");
  if (!detail::acyclic(gamma)) throw InvalidType("quiver must be acyclic");
  TSystemSpec s;
  s.kind = "quiver";
  s.gamma = gamma;
  s.r = gamma.rows();
  s.j_min = j_min;
  s.j_max = j_max;
  s.q = detail::broadcast_q(std::move(q), s.r);
  s.boundary = boundary;
  s.P = detail::shift_matrix(s.r, j_min, j_max);
  s.A = IntMatrix(s.sites(), s.sites());
  for (std::size_t a = 0; a < s.r; ++a)
    for (std::size_t b = 0; b < s.r; ++b)
      for (long j = j_min; j <= j_max; ++j) {
        if (gamma(a, b) > 0 && s.in_window(j + 1)) s.A(s.site(b, j + 1), s.site(a, j)) = gamma(a, b);
        if (gamma(b, a) > 0 && s.in_window(j - 1)) s.A(s.site(b, j - 1), s.site(a, j)) = gamma(b, a);
      }
  return s;
}

// ---------------------------------------------------------------------------
// Validation

struct SpecReport {
  bool nonnegative = true;       // A >= 0
  bool symmetric = true;         // A = A^t
  bool commutation = true;       // (P A^t - A P) = 0 on interior rows and columns
  bool column_sums = true;       // sum_k P^{kj}_{ab} = 2 delta_ab for interior j
  std::vector<std::size_t> boundary_columns;  // sites where a condition fails only at the edge
  bool ok() const { return nonnegative && symmetric && commutation && column_sums; }
};

/// Checks the three conditions under which the windowed seed realizes the
/// recursion. Edge sites carry truncation artifacts; they are reported in
/// `boundary_columns` rather than counted as failures.
inline SpecReport validate_spec(const TSystemSpec& s) {
  SpecReport rep;
  const std::size_t n = s.sites();
  auto interior = [&](std::size_t site) { return s.depth(s.j_of(site)) > 0; };
  std::set<std::size_t> flagged;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (s.A(i, j) < 0) rep.nonnegative = false;
      if (s.A(i, j) != s.A(j, i)) rep.symmetric = false;
    }
  const IntMatrix comm = s.P * s.A.transpose() - s.A * s.P;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (comm(i, j) == 0) continue;
      if (interior(i) && interior(j)) {
        rep.commutation = false;
      } else {
        flagged.insert(interior(j) ? i : j);
      }
    }
  for (std::size_t col = 0; col < n; ++col)
    for (std::size_t a = 0; a < s.r; ++a) {
      long sum = 0;
      for (std::size_t row = 0; row < n; ++row)
        if (s.root_of(row) == a) sum += s.P(row, col);
      const long want = a == s.root_of(col) ? 2 : 0;
      if (sum == want) continue;
      if (interior(col)) {
        rep.column_sums = false;
      } else {
        flagged.insert(col);
      }
    }
  rep.boundary_columns.assign(flagged.begin(), flagged.end());
  return rep;
}

// ---------------------------------------------------------------------------
// Recursion

/// (root, j, k)
using TIndex = std::tuple<std::size_t, long, long>;

/// Memoized solution of the windowed T-system from the slices k = 0 and k = 1.
class TState {
 public:
  using Poly = LaurentPoly<Integer>;

  TState(TSystemSpec spec, std::vector<Poly> q, const std::vector<Poly>& slice0, const std::vector<Poly>& slice1)
      : spec_(std::move(spec)), q_(std::move(q)) {
    const std::size_t n = spec_.sites();
    if (q_.size() != spec_.r || slice0.size() != n || slice1.size() != n) {
      throw ArityMismatch("TState: need r coefficients and one value per site in each slice");
    }
    nvars_ = slice1[0].nvars();
    for (std::size_t s = 0; s < n; ++s) {
      table_.emplace(TIndex{spec_.root_of(s), spec_.j_of(s), 0}, slice0[s]);
      table_.emplace(TIndex{spec_.root_of(s), spec_.j_of(s), 1}, slice1[s]);
    }
  }

  const TSystemSpec& spec() const { return spec_; }
  std::size_t nvars() const { return nvars_; }
  std::size_t divisions() const { return divisions_; }

  /// T_{a,j;k}; outside the window it is 1 (unit policy) or a WindowEdge error.
  const Poly& get(std::size_t a, long j, long k) {
    if (a >= spec_.r) throw IndexOutOfRange("T-system: node index out of range");
    if (!spec_.in_window(j)) {
      if (spec_.boundary == Boundary::Strict) {
        throw WindowEdge("T[" + std::to_string(a + 1) + "," + std::to_string(j) + "," + std::to_string(k) +
                         "] lies outside the window");
      }
      if (!unit_) unit_ = Poly::one(nvars_);
      return *unit_;
    }
    auto it = table_.find({a, j, k});
    if (it != table_.end()) return it->second;
    if (k >= 2) {
      t_step(a, j, k - 1, Direction::Up);
    } else {
      t_step(a, j, k + 1, Direction::Down);
    }
    return table_.at({a, j, k});
  }

  /// T_{a,j+1;k} T_{a,j-1;k} + q_a prod T_{b,i;k}^{A^{i,j}_{b,a}}.
  Poly rhs(std::size_t a, long j, long k) {
    Poly shift = get(a, j + 1, k) * get(a, j - 1, k);
    Poly coupling = Poly::one(nvars_);
    const std::size_t col = spec_.site(a, j);
    for (std::size_t row = 0; row < spec_.sites(); ++row) {
      const auto e = spec_.A(row, col);
      if (e != 0) coupling *= pow(get(spec_.root_of(row), spec_.j_of(row), k), e);
    }
    return shift + q_[a] * coupling;
  }

  /// Up: T_{a,j;k+1} from slices k, k-1. Down: T_{a,j;k-1} from slices k, k+1.
  Poly t_step(std::size_t a, long j, long k, Direction dir) {
    if (!spec_.in_window(j)) throw WindowEdge("t_step: site outside the window");
    const long target = dir == Direction::Up ? k + 1 : k - 1;
    const long other = dir == Direction::Up ? k - 1 : k + 1;
    Poly numerator = rhs(a, j, k);
    const Poly& divisor = get(a, j, other);
    const std::string where =
        "T[" + std::to_string(a + 1) + "," + std::to_string(j) + "," + std::to_string(target) + "]";
    if (divisor.is_zero()) throw SingularBoundary(where + ": divisor vanishes");
    ++divisions_;
    Poly value = exact_div(numerator, divisor, "T-system step to " + where);
    auto [it, inserted] = table_.emplace(TIndex{a, j, target}, value);
    if (!inserted && !(it->second == value)) throw Mismatch(where + " disagrees with the stored value");
    return value;
  }

 private:
  TSystemSpec spec_;
  std::vector<Poly> q_;
  std::size_t nvars_ = 0;
  std::map<TIndex, Poly> table_;
  std::optional<Poly> unit_;
  std::size_t divisions_ = 0;
};

/// Generator layout: slice 0 at indices 0..N-1, slice 1 at N..2N-1, and with
/// symbolic coefficients q_a at 2N+a. In KR mode slice 0 is set to 1.
inline std::size_t t_nvars(const TSystemSpec& s, bool symbolic_q) { return 2 * s.sites() + (symbolic_q ? s.r : 0); }

inline std::vector<LaurentPoly<Integer>> t_coefficients(const TSystemSpec& s, bool symbolic_q) {
  using Poly = LaurentPoly<Integer>;
  const std::size_t nv = t_nvars(s, symbolic_q);
  std::vector<Poly> q;
  for (std::size_t a = 0; a < s.r; ++a)
    q.push_back(symbolic_q ? Poly::variable(nv, 2 * s.sites() + a) : Poly::constant(nv, s.q[a]));
  return q;
}

inline TState make_tstate(const TSystemSpec& s, InitialMode mode = InitialMode::Generic, bool symbolic_q = false) {
  using Poly = LaurentPoly<Integer>;
  const std::size_t n = s.sites();
  const std::size_t nv = t_nvars(s, symbolic_q);
  std::vector<Poly> slice0, slice1;
  for (std::size_t i = 0; i < n; ++i) {
    slice0.push_back(mode == InitialMode::KR ? Poly::one(nv) : Poly::variable(nv, i));
    slice1.push_back(Poly::variable(nv, n + i));
  }
  return TState(s, t_coefficients(s, symbolic_q), slice0, slice1);
}

// ---------------------------------------------------------------------------
// Cluster seed

/// Frozen rows: row a is -1 on the even copies of the sites of a, +1 on the odd ones.
inline IntMatrix t_coefficient_rows(const TSystemSpec& s) {
  const std::size_t n = s.sites();
  IntMatrix F(s.r, 2 * n);
  for (std::size_t site = 0; site < n; ++site) {
    F(s.root_of(site), site) = -1;
    F(s.root_of(site), n + site) = 1;
  }
  return F;
}

/// The seed at node 0: x = (T_{.;0}, T_{.;1}) over the window, B = [[0, -C^t], [C, 0]]
/// with C = P - A, and r frozen coefficients.
inline Seed<Integer> build_t_seed(const TSystemSpec& s, InitialMode mode = InitialMode::Generic,
                                  bool symbolic_q = false) {
  using Poly = LaurentPoly<Integer>;
  if (s.sites() == 0) throw InvalidWindow("T-system seed over an empty window");
  const std::size_t n = s.sites();
  const std::size_t nv = t_nvars(s, symbolic_q);
  Seed<Integer> seed;
  for (std::size_t i = 0; i < 2 * n; ++i)
    seed.x.push_back(mode == InitialMode::KR && i < n ? Poly::one(nv) : Poly::variable(nv, i));
  const IntMatrix C = s.C();
  seed.B = IntMatrix::blocks(IntMatrix(n, n), -C.transpose(), C, IntMatrix(n, n));
  seed.frozen_rows = t_coefficient_rows(s);
  seed.frozen_values = t_coefficients(s, symbolic_q);
  return seed;
}

// ---------------------------------------------------------------------------
// Bipartite walk

struct TWalkReport {
  std::size_t half_steps = 0;
  std::size_t matrix_entries_checked = 0;      // interior entries of the augmented matrix
  std::size_t boundary_entries_differing = 0;  // edge artifacts, informational
  std::size_t boundary_exchange_pairs = 0;     // edge pairs of one parity that do not commute
  std::size_t variables_compared = 0;          // interior variables equal to the recursion
  std::size_t boundary_variables = 0;          // outside the dependence cone, not asserted
};

/// Truncation effects travel one site per half step: after h half steps the
/// augmented matrix column of a site at depth >= h still agrees with the
/// untruncated system.
inline bool column_interior(const TSystemSpec& s, std::size_t site, std::size_t half_steps) {
  return s.depth(s.j_of(site)) >= static_cast<long>(half_steps);
}

/// T_{a,j;k} depends on the initial slices only through sites within k - 1
/// of j, so it is unaffected by the edges iff depth(j) >= k - 1.
inline bool variable_interior(const TSystemSpec& s, long j, long k) { return s.depth(j) >= k - 1; }

namespace detail {

/// Mutates every slot of one parity. Slots whose exchange entries are
/// nonzero only through edge artifacts are mutated in slot order; a nonzero
/// entry touching an interior column is a ScheduleMismatch.
inline Seed<Integer> parity_mutate(const TSystemSpec& s, const Seed<Integer>& seed,
                                   const std::vector<std::size_t>& set, std::size_t h, TWalkReport& rep) {
  bool commuting = true;
  for (std::size_t a : set)
    for (std::size_t b : set) {
      if (a >= b || seed.B(a, b) == 0) continue;
      const std::size_t n = s.sites();
      if (column_interior(s, a % n, h) || column_interior(s, b % n, h)) {
        throw ScheduleMismatch("T-system walk: slots " + std::to_string(a + 1) + " and " + std::to_string(b + 1) +
                               " of one parity are coupled before half step " + std::to_string(h));
      }
      ++rep.boundary_exchange_pairs;
      commuting = false;
    }
  if (commuting) return compound_mutate(seed, std::span<const std::size_t>(set));
  Seed<Integer> out = seed;
  for (std::size_t k : set) out = mutate(out, k);
  return out;
}

}  // namespace detail

/// Applies mu_even, mu_odd alternately for n_periods periods. After each half
/// step the augmented matrix must equal (-1)^h times the initial one on
/// interior columns, and every interior mutated variable must equal
/// T_{a,j;k+2} from the direct recursion.
inline TWalkReport bipartite_walk_check(const TSystemSpec& s, std::size_t n_periods,
                                        InitialMode mode = InitialMode::Generic, bool symbolic_q = false) {
  const std::size_t n = s.sites();
  Seed<Integer> seed = build_t_seed(s, mode, symbolic_q);
  const IntMatrix start = seed.augmented();
  TState state = make_tstate(s, mode, symbolic_q);
  std::vector<std::size_t> even, odd;
  for (std::size_t i = 0; i < n; ++i) {
    even.push_back(i);
    odd.push_back(n + i);
  }
  std::vector<long> slice(2 * n, 0);
  for (std::size_t i = 0; i < n; ++i) slice[n + i] = 1;

  TWalkReport rep;
  for (std::size_t h = 1; h <= 2 * n_periods; ++h) {
    const auto& set = h % 2 == 1 ? even : odd;
    seed = detail::parity_mutate(s, seed, set, h, rep);
    for (std::size_t p : set) slice[p] += 2;
    rep.half_steps = h;

    const IntMatrix cur = seed.augmented();
    const long sign = h % 2 == 1 ? -1 : 1;
    for (std::size_t col = 0; col < 2 * n; ++col) {
      const bool interior = column_interior(s, col % n, h);
      for (std::size_t row = 0; row < cur.rows(); ++row) {
        if (cur(row, col) == sign * start(row, col)) {
          if (interior) ++rep.matrix_entries_checked;
          continue;
        }
        if (interior) {
          throw ScheduleMismatch("T-system walk: augmented matrix entry (" + std::to_string(row + 1) + "," +
                                 std::to_string(col + 1) + ") after half step " + std::to_string(h) + " is " +
                                 std::to_string(cur(row, col)) + ", expected " +
                                 std::to_string(sign * start(row, col)));
        }
        ++rep.boundary_entries_differing;
      }
    }

    for (std::size_t p : set) {
      const std::size_t site = p % n;
      const std::size_t a = s.root_of(site);
      const long j = s.j_of(site);
      const long k = slice[p];
      if (!variable_interior(s, j, k)) {
        ++rep.boundary_variables;
        continue;
      }
      if (!(seed.x[p] == state.get(a, j, k))) {
        throw Mismatch("T-system walk: T[" + std::to_string(a + 1) + "," + std::to_string(j) + "," +
                       std::to_string(k) + "] differs from the recursion");
      }
      ++rep.variables_compared;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Polynomiality

struct TPolyReport {
  std::size_t checked = 0;           // interior T_{a,j;k}, 1 <= k <= k_max
  std::size_t boundary_skipped = 0;  // outside the dependence cone
};

/// From unit data T_{.;0} = 1 the slice k = -1 must vanish (q = -1); then
/// every interior T_{a,j;k}, 1 <= k <= k_max, must be a polynomial in the
/// slice-1 generators. Entries outside the dependence cone see the unit
/// boundary and are not defined by an exact recursion; they are skipped.
inline TPolyReport t_polynomiality_check(const TSystemSpec& s, long k_max) {
  TState state = make_tstate(s, InitialMode::KR);
  TPolyReport rep;
  for (std::size_t site = 0; site < s.sites(); ++site) {
    const std::size_t a = s.root_of(site);
    const long j = s.j_of(site);
    if (!state.get(a, j, -1).is_zero()) {
      throw PolynomialityFailure("T[" + std::to_string(a + 1) + "," + std::to_string(j) +
                                 ",-1] does not vanish for unit data at k=0");
    }
    for (long k = 1; k <= k_max; ++k) {
      if (!variable_interior(s, j, k)) {
        ++rep.boundary_skipped;
        continue;
      }
      if (!is_polynomial(state.get(a, j, k))) {
        throw PolynomialityFailure("T[" + std::to_string(a + 1) + "," + std::to_string(j) + "," +
                                   std::to_string(k) + "] is not a polynomial in the slice-1 variables");
      }
      ++rep.checked;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// JSON

inline Json to_json(const TSystemSpec& s) {
  Json out = {{"kind", s.kind}};
  if (s.kind == "lie") {
    out["cartan"] = to_json(*s.cartan);
  } else {
    out["gamma"] = s.gamma.to_rows();
  }
  out["window"] = {s.j_min, s.j_max};
  out["q"] = s.q;
  out["boundary"] = s.boundary == Boundary::Unit ? "unit" : "strict";
  return out;
}

inline TSystemSpec tsystem_from_json(const Json& j) {
  try {
    const auto kind = j.at("kind").get<std::string>();
    const auto window = j.at("window").get<std::vector<long>>();
    if (window.size() != 2) throw ParseError("T-system: window must be [j_min, j_max]");
    const auto q = j.contains("q") ? j["q"].get<std::vector<long>>() : std::vector<long>{-1};
    Boundary b = Boundary::Unit;
    if (j.contains("boundary")) {
      const auto name = j["boundary"].get<std::string>();
      if (name == "strict") {
        b = Boundary::Strict;
      } else if (name != "unit") {
        throw ParseError("T-system: unknown boundary policy '" + name + "'");
      }
    }
    if (kind == "lie") return lie_tsystem(cartan_from_json(j.at("cartan")), window[0], window[1], q, b);
    if (kind == "quiver") {
      auto g = IntMatrix::from_rows(j.at("gamma").get<std::vector<std::vector<std::int64_t>>>());
      return quiver_tsystem(g, window[0], window[1], q, b);
    }
    throw ParseError("T-system: unknown kind '" + kind + "'");
  } catch (const Json::exception& e) {
    throw ParseError(std::string("T-system: ") + e.what());
  }
}

}  // namespace qcluster
