#pragma once

// Q-systems of finite type: the direct recursion, its sign normalization,
// the exchange matrix and cluster seed built from the Cartan matrix, the
// periodic mutation schedules, and the comparison of both routes.
//
// Generators: index alpha is Q_{alpha,0} (b_alpha), index r+alpha is
// Q_{alpha,1} (a_alpha), and in the coefficient form index 2r+alpha is q_alpha.
// Cluster position alpha holds the even-index variable of root alpha,
// position r+alpha the odd-index one.

#include <gmpxx.h>

#include <future>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cartan.hpp"
#include "cluster.hpp"
#include "errors.hpp"
#include "laurent.hpp"
#include "matrix.hpp"

namespace qcluster {

/// (alpha, k): the variable Q_{alpha,k} (0-based alpha).
using QIndex = std::pair<std::size_t, long>;

enum class Variant {
  Original,      // Q_{k+1} Q_{k-1} = Q_k^2 - prod T
  Normalized,    // R_{k+1} R_{k-1} = R_k^2 + prod T~
  Coefficients,  // Q_{k+1} Q_{k-1} = Q_k^2 + q_alpha prod T, q_alpha symbolic
};

enum class InitialMode { Generic, KR };

enum class Direction { Up, Down };

inline long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

/// Factors of T^{(alpha,beta)}_k as indices (beta, j), one per unit of |C_{alpha beta}|.
/// `tilde` selects the floor argument t_beta (k+i) / t_alpha of the normalized
/// system instead of (t_beta k + i) / t_alpha.
inline std::vector<QIndex> t_factor(const CartanData& cd, std::size_t alpha, std::size_t beta, long k,
                                    bool tilde = false) {
  if (alpha >= cd.r() || beta >= cd.r()) throw IndexOutOfRange("t_factor: root index out of range");
  if (!cd.adjacent(alpha, beta)) {
    throw NotAdjacent("roots " + std::to_string(alpha + 1) + " and " + std::to_string(beta + 1) +
                      " are not adjacent");
  }
  const long ta = cd.t[alpha], tb = cd.t[beta];
  const long mult = -cd.C(alpha, beta);
  std::vector<QIndex> out;
  for (long i = 0; i < mult; ++i) {
    long num = tilde ? tb * (k + i) : tb * k + i;
    out.emplace_back(beta, floor_div(num, ta));
  }
  return out;
}

inline std::size_t b_index(const CartanData&, std::size_t alpha) { return alpha; }
inline std::size_t a_index(const CartanData& cd, std::size_t alpha) { return cd.r() + alpha; }
inline std::size_t q_index(const CartanData& cd, std::size_t alpha) { return 2 * cd.r() + alpha; }

/// Generator names such as Q[1,0], Q[1,1], q[1] for text output.
inline std::vector<std::string> generator_names(const CartanData& cd, char letter, bool with_q = false) {
  std::vector<std::string> names(cd.r() * (with_q ? 3 : 2));
  for (std::size_t a = 0; a < cd.r(); ++a) {
    names[a] = std::string(1, letter) + "[" + std::to_string(a + 1) + ",0]";
    names[cd.r() + a] = std::string(1, letter) + "[" + std::to_string(a + 1) + ",1]";
    if (with_q) names[2 * cd.r() + a] = "q[" + std::to_string(a + 1) + "]";
  }
  return names;
}

/// Memoized solution of a Q-system from the data (Q_{alpha,0}, Q_{alpha,1}).
template <CoefficientRing R>
class QState {
 public:
  using Poly = LaurentPoly<R>;

  /// coeff[alpha] multiplies the neighbor product: -1 for the original system,
  /// +1 for the normalized one, q_alpha for the coefficient form.
  QState(CartanData cd, std::vector<Poly> coeff, const std::vector<Poly>& q0, const std::vector<Poly>& q1,
         bool tilde_floors = false)
      : cd_(std::move(cd)), coeff_(std::move(coeff)), tilde_(tilde_floors) {
    const std::size_t r = cd_.r();
    if (coeff_.size() != r || q0.size() != r || q1.size() != r) throw ArityMismatch("QState: need r entries each");
    nvars_ = q0[0].nvars();
    for (std::size_t a = 0; a < r; ++a) {
      table_.emplace(QIndex{a, 0}, q0[a]);
      table_.emplace(QIndex{a, 1}, q1[a]);
    }
  }

  const CartanData& cartan() const { return cd_; }
  std::size_t nvars() const { return nvars_; }
  bool tilde_floors() const { return tilde_; }
  const std::vector<Poly>& coefficients() const { return coeff_; }
  const std::map<QIndex, Poly>& table() const { return table_; }
  bool has(std::size_t alpha, long k) const { return table_.count({alpha, k}) > 0; }
  std::size_t divisions() const { return divisions_; }

  const Poly& get(std::size_t alpha, long k) {
    if (alpha >= cd_.r()) throw IndexOutOfRange("QState: root index out of range");
    auto it = table_.find({alpha, k});
    if (it != table_.end()) return it->second;
    if (k >= 2) {
      q_step(alpha, k - 1, Direction::Up);
    } else {
      q_step(alpha, k + 1, Direction::Down);
    }
    return table_.at({alpha, k});
  }

  /// Right-hand side Q_{alpha,k}^2 + coeff_alpha * prod_beta T^{(alpha,beta)}_k.
  Poly rhs(std::size_t alpha, long k) {
    std::vector<const Poly*> factors;
    for (std::size_t beta : cd_.neighbors[alpha]) {
      for (const auto& [b, j] : t_factor(cd_, alpha, beta, k, tilde_)) factors.push_back(&get(b, j));
    }
    std::sort(factors.begin(), factors.end(), [](const Poly* x, const Poly* y) { return x->size() < y->size(); });
    Poly prod = Poly::one(nvars_);
    for (const Poly* f : factors) prod *= *f;
    const Poly& q = get(alpha, k);
    return q * q + coeff_[alpha] * prod;
  }

  /// One application of the recursion around k: Up yields Q_{alpha,k+1} from
  /// Q_{alpha,k}, Q_{alpha,k-1}; Down yields Q_{alpha,k-1} from Q_{alpha,k}, Q_{alpha,k+1}.
  /// If the target is already known, the recomputed value must agree.
  Poly q_step(std::size_t alpha, long k, Direction dir) {
    const long target = dir == Direction::Up ? k + 1 : k - 1;
    const long other = dir == Direction::Up ? k - 1 : k + 1;
    Poly numerator = rhs(alpha, k);
    const Poly& divisor = get(alpha, other);
    if (divisor.is_zero()) {
      throw SingularBoundary("Q[" + std::to_string(alpha + 1) + "," + std::to_string(other) +
                             "] vanishes; cannot step to k=" + std::to_string(target));
    }
    ++divisions_;
    Poly value = exact_div(numerator, divisor,
                           "Q-system step to (" + std::to_string(alpha + 1) + "," + std::to_string(target) + ")");
    auto [it, inserted] = table_.emplace(QIndex{alpha, target}, value);
    if (!inserted && !(it->second == value)) {
      throw Mismatch("Q-system step to (" + std::to_string(alpha + 1) + "," + std::to_string(target) +
                     ") disagrees with the stored value");
    }
    return value;
  }

  /// Q_{alpha,k+1} Q_{alpha,k-1} == rhs(alpha, k), multiplied out.
  bool satisfies(std::size_t alpha, long k) { return get(alpha, k + 1) * get(alpha, k - 1) == rhs(alpha, k); }

 private:
  CartanData cd_;
  std::vector<Poly> coeff_;
  bool tilde_;
  std::size_t nvars_ = 0;
  std::map<QIndex, Poly> table_;
  std::size_t divisions_ = 0;
};

/// Integer-coefficient Q-system over the formal generators.
inline QState<Integer> make_qstate(const CartanData& cd, Variant variant = Variant::Original,
                                   InitialMode mode = InitialMode::Generic) {
  using Poly = LaurentPoly<Integer>;
  const std::size_t r = cd.r();
  const std::size_t nv = variant == Variant::Coefficients ? 3 * r : 2 * r;
  std::vector<Poly> coeff, q0, q1;
  for (std::size_t a = 0; a < r; ++a) {
    switch (variant) {
      case Variant::Original: coeff.push_back(Poly::constant(nv, -1)); break;
      case Variant::Normalized: coeff.push_back(Poly::one(nv)); break;
      case Variant::Coefficients: coeff.push_back(Poly::variable(nv, q_index(cd, a))); break;
    }
    q0.push_back(mode == InitialMode::KR ? Poly::one(nv) : Poly::variable(nv, b_index(cd, a)));
    q1.push_back(Poly::variable(nv, a_index(cd, a)));
  }
  return QState<Integer>(cd, std::move(coeff), q0, q1, variant == Variant::Normalized);
}

// ---------------------------------------------------------------------------
// Normalization

/// Exponents m_alpha in {0,1,2,3} with eps_alpha = i^{m_alpha} and
/// prod_beta eps_beta^{C_{alpha beta}} = -1 for every alpha.
///
/// mu = C^{-1} (1,...,1) solves sum_beta C_{alpha beta} mu_beta = 1, so
/// eps_beta = exp(i pi mu_beta) works once 2 mu_beta is an integer.
inline std::vector<int> normalize_epsilons(const CartanData& cd) {
  const std::size_t r = cd.r();
  std::vector<std::vector<mpq_class>> m(r, std::vector<mpq_class>(r + 1));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) m[i][j] = static_cast<long>(cd.C(i, j));
    m[i][r] = 1;
  }
  for (std::size_t col = 0; col < r; ++col) {
    std::size_t piv = col;
    while (piv < r && m[piv][col] == 0) ++piv;
    if (piv == r) throw NoSolution("Cartan matrix is singular");
    std::swap(m[piv], m[col]);
    for (std::size_t i = 0; i < r; ++i) {
      if (i == col || m[i][col] == 0) continue;
      mpq_class f = m[i][col] / m[col][col];
      for (std::size_t j = col; j <= r; ++j) m[i][j] -= f * m[col][j];
    }
  }
  std::vector<int> exps(r);
  for (std::size_t i = 0; i < r; ++i) {
    mpq_class twice_mu = 2 * m[i][r] / m[i][i];
    twice_mu.canonicalize();
    if (twice_mu.get_den() != 1) throw NoSolution("2 mu is not integral; no fourth-root normalization");
    mpz_class e = twice_mu.get_num() % 4;
    if (e < 0) e += 4;
    exps[i] = static_cast<int>(e.get_si());
  }
  for (std::size_t a = 0; a < r; ++a) {
    Gaussian prod = ring_traits<Gaussian>::one();
    for (std::size_t b = 0; b < r; ++b) prod *= i_power(static_cast<int>(exps[b] * cd.C(a, b)));
    if (!(prod == Gaussian(-1))) throw NoSolution("normalization check failed at root " + std::to_string(a + 1));
  }
  return exps;
}

inline std::vector<Gaussian> epsilons(const CartanData& cd) {
  std::vector<Gaussian> eps;
  for (int m : normalize_epsilons(cd)) eps.push_back(i_power(m));
  return eps;
}

// ---------------------------------------------------------------------------
// Seeds

/// B = [[A, -C^t], [C, 0]] with A = C^t - C.
inline IntMatrix exchange_matrix(const CartanData& cd) {
  const std::size_t r = cd.r();
  IntMatrix Ct = cd.C.transpose();
  return IntMatrix::blocks(Ct - cd.C, -Ct, cd.C, IntMatrix(r, r));
}

/// Frozen rows of the coefficient form: -1 at column alpha, +1 at column r+alpha.
inline IntMatrix coefficient_rows(const CartanData& cd) {
  const std::size_t r = cd.r();
  IntMatrix F(r, 2 * r);
  for (std::size_t a = 0; a < r; ++a) {
    F(a, a) = -1;
    F(a, r + a) = 1;
  }
  return F;
}

enum class Coefficients { None, Symbolic, MinusOne };

/// The seed at node 0 over the formal generators. Without coefficients this
/// is the normalized system (x_alpha = R_{alpha,0}, x_{r+alpha} = R_{alpha,1});
/// with coefficients it carries q_alpha (symbolic, or specialized to -1).
inline Seed<Integer> build_seed(const CartanData& cd, Coefficients coeffs = Coefficients::None,
                               InitialMode mode = InitialMode::Generic) {
  using Poly = LaurentPoly<Integer>;
  const std::size_t r = cd.r();
  const std::size_t nv = coeffs == Coefficients::Symbolic ? 3 * r : 2 * r;
  Seed<Integer> s;
  for (std::size_t i = 0; i < 2 * r; ++i)
    s.x.push_back(mode == InitialMode::KR && i < r ? Poly::one(nv) : Poly::variable(nv, i));
  s.B = exchange_matrix(cd);
  if (coeffs != Coefficients::None) {
    s.frozen_rows = coefficient_rows(cd);
    for (std::size_t a = 0; a < r; ++a) {
      s.frozen_values.push_back(coeffs == Coefficients::Symbolic ? Poly::variable(nv, q_index(cd, a))
                                                                 : Poly::constant(nv, -1));
    }
  }
  return s;
}

/// The normalized seed over the Gaussian integers with x = eps * (Q generators),
/// so its cluster variables are R_{alpha,k} written in the Q_{beta,0}, Q_{beta,1}.
/// At the KR point Q_{beta,0} = 1.
inline Seed<Gaussian> build_normalized_seed(const CartanData& cd, InitialMode mode = InitialMode::Generic) {
  using Poly = LaurentPoly<Gaussian>;
  const std::size_t r = cd.r();
  auto eps = epsilons(cd);
  Seed<Gaussian> s;
  for (std::size_t i = 0; i < 2 * r; ++i) {
    Poly v = mode == InitialMode::KR && i < r ? Poly::one(2 * r) : Poly::variable(2 * r, i);
    s.x.push_back(v.scaled(eps[i % r]));
  }
  s.B = exchange_matrix(cd);
  return s;
}

/// Index labels of the seed at node k: R_{alpha, 2 t_alpha k} and R_{alpha, 2 t_alpha k + 1}.
inline std::vector<long> node_labels(const CartanData& cd, long k = 0) {
  std::vector<long> labels(2 * cd.r());
  for (std::size_t a = 0; a < cd.r(); ++a) {
    labels[a] = 2L * cd.t[a] * k;
    labels[cd.r() + a] = 2L * cd.t[a] * k + 1;
  }
  return labels;
}

// ---------------------------------------------------------------------------
// Schedules

struct WalkSchedule {
  std::vector<std::vector<std::size_t>> steps;  // 0-based cluster positions
  std::vector<std::string> node_labels;         // name of the node reached by each step
  std::vector<IntMatrix> expected_B;            // B at the node reached by each step

  std::size_t period() const { return steps.size(); }
};

/// D_ij = C_ij if i, j both long; -C_ij if j short; 0 otherwise.
inline IntMatrix d_matrix(const CartanData& cd) {
  const std::size_t r = cd.r();
  IntMatrix D(r, r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      if (!cd.is_short(i) && !cd.is_short(j)) {
        D(i, j) = cd.C(i, j);
      } else if (cd.is_short(j)) {
        D(i, j) = -cd.C(i, j);
      }
    }
  return D;
}

inline WalkSchedule make_schedule(const CartanData& cd) {
  const std::size_t r = cd.r();
  const auto sets = index_sets(cd);
  const IntMatrix B = exchange_matrix(cd);
  const IntMatrix A = cd.C.transpose() - cd.C;
  WalkSchedule w;
  if (cd.simply_laced()) {
    w.steps = {sets.all, sets.all_prime};
    w.node_labels = {"k'", "k+1"};
    w.expected_B = {-B, B};
  } else if (cd.type_label == 'G') {
    IntMatrix B1 = {{0, 2, -2, -1}, {-2, 0, -1, 2}, {2, 1, 0, -2}, {1, -2, 2, 0}};
    IntMatrix B2 = IntMatrix::blocks(IntMatrix(r, r), -cd.C, cd.C.transpose(), -A);
    w.steps = {sets.shorts, sets.shorts_prime, sets.all, sets.shorts_prime, sets.shorts, sets.all_prime};
    w.node_labels = {"k(1)", "k(2)", "k(3)", "k(4)", "k(5)", "k+1"};
    w.expected_B = {B1, B2, -B2, -B1, -B, B};
  } else {
    IntMatrix D = d_matrix(cd);
    IntMatrix B1 = IntMatrix::blocks(-A, -D.transpose(), D, 2 * A);
    IntMatrix B2 = IntMatrix::blocks(A, cd.C - A, -cd.C.transpose() - A, 2 * A);
    w.steps = {sets.shorts, sets.longs, sets.shorts_prime, sets.shorts, sets.all_prime};
    w.node_labels = {"k(1)", "k(2)", "k(3)", "k(4)", "k+1"};
    w.expected_B = {B1, B2, -B1, -B, B};
  }
  return w;
}

// ---------------------------------------------------------------------------
// Walks

/// Full periods needed for the walk to pass R_{alpha, t_alpha k_max}.
inline std::size_t periods_for(long k_max) { return static_cast<std::size_t>((k_max + 1) / 2); }

template <CoefficientRing R>
struct WalkNode {
  std::string name;
  std::size_t period = 0;       // completed periods before this node
  Seed<R> seed;
  std::vector<long> labels;     // position p holds R_{p mod r, labels[p]}
  std::vector<std::size_t> changed;  // positions mutated to reach this node
};

/// Label of the variable produced by mutating position p: the partner
/// position holds index m, the current one j, the new one 2m - j.
inline long next_label(const std::vector<long>& labels, std::size_t p, std::size_t r) {
  std::size_t partner = p < r ? p + r : p - r;
  return 2 * labels[partner] - labels[p];
}

/// Applies schedule step number `s` (0-based, counted from node k) to `prev`,
/// asserting the expected exchange matrix at the node reached.
template <CoefficientRing R>
WalkNode<R> walk_step(const CartanData& cd, const WalkNode<R>& prev, const WalkSchedule& schedule, std::size_t s) {
  const std::size_t phase = s % schedule.period();
  const auto& step = schedule.steps[phase];
  WalkNode<R> node;
  node.name = schedule.node_labels[phase];
  node.period = s / schedule.period();
  node.seed = compound_mutate(prev.seed, std::span<const std::size_t>(step));
  node.labels = prev.labels;
  for (std::size_t p : step) node.labels[p] = next_label(prev.labels, p, cd.r());
  node.changed = step;
  if (!check_skew(node.seed)) throw ScheduleMismatch("walk: B lost skew-symmetry at node " + node.name);
  const IntMatrix& expected = schedule.expected_B[phase];
  if (!(node.seed.B == expected)) {
    throw ScheduleMismatch("walk: B at node " + node.name + " (period " + std::to_string(node.period) + ") is " +
                           node.seed.B.to_string() + ", expected " + expected.to_string());
  }
  return node;
}

/// Applies n_steps schedule steps, asserting the expected exchange matrix at
/// every node. Returns the start node followed by one node per step.
template <CoefficientRing R>
std::vector<WalkNode<R>> walk(const CartanData& cd, const Seed<R>& start, const WalkSchedule& schedule,
                              std::size_t n_steps, std::vector<long> labels = {}) {
  if (start.n() != 2 * cd.r()) throw ScheduleMismatch("walk: seed size does not match the algebra rank");
  if (labels.empty()) labels = node_labels(cd, 0);
  std::vector<WalkNode<R>> nodes;
  nodes.push_back({"k", 0, start, labels, {}});
  for (std::size_t s = 0; s < n_steps; ++s) nodes.push_back(walk_step(cd, nodes.back(), schedule, s));
  return nodes;
}

/// Exchange matrices only: the same schedule assertions without cluster variables.
inline std::size_t walk_matrices(const CartanData& cd, const IntMatrix& start, const WalkSchedule& schedule,
                                 std::size_t n_steps) {
  Seed<Integer> s;
  for (std::size_t i = 0; i < start.rows(); ++i) s.x.push_back(LaurentPoly<Integer>::one(0));
  s.B = start;
  walk(cd, s, schedule, n_steps);
  return n_steps;
}

// ---------------------------------------------------------------------------
// Route comparison

struct CrosscheckReport {
  std::string type;
  std::size_t periods = 0;     // periods entered by the walk
  std::size_t steps = 0;
  std::set<QIndex> checked;   // (alpha, k) compared within the requested range
  std::size_t comparisons = 0;
  std::vector<QIndex> missing;  // requested indices never produced by the walk
  bool ok() const { return missing.empty(); }
};

/// Walks from `seed` along the schedule until every R_{alpha,k} with
/// 0 <= k <= t_alpha k_max has appeared, comparing every cluster variable with
/// the recursion: position p with label j must equal expected(alpha, Q_{alpha,j}).
/// The recursion route is evaluated concurrently with the walk.
template <CoefficientRing R, class Expected>
CrosscheckReport compare_routes(const CartanData& cd, const Seed<R>& seed, QState<R>& state, long k_max,
                                Expected expected) {
  const std::size_t r = cd.r();
  const auto schedule = make_schedule(cd);
  auto in_range = [&](std::size_t alpha, long j) { return j >= 0 && j <= static_cast<long>(cd.t[alpha]) * k_max; };

  auto walk_future = std::async(std::launch::async, [&] {
    std::vector<WalkNode<R>> nodes;
    nodes.push_back({"k", 0, seed, node_labels(cd, 0), {}});
    std::set<QIndex> seen;
    auto note = [&](const WalkNode<R>& n, std::size_t p) {
      if (in_range(p % r, n.labels[p])) seen.insert({p % r, n.labels[p]});
    };
    for (std::size_t p = 0; p < 2 * r; ++p) note(nodes.back(), p);
    std::size_t wanted = 0;
    for (std::size_t a = 0; a < r; ++a) wanted += static_cast<std::size_t>(cd.t[a] * k_max + 1);
    const std::size_t max_steps = (periods_for(k_max) + 1) * schedule.period();
    for (std::size_t s = 0; seen.size() < wanted && s < max_steps; ++s) {
      nodes.push_back(walk_step(cd, nodes.back(), schedule, s));
      for (std::size_t p : nodes.back().changed) note(nodes.back(), p);
    }
    return nodes;
  });
  for (std::size_t a = 0; a < r; ++a)
    for (long k = 0; k <= static_cast<long>(cd.t[a]) * k_max; ++k) state.get(a, k);
  auto nodes = walk_future.get();

  CrosscheckReport report;
  report.type = cd.name();
  report.periods = nodes.back().period + 1;
  auto compare = [&](const WalkNode<R>& node, std::size_t p) {
    const std::size_t alpha = p % r;
    const long j = node.labels[p];
    auto want = expected(alpha, state.get(alpha, j));
    ++report.comparisons;
    if (!(node.seed.x[p] == want)) {
      throw Mismatch("route mismatch at (" + std::to_string(alpha + 1) + "," + std::to_string(j) + ") node " +
                     node.name + " period " + std::to_string(node.period));
    }
    if (in_range(alpha, j)) report.checked.insert({alpha, j});
  };
  for (std::size_t p = 0; p < 2 * r; ++p) compare(nodes.front(), p);
  for (std::size_t i = 1; i < nodes.size(); ++i)
    for (std::size_t p : nodes[i].changed) compare(nodes[i], p);
  report.steps = nodes.size() - 1;

  for (std::size_t a = 0; a < r; ++a)
    for (long k = 0; k <= static_cast<long>(cd.t[a]) * k_max; ++k)
      if (!report.checked.count({a, k})) report.missing.push_back({a, k});
  return report;
}

inline CrosscheckReport require_coverage(CrosscheckReport report) {
  if (!report.ok()) {
    throw Mismatch("crosscheck " + report.type + ": walk did not reach (" +
                   std::to_string(report.missing[0].first + 1) + "," + std::to_string(report.missing[0].second) + ")");
  }
  return report;
}

/// Walk variables of the normalized seed against the normalized recursion,
/// covering R_{alpha,k} for 0 <= k <= t_alpha k_max.
inline CrosscheckReport crosscheck(const CartanData& cd, long k_max) {
  auto state = make_qstate(cd, Variant::Normalized);
  auto report = compare_routes(cd, build_seed(cd), state, k_max,
                               [](std::size_t, const LaurentPoly<Integer>& q) { return q; });
  return require_coverage(std::move(report));
}

/// Coefficient form against the recursion with coefficients: q = -1 against
/// the original system, symbolic q against the symbolic recursion.
inline CrosscheckReport crosscheck_coefficients(const CartanData& cd, long k_max, Coefficients coeffs,
                                                InitialMode mode = InitialMode::Generic) {
  if (coeffs == Coefficients::None) throw std::invalid_argument("crosscheck_coefficients: no coefficients");
  auto state = make_qstate(cd, coeffs == Coefficients::Symbolic ? Variant::Coefficients : Variant::Original, mode);
  return require_coverage(compare_routes(cd, build_seed(cd, coeffs, mode), state, k_max,
                                        [](std::size_t, const LaurentPoly<Integer>& q) { return q; }));
}

/// R = eps Q over the Gaussian integers: the eps-scaled seed walked with the
/// normalized exchange rule against eps_alpha times the original recursion.
/// At the KR point the recursion side is the table of KR characters.
inline CrosscheckReport crosscheck_normalization(const CartanData& cd, long k_max,
                                                 InitialMode mode = InitialMode::Generic) {
  using Poly = LaurentPoly<Gaussian>;
  const std::size_t r = cd.r();
  const auto eps = epsilons(cd);
  std::vector<Poly> coeff, q0, q1;
  for (std::size_t a = 0; a < r; ++a) {
    coeff.push_back(Poly::constant(2 * r, Gaussian(-1)));
    q0.push_back(mode == InitialMode::KR ? Poly::one(2 * r) : Poly::variable(2 * r, b_index(cd, a)));
    q1.push_back(Poly::variable(2 * r, a_index(cd, a)));
  }
  QState<Gaussian> state(cd, std::move(coeff), q0, q1);
  auto report = compare_routes(cd, build_normalized_seed(cd, mode), state, k_max,
                               [&](std::size_t alpha, const Poly& q) { return q.scaled(eps[alpha]); });
  return require_coverage(std::move(report));
}

// ---------------------------------------------------------------------------
// Augmented exchange matrix

struct CoefficientWalkReport {
  std::size_t steps = 0;
  std::size_t flips = 0;             // triangle (alpha, alpha', q_alpha) reversals observed
  std::size_t periods_restored = 0;  // periods after which the augmented matrix returned to itself
};

/// Walks the augmented exchange matrix with coefficient rows. Row q_alpha must
/// stay supported on {alpha, r+alpha} with entries s(-1, +1), s = +-1 flipping
/// with every mutation at alpha or r+alpha; the entry at a mutated position
/// must be -1, so q_alpha enters the second term of every forward exchange;
/// and after each full period the augmented matrix equals the initial one.
inline CoefficientWalkReport coefficient_walk_check(const CartanData& cd, std::size_t n_periods) {
  const std::size_t r = cd.r();
  const auto schedule = make_schedule(cd);
  Seed<Integer> s;
  for (std::size_t i = 0; i < 2 * r; ++i) s.x.push_back(LaurentPoly<Integer>::one(0));
  s.B = exchange_matrix(cd);
  s.frozen_rows = coefficient_rows(cd);
  s.frozen_values.assign(r, LaurentPoly<Integer>::one(0));
  const IntMatrix start = s.augmented();

  std::vector<int> sign(r, 1);
  auto check_rows = [&](const Seed<Integer>& seed, const std::string& where) {
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t c = 0; c < 2 * r; ++c) {
        const long want = c == a ? -sign[a] : c == r + a ? sign[a] : 0;
        if (seed.frozen_rows(a, c) != want) {
          throw ScheduleMismatch("coefficient row " + std::to_string(a + 1) + " column " + std::to_string(c + 1) +
                                 " is " + std::to_string(seed.frozen_rows(a, c)) + " at " + where + ", expected " +
                                 std::to_string(want));
        }
      }
  };

  CoefficientWalkReport rep;
  WalkNode<Integer> node{"k", 0, s, node_labels(cd, 0), {}};
  for (std::size_t step = 0; step < n_periods * schedule.period(); ++step) {
    const auto& set = schedule.steps[step % schedule.period()];
    for (std::size_t p : set) {
      if (node.seed.frozen_rows(p % r, p) != -1) {
        throw ScheduleMismatch("coefficient q_" + std::to_string(p % r + 1) + " enters the first term at position " +
                               std::to_string(p + 1) + " before node " + schedule.node_labels[step % schedule.period()]);
      }
    }
    node = walk_step(cd, node, schedule, step);
    for (std::size_t p : set) {
      sign[p % r] = -sign[p % r];
      ++rep.flips;
    }
    check_rows(node.seed, "node " + node.name + " (period " + std::to_string(node.period) + ")");
    ++rep.steps;
    if ((step + 1) % schedule.period() == 0) {
      if (!(node.seed.augmented() == start)) {
        throw ScheduleMismatch("augmented matrix does not return after period " + std::to_string(node.period + 1));
      }
      ++rep.periods_restored;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Translation invariance

/// Q_{alpha,k+t_alpha j}(b, a) == Q_{alpha,k}(Q_{beta,t_beta j}, Q_{beta,t_beta j+1}),
/// compared after clearing the denominators of Q_{alpha,k}.
inline bool translation_invariance_check(QState<Integer>& state, long j, long k, std::size_t alpha) {
  const CartanData& cd = state.cartan();
  const std::size_t r = cd.r();
  std::vector<LaurentPoly<Integer>> images(state.nvars());
  for (std::size_t i = 0; i < state.nvars(); ++i) images[i] = LaurentPoly<Integer>::variable(state.nvars(), i);
  for (std::size_t b = 0; b < r; ++b) {
    images[b_index(cd, b)] = state.get(b, cd.t[b] * j);
    images[a_index(cd, b)] = state.get(b, cd.t[b] * j + 1);
  }
  const auto lhs = state.get(alpha, k + cd.t[alpha] * j);
  auto [num, den] = substitute_cleared(state.get(alpha, k), std::span<const LaurentPoly<Integer>>(images));
  if (!(num == lhs * den)) {
    throw Mismatch("translation invariance fails for alpha=" + std::to_string(alpha + 1) +
                   " j=" + std::to_string(j) + " k=" + std::to_string(k));
  }
  return true;
}

/// The same identity with the right side evaluated by running the recursion
/// from the shifted data (Q_{beta,t_beta j}, Q_{beta,t_beta j+1}) instead of
/// expanding the Laurent form of Q_{alpha,k}. Evaluation at the shifted data
/// is a field homomorphism, so both sides are the same rational function.
inline bool translation_invariance_by_recursion(QState<Integer>& state, long j, long k, std::size_t alpha) {
  const CartanData& cd = state.cartan();
  std::vector<LaurentPoly<Integer>> q0, q1;
  for (std::size_t b = 0; b < cd.r(); ++b) {
    q0.push_back(state.get(b, cd.t[b] * j));
    q1.push_back(state.get(b, cd.t[b] * j + 1));
  }
  QState<Integer> shifted(cd, state.coefficients(), q0, q1, state.tilde_floors());
  if (!(shifted.get(alpha, k) == state.get(alpha, k + cd.t[alpha] * j))) {
    throw Mismatch("translation invariance (recursion) fails for alpha=" + std::to_string(alpha + 1) +
                   " j=" + std::to_string(j) + " k=" + std::to_string(k));
  }
  return true;
}

inline bool translation_invariance_check(const CartanData& cd, long j, long k, std::size_t alpha) {
  auto state = make_qstate(cd, Variant::Original);
  return translation_invariance_check(state, j, k, alpha);
}

/// J = [[0, I], [I, 0]] acting by conjugation: swaps the even and odd halves.
inline IntMatrix swap_halves(const IntMatrix& B) {
  const std::size_t r = B.rows() / 2;
  IntMatrix J(2 * r, 2 * r);
  for (std::size_t a = 0; a < r; ++a) {
    J(a, r + a) = 1;
    J(r + a, a) = 1;
  }
  return J * B * J;
}

}  // namespace qcluster
