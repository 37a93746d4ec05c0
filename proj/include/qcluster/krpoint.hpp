#pragma once

// The Kirillov-Reshetikhin point Q_{alpha,0} = 1: specialization, the
// polynomiality check, the divisibility audit of Laurent coefficients, and
// mutation paths off the Q-system graph.
//
// In the normalized cluster algebra the KR point is R_{alpha,0} = eps_alpha,
// where every exchange binomial N_alpha(b) vanishes.

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cartan.hpp"
#include "cluster.hpp"
#include "errors.hpp"
#include "laurent.hpp"
#include "qsystem.hpp"
#include "serialize.hpp"

namespace qcluster {

/// Sets every b-generator (Q_{alpha,0}) to 1; other generators stay formal.
template <CoefficientRing R>
LaurentPoly<R> specialize_kr(const LaurentPoly<R>& p, const CartanData& cd) {
  std::vector<typename LaurentPoly<R>::Term> terms;
  terms.reserve(p.size());
  for (const auto& [m, c] : p.terms()) {
    Monomial s = m;
    for (std::size_t a = 0; a < cd.r(); ++a) s.set(b_index(cd, a), 0);
    terms.emplace_back(std::move(s), c);
  }
  return LaurentPoly<R>::from_terms(p.nvars(), std::move(terms));
}

/// Normalized KR point: R_{alpha,0} = eps_alpha, over the Gaussian integers.
inline LaurentPoly<Gaussian> specialize_kr_normalized(const LaurentPoly<Integer>& p, const CartanData& cd) {
  const auto m_eps = normalize_epsilons(cd);
  std::vector<LaurentPoly<Gaussian>::Term> terms;
  terms.reserve(p.size());
  for (const auto& [m, c] : p.terms()) {
    Monomial s = m;
    long power = 0;
    for (std::size_t a = 0; a < cd.r(); ++a) {
      power += static_cast<long>(m_eps[a]) * m[b_index(cd, a)];
      s.set(b_index(cd, a), 0);
    }
    terms.emplace_back(std::move(s), Gaussian{c, Integer(0)} * i_power(static_cast<int>(((power % 4) + 4) % 4)));
  }
  return LaurentPoly<Gaussian>::from_terms(p.nvars(), std::move(terms));
}

/// True iff no a-generator (Q_{alpha,1}) occurs with a negative exponent.
template <CoefficientRing R>
bool check_polynomiality(const LaurentPoly<R>& p, const CartanData& cd) {
  std::vector<std::size_t> vars;
  for (std::size_t a = 0; a < cd.r(); ++a) vars.push_back(a_index(cd, a));
  return is_polynomial_in(p, std::span<const std::size_t>(vars));
}

template <CoefficientRing R>
void require_polynomial(const LaurentPoly<R>& p, const CartanData& cd, const std::string& what) {
  if (!check_polynomiality(p, cd)) throw PolynomialityFailure(what + " is not a polynomial at the KR point");
}

/// Runs the original recursion from Q_{alpha,0} = 1 and checks that every
/// Q_{alpha,k}, 0 <= k <= k_max, is a polynomial. Returns the number checked.
inline std::size_t kr_polynomiality_check(const CartanData& cd, long k_max) {
  auto kr = make_qstate(cd, Variant::Original, InitialMode::KR);
  std::size_t n = 0;
  for (std::size_t a = 0; a < cd.r(); ++a) {
    for (long k = 0; k <= k_max; ++k) {
      const auto& q = kr.get(a, k);
      require_polynomial(q, cd, "Q[" + std::to_string(a + 1) + "," + std::to_string(k) + "]");
      ++n;
    }
  }
  return n;
}

/// The exchange binomial of the a-variable in column r+alpha of B:
/// N_alpha(b) = prod_beta b_beta^[B_{beta,r+alpha}]_+ + prod_beta b_beta^[-B_{beta,r+alpha}]_+.
inline LaurentPoly<Integer> exchange_binomial(const CartanData& cd, const IntMatrix& B, std::size_t alpha,
                                              std::size_t nvars) {
  const std::size_t r = cd.r();
  Monomial plus(nvars), minus(nvars);
  for (std::size_t beta = 0; beta < r; ++beta) {
    const auto v = B(beta, r + alpha);
    if (v > 0) plus.set(b_index(cd, beta), static_cast<Exponent>(v));
    if (v < 0) minus.set(b_index(cd, beta), static_cast<Exponent>(-v));
  }
  return LaurentPoly<Integer>::monomial(nvars, plus, 1) + LaurentPoly<Integer>::monomial(nvars, minus, 1);
}

struct AuditEntry {
  std::vector<Exponent> term_exponents;         // exponents of the a-generators
  std::vector<Exponent> required_factor_degrees;  // power of N_alpha that must divide C_n(b)
  bool pass = false;
};

struct AuditReport {
  std::vector<AuditEntry> entries;
  bool pass() const {
    for (const auto& e : entries)
      if (!e.pass) return false;
    return true;
  }
};

inline Json to_json(const AuditReport& report) {
  Json out = Json::array();
  for (const auto& e : report.entries) {
    out.push_back(
        {{"term_exponents", e.term_exponents}, {"required_factor_degrees", e.required_factor_degrees}, {"pass", e.pass}});
  }
  return out;
}

/// Groups p = sum_n C_n(b) a^n and checks that every C_n with a negative
/// exponent n_alpha is divisible by prod_alpha N_alpha(b)^(-n_alpha).
/// Throws DivisibilityFailure after auditing all terms if `strict` and any fails.
inline AuditReport divisibility_audit(const LaurentPoly<Integer>& p, const CartanData& cd,
                                      const IntMatrix& B, bool strict = true) {
  using Poly = LaurentPoly<Integer>;
  const std::size_t r = cd.r();
  const std::size_t n = p.nvars();
  std::map<std::vector<Exponent>, std::vector<Poly::Term>> groups;
  for (const auto& [m, c] : p.terms()) {
    std::vector<Exponent> a_exp(r);
    bool negative = false;
    Monomial b_part = m;
    for (std::size_t a = 0; a < r; ++a) {
      a_exp[a] = m[a_index(cd, a)];
      negative |= a_exp[a] < 0;
      b_part.set(a_index(cd, a), 0);
    }
    if (negative) groups[a_exp].emplace_back(std::move(b_part), c);
  }
  std::vector<Poly> binomials;
  for (std::size_t a = 0; a < r; ++a) binomials.push_back(exchange_binomial(cd, B, a, n));

  AuditReport report;
  for (auto& [a_exp, terms] : groups) {
    AuditEntry e;
    e.term_exponents = a_exp;
    e.required_factor_degrees.assign(r, 0);
    Poly factor = Poly::one(n);
    for (std::size_t a = 0; a < r; ++a) {
      if (a_exp[a] < 0) {
        e.required_factor_degrees[a] = -a_exp[a];
        factor *= pow(binomials[a], -static_cast<std::int64_t>(a_exp[a]));
      }
    }
    e.pass = try_exact_div(Poly::from_terms(n, std::move(terms)), factor).has_value();
    report.entries.push_back(std::move(e));
  }
  if (strict && !report.pass()) {
    for (const auto& e : report.entries) {
      if (e.pass) continue;
      std::string exps;
      for (auto v : e.term_exponents) exps += (exps.empty() ? "" : ",") + std::to_string(v);
      throw DivisibilityFailure("coefficient of a^(" + exps + ") is not divisible by the required binomials");
    }
  }
  return report;
}

struct WalkAuditReport {
  std::size_t variables = 0;  // walk variables audited
  std::size_t entries = 0;    // negative a-exponent classes checked
};

/// Audits every variable produced by the normalized walk from node 0 until all
/// R_{alpha,k}, 0 <= k <= t_alpha k_max, have appeared.
inline WalkAuditReport walk_divisibility_audit(const CartanData& cd, long k_max) {
  const std::size_t r = cd.r();
  const auto schedule = make_schedule(cd);
  const auto start = build_seed(cd);
  std::set<QIndex> seen;
  std::size_t wanted = 0;
  for (std::size_t a = 0; a < r; ++a) wanted += static_cast<std::size_t>(cd.t[a] * k_max + 1);
  auto in_range = [&](std::size_t a, long j) { return j >= 0 && j <= static_cast<long>(cd.t[a]) * k_max; };

  WalkAuditReport rep;
  WalkNode<Integer> node{"k", 0, start, node_labels(cd, 0), {}};
  for (std::size_t p = 0; p < 2 * r; ++p) seen.insert({p % r, node.labels[p]});
  const std::size_t max_steps = (periods_for(k_max) + 1) * schedule.period();
  for (std::size_t s = 0; seen.size() < wanted && s < max_steps; ++s) {
    node = walk_step(cd, node, schedule, s);
    for (std::size_t p : node.changed) {
      const long j = node.labels[p];
      if (!in_range(p % r, j)) continue;
      seen.insert({p % r, j});
      auto audit = divisibility_audit(node.seed.x[p], cd, start.B);
      rep.entries += audit.entries.size();
      ++rep.variables;
    }
  }
  if (seen.size() < wanted) throw Mismatch("divisibility audit: walk did not cover " + cd.name());
  return rep;
}

// ---------------------------------------------------------------------------
// Mutations off the Q-system graph

struct PathSample {
  std::uint64_t rng_seed = 0;
  std::size_t paths = 0;              // paths fully mutated
  std::size_t rejected = 0;           // paths drawn but outside the entry bound
  std::size_t mutations = 0;          // exact divisions performed
  std::size_t variables_checked = 0;  // specialized variables found polynomial
};

/// Off-graph variables grow with the exchange matrix entries (x^|B_jk| in
/// the exchange monomials); paths are restricted to mutations whose column
/// satisfies max_j |B_jk| <= max_entry.
inline constexpr std::int64_t kDefaultMaxEntry = 8;

inline bool column_within(const IntMatrix& B, std::size_t k, std::int64_t max_entry) {
  for (std::size_t i = 0; i < B.rows(); ++i)
    if (B(i, k) > max_entry || B(i, k) < -max_entry) return false;
  return true;
}

inline bool path_within(IntMatrix B, const std::vector<std::size_t>& path, std::int64_t max_entry) {
  for (std::size_t k : path) {
    if (!column_within(B, k, max_entry)) return false;
    B = detail::mutate_matrix(B, k);
  }
  return true;
}

/// Checks one variable produced off the graph: specialized at the normalized
/// KR point it must be a polynomial in the a-generators.
inline void check_off_graph_variable(const LaurentPoly<Integer>& v, const CartanData& cd, const std::string& where) {
  auto s = specialize_kr_normalized(v, cd);
  if (!check_polynomiality(s, cd)) {
    throw PolynomialityFailure("variable at " + where + " is not a polynomial at the KR point");
  }
}

inline std::string path_name(const std::vector<std::size_t>& path) {
  std::string s;
  for (auto k : path) s += (s.empty() ? "" : ",") + std::to_string(k + 1);
  return "[" + s + "]";
}

/// Random mutation paths from the normalized seed, lengths uniform in
/// [1, max_length], no immediate repeats. Every division must be exact and,
/// if `specialize`, every new variable polynomial at the KR point.
inline PathSample random_path_sample(const CartanData& cd, std::size_t n_paths, std::size_t max_length,
                                     std::uint64_t rng_seed, bool specialize = true,
                                     std::int64_t max_entry = kDefaultMaxEntry) {
  std::mt19937_64 rng(rng_seed);
  std::uniform_int_distribution<std::size_t> length(1, max_length);
  const auto start = build_seed(cd);
  PathSample out;
  out.rng_seed = rng_seed;
  while (out.paths < n_paths) {
    const auto path = random_path(start.n(), length(rng), rng);
    if (!path_within(start.B, path, max_entry)) {
      ++out.rejected;
      continue;
    }
    Seed<Integer> s = start;
    std::vector<std::size_t> prefix;
    for (std::size_t k : path) {
      s = mutate(s, k);
      prefix.push_back(k);
      ++out.mutations;
      if (specialize) {
        check_off_graph_variable(s.x[k], cd, cd.name() + " path " + path_name(prefix));
        ++out.variables_checked;
      }
    }
    ++out.paths;
  }
  return out;
}

/// Every mutation path of length <= depth without immediate repeats and
/// within the entry bound, by depth-first search sharing prefixes. A branch
/// leaving the bound is counted in `rejected` and not extended.
inline PathSample exhaustive_paths(const CartanData& cd, std::size_t depth, bool specialize = true,
                                   std::int64_t max_entry = kDefaultMaxEntry) {
  PathSample out;
  std::vector<std::size_t> path;
  std::function<void(const Seed<Integer>&)> visit = [&](const Seed<Integer>& s) {
    if (path.size() == depth) {
      ++out.paths;
      return;
    }
    for (std::size_t k = 0; k < s.n(); ++k) {
      if (!path.empty() && path.back() == k) continue;
      if (!column_within(s.B, k, max_entry)) {
        ++out.rejected;
        continue;
      }
      Seed<Integer> next = mutate(s, k);
      path.push_back(k);
      ++out.mutations;
      if (specialize) {
        check_off_graph_variable(next.x[k], cd, cd.name() + " path " + path_name(path));
        ++out.variables_checked;
      }
      visit(next);
      path.pop_back();
    }
  };
  visit(build_seed(cd));
  return out;
}

}  // namespace qcluster
