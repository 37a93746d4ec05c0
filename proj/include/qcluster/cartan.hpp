#pragma once

// Cartan data of the finite-type simple Lie algebras.
//
// Nodes are 0-based internally; user-facing labels (JSON, CLI, reports) are
// 1-based. Numbering: B_r has its short root at r, C_r its long root at r,
// F_4 has long 1,2 and short 3,4 with the double bond 2=>3, G_2 has its short
// root at 2. D and E follow Bourbaki. In every non-simply-laced case the row
// of a short root carries the -2 (or -3) entry, so C * diag(t) is symmetric.

#include <algorithm>
#include <cctype>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "matrix.hpp"

namespace qcluster {

struct CartanData {
  char type_label = 'A';
  int rank = 1;
  IntMatrix C;
  std::vector<int> t;                        // symmetrizers t_alpha
  std::vector<std::size_t> short_roots;      // Pi_<
  std::vector<std::size_t> long_roots;       // Pi_>
  std::vector<std::vector<std::size_t>> neighbors;

  std::size_t r() const { return static_cast<std::size_t>(rank); }
  std::string name() const { return std::string(1, type_label) + std::to_string(rank); }
  bool simply_laced() const { return short_roots.empty(); }
  bool is_short(std::size_t a) const {
    return std::find(short_roots.begin(), short_roots.end(), a) != short_roots.end();
  }
  bool adjacent(std::size_t a, std::size_t b) const { return a != b && C(a, b) != 0; }

  /// C * diag(t); symmetric for every finite type.
  IntMatrix symmetrized() const {
    IntMatrix s = C;
    for (std::size_t i = 0; i < r(); ++i)
      for (std::size_t j = 0; j < r(); ++j) s(i, j) *= t[j];
    return s;
  }
};

namespace detail {

inline void bond(IntMatrix& C, std::size_t a, std::size_t b) {
  C(a, b) = -1;
  C(b, a) = -1;
}

}  // namespace detail

/// Cartan matrix, symmetrizers and root-length partition of the finite type (label, rank).
inline CartanData build_cartan(char label, int rank) {
  label = static_cast<char>(std::toupper(static_cast<unsigned char>(label)));
  auto invalid = [&] { return InvalidType("unsupported finite type " + std::string(1, label) + std::to_string(rank)); };
  bool ok = false;
  switch (label) {
    case 'A': ok = rank >= 1; break;
    case 'B':
    case 'C': ok = rank >= 2; break;
    case 'D': ok = rank >= 4; break;
    case 'E': ok = rank >= 6 && rank <= 8; break;
    case 'F': ok = rank == 4; break;
    case 'G': ok = rank == 2; break;
    default: break;
  }
  if (!ok) throw invalid();

  CartanData cd;
  cd.type_label = label;
  cd.rank = rank;
  const auto n = static_cast<std::size_t>(rank);
  cd.C = IntMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i) cd.C(i, i) = 2;
  cd.t.assign(n, 1);

  switch (label) {
    case 'A':
      for (std::size_t i = 0; i + 1 < n; ++i) detail::bond(cd.C, i, i + 1);
      break;
    case 'B':
      for (std::size_t i = 0; i + 1 < n; ++i) detail::bond(cd.C, i, i + 1);
      cd.C(n - 1, n - 2) = -2;
      cd.t[n - 1] = 2;
      cd.short_roots = {n - 1};
      break;
    case 'C':
      for (std::size_t i = 0; i + 1 < n; ++i) detail::bond(cd.C, i, i + 1);
      cd.C(n - 2, n - 1) = -2;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        cd.t[i] = 2;
        cd.short_roots.push_back(i);
      }
      break;
    case 'D':
      for (std::size_t i = 0; i + 2 < n; ++i) detail::bond(cd.C, i, i + 1);
      detail::bond(cd.C, n - 3, n - 1);
      break;
    case 'E':
      detail::bond(cd.C, 0, 2);
      detail::bond(cd.C, 1, 3);
      for (std::size_t i = 2; i + 1 < n; ++i) detail::bond(cd.C, i, i + 1);
      break;
    case 'F':
      detail::bond(cd.C, 0, 1);
      detail::bond(cd.C, 1, 2);
      detail::bond(cd.C, 2, 3);
      cd.C(2, 1) = -2;
      cd.t[2] = cd.t[3] = 2;
      cd.short_roots = {2, 3};
      break;
    case 'G':
      cd.C(0, 1) = -1;
      cd.C(1, 0) = -3;
      cd.t[1] = 3;
      cd.short_roots = {1};
      break;
    default: throw invalid();
  }

  for (std::size_t a = 0; a < n; ++a) {
    if (!cd.is_short(a)) cd.long_roots.push_back(a);
    std::vector<std::size_t> nb;
    for (std::size_t b = 0; b < n; ++b)
      if (b != a && cd.C(a, b) != 0) nb.push_back(b);
    cd.neighbors.push_back(std::move(nb));
  }
  return cd;
}

/// Parses labels such as "A2", "g2", "E8".
inline CartanData build_cartan(const std::string& label) {
  if (label.size() < 2) throw InvalidType("bad algebra label '" + label + "'");
  int rank = 0;
  try {
    std::size_t used = 0;
    rank = std::stoi(label.substr(1), &used);
    if (used != label.size() - 1) throw InvalidType("bad algebra label '" + label + "'");
  } catch (const std::logic_error&) {
    throw InvalidType("bad algebra label '" + label + "'");
  }
  return build_cartan(label[0], rank);
}

/// The index sets on the 2r cluster positions.
struct IndexSets {
  std::vector<std::size_t> all;          // Pi = I_r
  std::vector<std::size_t> all_prime;    // Pi'
  std::vector<std::size_t> shorts;       // Pi_<
  std::vector<std::size_t> longs;        // Pi_>
  std::vector<std::size_t> shorts_prime; // Pi_<'
  std::vector<std::size_t> longs_prime;  // Pi_>'
};

inline IndexSets index_sets(const CartanData& cd) {
  IndexSets s;
  const std::size_t r = cd.r();
  for (std::size_t a = 0; a < r; ++a) {
    s.all.push_back(a);
    s.all_prime.push_back(a + r);
  }
  s.shorts = cd.short_roots;
  s.longs = cd.long_roots;
  for (auto a : s.shorts) s.shorts_prime.push_back(a + r);
  for (auto a : s.longs) s.longs_prime.push_back(a + r);
  return s;
}

inline nlohmann::ordered_json to_json(const CartanData& cd) {
  return {{"type", std::string(1, cd.type_label)}, {"rank", cd.rank}, {"C", cd.C.to_rows()}, {"t", cd.t}};
}

inline CartanData cartan_from_json(const nlohmann::ordered_json& j) {
  try {
    auto type = j.at("type").get<std::string>();
    if (type.size() != 1) throw ParseError("cartan: 'type' must be one letter");
    CartanData cd = build_cartan(type[0], j.at("rank").get<int>());
    if (j.contains("C") && IntMatrix::from_rows(j["C"].get<std::vector<std::vector<std::int64_t>>>()) != cd.C) {
      throw ParseError("cartan: C does not match the standard matrix for " + cd.name());
    }
    return cd;
  } catch (const nlohmann::ordered_json::exception& e) {
    throw ParseError(std::string("cartan: ") + e.what());
  }
}

}  // namespace qcluster
