#pragma once

// JSON forms of Laurent polynomials and seeds.
//
// Polynomial: {"nvars":2,"ring":"Z","terms":[{"e":[2,0],"c":1},...]} with
// terms in canonical order. An integer coefficient is a JSON number when it
// fits in 64 bits and a decimal string otherwise; a Gaussian coefficient is
// the pair [re, im] of such integers.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "cluster.hpp"
#include "coefficients.hpp"
#include "errors.hpp"
#include "laurent.hpp"
#include "matrix.hpp"

namespace qcluster {

using Json = nlohmann::ordered_json;

namespace detail {

inline Json integer_to_json(const Integer& v) {
  if (mpz_fits_slong_p(v.get_mpz_t())) return static_cast<std::int64_t>(v.get_si());
  return v.get_str();
}

inline Integer integer_from_json(const Json& j) {
  if (j.is_number_integer()) return Integer(std::to_string(j.get<std::int64_t>()));
  if (j.is_string()) {
    Integer v;
    if (v.set_str(j.get<std::string>(), 10) != 0) throw ParseError("bad integer '" + j.get<std::string>() + "'");
    return v;
  }
  throw ParseError("coefficient is not an integer: " + j.dump());
}

inline Json coefficient_to_json(const Integer& c) { return integer_to_json(c); }

inline Json coefficient_to_json(const Gaussian& c) { return Json::array({integer_to_json(c.re), integer_to_json(c.im)}); }

template <class R>
R coefficient_from_json(const Json& j);

template <>
inline Integer coefficient_from_json<Integer>(const Json& j) {
  return integer_from_json(j);
}

template <>
inline Gaussian coefficient_from_json<Gaussian>(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw ParseError("Gaussian coefficient must be [re, im]: " + j.dump());
  return {integer_from_json(j[0]), integer_from_json(j[1])};
}

}  // namespace detail

template <CoefficientRing R>
Json to_json(const LaurentPoly<R>& p) {
  Json terms = Json::array();
  for (const auto& [m, c] : p.terms()) {
    terms.push_back({{"e", m.to_vector()}, {"c", detail::coefficient_to_json(c)}});
  }
  return {{"nvars", p.nvars()}, {"ring", std::string(ring_traits<R>::name)}, {"terms", std::move(terms)}};
}

/// Parses a polynomial over R; a document tagged with another ring is a RingMismatch.
template <CoefficientRing R>
LaurentPoly<R> laurent_from_json(const Json& j) {
  try {
    const auto ring = j.at("ring").get<std::string>();
    if (ring != ring_traits<R>::name) {
      throw RingMismatch("expected ring " + std::string(ring_traits<R>::name) + ", got " + ring);
    }
    const auto n = j.at("nvars").get<std::size_t>();
    std::vector<typename LaurentPoly<R>::Term> terms;
    for (const auto& t : j.at("terms")) {
      auto e = t.at("e").get<std::vector<Exponent>>();
      if (e.size() != n) throw ArityMismatch("term exponent vector has length " + std::to_string(e.size()));
      terms.emplace_back(Monomial(e), detail::coefficient_from_json<R>(t.at("c")));
    }
    return LaurentPoly<R>::from_terms(n, std::move(terms));
  } catch (const Json::exception& e) {
    throw ParseError(std::string("polynomial: ") + e.what());
  }
}

template <CoefficientRing R>
Json to_json(const Seed<R>& s) {
  Json x = Json::array(), fv = Json::array();
  for (const auto& v : s.x) x.push_back(to_json(v));
  for (const auto& v : s.frozen_values) fv.push_back(to_json(v));
  Json out = {{"n", s.n()}, {"B", s.B.to_rows()}, {"x", std::move(x)}};
  if (s.has_coefficients()) {
    out["frozen_rows"] = s.frozen_rows.to_rows();
    out["frozen_values"] = std::move(fv);
  }
  return out;
}

template <CoefficientRing R>
Seed<R> seed_from_json(const Json& j) {
  try {
    Seed<R> s;
    s.B = IntMatrix::from_rows(j.at("B").get<std::vector<std::vector<std::int64_t>>>());
    for (const auto& v : j.at("x")) s.x.push_back(laurent_from_json<R>(v));
    if (j.contains("n") && j["n"].get<std::size_t>() != s.x.size()) throw ArityMismatch("seed: n does not match x");
    if (j.contains("frozen_values")) {
      for (const auto& v : j["frozen_values"]) s.frozen_values.push_back(laurent_from_json<R>(v));
      if (!s.frozen_values.empty()) {
        s.frozen_rows = IntMatrix::from_rows(j.at("frozen_rows").get<std::vector<std::vector<std::int64_t>>>());
      }
    }
    validate_seed(s);
    return s;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("seed: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("seed: ") + e.what());
  }
}

}  // namespace qcluster
