#pragma once

// Coefficient rings for Laurent polynomials: the integers (GMP) and the
// Gaussian integers Z[i]. The ring is a template parameter of LaurentPoly, so
// the two rings never mix at runtime.

#include <gmpxx.h>

#include <concepts>
#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

namespace qcluster {

using Integer = mpz_class;

struct Gaussian {
  Integer re;
  Integer im;

  Gaussian() = default;
  Gaussian(long r) : re(r), im(0) {}  // NOLINT: implicit from small ints
  Gaussian(Integer r, Integer i) : re(std::move(r)), im(std::move(i)) {}

  static Gaussian i() { return {Integer(0), Integer(1)}; }

  Gaussian& operator+=(const Gaussian& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Gaussian& operator-=(const Gaussian& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Gaussian& operator*=(const Gaussian& o) {
    Integer r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  friend Gaussian operator+(Gaussian a, const Gaussian& b) { return a += b; }
  friend Gaussian operator-(Gaussian a, const Gaussian& b) { return a -= b; }
  friend Gaussian operator*(Gaussian a, const Gaussian& b) { return a *= b; }
  friend Gaussian operator-(const Gaussian& a) { return {Integer(-a.re), Integer(-a.im)}; }
  friend bool operator==(const Gaussian& a, const Gaussian& b) { return a.re == b.re && a.im == b.im; }

  Gaussian conj() const { return {re, Integer(-im)}; }
  Integer norm() const { return re * re + im * im; }
};

inline std::ostream& operator<<(std::ostream& os, const Gaussian& g) {
  return os << "(" << g.re << (g.im < 0 ? "-" : "+") << abs(g.im) << "i)";
}

/// i^m for any integer m.
inline Gaussian i_power(int m) {
  switch (((m % 4) + 4) % 4) {
    case 0: return {Integer(1), Integer(0)};
    case 1: return {Integer(0), Integer(1)};
    case 2: return {Integer(-1), Integer(0)};
    default: return {Integer(0), Integer(-1)};
  }
}

template <class R>
struct ring_traits;

template <>
struct ring_traits<Integer> {
  static constexpr std::string_view name = "Z";

  static Integer zero() { return 0; }
  static Integer one() { return 1; }
  static Integer from_int(long v) { return v; }
  static bool is_zero(const Integer& a) { return sgn(a) == 0; }
  static void add_product(Integer& acc, const Integer& a, const Integer& b) {
    mpz_addmul(acc.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  }
  static void sub_product(Integer& acc, const Integer& a, const Integer& b) {
    mpz_submul(acc.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  }

  static std::optional<Integer> divide(const Integer& a, const Integer& b) {
    if (sgn(b) == 0) return std::nullopt;
    if (!mpz_divisible_p(a.get_mpz_t(), b.get_mpz_t())) return std::nullopt;
    Integer q;
    mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
  }

  static std::optional<Integer> inverse(const Integer& a) {
    if (a == 1 || a == -1) return a;
    return std::nullopt;
  }

  static std::string to_string(const Integer& a) { return a.get_str(); }
};

template <>
struct ring_traits<Gaussian> {
  static constexpr std::string_view name = "ZI";

  static Gaussian zero() { return {}; }
  static Gaussian one() { return {Integer(1), Integer(0)}; }
  static Gaussian from_int(long v) { return {Integer(v), Integer(0)}; }
  static bool is_zero(const Gaussian& a) { return sgn(a.re) == 0 && sgn(a.im) == 0; }
  static void add_product(Gaussian& acc, const Gaussian& a, const Gaussian& b) {
    mpz_addmul(acc.re.get_mpz_t(), a.re.get_mpz_t(), b.re.get_mpz_t());
    mpz_submul(acc.re.get_mpz_t(), a.im.get_mpz_t(), b.im.get_mpz_t());
    mpz_addmul(acc.im.get_mpz_t(), a.re.get_mpz_t(), b.im.get_mpz_t());
    mpz_addmul(acc.im.get_mpz_t(), a.im.get_mpz_t(), b.re.get_mpz_t());
  }
  static void sub_product(Gaussian& acc, const Gaussian& a, const Gaussian& b) {
    mpz_submul(acc.re.get_mpz_t(), a.re.get_mpz_t(), b.re.get_mpz_t());
    mpz_addmul(acc.re.get_mpz_t(), a.im.get_mpz_t(), b.im.get_mpz_t());
    mpz_submul(acc.im.get_mpz_t(), a.re.get_mpz_t(), b.im.get_mpz_t());
    mpz_submul(acc.im.get_mpz_t(), a.im.get_mpz_t(), b.re.get_mpz_t());
  }

  static std::optional<Gaussian> divide(const Gaussian& a, const Gaussian& b) {
    Integer n = b.norm();
    if (sgn(n) == 0) return std::nullopt;
    Gaussian num = a * b.conj();
    auto r = ring_traits<Integer>::divide(num.re, n);
    auto i = ring_traits<Integer>::divide(num.im, n);
    if (!r || !i) return std::nullopt;
    return Gaussian{std::move(*r), std::move(*i)};
  }

  static std::optional<Gaussian> inverse(const Gaussian& a) {
    if (a.norm() != 1) return std::nullopt;
    return a.conj();
  }

  static std::string to_string(const Gaussian& a) {
    if (sgn(a.im) == 0) return a.re.get_str();
    if (sgn(a.re) == 0) {
      if (a.im == 1) return "i";
      if (a.im == -1) return "-i";
      return a.im.get_str() + "i";
    }
    std::string s = "(" + a.re.get_str();
    s += sgn(a.im) < 0 ? "-" : "+";
    Integer m = abs(a.im);
    if (m != 1) s += m.get_str();
    return s + "i)";
  }
};

template <class R>
concept CoefficientRing = requires(R a, R b) {
  { ring_traits<R>::zero() } -> std::convertible_to<R>;
  { ring_traits<R>::is_zero(a) } -> std::convertible_to<bool>;
  { ring_traits<R>::divide(a, b) } -> std::convertible_to<std::optional<R>>;
  ring_traits<R>::add_product(a, a, b);
  ring_traits<R>::sub_product(a, a, b);
  { a + b } -> std::convertible_to<R>;
  { a * b } -> std::convertible_to<R>;
};

}  // namespace qcluster
