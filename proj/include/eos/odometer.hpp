#pragma once

// The +1 map on the 2-adic integers, restricted to rationals with odd
// denominator. Distances are powers of two and every comparison is exact.

#include <cstdint>
#include <string>
#include <string_view>

#include "eos/errors.hpp"
#include "eos/rational.hpp"
#include "eos/system.hpp"

namespace eos {

class Odometer {
 public:
  using Point = Rational;

  Point step(const Point& p) const { return p + Rational(1); }
  Point inv_step(const Point& p) const { return p - Rational(1); }
  Point iterate(const Point& p, std::int64_t n) const { return p + Rational(n); }

  // Orbits are the cosets of Z.
  bool same_class(const Point& p, const Point& q) const { return (p - q).is_integer(); }
  Point class_rep(const Point& p) const { return p.frac(); }

  // Exact distance 2^-v2(p - q), 0 when equal.
  Rational dist(const Point& p, const Point& q) const {
    if (p == q) return Rational(0);
    int v = two_adic_valuation(p - q);
    if (v > 62) throw std::overflow_error("odometer distance below 2^-62");
    return dyadic(v);
  }
  double dist_approx(const Point& p, const Point& q) const {
    Rational d = dist(p, q);
    return static_cast<double>(d.num()) / static_cast<double>(d.den());
  }
  bool within(const Point& p, const Point& q, const Rational& eps) const {
    if (p == q) return eps > Rational(0);
    return required_valuation(eps) <= two_adic_valuation(p - q);
  }

  // Least m with 2^-m < eps; d(p, q) < eps iff v2(p - q) >= m.
  static int required_valuation(const Rational& eps) {
    if (eps <= Rational(0)) throw std::domain_error("tolerance must be positive");
    int m = 0;
    while (!(dyadic(m) < eps)) {
      if (++m > 62) throw std::overflow_error("tolerance below 2^-62");
    }
    return m;
  }

  // Least h >= min_h with d(f^(h+1)(from), to) < eps. Closed form:
  // h + 1 must be congruent to to - from modulo 2^m.
  std::int64_t hit_time(const Point& from, const Point& to, const Rational& eps, std::int64_t min_h) const {
    int m = required_valuation(eps);
    if (m == 0) return min_h;
    Rational r = to - from;
    const unsigned __int128 mod = static_cast<unsigned __int128>(1) << m;
    auto reduce = [&](std::int64_t v) -> unsigned __int128 {
      __int128 x = v % static_cast<__int128>(mod);
      if (x < 0) x += static_cast<__int128>(mod);
      return static_cast<unsigned __int128>(x);
    };
    // r = a / b with b odd, so r mod 2^m = a * b^-1 mod 2^m.
    unsigned __int128 b = reduce(r.den());
    unsigned __int128 inv = 1;  // Newton iteration for the inverse of an odd number mod 2^m
    for (int i = 0; i < 7; ++i) inv = (inv * (2 - b * inv)) % mod;
    unsigned __int128 target = (reduce(r.num()) * inv) % mod;
    unsigned __int128 lo = reduce(min_h + 1);
    unsigned __int128 delta = (target + mod - lo) % mod;
    return min_h + static_cast<std::int64_t>(delta);
  }

  Point class_seed(std::int64_t prime) const { return Rational(1, prime); }

  Point translate(const Point& p, const Translation& t) const { return p + t.c; }
  bool valid_translation(const Translation& t) const { return t.c.den() % 2 != 0; }

  std::string format_point(const Point& p) const { return p.to_string(); }
  Point parse_point(std::string_view text) const {
    Rational r = Rational::parse(text);
    if (r.den() % 2 == 0) throw ParseError("odometer points need an odd denominator", 0);
    return r;
  }
  std::string name() const { return "odometer"; }
};

static_assert(DynamicalSystem<Odometer>);

}  // namespace eos
