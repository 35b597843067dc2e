#pragma once

#include <cctype>
#include <compare>
#include <cstdint>
#include <functional>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "eos/errors.hpp"

namespace eos {

using int128 = __int128;

// Exact rational with 64-bit numerator and denominator. Intermediate results
// are formed in 128 bits and reduced; anything that does not fit after
// reduction throws std::overflow_error instead of wrapping.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT(implicit)
  Rational(std::int64_t n, std::int64_t d) { *this = make(n, d); }

  static Rational make(int128 n, int128 d) {
    if (d == 0) throw std::domain_error("Rational: zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    int128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    if (n > INT64_MAX || n < -INT64_MAX || d > INT64_MAX)
      throw std::overflow_error("Rational: value does not fit in 64 bits");
    Rational r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
  }

  constexpr std::int64_t num() const noexcept { return num_; }
  constexpr std::int64_t den() const noexcept { return den_; }
  constexpr bool is_integer() const noexcept { return den_ == 1; }
  constexpr bool is_zero() const noexcept { return num_ == 0; }

  std::int64_t floor() const noexcept {
    std::int64_t q = num_ / den_;
    if ((num_ % den_ != 0) && (num_ < 0)) --q;
    return q;
  }

  // Fractional part in [0, 1).
  Rational frac() const { return *this - Rational(floor()); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return make(int128(a.num_) * b.den_ + int128(b.num_) * a.den_, int128(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return make(int128(a.num_) * b.den_ - int128(b.num_) * a.den_, int128(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return make(int128(a.num_) * b.num_, int128(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    return make(int128(a.num_) * b.den_, int128(a.den_) * b.num_);
  }
  Rational operator-() const {
    Rational r = *this;
    r.num_ = -r.num_;
    return r;
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    return int128(a.num_) * b.den_ <=> int128(b.num_) * a.den_;
  }

  // "p/q", or "p" for integers.
  std::string to_string() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  // Accepts "[-]p" or "[-]p/q" with optional surrounding blanks.
  static Rational parse(std::string_view text) {
    std::size_t i = 0;
    auto skip = [&] {
      while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    auto integer = [&]() -> int128 {
      bool neg = false;
      if (i < text.size() && (text[i] == '-' || text[i] == '+')) neg = text[i++] == '-';
      std::size_t start = i;
      int128 v = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        v = v * 10 + (text[i++] - '0');
        if (v > INT64_MAX) throw ParseError("integer too large", start);
      }
      if (i == start) throw ParseError("expected digits", start);
      return neg ? -v : v;
    };
    skip();
    int128 n = integer();
    int128 d = 1;
    skip();
    if (i < text.size() && text[i] == '/') {
      ++i;
      skip();
      std::size_t at = i;
      d = integer();
      if (d == 0) throw ParseError("zero denominator", at);
      skip();
    }
    if (i != text.size()) throw ParseError("trailing characters in rational", i);
    return make(n, d);
  }

  static int128 gcd128(int128 a, int128 b) {
    while (b != 0) {
      int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

// 2-adic valuation of a non-zero rational whose denominator is odd.
inline int two_adic_valuation(const Rational& r) {
  if (r.is_zero()) throw std::domain_error("two_adic_valuation: zero");
  if (r.den() % 2 == 0) throw std::domain_error("two_adic_valuation: even denominator");
  std::uint64_t n = r.num() < 0 ? static_cast<std::uint64_t>(-r.num()) : static_cast<std::uint64_t>(r.num());
  return __builtin_ctzll(n);
}

// 2^-e as an exact rational (e <= 62).
inline Rational dyadic(int e) {
  if (e < 0 || e > 62) throw std::out_of_range("dyadic exponent out of range");
  return Rational(1, std::int64_t{1} << e);
}

}  // namespace eos

template <>
struct std::hash<eos::Rational> {
  std::size_t operator()(const eos::Rational& r) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(r.num()) * 0x9E3779B97F4A7C15ULL;
    h ^= static_cast<std::uint64_t>(r.den()) + 0x632BE59BD9B4E019ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};
