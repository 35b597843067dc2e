#pragma once

// Irrational circle rotation x -> x + alpha (mod 1). A point is a rational
// seed in [0, 1) together with a power n, denoting seed + n * alpha. Every
// distance comparison is decided on an exact rational enclosure of alpha
// taken from consecutive continued-fraction convergents.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "eos/errors.hpp"
#include "eos/rational.hpp"
#include "eos/system.hpp"

namespace eos {

struct RotationPoint {
  Rational seed;
  std::int64_t power = 0;

  friend bool operator==(const RotationPoint&, const RotationPoint&) = default;
};

class Rotation {
 public:
  using Point = RotationPoint;
  using BigQ = boost::multiprecision::cpp_rational;
  using BigZ = boost::multiprecision::cpp_int;

  // "golden", "silver" or "cf:a1,...,ak" (partial quotients of alpha in (0, 1),
  // repeated periodically).
  explicit Rotation(std::string_view spec = "golden", int max_terms = 400) : spec_(spec) {
    std::vector<std::uint64_t> period;
    if (spec == "golden") {
      period = {1};
    } else if (spec == "silver") {
      period = {2};
    } else if (spec.substr(0, 3) == "cf:") {
      std::string_view rest = spec.substr(3);
      std::size_t i = 0;
      while (i < rest.size()) {
        std::size_t start = i;
        std::uint64_t v = 0;
        while (i < rest.size() && std::isdigit(static_cast<unsigned char>(rest[i]))) v = v * 10 + (rest[i++] - '0');
        if (i == start || v == 0) throw ParseError("bad partial quotient in rotation spec", 3 + start);
        period.push_back(v);
        if (i < rest.size() && rest[i] == ',') ++i;
        else if (i < rest.size()) throw ParseError("unexpected character in rotation spec", 3 + i);
      }
      if (period.empty()) throw ParseError("empty continued fraction", 3);
    } else {
      throw ParseError("unknown rotation spec '" + std::string(spec) + "'", 0);
    }
    // Convergents h_k / q_k of [0; a1, a2, ...].
    BigZ h2 = 0, h1 = 1, q2 = 1, q1 = 0;
    {
      // a0 = 0
      BigZ h = 0 * h1 + h2, q = 0 * q1 + q2;
      h2 = h1, h1 = h, q2 = q1, q1 = q;
    }
    for (int k = 0; k < max_terms; ++k) {
      std::uint64_t a = period[static_cast<std::size_t>(k) % period.size()];
      BigZ h = a * h1 + h2, q = a * q1 + q2;
      h2 = h1, h1 = h, q2 = q1, q1 = q;
      conv_.push_back(BigQ(h, q));
      denoms_.push_back(q);
    }
    approx_ = static_cast<double>(conv_.back());
  }

  Point step(const Point& p) const { return {p.seed, p.power + 1}; }
  Point inv_step(const Point& p) const { return {p.seed, p.power - 1}; }
  Point iterate(const Point& p, std::int64_t n) const { return {p.seed, p.power + n}; }

  // Distinct rational seeds differ by a rational, never by an element of
  // Z alpha + Z with nonzero alpha coefficient.
  bool same_class(const Point& p, const Point& q) const { return p.seed == q.seed; }
  Point class_rep(const Point& p) const { return {p.seed, 0}; }

  double dist_approx(const Point& p, const Point& q) const {
    double d = static_cast<double>((p.seed - q.seed).num()) / static_cast<double>((p.seed - q.seed).den()) +
               static_cast<double>(p.power - q.power) * approx_;
    d -= std::floor(d);
    return std::min(d, 1.0 - d);
  }

  // Certified d(p, q) < eps.
  bool within(const Point& p, const Point& q, const Rational& eps) const {
    BigQ e(BigZ(eps.num()), BigZ(eps.den()));
    BigQ s(BigZ((p.seed - q.seed).num()), BigZ((p.seed - q.seed).den()));
    std::int64_t k = p.power - q.power;
    if (k == 0) {
      auto [lo, hi] = circle_dist(s, s);
      return lo < e;
    }
    for (std::size_t level = 16; level + 1 < conv_.size(); level *= 2) {
      BigQ a = conv_[level], b = conv_[level + 1];
      BigQ x = s + k * a, y = s + k * b;
      if (y < x) std::swap(x, y);
      auto [lo, hi] = circle_dist(x, y);
      if (hi < e) return true;
      if (lo >= e) return false;
    }
    throw PrecisionExhausted("rotation distance too close to the tolerance to separate");
  }

  // Least h >= min_h with d(f^(h+1)(from), to) < eps. The orbit segment of
  // length q_k + q_(k-1) with q_k >= 1/eps leaves no gap of length eps, so a
  // window of twice that length starting anywhere contains a hit.
  std::int64_t hit_time(const Point& from, const Point& to, const Rational& eps, std::int64_t min_h) const {
    BigQ inv(BigZ(eps.den()), BigZ(eps.num()));
    std::size_t k = 1;
    while (k < denoms_.size() && BigQ(denoms_[k]) < inv) ++k;
    if (k >= denoms_.size()) throw SearchCapExceeded("tolerance beyond the precomputed convergents");
    BigZ cap_big = 2 * (denoms_[k] + denoms_[k - 1]);
    if (cap_big > BigZ(INT64_MAX / 4)) throw SearchCapExceeded("search window too large");
    const auto cap = static_cast<std::int64_t>(cap_big);
    double e = static_cast<double>(eps.num()) / static_cast<double>(eps.den());
    for (std::int64_t h = min_h; h < min_h + cap; ++h) {
      Point cand = iterate(from, h + 1);
      // Cheap rejection; anything near the threshold goes to the certified test.
      if (std::abs(cand.power - to.power) < (std::int64_t{1} << 20) && dist_approx(cand, to) > e + 1e-6) continue;
      if (within(cand, to, eps)) return h;
    }
    throw SearchCapExceeded("no hit inside the three-distance window");
  }

  Point class_seed(std::int64_t prime) const { return {Rational(1, prime), 0}; }

  Point translate(const Point& p, const Translation& t) const { return {(p.seed + t.c).frac(), p.power}; }
  bool valid_translation(const Translation&) const { return true; }

  std::string format_point(const Point& p) const {
    return "(" + p.seed.to_string() + ", " + std::to_string(p.power) + ")";
  }
  Point parse_point(std::string_view text) const {
    auto l = text.find('(');
    auto c = text.find(',');
    auto r = text.rfind(')');
    if (l == std::string_view::npos || c == std::string_view::npos || r == std::string_view::npos || !(l < c && c < r))
      throw ParseError("rotation point must look like (p/q, n)", 0);
    Rational seed = Rational::parse(text.substr(l + 1, c - l - 1));
    Rational pw = Rational::parse(text.substr(c + 1, r - c - 1));
    if (!pw.is_integer()) throw ParseError("rotation power must be an integer", c + 1);
    if (seed < Rational(0) || !(seed < Rational(1))) throw ParseError("rotation seed must lie in [0, 1)", l + 1);
    return {seed, pw.num()};
  }
  std::string name() const { return "rotation:" + spec_; }

 private:
  // Enclosure of dist(t, Z) for t ranging over [x, y], y - x < 1.
  static std::pair<BigQ, BigQ> circle_dist(const BigQ& x, const BigQ& y) {
    auto floor_q = [](const BigQ& v) {
      BigZ n = boost::multiprecision::numerator(v), d = boost::multiprecision::denominator(v);
      BigZ f = n / d;
      if (n < 0 && f * d != n) f -= 1;
      return f;
    };
    auto tent = [](const BigQ& f) { return f < BigQ(1, 2) ? f : BigQ(1) - f; };
    BigZ fx = floor_q(x), fy = floor_q(y);
    BigQ a = x - BigQ(fx), b = y - BigQ(fy);
    if (fx == fy) {
      BigQ lo = std::min(tent(a), tent(b));
      BigQ hi = (a <= BigQ(1, 2) && BigQ(1, 2) <= b) ? BigQ(1, 2) : std::max(tent(a), tent(b));
      return {lo, hi};
    }
    // The enclosure straddles the integer fy.
    return {BigQ(0), std::max(BigQ(1) - a, b)};
  }

  std::string spec_;
  std::vector<BigQ> conv_;
  std::vector<BigZ> denoms_;
  double approx_ = 0;
};

static_assert(DynamicalSystem<Rotation>);

}  // namespace eos

template <>
struct std::hash<eos::RotationPoint> {
  std::size_t operator()(const eos::RotationPoint& p) const noexcept {
    return std::hash<eos::Rational>{}(p.seed) ^ (static_cast<std::size_t>(p.power) * 0x9E3779B97F4A7C15ULL);
  }
};
