#pragma once

#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>

#include "eos/rational.hpp"

namespace eos {

// A transitive homeomorphism with exact points and certified distance
// comparisons. Tolerances are exact rationals; `within` decides d(p, q) < eps
// strictly and never rounds.
template <class S>
concept DynamicalSystem = requires(const S& s, const typename S::Point& p, const Rational& eps, std::int64_t n,
                                   std::string_view text) {
  typename S::Point;
  requires std::equality_comparable<typename S::Point>;
  { s.step(p) } -> std::same_as<typename S::Point>;
  { s.inv_step(p) } -> std::same_as<typename S::Point>;
  { s.iterate(p, n) } -> std::same_as<typename S::Point>;
  { s.same_class(p, p) } -> std::same_as<bool>;
  { s.within(p, p, eps) } -> std::same_as<bool>;
  { s.dist_approx(p, p) } -> std::convertible_to<double>;
  { s.hit_time(p, p, eps, n) } -> std::same_as<std::int64_t>;
  { s.class_seed(n) } -> std::same_as<typename S::Point>;
  { s.format_point(p) } -> std::same_as<std::string>;
  { s.parse_point(text) } -> std::same_as<typename S::Point>;
  { s.name() } -> std::same_as<std::string>;
};

// Translation conjugacy x -> x + c. Both implemented systems are translations
// of a compact group, so h commutes with f and is an isometry.
struct Translation {
  Rational c;
};

}  // namespace eos
