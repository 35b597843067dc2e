#pragma once

// Independent checks on a chain family. Everything is recomputed from the
// raw points; the trace is consulted only for the address map.

#include <algorithm>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "eos/chain.hpp"
#include "eos/order_term.hpp"
#include "eos/system.hpp"
#include "eos/trace.hpp"

namespace eos {

struct CheckResult {
  std::string name;
  bool pass = true;
  std::string detail;  // first counterexample when failing
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
  }
  const CheckResult* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

namespace detail {

inline CheckResult fail(std::string name, std::string detail) { return {std::move(name), false, std::move(detail)}; }

}  // namespace detail

template <DynamicalSystem Sys>
CheckResult check_eps(const Sys& sys, const NestedFamily<typename Sys::Point>& fam) {
  const std::string name = "eps";
  if (fam.stages.empty()) return detail::fail(name, "family has no stages");
  if (fam.epsilons.size() != fam.stages.size()) return detail::fail(name, "schedule length differs from stage count");
  for (std::size_t n = 0; n < fam.epsilons.size(); ++n) {
    if (fam.epsilons[n] <= Rational(0)) return detail::fail(name, "non-positive tolerance at stage " + std::to_string(n + 1));
    if (n && !(fam.epsilons[n] < fam.epsilons[n - 1]))
      return detail::fail(name, "tolerances not strictly decreasing at stage " + std::to_string(n + 1));
  }
  for (std::size_t n = 0; n < fam.stages.size(); ++n) {
    const auto& c = fam.stages[n];
    const std::string at = "stage " + std::to_string(n + 1);
    if (!(c.eps == fam.epsilons[n])) return detail::fail(name, at + ": chain tolerance differs from schedule");
    if (c.points.size() < 2) return detail::fail(name, at + ": fewer than two points");
    if (!(c.points.front() == fam.x)) return detail::fail(name, at + ": does not start at x");
    if (!(c.points.back() == fam.y)) return detail::fail(name, at + ": does not end at y");
    for (std::size_t i = 0; i + 1 < c.points.size(); ++i) {
      if (!sys.within(sys.step(c.points[i]), c.points[i + 1], c.eps))
        return detail::fail(name, at + ", hop " + std::to_string(i) + ": d(f(" + sys.format_point(c.points[i]) +
                                      "), " + sys.format_point(c.points[i + 1]) + ") >= " + c.eps.to_string());
    }
  }
  return {name, true, ""};
}

template <DynamicalSystem Sys>
CheckResult check_nested(const Sys& sys, const NestedFamily<typename Sys::Point>& fam) {
  const std::string name = "nested";
  for (std::size_t n = 0; n + 1 < fam.stages.size(); ++n) {
    std::unordered_set<typename Sys::Point> next(fam.stages[n + 1].points.begin(), fam.stages[n + 1].points.end());
    for (const auto& p : fam.stages[n].points)
      if (!next.count(p))
        return detail::fail(name, sys.format_point(p) + " in stage " + std::to_string(n + 1) + " but not in stage " +
                                      std::to_string(n + 2));
  }
  return {name, true, ""};
}

template <DynamicalSystem Sys>
CheckResult check_acyclic(const Sys& sys, const NestedFamily<typename Sys::Point>& fam) {
  const std::string name = "acyclic";
  for (std::size_t n = 0; n < fam.stages.size(); ++n) {
    const auto& pts = fam.stages[n].points;
    const std::string at = "stage " + std::to_string(n + 1);
    if (pts.size() < 2) return detail::fail(name, at + ": fewer than two points");
    std::unordered_set<typename Sys::Point> seen;
    const auto& x = pts.front();
    const auto& y = pts.back();
    if (x == y) return detail::fail(name, at + ": endpoints coincide");
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
      if (pts[i] == x || pts[i] == y)
        return detail::fail(name, at + ": endpoint " + sys.format_point(pts[i]) + " repeats at position " + std::to_string(i));
      if (!seen.insert(pts[i]).second)
        return detail::fail(name, at + ": " + sys.format_point(pts[i]) + " repeats at position " + std::to_string(i));
    }
  }
  return {name, true, ""};
}

template <DynamicalSystem Sys>
CheckResult check_order_compatible(const Sys& sys, const NestedFamily<typename Sys::Point>& fam) {
  const std::string name = "order_compatible";
  using Point = typename Sys::Point;
  for (std::size_t n = 0; n + 1 < fam.stages.size(); ++n) {
    std::unordered_map<Point, std::size_t> pos;
    const auto& next = fam.stages[n + 1].points;
    for (std::size_t i = 0; i < next.size(); ++i) pos.try_emplace(next[i], i);
    std::unordered_set<Point> seen;
    const Point* prev = nullptr;
    std::size_t prev_pos = 0;
    for (const auto& p : fam.stages[n].points) {
      if (p == fam.x || p == fam.y || !seen.insert(p).second) continue;
      auto it = pos.find(p);
      if (it == pos.end()) continue;
      if (prev && it->second <= prev_pos)
        return detail::fail(name, sys.format_point(*prev) + " before " + sys.format_point(p) + " in stage " +
                                      std::to_string(n + 1) + " but not in stage " + std::to_string(n + 2));
      prev = &p;
      prev_pos = it->second;
    }
  }
  return {name, true, ""};
}

// Points of each stage in [x] form the initial orbit run x, f(x), ...; points
// in [y] form the final run ..., f^-1(y), y.
template <DynamicalSystem Sys>
CheckResult check_class_conditions(const Sys& sys, const NestedFamily<typename Sys::Point>& fam) {
  const std::string name = "class_conditions";
  for (std::size_t n = 0; n < fam.stages.size(); ++n) {
    const auto& pts = fam.stages[n].points;
    const std::string at = "stage " + std::to_string(n + 1);
    std::size_t run = 0;
    while (run < pts.size() && pts[run] == sys.iterate(fam.x, static_cast<std::int64_t>(run))) ++run;
    for (std::size_t i = run; i < pts.size(); ++i)
      if (sys.same_class(pts[i], fam.x) && !sys.same_class(fam.x, fam.y))
        return detail::fail(name, at + ": " + sys.format_point(pts[i]) + " in [x] outside the initial orbit run");
    std::size_t back = 0;
    while (back < pts.size() && pts[pts.size() - 1 - back] == sys.iterate(fam.y, -static_cast<std::int64_t>(back))) ++back;
    for (std::size_t i = 0; i + back < pts.size(); ++i)
      if (sys.same_class(pts[i], fam.y) && !sys.same_class(fam.x, fam.y))
        return detail::fail(name, at + ": " + sys.format_point(pts[i]) + " in [y] outside the final orbit run");
    if (sys.same_class(fam.x, fam.y) && run < pts.size())
      return detail::fail(name, at + ": x and y share a class but the stage is not an orbit segment");
  }
  return {name, true, ""};
}

// The limit order is linear, every element carries a valid address, the
// address map is strictly increasing along the limit order, and each stage
// holds exactly the top-level blocks its index set prescribes.
template <DynamicalSystem Sys>
CheckResult check_realization(const Sys& sys, const NestedFamily<typename Sys::Point>& fam,
                              const ConstructionTrace<typename Sys::Point>& trace, const OrderTerm& term) {
  const std::string name = "realization";
  OrderTerm t = normalize_term(term);
  auto lim = limit_order(fam);
  if (!lim.linear) {
    std::string why = "limit order is not linear";
    if (lim.witness)
      why += ": " + sys.format_point(lim.witness->first) + " vs " + sys.format_point(lim.witness->second);
    return detail::fail(name, why);
  }
  AddressValidator validator(t);
  const Address* prev = nullptr;
  for (std::size_t i = 0; i < lim.elements.size(); ++i) {
    const auto& p = lim.elements[i];
    auto it = trace.addresses.find(p);
    if (it == trace.addresses.end()) return detail::fail(name, "no address for " + sys.format_point(p));
    if (!validator.valid(it->second))
      return detail::fail(name, "address " + render_address(it->second) + " of " + sys.format_point(p) +
                                    " is not a position of " + render_term(t));
    if (prev && !(*prev < it->second))
      return detail::fail(name, "addresses out of order: " + sys.format_point(lim.elements[i - 1]) + " " +
                                    render_address(*prev) + " precedes " + sys.format_point(p) + " " +
                                    render_address(it->second));
    prev = &it->second;
  }

  const TopShape shape = top_shape(t);
  for (std::size_t n = 0; n < fam.stages.size(); ++n) {
    const auto& pts = fam.stages[n].points;
    const std::string at = "stage " + std::to_string(n + 1);
    if (shape == TopShape::Finite) {
      if (pts.size() != t.count() + 2)
        return detail::fail(name, at + ": " + std::to_string(pts.size() - 2) + " interior points, expected " +
                                      std::to_string(t.count()));
      continue;
    }
    if (shape != TopShape::Sum) continue;
    std::set<std::int64_t> present;
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
      auto it = trace.addresses.find(pts[i]);
      if (it != trace.addresses.end()) present.insert(it->second.front());
    }
    NormalizedSum ns = normalize_sum(t);
    const auto m = static_cast<std::int64_t>(n + 1);
    std::set<std::int64_t> expected;
    switch (ns.index) {
      case IndexKind::Fin:
        for (std::int64_t l = 0; l < static_cast<std::int64_t>(ns.head.size()); ++l) expected.insert(l);
        break;
      case IndexKind::Omega:
        for (std::int64_t l = 0; l < m; ++l) expected.insert(l);
        break;
      case IndexKind::OmegaStar:
        for (std::int64_t l = -m; l <= -1; ++l) expected.insert(l);
        break;
      case IndexKind::Zeta:
        for (std::int64_t l = -(m + 1) / 2; l <= m / 2 - 1; ++l) expected.insert(l);
        break;
    }
    if (present != expected)
      return detail::fail(name, at + ": " + std::to_string(present.size()) + " top-level blocks, expected " +
                                    std::to_string(expected.size()));
  }
  return {name, true, ""};
}

template <DynamicalSystem Sys>
VerifyReport verify_all(const Sys& sys, const NestedFamily<typename Sys::Point>& fam,
                        const ConstructionTrace<typename Sys::Point>& trace, const OrderTerm& term) {
  VerifyReport r;
  r.checks.push_back(check_eps(sys, fam));
  r.checks.push_back(check_nested(sys, fam));
  r.checks.push_back(check_acyclic(sys, fam));
  r.checks.push_back(check_order_compatible(sys, fam));
  r.checks.push_back(check_class_conditions(sys, fam));
  r.checks.push_back(check_realization(sys, fam, trace, term));
  return r;
}

}  // namespace eos
