#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <queue>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "eos/rational.hpp"

namespace eos {

template <class Point>
struct EpsilonChain {
  std::vector<Point> points;
  Rational eps;
};

// The prefix C_1 .. C_N of a sequence of chains from x to y.
template <class Point>
struct NestedFamily {
  Point x;
  Point y;
  std::vector<EpsilonChain<Point>> stages;
  std::vector<Rational> epsilons;
};

template <class Point>
EpsilonChain<Point> concat(const EpsilonChain<Point>& a, const EpsilonChain<Point>& b) {
  if (a.points.empty() || b.points.empty()) throw std::invalid_argument("concat needs non-empty chains");
  if (!(a.eps == b.eps)) throw std::invalid_argument("concat needs equal tolerances");
  EpsilonChain<Point> r = a;
  r.points.insert(r.points.end(), b.points.begin(), b.points.end());
  return r;
}

template <class Point>
EpsilonChain<Point> strip_endpoints(const EpsilonChain<Point>& c) {
  if (c.points.size() < 3) throw std::invalid_argument("strip_endpoints needs at least three points");
  return EpsilonChain<Point>{std::vector<Point>(c.points.begin() + 1, c.points.end() - 1), c.eps};
}

// The limit order on the union of supports minus the endpoints: z <= w when
// z appears no later than w in every stage holding both (first appearances).
template <class Point>
struct LimitOrder {
  // In limit order when `linear`, otherwise in order of first appearance.
  std::vector<Point> elements;
  std::vector<int> first_stage;  // 1-based, parallel to `elements`
  std::unordered_map<Point, std::size_t> index;
  bool linear = false;
  // Two elements ordered differently by two stages, or never seen together.
  std::optional<std::pair<Point, Point>> witness;

  // Position in the limit order; only meaningful when linear.
  std::size_t position(const Point& p) const { return index.at(p); }
};

namespace detail {

template <class Point>
std::vector<std::vector<std::size_t>> stage_sequences(const NestedFamily<Point>& fam, std::vector<Point>& elems,
                                                      std::unordered_map<Point, std::size_t>& id,
                                                      std::vector<int>& first) {
  std::vector<std::vector<std::size_t>> seqs;
  for (std::size_t s = 0; s < fam.stages.size(); ++s) {
    std::vector<std::size_t> seq;
    std::unordered_set<std::size_t> seen;
    for (const auto& p : fam.stages[s].points) {
      if (p == fam.x || p == fam.y) continue;
      auto [it, fresh] = id.try_emplace(p, elems.size());
      if (fresh) {
        elems.push_back(p);
        first.push_back(static_cast<int>(s) + 1);
      }
      if (seen.insert(it->second).second) seq.push_back(it->second);
    }
    seqs.push_back(std::move(seq));
  }
  return seqs;
}

}  // namespace detail

template <class Point>
LimitOrder<Point> limit_order(const NestedFamily<Point>& fam) {
  if (fam.stages.size() > 64) throw std::invalid_argument("limit_order supports at most 64 stages");
  std::vector<Point> elems;
  std::unordered_map<Point, std::size_t> id;
  std::vector<int> first;
  auto seqs = detail::stage_sequences(fam, elems, id, first);
  const std::size_t n = elems.size();

  LimitOrder<Point> out;

  // Every pair must share a stage.
  std::vector<std::uint64_t> mask(n, 0);
  for (std::size_t s = 0; s < seqs.size(); ++s)
    for (auto e : seqs[s]) mask[e] |= std::uint64_t{1} << s;
  std::unordered_map<std::uint64_t, std::size_t> rep;
  for (std::size_t e = 0; e < n; ++e) rep.try_emplace(mask[e], e);
  std::optional<std::pair<std::size_t, std::size_t>> apart;
  for (auto a = rep.begin(); a != rep.end() && !apart; ++a)
    for (auto b = std::next(a); b != rep.end(); ++b)
      if ((a->first & b->first) == 0) {
        apart = std::minmax(a->second, b->second);
        break;
      }

  // Consecutive pairs of each stage generate the order; it is consistent iff
  // the generated graph has no cycle.
  std::vector<std::vector<std::size_t>> succ(n);
  std::vector<std::size_t> indeg(n, 0);
  for (const auto& seq : seqs)
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
      succ[seq[i]].push_back(seq[i + 1]);
      ++indeg[seq[i + 1]];
    }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t e = 0; e < n; ++e)
    if (indeg[e] == 0) ready.push(e);
  std::vector<std::size_t> topo;
  while (!ready.empty()) {
    std::size_t e = ready.top();
    ready.pop();
    topo.push_back(e);
    for (auto s : succ[e])
      if (--indeg[s] == 0) ready.push(s);
  }
  bool acyclic = topo.size() == n;
  out.linear = acyclic && !apart;

  std::vector<std::size_t> order;
  if (acyclic) {
    order = topo;
  } else {
    order.resize(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    // Find two stages that disagree on a pair.
    for (std::size_t s = 0; s < seqs.size() && !out.witness; ++s) {
      std::unordered_map<std::size_t, std::size_t> pos;
      for (std::size_t i = 0; i < seqs[s].size(); ++i) pos[seqs[s][i]] = i;
      for (std::size_t t = s + 1; t < seqs.size() && !out.witness; ++t) {
        std::optional<std::size_t> prev;
        for (auto e : seqs[t]) {
          auto it = pos.find(e);
          if (it == pos.end()) continue;
          if (prev && seqs[s][*prev] != e && *prev > it->second) {
            out.witness = std::make_pair(elems[seqs[s][*prev]], elems[e]);
            break;
          }
          if (!prev || it->second > *prev) prev = it->second;
        }
      }
    }
  }
  if (apart && !out.witness) out.witness = std::make_pair(elems[apart->first], elems[apart->second]);

  out.elements.reserve(n);
  out.first_stage.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.elements.push_back(elems[order[i]]);
    out.first_stage.push_back(first[order[i]]);
    out.index.emplace(elems[order[i]], i);
  }
  return out;
}

}  // namespace eos
