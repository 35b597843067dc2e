#pragma once

// Builds order-compatible nested chain families from x to y whose limit
// order realizes a requested scattered term.
//
// Atoms between p and q (classes of p and q disjoint):
//   w   p, f(p), ..., f^h_n(p), q              h_n increasing hit times
//   w*  p, f^-k_n(q), ..., f^-1(q), q          k_n increasing hit times
//   z   p, f^-k_n(z), ..., f^h_n(z), q         z from a fresh class
// A padded block h + core + k walks h steps out of p, realizes the core,
// and walks the last k steps into q.
//
// A sum is a concatenation of stripped block families. Block l runs from
// f^-1(z_l) to z_(l+1) at the halved schedule, where the anchors z_l sit in
// fresh classes placed close enough to f(p) (blocks growing to the left) or to
// q (blocks growing to the right) that the junction hops stay inside eps_n.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "eos/chain.hpp"
#include "eos/classes.hpp"
#include "eos/errors.hpp"
#include "eos/order_term.hpp"
#include "eos/ordinal.hpp"
#include "eos/schedule.hpp"
#include "eos/system.hpp"
#include "eos/trace.hpp"

namespace eos {

template <class Point>
struct Construction {
  NestedFamily<Point> family;
  ConstructionTrace<Point> trace;
  OrderTerm target;
};

struct ConstructOptions {
  OrdinalCNF max_rank = OrdinalCNF::omega_power(OrdinalCNF::omega());
  std::size_t max_points = 20'000'000;
};

enum class GammaCase { OmegaPlusK, HPlusOmegaStar, HZetaK };

inline OrderTerm gamma_term(GammaCase c, std::uint64_t h, std::uint64_t k) {
  using T = OrderTerm;
  switch (c) {
    case GammaCase::OmegaPlusK: return normalize_term(T::sum(IndexKind::Fin, {T::omega(), T::fin(k)}));
    case GammaCase::HPlusOmegaStar: return normalize_term(T::sum(IndexKind::Fin, {T::fin(h), T::omega_star()}));
    case GammaCase::HZetaK: return normalize_term(T::sum(IndexKind::Fin, {T::fin(h), T::zeta(), T::fin(k)}));
  }
  return {};
}

template <DynamicalSystem Sys>
class Constructor {
 public:
  using Point = typename Sys::Point;
  using Structure = AlphaStructure<Sys>;

  Constructor(Sys sys, EpsSchedule sched, int depth, ConstructOptions opts = {})
      : sys_(std::move(sys)), sched_(std::move(sched)), depth_(depth), opts_(std::move(opts)) {
    if (depth_ < 1) throw PreconditionError("depth must be at least 1");
    if (depth_ > 60) throw PreconditionError("depth above 60 is not supported");
    if (auto len = sched_.length(); len && static_cast<std::size_t>(depth_) > *len)
      throw PreconditionError("tolerance list shorter than the depth");
  }

  const Sys& system() const { return sys_; }
  const EpsSchedule& schedule() const { return sched_; }
  int depth() const { return depth_; }

  // Orbit chain x, f(x), ..., f^m(x) at every stage; interior order type m - 1.
  Construction<Point> build_orbit_chain(const Point& x, std::int64_t m) {
    if (m < 1) throw PreconditionError("orbit chain needs m >= 1");
    reset();
    Construction<Point> out;
    out.target = OrderTerm::fin(static_cast<std::uint64_t>(m - 1));
    std::vector<Point> pts;
    for (std::int64_t j = 0; j <= m; ++j) pts.push_back(sys_.iterate(x, j));
    for (std::int64_t j = 1; j < m; ++j) trace_.addresses.emplace(pts[static_cast<std::size_t>(j)], Address{j});
    out.family.x = x;
    out.family.y = pts.back();
    for (int n = 1; n <= depth_; ++n) {
      out.family.stages.push_back({pts, sched_.at(static_cast<std::size_t>(n))});
      out.family.epsilons.push_back(sched_.at(static_cast<std::size_t>(n)));
      trace_.predicted_sizes.push_back(pts.size());
    }
    BlockRecord rec;
    rec.sizes.assign(static_cast<std::size_t>(depth_), pts.size() - 2);
    trace_.blocks.push_back(rec);
    out.trace = std::move(trace_);
    return out;
  }

  // Realizes `term` between x and y using classes from `structure`.
  Construction<Point> build_scattered(const Point& x, const Point& y, const OrderTerm& term, const Structure& structure) {
    OrderTerm t = normalize_term(term);
    if (t.is_finite()) {
      auto m = static_cast<std::int64_t>(t.count()) + 1;
      if (!(sys_.iterate(x, m) == y))
        throw PreconditionError("a finite order type " + std::to_string(m - 1) +
                                " needs y = f^" + std::to_string(m) + "(x)");
      return build_orbit_chain(x, m);
    }
    if (sys_.same_class(x, y)) throw PreconditionError("x and y lie in the same orbit class");
    OrdinalCNF r = vd_rank(t);
    if (cnf_compare(r, opts_.max_rank) == Ordering::GT)
      throw ConstructionError("rank " + r.to_string() + " exceeds the configured bound " + opts_.max_rank.to_string());
    if (cnf_compare(structure.rank(), r) == Ordering::LT)
      throw PreconditionError("structure rank " + structure.rank().to_string() + " below term rank " + r.to_string());

    reset();
    Structure pool = structure.minus({x, y});
    Piece top = realize(t, x, y, sched_, 1, {}, pool);
    if (t.is_core()) record_block({}, 1, x, y, top);

    Construction<Point> out;
    out.target = t;
    out.family.x = x;
    out.family.y = y;
    for (int n = 1; n <= depth_; ++n) {
      auto eps = sched_.at(static_cast<std::size_t>(n));
      out.family.stages.push_back({std::move(top.stages[static_cast<std::size_t>(n - 1)]), eps});
      out.family.epsilons.push_back(eps);
    }
    std::vector<std::size_t> predicted(static_cast<std::size_t>(depth_), 2);
    bool top_sum = false;
    for (const auto& b : trace_.blocks) top_sum = top_sum || b.path.size() == 1;
    for (const auto& b : trace_.blocks) {
      if (b.path.size() != (top_sum ? 1u : 0u)) continue;
      for (std::size_t i = 0; i < b.sizes.size(); ++i) predicted[static_cast<std::size_t>(b.first_stage - 1) + i] += b.sizes[i];
    }
    trace_.predicted_sizes = std::move(predicted);
    out.trace = std::move(trace_);
    return out;
  }

  // Convenience: a fresh structure of the term's rank from `alloc`.
  Construction<Point> build_scattered(const Point& x, const Point& y, const OrderTerm& term,
                                      std::shared_ptr<ClassAllocator<Sys>> alloc) {
    OrderTerm t = normalize_term(term);
    OrdinalCNF r = vd_rank(t);
    if (cnf_compare(r, OrdinalCNF::finite(2)) == Ordering::LT) r = OrdinalCNF::finite(2);
    return build_scattered(x, y, t, build_alpha<Sys>(r, std::move(alloc)));
  }

  Construction<Point> build_gamma(const Point& x, const Point& y, GammaCase c, std::uint64_t h, std::uint64_t k,
                                  std::shared_ptr<ClassAllocator<Sys>> alloc) {
    return build_scattered(x, y, gamma_term(c, h, k), std::move(alloc));
  }

 private:
  // Chains from p to q (both included) for global stages first .. depth.
  struct Piece {
    int first = 1;
    std::vector<std::vector<Point>> stages;
    const std::vector<Point>& at(int n) const { return stages[static_cast<std::size_t>(n - first)]; }
  };

  void reset() {
    trace_ = {};
    points_ = 0;
  }

  void assign(const Point& p, Address a) {
    auto [it, fresh] = trace_.addresses.try_emplace(p, a);
    if (!fresh && it->second != a)
      throw ConstructionError("point " + sys_.format_point(p) + " reached twice, at " + render_address(it->second) +
                              " and " + render_address(a));
  }

  void charge(std::size_t n) {
    points_ += n;
    if (points_ > opts_.max_points) throw ConstructionError("point budget exhausted");
  }

  static Address extend(const Address& a, std::initializer_list<std::int64_t> more) {
    Address r = a;
    r.insert(r.end(), more.begin(), more.end());
    return r;
  }

  Piece realize(const OrderTerm& t, const Point& p, const Point& q, const EpsSchedule& s, int first,
                const Address& prefix, const Structure& pool) {
    if (t.is_core()) return realize_core(t.kind(), p, q, s, first, prefix, pool);
    NormalizedSum ns = normalize_sum(t);
    if (ns.index == IndexKind::Fin && ns.head.size() == 1) {
      Piece piece = realize_padded(ns.head.front(), p, q, s, first, prefix, pool);
      if (prefix.empty()) record_block({}, first, p, q, piece);
      return piece;
    }
    return realize_sum(t, ns, p, q, s, first, prefix, pool);
  }

  Piece realize_core(TermKind kind, const Point& p, const Point& q, const EpsSchedule& s, int first,
                     const Address& prefix, const Structure& pool) {
    Piece out;
    out.first = first;
    std::int64_t last_h = 0, last_k = 0;
    std::optional<Point> z;
    if (kind == TermKind::Zeta) {
      z = pool.first_seed();
      trace_.anchors.emplace_back(prefix, *z);
    }
    for (int n = first; n <= depth_; ++n) {
      Rational eps = s.at(static_cast<std::size_t>(n));
      std::vector<Point> chain{p};
      switch (kind) {
        case TermKind::Omega: {
          last_h = sys_.hit_time(p, q, eps, last_h + 1);
          for (std::int64_t j = 1; j <= last_h; ++j) chain.push_back(sys_.iterate(p, j));
          if (n == depth_)
            for (std::int64_t j = 1; j <= last_h; ++j) assign(chain[static_cast<std::size_t>(j)], extend(prefix, {j}));
          break;
        }
        case TermKind::OmegaStar: {
          last_k = sys_.hit_time(p, q, eps, last_k + 1);
          for (std::int64_t j = last_k; j >= 1; --j) chain.push_back(sys_.iterate(q, -j));
          if (n == depth_)
            for (std::int64_t j = 1; j <= last_k; ++j) assign(sys_.iterate(q, -j), extend(prefix, {-j}));
          break;
        }
        case TermKind::Zeta: {
          last_k = sys_.hit_time(p, *z, eps, last_k + 1);
          last_h = sys_.hit_time(*z, q, eps, last_h + 1);
          for (std::int64_t j = -last_k; j <= last_h; ++j) chain.push_back(sys_.iterate(*z, j));
          if (n == depth_)
            for (std::int64_t j = -last_k; j <= last_h; ++j) assign(sys_.iterate(*z, j), extend(prefix, {j}));
          break;
        }
        default: throw std::logic_error("realize_core on a non-core term");
      }
      chain.push_back(q);
      charge(chain.size());
      out.stages.push_back(std::move(chain));
    }
    return out;
  }

  Piece realize_padded(const PaddedBlock& b, const Point& p, const Point& q, const EpsSchedule& s, int first,
                       const Address& prefix, const Structure& pool) {
    const auto h = static_cast<std::int64_t>(b.h);
    const auto k = static_cast<std::int64_t>(b.k);
    Point p2 = sys_.iterate(p, h);
    Point q2 = sys_.iterate(q, -k);
    for (std::int64_t j = 1; j <= h; ++j) assign(sys_.iterate(p, j), extend(prefix, {0, j}));
    for (std::int64_t j = 1; j <= k; ++j) assign(sys_.iterate(q, -j), extend(prefix, {2, -j}));
    Piece core = realize(b.core, p2, q2, s, first, extend(prefix, {1}), pool);
    if (h == 0 && k == 0) return core;
    Piece out;
    out.first = first;
    for (auto& c : core.stages) {
      std::vector<Point> chain;
      chain.reserve(c.size() + static_cast<std::size_t>(h + k));
      for (std::int64_t j = 0; j < h; ++j) chain.push_back(sys_.iterate(p, j));
      chain.insert(chain.end(), c.begin(), c.end());
      for (std::int64_t j = k - 1; j >= 0; --j) chain.push_back(sys_.iterate(q, -j));
      charge(static_cast<std::size_t>(h + k));
      out.stages.push_back(std::move(chain));
    }
    return out;
  }

  // Order in which the blocks of an infinite sum enter: stage `first + e` adds
  // the block with introduction index e.
  static std::int64_t intro_index(IndexKind idx, std::int64_t l) {
    switch (idx) {
      case IndexKind::Fin: return 0;
      case IndexKind::Omega: return l;
      case IndexKind::OmegaStar: return -l - 1;
      case IndexKind::Zeta: return l < 0 ? -2 * l - 2 : 2 * l + 1;
    }
    return 0;
  }

  Piece realize_sum(const OrderTerm& t, const NormalizedSum& ns, const Point& p, const Point& q, const EpsSchedule& s,
                    int first, const Address& prefix, Structure pool) {
    const int local_max = depth_ - first + 1;
    const EpsSchedule child = s.halved();
    auto global = [&](std::int64_t local) {
      return static_cast<std::size_t>(std::min<std::int64_t>(first + local - 1, depth_));
    };

    // Blocks present at the last stage, in index order.
    std::vector<std::int64_t> blocks;
    switch (ns.index) {
      case IndexKind::Fin:
        for (std::size_t i = 0; i < ns.head.size(); ++i) blocks.push_back(static_cast<std::int64_t>(i));
        break;
      case IndexKind::Omega:
        for (std::int64_t l = 0; l < local_max; ++l) blocks.push_back(l);
        break;
      case IndexKind::OmegaStar:
        for (std::int64_t l = -local_max; l <= -1; ++l) blocks.push_back(l);
        break;
      case IndexKind::Zeta:
        for (std::int64_t l = -(local_max + 1) / 2; l <= local_max / 2 - 1; ++l) blocks.push_back(l);
        break;
    }
    const bool fin = ns.index == IndexKind::Fin;
    const std::int64_t lo = blocks.front(), hi = blocks.back();

    // Class pools in introduction order; the exit anchor of the last block
    // may belong to a block that is never built.
    const OrdinalCNF need = vd_rank(t);
    while (cnf_compare(pool.rank(), need) == Ordering::GT && !pool.is_leaf()) {
      std::uint64_t i = 0;
      while (cnf_compare(pool.child_rank(i), need) == Ordering::LT) ++i;
      pool = pool.child(i);
    }
    if (cnf_compare(pool.rank(), need) == Ordering::LT)
      throw ConstructionError("structure rank " + pool.rank().to_string() + " too small for " + render_term(t));
    const bool leaf = pool.is_leaf();

    auto key = [&](std::int64_t l) { return fin ? l : intro_index(ns.index, l); };
    std::int64_t max_key = 0;
    for (std::int64_t l = lo; l <= hi + 1; ++l) max_key = std::max(max_key, key(l));
    std::vector<Point> seeds;
    std::vector<Structure> pools;
    std::uint64_t next_child = 0;
    for (std::int64_t e = 0; e <= max_key; ++e) {
      const std::int64_t l = fin ? e : l_of_key(ns.index, e);
      OrdinalCNF block_rank = ns.in_domain(l) ? vd_rank(ns.block(l).core) : OrdinalCNF::finite(1);
      if (cnf_compare(block_rank, OrdinalCNF::finite(2)) == Ordering::LT) block_rank = OrdinalCNF::finite(2);
      if (leaf) {
        const auto ue = static_cast<std::uint64_t>(e);
        seeds.push_back(pool.seed(2 * ue));
        pools.push_back(pool.leaf_view([ue](std::uint64_t j) { return 2 * cantor_pair(ue, j) + 1; }));
      } else {
        while (cnf_compare(pool.child_rank(next_child), block_rank) == Ordering::LT) ++next_child;
        Structure c = pool.child(next_child++);
        seeds.push_back(c.first_seed());
        pools.push_back(c.minus({seeds.back()}));
      }
    }

    // Anchors: z_l is the entry anchor of block l.
    std::unordered_map<std::int64_t, Point> anchor;
    auto place = [&](std::int64_t l, const Point& target, std::int64_t local_stage) {
      const Point& seed = seeds[static_cast<std::size_t>(key(l))];
      Rational tol = s.at(global(local_stage)) / Rational(2);
      std::int64_t i = sys_.hit_time(sys_.inv_step(seed), target, tol, 0);
      return sys_.iterate(seed, i);
    };
    const Point fp = sys_.step(p);
    for (std::int64_t l = lo; l <= hi + 1; ++l) {
      std::optional<Point> z;
      switch (ns.index) {
        case IndexKind::Fin:
          if (l == 0) z = fp;
          else if (l == hi + 1) z = q;
          else z = seeds[static_cast<std::size_t>(l)];
          break;
        case IndexKind::Omega:
          z = l == 0 ? fp : place(l, q, l);
          break;
        case IndexKind::OmegaStar:
          z = l == 0 ? q : place(l, fp, -l);
          break;
        case IndexKind::Zeta:
          if (l < 0) z = place(l, fp, -2 * l);
          else z = place(l, q, 2 * l + 1);
          break;
      }
      anchor.emplace(l, *z);
      bool external = (l == 0 && (ns.index == IndexKind::Fin || ns.index == IndexKind::Omega)) ||
                      (l == hi + 1 && (fin || ns.index == IndexKind::OmegaStar));
      if (!external) trace_.anchors.emplace_back(extend(prefix, {l}), *z);
    }

    // Block families.
    std::vector<Piece> pieces;
    std::vector<int> starts;
    for (std::int64_t l : blocks) {
      const int start = fin ? first : first + static_cast<int>(intro_index(ns.index, l));
      const Point a = (l == 0 && (fin || ns.index == IndexKind::Omega)) ? p : sys_.inv_step(anchor.at(l));
      const Point& b = anchor.at(l + 1);
      Address path = extend(prefix, {l});
      Piece r = realize_padded(ns.block(l), a, b, child, start, path, pools[static_cast<std::size_t>(key(l))]);
      record_block(path, start, anchor.at(l), b, r);
      pieces.push_back(std::move(r));
      starts.push_back(start);
    }

    Piece out;
    out.first = first;
    for (int n = first; n <= depth_; ++n) {
      std::vector<Point> chain{p};
      for (std::size_t i = 0; i < pieces.size(); ++i) {
        if (starts[i] > n) continue;
        const auto& c = pieces[i].at(n);
        chain.insert(chain.end(), c.begin() + 1, c.end() - 1);
      }
      chain.push_back(q);
      out.stages.push_back(std::move(chain));
    }
    return out;
  }

  static std::int64_t l_of_key(IndexKind idx, std::int64_t e) {
    switch (idx) {
      case IndexKind::Omega: return e;
      case IndexKind::OmegaStar: return -e - 1;
      case IndexKind::Zeta: return e % 2 == 0 ? -(e / 2) - 1 : (e - 1) / 2;
      default: return e;
    }
  }

  void record_block(Address path, int start, const Point& in, const Point& out, const Piece& piece) {
    BlockRecord rec;
    rec.path = std::move(path);
    rec.first_stage = start;
    rec.anchor_in = sys_.format_point(in);
    rec.anchor_out = sys_.format_point(out);
    for (const auto& c : piece.stages) rec.sizes.push_back(c.size() - 2);
    const auto& last = piece.stages.back();
    for (std::size_t i = 1; i + 1 < last.size(); ++i) {
      if (sys_.same_class(last[i], in)) ++rec.overhang_in;
      if (sys_.same_class(last[i], out)) ++rec.overhang_out;
    }
    trace_.blocks.push_back(std::move(rec));
  }

  Sys sys_;
  EpsSchedule sched_;
  int depth_;
  ConstructOptions opts_;
  ConstructionTrace<Point> trace_;
  std::size_t points_ = 0;
};

// Image of a construction under a translation conjugacy. Translations are
// isometries commuting with f, so the schedule carries over unchanged.
template <DynamicalSystem Sys>
Construction<typename Sys::Point> transport_family(const Sys& sys, const Construction<typename Sys::Point>& c,
                                                   const Translation& h) {
  if (!sys.valid_translation(h)) throw PreconditionError("translation not valid for this system");
  using Point = typename Sys::Point;
  auto map = [&](const Point& p) { return sys.translate(p, h); };
  Construction<Point> out;
  out.target = c.target;
  out.family.x = map(c.family.x);
  out.family.y = map(c.family.y);
  out.family.epsilons = c.family.epsilons;
  for (const auto& st : c.family.stages) {
    EpsilonChain<Point> img{{}, st.eps};
    img.points.reserve(st.points.size());
    for (const auto& p : st.points) img.points.push_back(map(p));
    out.family.stages.push_back(std::move(img));
  }
  for (const auto& [p, a] : c.trace.addresses) out.trace.addresses.emplace(map(p), a);
  for (const auto& [a, p] : c.trace.anchors) out.trace.anchors.emplace_back(a, map(p));
  out.trace.blocks = c.trace.blocks;
  for (auto& b : out.trace.blocks) {
    b.anchor_in = sys.format_point(map(sys.parse_point(b.anchor_in)));
    b.anchor_out = sys.format_point(map(sys.parse_point(b.anchor_out)));
  }
  out.trace.predicted_sizes = c.trace.predicted_sizes;
  return out;
}

}  // namespace eos
