#pragma once

// Pairwise-disjoint orbit classes on demand, and lazily forced alpha-structures
// built from them. A structure of rank 2 is a leaf: an infinite sequence of
// class seeds. A structure of higher rank has infinitely many children, of
// rank r - 1 for a successor r and of the fundamental-sequence ranks for a
// limit r. Nothing is allocated until it is forced, and forcing order fixes
// which prime lands where, so identical call sequences give identical output.

#include <cstdint>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "eos/errors.hpp"
#include "eos/ordinal.hpp"
#include "eos/system.hpp"

namespace eos {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Seeds 1/p (or their rotation analogue) for successive odd primes p, starting
// from the `seed`-th odd prime. Distinct primes give distinct classes.
template <DynamicalSystem Sys>
class ClassAllocator {
 public:
  using Point = typename Sys::Point;

  explicit ClassAllocator(Sys sys, std::uint64_t seed = 0) : sys_(std::move(sys)) {
    for (std::uint64_t i = 0; i < seed; ++i) next_prime();
  }

  const Sys& system() const { return sys_; }

  // Next seed whose class meets none of `avoid`. Skipped primes are consumed.
  Point fresh(const std::vector<Point>& avoid = {}) {
    for (;;) {
      Point s = sys_.class_seed(static_cast<std::int64_t>(next_prime()));
      bool clash = false;
      for (const auto& a : avoid) clash = clash || sys_.same_class(s, a);
      if (!clash) {
        ++issued_;
        return s;
      }
    }
  }

  std::uint64_t issued() const { return issued_; }

 private:
  std::uint64_t next_prime() {
    do {
      cursor_ += 2;
    } while (!is_prime(cursor_));
    return cursor_;
  }

  Sys sys_;
  std::uint64_t cursor_ = 1;
  std::uint64_t issued_ = 0;
};

template <DynamicalSystem Sys>
class AlphaStructure {
 public:
  using Point = typename Sys::Point;
  using Allocator = ClassAllocator<Sys>;
  using IndexMap = std::function<std::uint64_t(std::uint64_t)>;

  AlphaStructure(OrdinalCNF rank, std::shared_ptr<Allocator> alloc)
      : node_(std::make_shared<Node>(Node{std::move(rank), {}, {}})), alloc_(std::move(alloc)) {
    if (cnf_compare(node_->rank, OrdinalCNF::finite(2)) == Ordering::LT)
      throw PreconditionError("alpha-structures need rank at least 2");
  }

  const OrdinalCNF& rank() const { return node_->rank; }
  bool is_leaf() const { return node_->rank == OrdinalCNF::finite(2); }
  const std::vector<Point>& removed() const { return removed_; }

  OrdinalCNF child_rank(std::uint64_t i) const {
    if (is_leaf()) throw std::logic_error("leaf structures have seeds, not children");
    return rank().is_successor() ? rank().predecessor() : rank().fundamental(i);
  }

  AlphaStructure child(std::uint64_t i) const {
    if (is_leaf()) throw std::logic_error("leaf structures have seeds, not children");
    while (node_->children.size() <= i) {
      auto n = std::make_shared<Node>(Node{child_rank(node_->children.size()), {}, {}});
      node_->children.push_back(std::move(n));
    }
    AlphaStructure c = *this;
    c.node_ = node_->children[i];
    c.view_.reset();
    return c;
  }

  // i-th seed of a leaf, after the index view and the removal filter.
  Point seed(std::uint64_t i) const {
    if (!is_leaf()) throw std::logic_error("only leaf structures carry seeds");
    std::uint64_t found = 0;
    for (std::uint64_t v = 0;; ++v) {
      const Point& s = raw_seed(view_ ? (*view_)(v) : v);
      if (is_removed(s)) continue;
      if (found++ == i) return s;
    }
  }

  Point first_seed() const { return is_leaf() ? seed(0) : child(0).first_seed(); }

  // A ∸ F: the same structure with every class meeting F filtered out.
  AlphaStructure minus(const std::vector<Point>& classes) const {
    AlphaStructure r = *this;
    r.removed_.insert(r.removed_.end(), classes.begin(), classes.end());
    return r;
  }

  // Leaf restricted to the seeds at positions map(0), map(1), ... of this view.
  AlphaStructure leaf_view(IndexMap map) const {
    if (!is_leaf()) throw std::logic_error("views apply to leaves");
    AlphaStructure r = *this;
    if (view_) {
      auto outer = view_;
      r.view_ = std::make_shared<IndexMap>([outer, map](std::uint64_t i) { return (*outer)(map(i)); });
    } else {
      r.view_ = std::make_shared<IndexMap>(std::move(map));
    }
    return r;
  }

  const Sys& system() const { return alloc_->system(); }

 private:
  struct Node {
    OrdinalCNF rank;
    std::vector<std::shared_ptr<Node>> children;
    std::vector<Point> seeds;
  };

  const Point& raw_seed(std::uint64_t j) const {
    while (node_->seeds.size() <= j) node_->seeds.push_back(alloc_->fresh());
    return node_->seeds[j];
  }

  bool is_removed(const Point& s) const {
    for (const auto& r : removed_)
      if (alloc_->system().same_class(s, r)) return true;
    return false;
  }

  std::shared_ptr<Node> node_;
  std::shared_ptr<Allocator> alloc_;
  std::vector<Point> removed_;
  std::shared_ptr<IndexMap> view_;
};

template <DynamicalSystem Sys>
AlphaStructure<Sys> build_alpha(const OrdinalCNF& rank, std::shared_ptr<ClassAllocator<Sys>> alloc) {
  return AlphaStructure<Sys>(rank, std::move(alloc));
}

// Cantor pairing, used to split one leaf into countably many disjoint leaves.
inline std::uint64_t cantor_pair(std::uint64_t a, std::uint64_t b) { return (a + b) * (a + b + 1) / 2 + b; }

}  // namespace eos
