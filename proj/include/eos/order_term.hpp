#pragma once

// Finitely presented countable scattered order types.
//
// A term is an atom (0, 1, a finite chain, omega, omega*, zeta) or an indexed
// sum of terms. Infinite index sets carry a finite head followed by an
// eventually constant tail rule, so every term has a finite description:
//
//   sum(fin; a, b, c)       a + b + c
//   sum(w;   a, b; T)       a + b + T + T + ...
//   sum(w*;  a, b; T)       ... + T + T + b + a      (head[0] is the last summand)
//   sum(z;   a, b; T)       ... + T + a + b + T + ...
//   sum(z;   a; N; P)       ... + N + N + a + P + P + ...
//   sum(w;   a; ^k)         a + w^k + w^(k+1) + ...
//
// `wpow(n)` is sugar for n nested omega-sums and `wpow(w)` for sum(w; ; ^1).

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "eos/errors.hpp"
#include "eos/ordinal.hpp"

namespace eos {

enum class TermKind { Zero, One, Fin, Omega, OmegaStar, Zeta, Sum };
enum class IndexKind { Fin, Omega, OmegaStar, Zeta };

inline const char* index_token(IndexKind k) {
  switch (k) {
    case IndexKind::Fin: return "fin";
    case IndexKind::Omega: return "w";
    case IndexKind::OmegaStar: return "w*";
    case IndexKind::Zeta: return "z";
  }
  return "?";
}

struct SumData;
struct Tail;

class OrderTerm {
 public:
  OrderTerm() = default;  // Zero

  static OrderTerm zero() { return OrderTerm(); }
  static OrderTerm one() { return fin(1); }
  static OrderTerm fin(std::uint64_t k) {
    OrderTerm t;
    t.kind_ = k == 0 ? TermKind::Zero : k == 1 ? TermKind::One : TermKind::Fin;
    t.count_ = k;
    return t;
  }
  static OrderTerm omega() { return atom(TermKind::Omega); }
  static OrderTerm omega_star() { return atom(TermKind::OmegaStar); }
  static OrderTerm zeta() { return atom(TermKind::Zeta); }
  // Validates the shape: finite sums take no tail, infinite sums need one,
  // only zeta sums take a second (negative side) tail, power ladders only
  // index by omega. A zeta sum given one tail uses it on both sides.
  static OrderTerm sum(IndexKind index, std::vector<OrderTerm> head);
  static OrderTerm sum(IndexKind index, std::vector<OrderTerm> head, std::optional<Tail> tail);
  static OrderTerm sum(IndexKind index, std::vector<OrderTerm> head, std::optional<Tail> tail,
                       std::optional<Tail> neg_tail);
  // omega^n as n nested omega-sums (omega^0 = 1).
  static OrderTerm omega_power(std::uint64_t n);

  TermKind kind() const { return kind_; }
  std::uint64_t count() const { return count_; }
  const SumData& sum() const { return *sum_; }
  const SumData* sum_ptr() const { return sum_.get(); }

  bool is_core() const {
    return kind_ == TermKind::Omega || kind_ == TermKind::OmegaStar || kind_ == TermKind::Zeta;
  }
  // True when the denoted order is finite. Exact on normalized terms.
  bool is_finite() const;

  friend bool operator==(const OrderTerm& a, const OrderTerm& b);

 private:
  static OrderTerm atom(TermKind k) {
    OrderTerm t;
    t.kind_ = k;
    return t;
  }

  TermKind kind_ = TermKind::Zero;
  std::uint64_t count_ = 0;
  std::shared_ptr<const SumData> sum_;
};

struct Tail {
  enum class Kind { Constant, OmegaPowers };

  Kind kind = Kind::Constant;
  OrderTerm term;           // Constant
  std::uint64_t start = 1;  // OmegaPowers: the j-th tail summand is omega^(start + j)

  static Tail constant(OrderTerm t) { return Tail{Kind::Constant, std::move(t), 0}; }
  static Tail omega_powers(std::uint64_t start) { return Tail{Kind::OmegaPowers, OrderTerm(), start}; }

  OrderTerm at(std::uint64_t j) const {
    return kind == Kind::Constant ? term : OrderTerm::omega_power(start + j);
  }

  friend bool operator==(const Tail& a, const Tail& b) {
    if (a.kind != b.kind) return false;
    return a.kind == Kind::Constant ? a.term == b.term : a.start == b.start;
  }
};

struct SumData {
  IndexKind index = IndexKind::Fin;
  std::vector<OrderTerm> head;
  std::optional<Tail> tail;      // omega / omega* tail; positive side for zeta
  std::optional<Tail> neg_tail;  // zeta only
};

inline bool operator==(const OrderTerm& a, const OrderTerm& b) {
  if (a.kind_ != b.kind_) return false;
  if (a.kind_ == TermKind::Fin) return a.count_ == b.count_;
  if (a.kind_ != TermKind::Sum) return true;
  if (a.sum_ == b.sum_) return true;
  const SumData& x = *a.sum_;
  const SumData& y = *b.sum_;
  return x.index == y.index && x.head == y.head && x.tail == y.tail && x.neg_tail == y.neg_tail;
}

inline OrderTerm OrderTerm::sum(IndexKind index, std::vector<OrderTerm> head, std::optional<Tail> tail,
                                std::optional<Tail> neg_tail) {
  if (index == IndexKind::Fin && (tail || neg_tail)) throw SemanticError("finite-index sum takes no tail");
  if (index != IndexKind::Fin && !tail) throw SemanticError("infinite-index sum requires a tail");
  if (index != IndexKind::Zeta && neg_tail) throw SemanticError("only zeta-index sums take two tails");
  auto ladder = [](const std::optional<Tail>& t) { return t && t->kind == Tail::Kind::OmegaPowers; };
  if (index != IndexKind::Omega && (ladder(tail) || ladder(neg_tail)))
    throw SemanticError("power-ladder tails are only supported for omega-index sums");
  if (index == IndexKind::Zeta && !neg_tail) neg_tail = tail;
  auto d = std::make_shared<SumData>();
  d->index = index;
  d->head = std::move(head);
  d->tail = std::move(tail);
  d->neg_tail = std::move(neg_tail);
  OrderTerm t;
  t.kind_ = TermKind::Sum;
  t.sum_ = std::move(d);
  return t;
}

inline OrderTerm OrderTerm::sum(IndexKind index, std::vector<OrderTerm> head) {
  return sum(index, std::move(head), std::nullopt, std::nullopt);
}

inline OrderTerm OrderTerm::sum(IndexKind index, std::vector<OrderTerm> head, std::optional<Tail> tail) {
  return sum(index, std::move(head), std::move(tail), std::nullopt);
}

inline OrderTerm OrderTerm::omega_power(std::uint64_t n) {
  if (n == 0) return one();
  OrderTerm t = omega();
  for (std::uint64_t i = 1; i < n; ++i) t = sum(IndexKind::Omega, {}, Tail::constant(t));
  return t;
}

inline bool OrderTerm::is_finite() const {
  switch (kind_) {
    case TermKind::Zero:
    case TermKind::One:
    case TermKind::Fin: return true;
    case TermKind::Sum: {
      const SumData& d = *sum_;
      if (d.index != IndexKind::Fin) {
        auto finite_tail = [](const std::optional<Tail>& t) {
          return t && t->kind == Tail::Kind::Constant && t->term.kind() == TermKind::Zero;
        };
        if (!finite_tail(d.tail) || (d.index == IndexKind::Zeta && !finite_tail(d.neg_tail))) return false;
      }
      return std::all_of(d.head.begin(), d.head.end(), [](const OrderTerm& t) { return t.is_finite(); });
    }
    default: return false;
  }
}

// ---------------------------------------------------------------------------
// Rendering and parsing

std::string render_term(const OrderTerm& t);

inline std::string render_tail(const Tail& t) {
  if (t.kind == Tail::Kind::OmegaPowers) return "^" + std::to_string(t.start);
  return render_term(t.term);
}

inline std::string render_term(const OrderTerm& t) {
  switch (t.kind()) {
    case TermKind::Zero: return "0";
    case TermKind::One: return "1";
    case TermKind::Fin: return "fin(" + std::to_string(t.count()) + ")";
    case TermKind::Omega: return "w";
    case TermKind::OmegaStar: return "w*";
    case TermKind::Zeta: return "z";
    case TermKind::Sum: break;
  }
  const SumData& d = t.sum();
  std::string out = "sum(";
  out += index_token(d.index);
  out += "; ";
  for (std::size_t i = 0; i < d.head.size(); ++i) {
    if (i) out += ", ";
    out += render_term(d.head[i]);
  }
  if (d.index == IndexKind::Zeta && d.neg_tail && !(*d.neg_tail == *d.tail)) {
    out += "; " + render_tail(*d.neg_tail) + "; " + render_tail(*d.tail);
  } else if (d.tail) {
    out += "; " + render_tail(*d.tail);
  }
  return out + ")";
}

namespace detail {

class TermParser {
 public:
  explicit TermParser(std::string_view s) : s_(s) {}

  OrderTerm parse_all() {
    OrderTerm t = term();
    skip();
    if (i_ != s_.size()) throw ParseError("unexpected trailing input", i_);
    return t;
  }

 private:
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  char peek() {
    skip();
    return i_ < s_.size() ? s_[i_] : '\0';
  }
  void expect(char c) {
    if (peek() != c) throw ParseError(std::string("expected '") + c + "'", i_);
    ++i_;
  }
  std::string word() {
    skip();
    std::size_t start = i_;
    while (i_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[i_]))) ++i_;
    return std::string(s_.substr(start, i_ - start));
  }
  std::uint64_t number() {
    skip();
    std::size_t start = i_;
    std::uint64_t v = 0;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
      if (v > (UINT64_MAX - 9) / 10) throw ParseError("number too large", start);
      v = v * 10 + static_cast<std::uint64_t>(s_[i_++] - '0');
    }
    if (i_ == start) throw ParseError("expected a number", start);
    return v;
  }
  bool star() {
    if (i_ < s_.size() && s_[i_] == '*') {
      ++i_;
      return true;
    }
    return false;
  }

  OrderTerm term() {
    std::size_t at = (skip(), i_);
    if (at >= s_.size()) throw ParseError("expected a term", at);
    if (std::isdigit(static_cast<unsigned char>(s_[at]))) return OrderTerm::fin(number());
    std::string w = word();
    if (w == "w") return star() ? OrderTerm::omega_star() : OrderTerm::omega();
    if (w == "z") return OrderTerm::zeta();
    if (w == "eta" || w == "q")
      throw SemanticError("the dense type eta is not scattered and cannot be represented");
    if (w == "fin") {
      expect('(');
      std::uint64_t k = number();
      expect(')');
      return OrderTerm::fin(k);
    }
    if (w == "wpow") {
      expect('(');
      OrderTerm r;
      if (peek() == 'w') {
        ++i_;
        r = OrderTerm::sum(IndexKind::Omega, {}, Tail::omega_powers(1));
      } else {
        r = OrderTerm::omega_power(number());
      }
      expect(')');
      return r;
    }
    if (w == "sum") return sum_term(at);
    throw ParseError("unknown term '" + w + "'", at);
  }

  IndexKind index_kind() {
    std::size_t at = (skip(), i_);
    std::string w = word();
    if (w == "fin") return IndexKind::Fin;
    if (w == "w") return star() ? IndexKind::OmegaStar : IndexKind::Omega;
    if (w == "z") return IndexKind::Zeta;
    throw ParseError("expected index kind fin, w, w* or z", at);
  }

  Tail tail() {
    if (peek() == '^') {
      ++i_;
      return Tail::omega_powers(number());
    }
    return Tail::constant(term());
  }

  OrderTerm sum_term(std::size_t at) {
    expect('(');
    IndexKind idx = index_kind();
    expect(';');
    std::vector<OrderTerm> head;
    if (peek() != ';' && peek() != ')') {
      head.push_back(term());
      while (peek() == ',') {
        ++i_;
        head.push_back(term());
      }
    }
    std::vector<Tail> tails;
    while (peek() == ';') {
      ++i_;
      tails.push_back(tail());
    }
    expect(')');
    if (tails.size() > 2) throw ParseError("too many tails", at);
    try {
      if (tails.empty()) return OrderTerm::sum(idx, std::move(head));
      if (tails.size() == 1) return OrderTerm::sum(idx, std::move(head), tails[0]);
      return OrderTerm::sum(idx, std::move(head), tails[1], tails[0]);
    } catch (const SemanticError& e) {
      throw SemanticError(std::string(e.what()) + " (sum at position " + std::to_string(at) + ")");
    }
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Normalization

OrderTerm normalize_term(const OrderTerm& t);

namespace detail {

inline bool is_omega_sum(const OrderTerm& t, IndexKind k) {
  return t.kind() == TermKind::Sum && t.sum().index == k;
}

// Flattens finite-index summands, merges adjacent finite pieces, and drops
// finite pieces absorbed by a neighbouring omega (n + w = w) or omega*
// (w* + n = w*). `left`/`right` are the infinite neighbours outside the list.
inline std::vector<OrderTerm> clean_run(const std::vector<OrderTerm>& items, const std::optional<OrderTerm>& left,
                                        const std::optional<OrderTerm>& right) {
  std::vector<OrderTerm> flat;
  for (const auto& it : items) {
    if (is_omega_sum(it, IndexKind::Fin)) {
      for (const auto& sub : it.sum().head) flat.push_back(sub);
    } else if (it.kind() != TermKind::Zero) {
      flat.push_back(it);
    }
  }
  std::vector<OrderTerm> merged;
  for (const auto& it : flat) {
    if (it.is_finite() && !merged.empty() && merged.back().is_finite()) {
      merged.back() = OrderTerm::fin(merged.back().count() + it.count());
    } else {
      merged.push_back(it);
    }
  }
  std::vector<OrderTerm> out;
  for (std::size_t i = 0; i < merged.size(); ++i) {
    if (merged[i].is_finite()) {
      const OrderTerm* next = i + 1 < merged.size() ? &merged[i + 1] : (right ? &*right : nullptr);
      const OrderTerm* prev = i > 0 ? &merged[i - 1] : (left ? &*left : nullptr);
      if (next && next->kind() == TermKind::Omega) continue;
      if (prev && prev->kind() == TermKind::OmegaStar) continue;
    }
    if (merged[i].kind() == TermKind::Omega && !out.empty() && out.back().kind() == TermKind::OmegaStar) {
      out.back() = OrderTerm::zeta();  // w* + w = z
      continue;
    }
    out.push_back(merged[i]);
  }
  return out;
}

inline OrderTerm finite_sum(const std::vector<OrderTerm>& items) {
  std::vector<OrderTerm> list = clean_run(items, std::nullopt, std::nullopt);
  if (list.size() > 1) {
    const OrderTerm& last = list.back();
    if (is_omega_sum(last, IndexKind::Omega)) {
      std::vector<OrderTerm> head(list.begin(), list.end() - 1);
      head.insert(head.end(), last.sum().head.begin(), last.sum().head.end());
      return normalize_term(OrderTerm::sum(IndexKind::Omega, std::move(head), last.sum().tail));
    }
    const OrderTerm& first = list.front();
    if (is_omega_sum(first, IndexKind::OmegaStar)) {
      std::vector<OrderTerm> head(list.rbegin(), list.rend() - 1);
      head.insert(head.end(), first.sum().head.begin(), first.sum().head.end());
      return normalize_term(OrderTerm::sum(IndexKind::OmegaStar, std::move(head), first.sum().tail));
    }
  }
  if (list.empty()) return OrderTerm::zero();
  if (list.size() == 1) return list.front();
  return OrderTerm::sum(IndexKind::Fin, std::move(list));
}

inline Tail normalize_tail(const Tail& t) {
  return t.kind == Tail::Kind::Constant ? Tail::constant(normalize_term(t.term)) : t;
}

inline bool finite_tail(const Tail& t) { return t.kind == Tail::Kind::Constant && t.term.is_finite(); }

}  // namespace detail

// Canonical form used throughout: finite chains collapse, zero summands
// vanish, finite-index sums flatten, finite tails turn into omega / omega*,
// absorbable finite pieces are dropped. Idempotent.
inline OrderTerm normalize_term(const OrderTerm& t) {
  using detail::finite_sum;
  if (t.kind() == TermKind::Fin) return OrderTerm::fin(t.count());
  if (t.kind() != TermKind::Sum) return t;

  const SumData& d = t.sum();
  std::vector<OrderTerm> head;
  for (const auto& h : d.head) head.push_back(normalize_term(h));
  std::optional<Tail> tail = d.tail ? std::optional(detail::normalize_tail(*d.tail)) : std::nullopt;
  std::optional<Tail> neg = d.neg_tail ? std::optional(detail::normalize_tail(*d.neg_tail)) : std::nullopt;

  switch (d.index) {
    case IndexKind::Fin: return finite_sum(head);
    case IndexKind::Omega: {
      if (detail::finite_tail(*tail)) {
        if (tail->term.kind() != TermKind::Zero) head.push_back(OrderTerm::omega());
        return finite_sum(head);
      }
      if (tail->kind == Tail::Kind::OmegaPowers && tail->start == 0) {
        head.push_back(OrderTerm::one());
        tail->start = 1;
      }
      head = detail::clean_run(head, std::nullopt, tail->at(0));
      return OrderTerm::sum(IndexKind::Omega, std::move(head), tail);
    }
    case IndexKind::OmegaStar: {
      std::vector<OrderTerm> linear(head.rbegin(), head.rend());
      if (detail::finite_tail(*tail)) {
        if (tail->term.kind() != TermKind::Zero) linear.insert(linear.begin(), OrderTerm::omega_star());
        return finite_sum(linear);
      }
      linear = detail::clean_run(linear, tail->at(0), std::nullopt);
      return OrderTerm::sum(IndexKind::OmegaStar, std::vector<OrderTerm>(linear.rbegin(), linear.rend()), tail);
    }
    case IndexKind::Zeta: {
      bool neg_fin = detail::finite_tail(*neg);
      bool pos_fin = detail::finite_tail(*tail);
      if (neg_fin || pos_fin) {
        std::vector<OrderTerm> linear;
        if (neg_fin) {
          if (neg->term.kind() != TermKind::Zero) linear.push_back(OrderTerm::omega_star());
        } else {
          linear.push_back(OrderTerm::sum(IndexKind::OmegaStar, {}, neg));
        }
        linear.insert(linear.end(), head.begin(), head.end());
        if (pos_fin) {
          if (tail->term.kind() != TermKind::Zero) linear.push_back(OrderTerm::omega());
        } else {
          linear.push_back(OrderTerm::sum(IndexKind::Omega, {}, tail));
        }
        return normalize_term(OrderTerm::sum(IndexKind::Fin, std::move(linear)));
      }
      head = detail::clean_run(head, neg->at(0), tail->at(0));
      return OrderTerm::sum(IndexKind::Zeta, std::move(head), tail, neg);
    }
  }
  return t;
}

// Parses and normalizes.
inline OrderTerm parse_term(std::string_view text) {
  return normalize_term(detail::TermParser(text).parse_all());
}

// ---------------------------------------------------------------------------
// Very-discrete rank (syntactic, on normalized terms)

inline OrdinalCNF vd_rank(const OrderTerm& t) {
  switch (t.kind()) {
    case TermKind::Zero:
    case TermKind::One: return OrdinalCNF{};
    case TermKind::Fin:
    case TermKind::Omega:
    case TermKind::OmegaStar:
    case TermKind::Zeta: return OrdinalCNF::finite(1);
    case TermKind::Sum: break;
  }
  const SumData& d = t.sum();
  OrdinalCNF r;
  auto bump = [&](const OrdinalCNF& c) {
    OrdinalCNF s = c.successor();
    if (cnf_compare(s, r) == Ordering::GT) r = s;
  };
  for (const auto& h : d.head) bump(vd_rank(h));
  for (const auto* tail : {&d.tail, &d.neg_tail}) {
    if (!*tail) continue;
    if ((*tail)->kind == Tail::Kind::OmegaPowers) {
      if (cnf_compare(OrdinalCNF::omega(), r) == Ordering::GT) r = OrdinalCNF::omega();
    } else {
      bump(vd_rank((*tail)->term));
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Block normal form: sum over I' of (h_l + core_l + k_l)

struct PaddedBlock {
  std::uint64_t h = 0;
  OrderTerm core;
  std::uint64_t k = 0;

  friend bool operator==(const PaddedBlock&, const PaddedBlock&) = default;
};

struct BlockRule {
  enum class Kind { Constant, OmegaPowers };
  Kind kind = Kind::Constant;
  PaddedBlock block;        // Constant
  std::uint64_t start = 1;  // OmegaPowers: j-th block is (0, omega^(start + j), 0)

  PaddedBlock at(std::uint64_t j) const {
    if (kind == Kind::Constant) return block;
    return PaddedBlock{0, OrderTerm::omega_power(start + j), 0};
  }
  friend bool operator==(const BlockRule&, const BlockRule&) = default;
};

struct NormalizedSum {
  IndexKind index = IndexKind::Fin;
  // Fin: every block, left to right. Omega: blocks 0, 1, ... before the tail.
  // OmegaStar: blocks -1, -2, ... (head[0] is the last block). Zeta: blocks
  // 0 .. head.size()-1; negative indices use neg_tail.
  std::vector<PaddedBlock> head;
  std::optional<BlockRule> tail;
  std::optional<BlockRule> neg_tail;

  bool in_domain(std::int64_t l) const {
    switch (index) {
      case IndexKind::Fin: return l >= 0 && l < static_cast<std::int64_t>(head.size());
      case IndexKind::Omega: return l >= 0;
      case IndexKind::OmegaStar: return l <= -1;
      case IndexKind::Zeta: return true;
    }
    return false;
  }

  PaddedBlock block(std::int64_t l) const {
    if (!in_domain(l)) throw std::out_of_range("block index outside the index set");
    const auto m = static_cast<std::int64_t>(head.size());
    switch (index) {
      case IndexKind::Fin: return head[static_cast<std::size_t>(l)];
      case IndexKind::Omega:
        return l < m ? head[static_cast<std::size_t>(l)] : tail->at(static_cast<std::uint64_t>(l - m));
      case IndexKind::OmegaStar: {
        std::int64_t i = -l - 1;
        return i < m ? head[static_cast<std::size_t>(i)] : tail->at(static_cast<std::uint64_t>(i - m));
      }
      case IndexKind::Zeta:
        if (l < 0) return neg_tail->at(static_cast<std::uint64_t>(-l - 1));
        return l < m ? head[static_cast<std::size_t>(l)] : tail->at(static_cast<std::uint64_t>(l - m));
    }
    return {};
  }

  friend bool operator==(const NormalizedSum&, const NormalizedSum&) = default;
};

NormalizedSum normalize_sum(const OrderTerm& t);

namespace detail {

inline PaddedBlock as_block(const OrderTerm& t) {
  if (is_omega_sum(t, IndexKind::Fin)) {
    NormalizedSum ns = normalize_sum(t);
    if (ns.head.size() == 1) return ns.head.front();
  }
  return PaddedBlock{0, t, 0};
}

inline BlockRule as_rule(const Tail& t) {
  if (t.kind == Tail::Kind::OmegaPowers) return BlockRule{BlockRule::Kind::OmegaPowers, {}, t.start};
  return BlockRule{BlockRule::Kind::Constant, as_block(t.term), 0};
}

inline BlockRule shifted(BlockRule r) {
  if (r.kind == BlockRule::Kind::OmegaPowers) ++r.start;
  return r;
}

// Walks a finite run (in linear order) between optional infinite tails and
// attaches each maximal finite piece to a neighbouring core as padding.
// Returns the run's blocks in linear order; materialized tail blocks are
// included and the corresponding rule is shifted.
inline std::vector<PaddedBlock> pad_run(const std::vector<OrderTerm>& items, std::optional<BlockRule>& left,
                                        std::optional<BlockRule>& right) {
  std::vector<PaddedBlock> blocks;
  bool left_taken = false;
  std::uint64_t pending = 0;
  std::optional<PaddedBlock> left_block;

  auto attach = [&](std::uint64_t f, PaddedBlock* next, bool next_is_tail) {
    if (f == 0) return;
    PaddedBlock* prev = blocks.empty() ? nullptr : &blocks.back();
    bool prev_is_tail = false;
    if (!prev && left) {
      if (!left_block) left_block = left->at(0);
      prev = &*left_block;
      prev_is_tail = true;
    }
    if (next && next->core.kind() == TermKind::Omega) return;
    if (prev && prev->core.kind() == TermKind::OmegaStar) return;
    if (prev) {
      prev->k += f;
      if (prev_is_tail) left_taken = true;
      return;
    }
    if (next) {
      next->h += f;
      (void)next_is_tail;
      return;
    }
    throw SemanticError("term denotes a finite order");
  };

  for (const auto& it : items) {
    if (it.is_finite()) {
      pending += it.count();
      continue;
    }
    PaddedBlock b = as_block(it);
    attach(pending, &b, false);
    pending = 0;
    blocks.push_back(std::move(b));
  }
  if (pending > 0) {
    std::optional<PaddedBlock> right_block;
    if (right) right_block = right->at(0);
    attach(pending, right_block ? &*right_block : nullptr, true);
    if (right_block && right_block->h > 0) {
      blocks.push_back(*right_block);
      right = shifted(*right);
    }
  }
  if (left_taken) {
    blocks.insert(blocks.begin(), *left_block);
    left = shifted(*left);
  }
  return blocks;
}

}  // namespace detail

// Rewrites an infinite term as a sum of padded blocks h + core + k with
// infinite cores. A finite piece between two cores goes to the left core's
// k unless absorbed (n + w = w, w* + n = w*); a leading piece goes to the
// first core's h. Atoms and non-sum terms become a one-block finite sum.
inline NormalizedSum normalize_sum(const OrderTerm& input) {
  OrderTerm t = normalize_term(input);
  if (t.is_finite()) throw SemanticError("normalize_sum: term denotes a finite order");
  NormalizedSum ns;
  if (t.kind() != TermKind::Sum) {
    ns.index = IndexKind::Fin;
    ns.head.push_back(PaddedBlock{0, t, 0});
    return ns;
  }
  const SumData& d = t.sum();
  ns.index = d.index;
  std::optional<BlockRule> none;
  switch (d.index) {
    case IndexKind::Fin: ns.head = detail::pad_run(d.head, none, none); break;
    case IndexKind::Omega: {
      ns.tail = detail::as_rule(*d.tail);
      ns.head = detail::pad_run(d.head, none, ns.tail);
      break;
    }
    case IndexKind::OmegaStar: {
      ns.tail = detail::as_rule(*d.tail);
      std::vector<OrderTerm> linear(d.head.rbegin(), d.head.rend());
      auto blocks = detail::pad_run(linear, ns.tail, none);
      ns.head.assign(blocks.rbegin(), blocks.rend());
      break;
    }
    case IndexKind::Zeta: {
      ns.tail = detail::as_rule(*d.tail);
      ns.neg_tail = detail::as_rule(*d.neg_tail);
      ns.head = detail::pad_run(d.head, ns.neg_tail, ns.tail);
      break;
    }
  }
  return ns;
}

// ---------------------------------------------------------------------------
// Addresses: positions of elements inside a normalized term.
//
//   core w        [j]        j >= 1
//   core w*       [-s]       s >= 1
//   core z        [j]        any integer
//   padded block  [0, j]     1 <= j <= h        left padding
//                 [1, ...]   core address
//                 [2, -s]    1 <= s <= k        right padding
//   sum           [l, ...]   l in the index set, then a padded-block address
//   finite n      [j]        1 <= j <= n
//
// A finite-index sum with a single block is addressed as that padded block.
// Lexicographic order on addresses is the order of the denoted elements.

using Address = std::vector<std::int64_t>;

enum class TopShape { Finite, Core, Padded, Sum };

inline TopShape top_shape(const OrderTerm& normalized) {
  if (normalized.is_finite()) return TopShape::Finite;
  if (normalized.is_core()) return TopShape::Core;
  NormalizedSum ns = normalize_sum(normalized);
  return ns.index == IndexKind::Fin && ns.head.size() == 1 ? TopShape::Padded : TopShape::Sum;
}

// Checks addresses against a term, caching block normal forms.
class AddressValidator {
 public:
  explicit AddressValidator(OrderTerm target) : target_(normalize_term(target)) {}

  bool valid(std::span<const std::int64_t> a) {
    switch (top_shape(target_)) {
      case TopShape::Finite:
        return a.size() == 1 && a[0] >= 1 && static_cast<std::uint64_t>(a[0]) <= target_.count();
      case TopShape::Core: return core_ok(target_, a);
      case TopShape::Padded: return padded_ok(sum_of(target_).head.front(), a);
      case TopShape::Sum: return sum_ok(sum_of(target_), a);
    }
    return false;
  }

 private:
  const NormalizedSum& sum_of(const OrderTerm& t) {
    auto it = cache_.find(t.sum_ptr());
    if (it == cache_.end()) it = cache_.emplace(t.sum_ptr(), Entry{t, normalize_sum(t)}).first;
    return it->second.ns;
  }

  bool core_ok(const OrderTerm& core, std::span<const std::int64_t> a) {
    switch (core.kind()) {
      case TermKind::Omega: return a.size() == 1 && a[0] >= 1;
      case TermKind::OmegaStar: return a.size() == 1 && a[0] <= -1;
      case TermKind::Zeta: return a.size() == 1;
      case TermKind::Sum: return sum_ok(sum_of(core), a);
      default: return false;
    }
  }

  bool sum_ok(const NormalizedSum& ns, std::span<const std::int64_t> a) {
    if (a.size() < 2 || !ns.in_domain(a[0])) return false;
    return padded_ok(ns.block(a[0]), a.subspan(1));
  }

  bool padded_ok(const PaddedBlock& b, std::span<const std::int64_t> a) {
    if (a.empty()) return false;
    switch (a[0]) {
      case 0: return a.size() == 2 && a[1] >= 1 && static_cast<std::uint64_t>(a[1]) <= b.h;
      case 1: return core_ok(b.core, a.subspan(1));
      case 2: return a.size() == 2 && a[1] <= -1 && static_cast<std::uint64_t>(-a[1]) <= b.k;
      default: return false;
    }
  }

  struct Entry {
    OrderTerm keep_alive;
    NormalizedSum ns;
  };
  OrderTerm target_;
  std::unordered_map<const SumData*, Entry> cache_;
};

inline std::string render_address(std::span<const std::int64_t> a) {
  std::string s = "[";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(a[i]);
  }
  return s + "]";
}

}  // namespace eos
