#pragma once

#include <cctype>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eos/errors.hpp"

namespace eos {

enum class Ordering { LT, EQ, GT };

// Ordinal below epsilon_0 in Cantor normal form:
//   omega^e_1 * c_1 + ... + omega^e_k * c_k,  e_1 > ... > e_k,  c_i >= 1.
// The empty sum is 0.
class OrdinalCNF {
 public:
  struct Term;

  OrdinalCNF() = default;

  static OrdinalCNF finite(std::uint64_t n);
  static OrdinalCNF omega() { return omega_power(finite(1)); }
  static OrdinalCNF omega_power(const OrdinalCNF& e, std::uint64_t coeff = 1);
  // Parses "0", "3", "w", "w*2+1", "w^2*3+w+4", "w^(w+1)", "w^w".
  static OrdinalCNF parse(std::string_view text);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_finite() const;
  // Value when finite; throws otherwise.
  std::uint64_t finite_value() const;
  bool is_successor() const;
  bool is_limit() const { return !is_zero() && !is_successor(); }

  OrdinalCNF successor() const;
  // Immediate predecessor of a successor ordinal.
  OrdinalCNF predecessor() const;
  // Canonical fundamental sequence of a limit ordinal: the last term
  // omega^e * c is decremented to omega^e * (c - 1) and followed by
  // omega^e' * (i + 1) when e = e' + 1, or omega^(e[i]) when e is a limit.
  // The sequence for omega itself is 2, 3, 4, ... so that every member is >= 2.
  OrdinalCNF fundamental(std::uint64_t i) const;

  std::string to_string() const;

  friend Ordering cnf_compare(const OrdinalCNF& a, const OrdinalCNF& b);
  friend bool operator==(const OrdinalCNF& a, const OrdinalCNF& b) {
    return cnf_compare(a, b) == Ordering::EQ;
  }
  friend std::strong_ordering operator<=>(const OrdinalCNF& a, const OrdinalCNF& b) {
    switch (cnf_compare(a, b)) {
      case Ordering::LT: return std::strong_ordering::less;
      case Ordering::GT: return std::strong_ordering::greater;
      default: return std::strong_ordering::equal;
    }
  }

  // Ordinal sum a + b (absorbs lower terms of a).
  friend OrdinalCNF operator+(const OrdinalCNF& a, const OrdinalCNF& b);

 private:
  std::vector<Term> terms_;
};

struct OrdinalCNF::Term {
  OrdinalCNF exponent;
  std::uint64_t coefficient = 1;
};

inline Ordering cnf_compare(const OrdinalCNF& a, const OrdinalCNF& b) {
  const auto& x = a.terms_;
  const auto& y = b.terms_;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    Ordering e = cnf_compare(x[i].exponent, y[i].exponent);
    if (e != Ordering::EQ) return e;
    if (x[i].coefficient != y[i].coefficient)
      return x[i].coefficient < y[i].coefficient ? Ordering::LT : Ordering::GT;
  }
  if (x.size() == y.size()) return Ordering::EQ;
  return x.size() < y.size() ? Ordering::LT : Ordering::GT;
}

inline OrdinalCNF OrdinalCNF::finite(std::uint64_t n) {
  OrdinalCNF r;
  if (n > 0) r.terms_.push_back(Term{OrdinalCNF{}, n});
  return r;
}

inline OrdinalCNF OrdinalCNF::omega_power(const OrdinalCNF& e, std::uint64_t coeff) {
  OrdinalCNF r;
  if (coeff > 0) r.terms_.push_back(Term{e, coeff});
  return r;
}

inline bool OrdinalCNF::is_finite() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent.is_zero());
}

inline std::uint64_t OrdinalCNF::finite_value() const {
  if (!is_finite()) throw std::domain_error("ordinal is infinite");
  return terms_.empty() ? 0 : terms_[0].coefficient;
}

inline bool OrdinalCNF::is_successor() const {
  return !terms_.empty() && terms_.back().exponent.is_zero();
}

inline OrdinalCNF operator+(const OrdinalCNF& a, const OrdinalCNF& b) {
  if (b.is_zero()) return a;
  const auto& lead = b.terms_.front().exponent;
  OrdinalCNF r;
  for (const auto& t : a.terms_) {
    Ordering c = cnf_compare(t.exponent, lead);
    if (c == Ordering::GT) {
      r.terms_.push_back(t);
    } else {
      if (c == Ordering::EQ) {
        OrdinalCNF::Term merged = b.terms_.front();
        merged.coefficient += t.coefficient;
        r.terms_.push_back(merged);
        r.terms_.insert(r.terms_.end(), b.terms_.begin() + 1, b.terms_.end());
        return r;
      }
      break;
    }
  }
  r.terms_.insert(r.terms_.end(), b.terms_.begin(), b.terms_.end());
  return r;
}

inline OrdinalCNF OrdinalCNF::successor() const { return *this + finite(1); }

inline OrdinalCNF OrdinalCNF::predecessor() const {
  if (!is_successor()) throw std::domain_error("predecessor of a non-successor ordinal");
  OrdinalCNF r = *this;
  if (--r.terms_.back().coefficient == 0) r.terms_.pop_back();
  return r;
}

inline OrdinalCNF OrdinalCNF::fundamental(std::uint64_t i) const {
  if (!is_limit()) throw std::domain_error("fundamental sequence of a non-limit ordinal");
  OrdinalCNF base = *this;
  Term last = base.terms_.back();
  base.terms_.pop_back();
  if (last.coefficient > 1) base.terms_.push_back(Term{last.exponent, last.coefficient - 1});
  if (last.exponent.is_successor()) {
    OrdinalCNF lower = last.exponent.predecessor();
    if (base.is_zero() && lower.is_zero()) return finite(i + 2);
    return base + omega_power(lower, i + 1);
  }
  return base + omega_power(last.exponent.fundamental(i));
}

inline std::string OrdinalCNF::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i) out += "+";
    const Term& t = terms_[i];
    if (t.exponent.is_zero()) {
      out += std::to_string(t.coefficient);
      continue;
    }
    out += "w";
    if (!(t.exponent == finite(1))) {
      std::string e = t.exponent.to_string();
      bool atomic = t.exponent.is_finite() || e == "w";
      out += "^" + (atomic ? e : "(" + e + ")");
    }
    if (t.coefficient != 1) out += "*" + std::to_string(t.coefficient);
  }
  return out;
}

namespace detail {

class CnfParser {
 public:
  explicit CnfParser(std::string_view s) : s_(s) {}

  OrdinalCNF parse_all() {
    OrdinalCNF r = sum();
    skip();
    if (i_ != s_.size()) throw ParseError("unexpected character in ordinal", i_);
    return r;
  }

 private:
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  std::uint64_t number() {
    skip();
    std::size_t start = i_;
    std::uint64_t v = 0;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) v = v * 10 + (s_[i_++] - '0');
    if (i_ == start) throw ParseError("expected number", start);
    return v;
  }
  OrdinalCNF sum() {
    OrdinalCNF r = term();
    while (eat('+')) r = r + term();
    return r;
  }
  OrdinalCNF term() {
    skip();
    if (i_ < s_.size() && s_[i_] == 'w') {
      ++i_;
      OrdinalCNF e = OrdinalCNF::finite(1);
      if (eat('^')) {
        if (eat('(')) {
          e = sum();
          if (!eat(')')) throw ParseError("expected ')'", i_);
        } else {
          skip();
          if (i_ < s_.size() && s_[i_] == 'w') {
            ++i_;
            e = OrdinalCNF::omega();
          } else {
            e = OrdinalCNF::finite(number());
          }
        }
      }
      std::uint64_t c = 1;
      if (eat('*')) c = number();
      return OrdinalCNF::omega_power(e, c);
    }
    return OrdinalCNF::finite(number());
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

}  // namespace detail

inline OrdinalCNF OrdinalCNF::parse(std::string_view text) { return detail::CnfParser(text).parse_all(); }

}  // namespace eos
