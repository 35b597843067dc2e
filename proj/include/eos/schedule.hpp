#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "eos/errors.hpp"
#include "eos/rational.hpp"

namespace eos {

// n -> eps_n for n >= 1, strictly decreasing. `halved()` gives n -> eps_n / 2,
// the budget handed to every nested block.
class EpsSchedule {
 public:
  enum class Kind { Reciprocal, Dyadic, List };

  static EpsSchedule reciprocal() { return EpsSchedule(Kind::Reciprocal, {}); }
  static EpsSchedule dyadic() { return EpsSchedule(Kind::Dyadic, {}); }
  static EpsSchedule list(std::vector<Rational> values) {
    if (values.empty()) throw SemanticError("empty tolerance list");
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i] <= Rational(0)) throw SemanticError("tolerances must be positive");
      if (i && !(values[i] < values[i - 1])) throw SemanticError("tolerances must strictly decrease");
    }
    return EpsSchedule(Kind::List, std::move(values));
  }

  // "recip", "dyadic" or "list:e1,e2,..."
  static EpsSchedule parse(std::string_view text) {
    if (text == "recip") return reciprocal();
    if (text == "dyadic") return dyadic();
    if (text.substr(0, 5) == "list:") {
      std::vector<Rational> v;
      std::size_t i = 5;
      while (i <= text.size()) {
        std::size_t j = text.find(',', i);
        if (j == std::string_view::npos) j = text.size();
        try {
          v.push_back(Rational::parse(text.substr(i, j - i)));
        } catch (const ParseError& e) {
          throw ParseError(std::string("bad tolerance: ") + e.what(), i);
        }
        i = j + 1;
      }
      return list(std::move(v));
    }
    throw ParseError("schedule must be recip, dyadic or list:...", 0);
  }

  Kind kind() const { return kind_; }
  int halvings() const { return halvings_; }
  std::optional<std::size_t> length() const {
    if (kind_ == Kind::List) return values_.size();
    return std::nullopt;
  }

  Rational at(std::size_t n) const {
    if (n == 0) throw std::out_of_range("schedules start at n = 1");
    Rational base;
    switch (kind_) {
      case Kind::Reciprocal: base = Rational(1, static_cast<std::int64_t>(n)); break;
      case Kind::Dyadic:
        if (n + static_cast<std::size_t>(halvings_) > 62) throw std::out_of_range("dyadic schedule exhausted");
        return dyadic_pow(static_cast<int>(n) + halvings_);
      case Kind::List:
        if (n > values_.size()) throw std::out_of_range("tolerance list exhausted");
        base = values_[n - 1];
        break;
    }
    return base / Rational(std::int64_t{1} << halvings_);
  }

  EpsSchedule halved() const {
    EpsSchedule r = *this;
    ++r.halvings_;
    return r;
  }

  std::string to_string() const {
    std::string s;
    switch (kind_) {
      case Kind::Reciprocal: s = "recip"; break;
      case Kind::Dyadic: s = "dyadic"; break;
      case Kind::List:
        s = "list:";
        for (std::size_t i = 0; i < values_.size(); ++i) s += (i ? "," : "") + values_[i].to_string();
        break;
    }
    if (halvings_) s += "/2^" + std::to_string(halvings_);
    return s;
  }

 private:
  EpsSchedule(Kind k, std::vector<Rational> v) : kind_(k), values_(std::move(v)) {}
  static Rational dyadic_pow(int e) { return eos::dyadic(e); }

  Kind kind_;
  std::vector<Rational> values_;
  int halvings_ = 0;
};

}  // namespace eos
