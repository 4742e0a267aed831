#pragma once

#include <cstdint>
#include <compare>
#include <string>

#include <boost/rational.hpp>

namespace nalin {

using Rational = boost::rational<std::int64_t>;

std::string to_string(const Rational& r);  // always "num/den"
Rational parse_rational(const std::string& text);
std::int64_t floor_div(std::int64_t a, std::int64_t b);
std::int64_t ceil_div(std::int64_t a, std::int64_t b);
std::int64_t floor(const Rational& r);
std::int64_t ceil(const Rational& r);

// Exact valuation v(x), standing for |x| = eps^v(x). Zero has v = +inf.
class Valuation {
 public:
  Valuation() : infinite_(true) {}
  Valuation(Rational value) : infinite_(false), value_(value) {}  // NOLINT
  Valuation(std::int64_t value) : infinite_(false), value_(value) {}  // NOLINT

  static Valuation infinity() { return Valuation(); }

  bool is_infinite() const { return infinite_; }
  // Requires !is_infinite().
  const Rational& value() const;

  std::string str() const;  // "num/den" or "inf"

  friend bool operator==(const Valuation& a, const Valuation& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }
  friend std::strong_ordering operator<=>(const Valuation& a,
                                          const Valuation& b) {
    if (a.infinite_ && b.infinite_) return std::strong_ordering::equal;
    if (a.infinite_) return std::strong_ordering::greater;
    if (b.infinite_) return std::strong_ordering::less;
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (a.value_ > b.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
  friend Valuation operator+(const Valuation& a, const Valuation& b) {
    if (a.infinite_ || b.infinite_) return infinity();
    return Valuation(a.value_ + b.value_);
  }

 private:
  bool infinite_;
  Rational value_{0};
};

}  // namespace nalin
