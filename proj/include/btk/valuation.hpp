#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>

namespace btk {

/// Value of a discrete valuation: an integer, or +infinity for the zero element.
class Valuation {
 public:
  constexpr Valuation() = default;
  constexpr Valuation(std::int64_t v) : value_(v), infinite_(false) {}  // NOLINT(implicit)

  static constexpr Valuation infinity() {
    Valuation v;
    v.infinite_ = true;
    return v;
  }

  constexpr bool is_infinite() const { return infinite_; }
  constexpr bool is_finite() const { return !infinite_; }
  /// Only meaningful when finite.
  constexpr std::int64_t value() const { return value_; }

  friend constexpr Valuation operator+(Valuation x, Valuation y) {
    if (x.infinite_ || y.infinite_) return infinity();
    return Valuation(x.value_ + y.value_);
  }

  friend constexpr bool operator==(Valuation x, Valuation y) {
    if (x.infinite_ || y.infinite_) return x.infinite_ == y.infinite_;
    return x.value_ == y.value_;
  }

  friend constexpr std::strong_ordering operator<=>(Valuation x, Valuation y) {
    if (x.infinite_ && y.infinite_) return std::strong_ordering::equal;
    if (x.infinite_) return std::strong_ordering::greater;
    if (y.infinite_) return std::strong_ordering::less;
    return x.value_ <=> y.value_;
  }

  std::string str() const { return infinite_ ? std::string("inf") : std::to_string(value_); }

  friend std::ostream& operator<<(std::ostream& os, Valuation v) { return os << v.str(); }

 private:
  std::int64_t value_ = 0;
  bool infinite_ = true;
};

constexpr Valuation min(Valuation x, Valuation y) { return x <= y ? x : y; }

}  // namespace btk
