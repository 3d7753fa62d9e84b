#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "afspec/errors.hpp"

namespace afspec {

/// An element of {0, 1, 2, ..., ∞}.
class ExtNat {
 public:
  constexpr ExtNat() = default;
  constexpr ExtNat(std::uint64_t v) : value_(v) {}  // NOLINT: implicit by intent

  static constexpr ExtNat infinity() {
    ExtNat r;
    r.value_.reset();
    return r;
  }

  constexpr bool is_infinite() const { return !value_.has_value(); }
  constexpr bool is_finite() const { return value_.has_value(); }
  constexpr std::uint64_t value() const { return *value_; }

  friend constexpr ExtNat operator+(ExtNat a, ExtNat b) {
    if (a.is_infinite() || b.is_infinite()) return infinity();
    return ExtNat(a.value() + b.value());
  }
  friend constexpr ExtNat operator*(ExtNat a, ExtNat b) {
    if ((a.is_finite() && a.value() == 0) || (b.is_finite() && b.value() == 0))
      return ExtNat(0);
    if (a.is_infinite() || b.is_infinite()) return infinity();
    return ExtNat(a.value() * b.value());
  }

  friend constexpr bool operator==(ExtNat a, ExtNat b) = default;
  friend constexpr std::strong_ordering operator<=>(ExtNat a, ExtNat b) {
    if (a.is_infinite() || b.is_infinite())
      return a.is_infinite() <=> b.is_infinite();
    return a.value() <=> b.value();
  }

  std::string str() const { return is_infinite() ? "inf" : std::to_string(*value_); }

  static ExtNat parse(std::string_view text) {
    if (text == "inf" || text == "∞" || text == "infinity") return infinity();
    if (text.empty()) throw ParseError("empty value where a number or 'inf' was expected");
    std::uint64_t v = 0;
    for (char c : text) {
      if (c < '0' || c > '9')
        throw ParseError("not a natural number or 'inf': '" + std::string(text) + "'");
      v = v * 10 + static_cast<std::uint64_t>(c - '0');
    }
    return ExtNat(v);
  }

 private:
  std::optional<std::uint64_t> value_{0};
};

}  // namespace afspec
