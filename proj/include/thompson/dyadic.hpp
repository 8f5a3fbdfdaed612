#pragma once

// Exact dyadic rationals (p / 2^e) and general rationals.
//
// Breakpoints of elements of F are always dyadic, so DyadicRational is the
// workhorse type. Rational is only needed for fixed points of linear pieces,
// which can be non-dyadic (c / (1 - 2^k)).

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "thompson/errors.hpp"

namespace thompson {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

namespace detail {

inline BigInt pow2(std::uint64_t e) {
  BigInt r = 1;
  r <<= e;
  return r;
}

inline bool is_power_of_two(const BigInt& v) {
  return v > 0 && boost::multiprecision::lsb(v) == boost::multiprecision::msb(v);
}

inline std::uint64_t trailing_zeros(const BigInt& v) {
  if (v.sign() < 0) return static_cast<std::uint64_t>(boost::multiprecision::lsb(BigInt(-v)));
  return static_cast<std::uint64_t>(boost::multiprecision::lsb(v));
}

}  // namespace detail

/// value = numerator / 2^log_denominator, kept reduced: either
/// log_denominator == 0 or numerator is odd.
class DyadicRational {
 public:
  DyadicRational() = default;
  DyadicRational(long long n) : num_(n) {}  // NOLINT(google-explicit-constructor)
  DyadicRational(BigInt numerator, std::uint64_t log_denominator)
      : num_(std::move(numerator)), log_den_(log_denominator) {
    normalize();
  }

  const BigInt& numerator() const noexcept { return num_; }
  std::uint64_t log_denominator() const noexcept { return log_den_; }

  bool is_zero() const { return num_.is_zero(); }
  int sign() const { return num_.sign(); }

  /// Multiplies by 2^k; k may be negative.
  DyadicRational scaled_by_pow2(std::int64_t k) const {
    if (k >= 0) {
      auto shift = static_cast<std::uint64_t>(k);
      if (shift <= log_den_) return DyadicRational(num_, log_den_ - shift);
      return DyadicRational(num_ << (shift - log_den_), 0);
    }
    return DyadicRational(num_, log_den_ + static_cast<std::uint64_t>(-k));
  }
  DyadicRational halved() const { return scaled_by_pow2(-1); }
  DyadicRational doubled() const { return scaled_by_pow2(1); }

  DyadicRational operator-() const { return DyadicRational(-num_, log_den_); }

  friend DyadicRational operator+(const DyadicRational& a, const DyadicRational& b) {
    if (a.log_den_ >= b.log_den_) {
      return DyadicRational(a.num_ + (b.num_ << (a.log_den_ - b.log_den_)), a.log_den_);
    }
    return DyadicRational((a.num_ << (b.log_den_ - a.log_den_)) + b.num_, b.log_den_);
  }
  friend DyadicRational operator-(const DyadicRational& a, const DyadicRational& b) {
    return a + (-b);
  }
  friend DyadicRational operator*(const DyadicRational& a, const DyadicRational& b) {
    return DyadicRational(a.num_ * b.num_, a.log_den_ + b.log_den_);
  }
  DyadicRational& operator+=(const DyadicRational& o) { return *this = *this + o; }
  DyadicRational& operator-=(const DyadicRational& o) { return *this = *this - o; }

  friend bool operator==(const DyadicRational& a, const DyadicRational& b) {
    return a.log_den_ == b.log_den_ && a.num_ == b.num_;
  }
  friend std::strong_ordering operator<=>(const DyadicRational& a, const DyadicRational& b) {
    int c;
    if (a.log_den_ == b.log_den_) {
      c = a.num_.compare(b.num_);
    } else if (a.log_den_ > b.log_den_) {
      c = a.num_.compare(BigInt(b.num_ << (a.log_den_ - b.log_den_)));
    } else {
      c = BigInt(a.num_ << (b.log_den_ - a.log_den_)).compare(b.num_);
    }
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  /// For a positive value returns (odd, e) with value = odd * 2^e.
  std::pair<BigInt, std::int64_t> odd_part() const {
    auto tz = detail::trailing_zeros(num_);
    return {num_ >> tz, static_cast<std::int64_t>(tz) - static_cast<std::int64_t>(log_den_)};
  }

  Rational to_rational() const { return Rational(num_, detail::pow2(log_den_)); }

  /// Throws NonDyadic when the denominator is not a power of two.
  static DyadicRational from_rational(const Rational& r) {
    const BigInt den = boost::multiprecision::denominator(r);
    if (!detail::is_power_of_two(den)) {
      throw Error(ErrorCode::NonDyadic, r.str() + " is not a dyadic rational");
    }
    return DyadicRational(boost::multiprecision::numerator(r), detail::trailing_zeros(den));
  }

  static std::optional<DyadicRational> try_from_rational(const Rational& r) {
    const BigInt den = boost::multiprecision::denominator(r);
    if (!detail::is_power_of_two(den)) return std::nullopt;
    return DyadicRational(boost::multiprecision::numerator(r), detail::trailing_zeros(den));
  }

  /// Serialized form "p/2^e" (always carries the exponent, also for e = 0).
  std::string to_serial() const { return num_.str() + "/2^" + std::to_string(log_den_); }

  /// Display form: "p/2^e" for e > 0, plain integer otherwise.
  std::string to_string() const {
    if (log_den_ == 0) return num_.str();
    return to_serial();
  }

  /// Accepts "p/2^e", "p/q" with q a power of two, or an integer "p".
  static DyadicRational parse(std::string_view text);

  std::size_t hash() const {
    std::size_t h = std::hash<std::uint64_t>{}(log_den_);
    auto low = static_cast<std::uint64_t>(BigInt(boost::multiprecision::abs(num_)) & BigInt(0xffffffffffffffffULL));
    h ^= std::hash<std::uint64_t>{}(low) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h ^ static_cast<std::size_t>(num_.sign() + 1);
  }

 private:
  void normalize() {
    if (num_.is_zero()) {
      log_den_ = 0;
      return;
    }
    if (log_den_ == 0) return;
    auto tz = std::min<std::uint64_t>(detail::trailing_zeros(num_), log_den_);
    if (tz > 0) {
      num_ >>= tz;
      log_den_ -= tz;
    }
  }

  BigInt num_ = 0;
  std::uint64_t log_den_ = 0;
};

namespace detail {

inline bool parse_bigint(std::string_view s, BigInt& out) {
  if (s.empty()) return false;
  std::size_t i = 0;
  bool neg = false;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    i = 1;
  }
  if (i == s.size()) return false;
  BigInt v = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
    v = v * 10 + (s[i] - '0');
  }
  out = neg ? BigInt(-v) : v;
  return true;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r' || s.front() == '\n')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n')) s.remove_suffix(1);
  return s;
}

}  // namespace detail

inline DyadicRational DyadicRational::parse(std::string_view text) {
  auto s = detail::trim(text);
  auto slash = s.find('/');
  BigInt num;
  if (slash == std::string_view::npos) {
    if (!detail::parse_bigint(s, num)) throw ParseError(0, 1, "bad number '" + std::string(s) + "'");
    return DyadicRational(num, 0);
  }
  if (!detail::parse_bigint(detail::trim(s.substr(0, slash)), num)) {
    throw ParseError(0, 1, "bad numerator in '" + std::string(s) + "'");
  }
  auto den = detail::trim(s.substr(slash + 1));
  if (den.size() > 2 && den[0] == '2' && den[1] == '^') {
    BigInt e;
    if (!detail::parse_bigint(den.substr(2), e) || e < 0) {
      throw ParseError(0, slash + 2, "bad exponent in '" + std::string(s) + "'");
    }
    return DyadicRational(num, static_cast<std::uint64_t>(e));
  }
  BigInt q;
  if (!detail::parse_bigint(den, q) || q <= 0) {
    throw ParseError(0, slash + 2, "bad denominator in '" + std::string(s) + "'");
  }
  return from_rational(Rational(num, q));
}

inline std::string to_string(const Rational& r) { return r.str(); }

}  // namespace thompson

template <>
struct std::hash<thompson::DyadicRational> {
  std::size_t operator()(const thompson::DyadicRational& d) const { return d.hash(); }
};
