#pragma once

// Exact rationals and the extended reals R ∪ {-inf, +inf} used for bound
// functions and quasimetric values.

#include <boost/multiprecision/gmp.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bdpt {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational, boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int, boost::multiprecision::et_off>;

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline BigInt parse_integer(std::string_view text, std::string_view whole) {
  if (text.empty()) {
    throw ParseError("malformed rational '" + std::string(whole) + "'");
  }
  std::size_t start = (text.front() == '-' || text.front() == '+') ? 1 : 0;
  if (start == text.size()) {
    throw ParseError("malformed rational '" + std::string(whole) + "'");
  }
  for (std::size_t i = start; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') {
      throw ParseError("malformed rational '" + std::string(whole) + "'");
    }
  }
  std::string digits(text.front() == '+' ? text.substr(1) : text);
  return BigInt(digits);
}

}  // namespace detail

/// Parses "p/q", "p", or a finite decimal such as "0.25" into an exact rational.
inline Rational parse_rational(std::string_view text) {
  const std::string_view whole = text;
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = detail::parse_integer(text.substr(0, slash), whole);
    BigInt den = detail::parse_integer(text.substr(slash + 1), whole);
    if (den == 0) throw ParseError("zero denominator in '" + std::string(whole) + "'");
    return Rational(num, den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac_part = text.substr(dot + 1);
    bool negative = !int_part.empty() && int_part.front() == '-';
    if (int_part == "-" || int_part == "+" || int_part.empty()) int_part = "0";
    BigInt whole_units = detail::parse_integer(int_part, whole);
    if (whole_units < 0) whole_units = -whole_units;
    BigInt frac = frac_part.empty() ? BigInt(0) : detail::parse_integer(frac_part, whole);
    if (!frac_part.empty() && (frac_part.front() == '-' || frac_part.front() == '+')) {
      throw ParseError("malformed rational '" + std::string(whole) + "'");
    }
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
    Rational value = Rational(whole_units) + Rational(frac, scale);
    return negative ? Rational(-value) : value;
  }
  return Rational(detail::parse_integer(text, whole));
}

/// Canonical text form: "p" for integers, "p/q" otherwise.
inline std::string to_string(const Rational& value) {
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

inline BigInt ceil_to_integer(const Rational& value) {
  BigInt num = boost::multiprecision::numerator(value);
  BigInt den = boost::multiprecision::denominator(value);
  BigInt q = num / den;  // truncates toward zero
  if (q * den != num && num > 0) q += 1;
  return q;
}

inline BigInt floor_to_integer(const Rational& value) {
  BigInt num = boost::multiprecision::numerator(value);
  BigInt den = boost::multiprecision::denominator(value);
  BigInt q = num / den;
  if (q * den != num && num < 0) q -= 1;
  return q;
}

/// A value in R ∪ {-inf, +inf}. Adding opposite infinities throws DomainError.
class ExtRational {
 public:
  enum class Kind : std::uint8_t { negative_infinity, finite, positive_infinity };

  ExtRational() = default;
  ExtRational(Rational value) : value_(std::move(value)) {}  // NOLINT(implicit)
  ExtRational(long long value) : value_(value) {}             // NOLINT(implicit)
  ExtRational(int value) : value_(value) {}                   // NOLINT(implicit)

  static ExtRational infinity() { return ExtRational(Kind::positive_infinity); }
  static ExtRational negative_infinity() { return ExtRational(Kind::negative_infinity); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::finite; }
  bool is_positive_infinity() const { return kind_ == Kind::positive_infinity; }
  bool is_negative_infinity() const { return kind_ == Kind::negative_infinity; }

  const Rational& value() const {
    if (!is_finite()) throw DomainError("value() of an infinite ExtRational");
    return value_;
  }

  ExtRational operator-() const {
    switch (kind_) {
      case Kind::positive_infinity: return negative_infinity();
      case Kind::negative_infinity: return infinity();
      case Kind::finite: break;
    }
    return ExtRational(Rational(-value_));
  }

  friend ExtRational operator+(const ExtRational& a, const ExtRational& b) {
    if (a.is_finite() && b.is_finite()) return ExtRational(Rational(a.value_ + b.value_));
    if ((a.is_positive_infinity() && b.is_negative_infinity()) ||
        (a.is_negative_infinity() && b.is_positive_infinity())) {
      throw DomainError("+inf + -inf is undefined");
    }
    return a.is_finite() ? b : a;
  }

  friend ExtRational operator-(const ExtRational& a, const ExtRational& b) { return a + (-b); }

  ExtRational& operator+=(const ExtRational& other) { return *this = *this + other; }

  friend bool operator==(const ExtRational& a, const ExtRational& b) {
    if (a.kind_ != b.kind_) return false;
    return !a.is_finite() || a.value_ == b.value_;
  }

  friend std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b) {
    if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
    if (!a.is_finite()) return std::strong_ordering::equal;
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (a.value_ > b.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  explicit ExtRational(Kind kind) : kind_(kind) {}

  Kind kind_ = Kind::finite;
  Rational value_{0};
};

/// "p/q", "inf" / "+inf", or "-inf".
inline ExtRational parse_ext_rational(std::string_view text) {
  if (text == "inf" || text == "+inf" || text == "infinity") return ExtRational::infinity();
  if (text == "-inf" || text == "-infinity") return ExtRational::negative_infinity();
  return ExtRational(parse_rational(text));
}

inline std::string to_string(const ExtRational& value) {
  if (value.is_positive_infinity()) return "inf";
  if (value.is_negative_infinity()) return "-inf";
  return to_string(value.value());
}

inline std::ostream& operator<<(std::ostream& os, const ExtRational& value) {
  return os << to_string(value);
}

/// True iff diff > bound; diff is finite, the bound may be infinite.
inline bool exceeds(const Rational& diff, const ExtRational& bound) {
  if (bound.is_positive_infinity()) return false;
  if (bound.is_negative_infinity()) return true;
  return diff > bound.value();
}

/// Least common multiple of the denominators of the given rationals.
template <class Range>
BigInt common_denominator(const Range& values) {
  BigInt lcm = 1;
  for (const Rational& v : values) {
    lcm = boost::multiprecision::lcm(lcm, BigInt(boost::multiprecision::denominator(v)));
  }
  return lcm;
}

}  // namespace bdpt
