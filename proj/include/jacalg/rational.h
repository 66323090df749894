#pragma once

#include <cstdint>
#include <compare>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>

#include <gmpxx.h>

namespace jacalg {

/// Exact rational number, always in lowest terms with a positive denominator.
///
/// Values whose numerator and denominator fit in 64 bits are stored inline;
/// anything larger is promoted to a GMP rational and demoted again as soon as
/// it fits. The representation is invisible to callers: equality, ordering
/// and hashing depend only on the value.
class Rational {
 public:
  Rational() noexcept : value_(Small{0, 1}) {}
  Rational(std::int64_t n) noexcept : value_(Small{n, 1}) {}  // NOLINT(implicit)
  Rational(int n) noexcept : value_(Small{n, 1}) {}           // NOLINT(implicit)
  Rational(std::int64_t num, std::int64_t den);
  explicit Rational(const mpq_class& q);

  /// Accepts `p` or `p/q` with optional sign; throws std::invalid_argument.
  static Rational parse(std::string_view text);

  bool is_zero() const noexcept;
  bool is_one() const noexcept;
  bool is_integer() const;
  int sign() const noexcept;

  mpq_class to_mpq() const;
  /// Numerator/denominator as decimal strings.
  std::string numerator_string() const;
  std::string denominator_string() const;
  /// `p` or `p/q`.
  std::string to_string() const;
  /// Only valid for integers that fit; throws OverflowError otherwise.
  std::int64_t to_int64() const;

  Rational operator-() const;
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b);
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  std::size_t hash() const;

 private:
  struct Small {
    std::int64_t num;
    std::int64_t den;
  };

  static Rational from_i128(__int128 num, __int128 den);
  void demote();

  std::variant<Small, mpq_class> value_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace jacalg
