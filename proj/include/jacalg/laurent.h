#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "jacalg/rational.h"

/// Exact arithmetic in the Laurent polynomial ring Q[x1^{±1},...,xn^{±1}].
///
/// Variable indices in the public API are 1-based, matching the textual
/// form `x1, x2, ...`. Exponent arithmetic is overflow-checked.
namespace jacalg::laurent {

using Exponent = std::int64_t;

/// Exponent vector in Z^n.
class Monomial {
 public:
  using Storage = boost::container::small_vector<Exponent, 6>;

  Monomial() = default;
  explicit Monomial(std::size_t n) : e_(n, 0) {}
  Monomial(std::initializer_list<Exponent> exps) : e_(exps) {}
  explicit Monomial(std::span<const Exponent> exps) : e_(exps.begin(), exps.end()) {}

  static Monomial zero(std::size_t n) { return Monomial(n); }
  /// epsilon_i (1-based i).
  static Monomial unit(std::size_t n, std::size_t var);
  /// theta = (1,...,1).
  static Monomial theta(std::size_t n);

  std::size_t size() const noexcept { return e_.size(); }
  Exponent operator[](std::size_t k) const { return e_[k]; }
  Exponent& operator[](std::size_t k) { return e_[k]; }
  auto begin() const noexcept { return e_.begin(); }
  auto end() const noexcept { return e_.end(); }

  bool is_zero() const noexcept;
  bool nonnegative() const noexcept;
  /// |alpha| = sum of entries.
  Exponent degree() const;

  Monomial& operator+=(const Monomial& o);
  Monomial& operator-=(const Monomial& o);
  friend Monomial operator+(Monomial a, const Monomial& b) { return a += b; }
  friend Monomial operator-(Monomial a, const Monomial& b) { return a -= b; }
  Monomial operator-() const;

  friend bool operator==(const Monomial& a, const Monomial& b) = default;
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
    return std::lexicographical_compare_three_way(a.e_.begin(), a.e_.end(), b.e_.begin(),
                                                  b.e_.end());
  }

  /// `[a1,a2,...]`.
  std::string to_string() const;

 private:
  Storage e_;
};

/// Overflow-checked exponent arithmetic.
Exponent checked_add(Exponent a, Exponent b);
Exponent checked_mul(Exponent a, Exponent b);

/// a (a-1) ... (a-b+1); the coefficient of d^b applied to x^a.
Rational falling_factorial(Exponent a, Exponent b);
/// beta! = prod_i beta_i!.
Rational multi_factorial(const Monomial& beta);
/// prod_i binom(beta_i, gamma_i) for 0 <= gamma <= beta.
Rational multi_binomial(const Monomial& beta, const Monomial& gamma);

/// Sparse Laurent polynomial in canonical form: terms sorted by descending
/// lexicographic exponent order, no zero coefficients.
class LaurentPoly {
 public:
  using Term = std::pair<Monomial, Rational>;

  LaurentPoly() = default;
  explicit LaurentPoly(std::size_t n) : n_(n) {}

  static LaurentPoly constant(std::size_t n, const Rational& c);
  static LaurentPoly monomial(const Monomial& m, const Rational& c = Rational(1));
  /// x_i (1-based).
  static LaurentPoly variable(std::size_t n, std::size_t var);
  /// Builds from arbitrary (possibly repeated, possibly zero) terms.
  static LaurentPoly from_terms(std::size_t n, std::vector<Term> terms);

  std::size_t nvars() const noexcept { return n_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_monomial() const noexcept { return terms_.size() == 1; }

  LaurentPoly operator-() const;
  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  friend LaurentPoly operator*(const Rational& c, const LaurentPoly& p);

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Term> terms_;
};

LaurentPoly add(const LaurentPoly& p, const LaurentPoly& q);
LaurentPoly mul(const LaurentPoly& p, const LaurentPoly& q);
LaurentPoly scale(const Rational& c, const LaurentPoly& p);
/// Multiplies by x^shift.
LaurentPoly shift(const Monomial& m, const LaurentPoly& p);

/// d/dx_var (1-based).
LaurentPoly partial(std::size_t var, const LaurentPoly& p);
/// d_1^{beta_1} ... d_n^{beta_n} p; beta must be nonnegative.
LaurentPoly higher_partial(const Monomial& beta, const LaurentPoly& p);

/// Coefficient of x^0.
Rational pr(const LaurentPoly& p);
/// Coefficient of x^gamma (0 when absent).
Rational coeff_at(const LaurentPoly& p, const Monomial& gamma);

/// Grammar: terms joined by +/-; a term is an optional `p` or `p/q`
/// coefficient and `*`-separated factors `xI^E` (E a signed integer,
/// default 1). Whitespace is ignored. Throws ParseError.
LaurentPoly parse_poly(std::string_view text, std::size_t n);
std::string format_poly(const LaurentPoly& p);

void require_same_dimension(std::size_t a, std::size_t b, const char* where);

}  // namespace jacalg::laurent
