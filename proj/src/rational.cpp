#include "jacalg/rational.h"

#include <cstdlib>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "jacalg/errors.h"

namespace jacalg {

namespace {

using i128 = __int128;

constexpr i128 kMax64 = std::numeric_limits<std::int64_t>::max();
constexpr i128 kMin64 = std::numeric_limits<std::int64_t>::min();

i128 abs128(i128 v) { return v < 0 ? -v : v; }

i128 gcd128(i128 a, i128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool fits64(i128 v) { return v >= kMin64 && v <= kMax64; }

mpz_class mpz_from_i128(i128 v) {
  bool neg = v < 0;
  // |INT128_MIN| never occurs: inputs are products of two int64 values.
  unsigned __int128 mag = static_cast<unsigned __int128>(neg ? -v : v);
  std::uint64_t words[2] = {static_cast<std::uint64_t>(mag),
                            static_cast<std::uint64_t>(mag >> 64)};
  mpz_class z;
  mpz_import(z.get_mpz_t(), 2, -1, sizeof(std::uint64_t), 0, 0, words);
  if (neg) z = -z;
  return z;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("Rational: zero denominator");
  *this = from_i128(num, den);
}

Rational::Rational(const mpq_class& q) : value_(q) {
  std::get<mpq_class>(value_).canonicalize();
  demote();
}

Rational Rational::from_i128(i128 num, i128 den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num == 0) den = 1;
  Rational r;
  if (fits64(num) && fits64(den)) {
    r.value_ = Small{static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)};
  } else {
    mpq_class q(mpz_from_i128(num), mpz_from_i128(den));
    r.value_ = std::move(q);
  }
  return r;
}

void Rational::demote() {
  auto* q = std::get_if<mpq_class>(&value_);
  if (q == nullptr) return;
  if (mpz_fits_slong_p(q->get_num_mpz_t()) && mpz_fits_slong_p(q->get_den_mpz_t())) {
    value_ = Small{q->get_num().get_si(), q->get_den().get_si()};
  }
}

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("Rational: empty text");
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("Rational: malformed '" + s + "'");
  if (q.get_den() == 0) throw std::domain_error("Rational: zero denominator");
  q.canonicalize();
  return Rational(q);
}

bool Rational::is_zero() const noexcept {
  if (auto* s = std::get_if<Small>(&value_)) return s->num == 0;
  return false;  // big values are never zero
}

bool Rational::is_one() const noexcept {
  if (auto* s = std::get_if<Small>(&value_)) return s->num == 1 && s->den == 1;
  return false;
}

bool Rational::is_integer() const {
  if (auto* s = std::get_if<Small>(&value_)) return s->den == 1;
  return std::get<mpq_class>(value_).get_den() == 1;
}

int Rational::sign() const noexcept {
  if (auto* s = std::get_if<Small>(&value_)) return (s->num > 0) - (s->num < 0);
  return sgn(std::get<mpq_class>(value_));
}

mpq_class Rational::to_mpq() const {
  if (auto* s = std::get_if<Small>(&value_)) {
    mpq_class q(mpz_from_i128(s->num), mpz_from_i128(s->den));
    return q;
  }
  return std::get<mpq_class>(value_);
}

std::string Rational::numerator_string() const {
  if (auto* s = std::get_if<Small>(&value_)) return std::to_string(s->num);
  return std::get<mpq_class>(value_).get_num().get_str();
}

std::string Rational::denominator_string() const {
  if (auto* s = std::get_if<Small>(&value_)) return std::to_string(s->den);
  return std::get<mpq_class>(value_).get_den().get_str();
}

std::string Rational::to_string() const {
  if (is_integer()) return numerator_string();
  return numerator_string() + "/" + denominator_string();
}

std::int64_t Rational::to_int64() const {
  if (auto* s = std::get_if<Small>(&value_); s != nullptr && s->den == 1) return s->num;
  throw OverflowError("Rational: value " + to_string() + " is not a 64-bit integer");
}

Rational Rational::operator-() const {
  if (auto* s = std::get_if<Small>(&value_)) {
    return from_i128(-static_cast<i128>(s->num), s->den);
  }
  return Rational(mpq_class(-std::get<mpq_class>(value_)));
}

Rational& Rational::operator+=(const Rational& o) {
  auto* a = std::get_if<Small>(&value_);
  auto* b = std::get_if<Small>(&o.value_);
  if (a != nullptr && b != nullptr) {
    if (a->den == 1 && b->den == 1) {
      *this = from_i128(static_cast<i128>(a->num) + b->num, 1);
    } else {
      *this = from_i128(static_cast<i128>(a->num) * b->den + static_cast<i128>(b->num) * a->den,
                        static_cast<i128>(a->den) * b->den);
    }
    return *this;
  }
  *this = Rational(mpq_class(to_mpq() + o.to_mpq()));
  return *this;
}

Rational& Rational::operator-=(const Rational& o) { return *this += -o; }

Rational& Rational::operator*=(const Rational& o) {
  auto* a = std::get_if<Small>(&value_);
  auto* b = std::get_if<Small>(&o.value_);
  if (a != nullptr && b != nullptr) {
    *this = from_i128(static_cast<i128>(a->num) * b->num, static_cast<i128>(a->den) * b->den);
    return *this;
  }
  *this = Rational(mpq_class(to_mpq() * o.to_mpq()));
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("Rational: division by zero");
  auto* a = std::get_if<Small>(&value_);
  auto* b = std::get_if<Small>(&o.value_);
  if (a != nullptr && b != nullptr) {
    *this = from_i128(static_cast<i128>(a->num) * b->den, static_cast<i128>(a->den) * b->num);
    return *this;
  }
  *this = Rational(mpq_class(to_mpq() / o.to_mpq()));
  return *this;
}

bool operator==(const Rational& a, const Rational& b) {
  auto* x = std::get_if<Rational::Small>(&a.value_);
  auto* y = std::get_if<Rational::Small>(&b.value_);
  if (x != nullptr && y != nullptr) return x->num == y->num && x->den == y->den;
  if ((x == nullptr) != (y == nullptr)) return false;  // canonical: small and big never coincide
  return std::get<mpq_class>(a.value_) == std::get<mpq_class>(b.value_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  auto* x = std::get_if<Rational::Small>(&a.value_);
  auto* y = std::get_if<Rational::Small>(&b.value_);
  if (x != nullptr && y != nullptr) {
    i128 l = static_cast<i128>(x->num) * y->den;
    i128 r = static_cast<i128>(y->num) * x->den;
    return l <=> r;
  }
  int c = cmp(a.to_mpq(), b.to_mpq());
  return c <=> 0;
}

std::size_t Rational::hash() const {
  if (auto* s = std::get_if<Small>(&value_)) {
    return std::hash<std::int64_t>{}(s->num) * 31 + std::hash<std::int64_t>{}(s->den);
  }
  return std::hash<std::string>{}(to_string());
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

}  // namespace jacalg
