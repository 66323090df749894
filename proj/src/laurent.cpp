#include "jacalg/laurent.h"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "jacalg/errors.h"

namespace jacalg::laurent {

// ---- Monomial ------------------------------------------------------------

Monomial Monomial::unit(std::size_t n, std::size_t var) {
  if (var < 1 || var > n) {
    throw DimensionError("variable index " + std::to_string(var) + " outside 1.." +
                         std::to_string(n));
  }
  Monomial m(n);
  m[var - 1] = 1;
  return m;
}

Monomial Monomial::theta(std::size_t n) {
  Monomial m(n);
  for (std::size_t k = 0; k < n; ++k) m[k] = 1;
  return m;
}

bool Monomial::is_zero() const noexcept {
  return std::all_of(e_.begin(), e_.end(), [](Exponent v) { return v == 0; });
}

bool Monomial::nonnegative() const noexcept {
  return std::all_of(e_.begin(), e_.end(), [](Exponent v) { return v >= 0; });
}

Exponent Monomial::degree() const {
  Exponent d = 0;
  for (Exponent v : e_) d = checked_add(d, v);
  return d;
}

Monomial& Monomial::operator+=(const Monomial& o) {
  require_same_dimension(size(), o.size(), "Monomial::+");
  for (std::size_t k = 0; k < e_.size(); ++k) e_[k] = checked_add(e_[k], o.e_[k]);
  return *this;
}

Monomial& Monomial::operator-=(const Monomial& o) {
  require_same_dimension(size(), o.size(), "Monomial::-");
  for (std::size_t k = 0; k < e_.size(); ++k) e_[k] = checked_add(e_[k], checked_mul(o.e_[k], -1));
  return *this;
}

Monomial Monomial::operator-() const {
  Monomial m(size());
  for (std::size_t k = 0; k < e_.size(); ++k) m.e_[k] = checked_mul(e_[k], -1);
  return m;
}

std::string Monomial::to_string() const {
  std::string s = "[";
  for (std::size_t k = 0; k < e_.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(e_[k]);
  }
  return s + "]";
}

Exponent checked_add(Exponent a, Exponent b) {
  Exponent r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("exponent overflow");
  return r;
}

Exponent checked_mul(Exponent a, Exponent b) {
  Exponent r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("exponent overflow");
  return r;
}

Rational falling_factorial(Exponent a, Exponent b) {
  Rational r(1);
  for (Exponent k = 0; k < b; ++k) {
    Exponent f = checked_add(a, -k);
    if (f == 0) return Rational(0);
    r *= Rational(f);
  }
  return r;
}

Rational multi_factorial(const Monomial& beta) {
  Rational r(1);
  for (Exponent b : beta) {
    if (b < 0) throw std::invalid_argument("multi_factorial: negative entry");
    for (Exponent k = 2; k <= b; ++k) r *= Rational(k);
  }
  return r;
}

Rational multi_binomial(const Monomial& beta, const Monomial& gamma) {
  require_same_dimension(beta.size(), gamma.size(), "multi_binomial");
  Rational r(1);
  for (std::size_t k = 0; k < beta.size(); ++k) {
    if (gamma[k] < 0 || gamma[k] > beta[k]) return Rational(0);
    Exponent g = std::min(gamma[k], beta[k] - gamma[k]);
    for (Exponent j = 1; j <= g; ++j) {
      r *= Rational(beta[k] - g + j);
      r /= Rational(j);
    }
  }
  return r;
}

void require_same_dimension(std::size_t a, std::size_t b, const char* where) {
  if (a != b) {
    throw DimensionError(std::string(where) + ": variable counts differ (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
  }
}

// ---- LaurentPoly ---------------------------------------------------------

namespace {

bool term_order(const LaurentPoly::Term& a, const LaurentPoly::Term& b) { return a.first > b.first; }

}  // namespace

LaurentPoly LaurentPoly::constant(std::size_t n, const Rational& c) {
  LaurentPoly p(n);
  if (!c.is_zero()) p.terms_.emplace_back(Monomial(n), c);
  return p;
}

LaurentPoly LaurentPoly::monomial(const Monomial& m, const Rational& c) {
  LaurentPoly p(m.size());
  if (!c.is_zero()) p.terms_.emplace_back(m, c);
  return p;
}

LaurentPoly LaurentPoly::variable(std::size_t n, std::size_t var) {
  return monomial(Monomial::unit(n, var));
}

LaurentPoly LaurentPoly::from_terms(std::size_t n, std::vector<Term> terms) {
  for (const auto& t : terms) require_same_dimension(n, t.first.size(), "LaurentPoly::from_terms");
  std::sort(terms.begin(), terms.end(), term_order);
  LaurentPoly p(n);
  p.terms_.reserve(terms.size());
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().first == t.first) {
      p.terms_.back().second += t.second;
      if (p.terms_.back().second.is_zero()) p.terms_.pop_back();
    } else if (!t.second.is_zero()) {
      p.terms_.push_back(std::move(t));
    }
  }
  return p;
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly r = *this;
  for (auto& t : r.terms_) t.second = -t.second;
  return r;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  require_same_dimension(n_, o.n_, "LaurentPoly::+");
  if (o.terms_.empty()) return *this;
  std::vector<Term> out;
  out.reserve(terms_.size() + o.terms_.size());
  auto a = terms_.begin();
  auto b = o.terms_.begin();
  while (a != terms_.end() || b != o.terms_.end()) {
    if (b == o.terms_.end() || (a != terms_.end() && a->first > b->first)) {
      out.push_back(std::move(*a++));
    } else if (a == terms_.end() || b->first > a->first) {
      out.push_back(*b++);
    } else {
      Rational c = a->second + b->second;
      if (!c.is_zero()) out.emplace_back(std::move(a->first), std::move(c));
      ++a;
      ++b;
    }
  }
  terms_ = std::move(out);
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) { return *this += -o; }

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  require_same_dimension(a.n_, b.n_, "LaurentPoly::*");
  if (a.is_zero() || b.is_zero()) return LaurentPoly(a.n_);
  if (a.size() == 1 && b.size() == 1) {
    return LaurentPoly::monomial(a.terms_[0].first + b.terms_[0].first,
                                 a.terms_[0].second * b.terms_[0].second);
  }
  std::vector<LaurentPoly::Term> prod;
  prod.reserve(a.size() * b.size());
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) prod.emplace_back(ma + mb, ca * cb);
  }
  return LaurentPoly::from_terms(a.n_, std::move(prod));
}

LaurentPoly operator*(const Rational& c, const LaurentPoly& p) {
  if (c.is_zero()) return LaurentPoly(p.n_);
  LaurentPoly r = p;
  for (auto& t : r.terms_) t.second *= c;
  return r;
}

LaurentPoly add(const LaurentPoly& p, const LaurentPoly& q) { return p + q; }
LaurentPoly mul(const LaurentPoly& p, const LaurentPoly& q) { return p * q; }
LaurentPoly scale(const Rational& c, const LaurentPoly& p) { return c * p; }

LaurentPoly shift(const Monomial& m, const LaurentPoly& p) {
  require_same_dimension(m.size(), p.nvars(), "shift");
  std::vector<LaurentPoly::Term> out;
  out.reserve(p.size());
  for (const auto& [e, c] : p.terms()) out.emplace_back(e + m, c);
  return LaurentPoly::from_terms(p.nvars(), std::move(out));
}

LaurentPoly partial(std::size_t var, const LaurentPoly& p) {
  return higher_partial(Monomial::unit(p.nvars(), var), p);
}

LaurentPoly higher_partial(const Monomial& beta, const LaurentPoly& p) {
  require_same_dimension(beta.size(), p.nvars(), "higher_partial");
  if (!beta.nonnegative()) throw std::invalid_argument("higher_partial: negative derivative order");
  if (beta.is_zero()) return p;
  std::vector<LaurentPoly::Term> out;
  out.reserve(p.size());
  for (const auto& [e, c] : p.terms()) {
    Rational f(1);
    for (std::size_t k = 0; k < beta.size() && !f.is_zero(); ++k) {
      f *= falling_factorial(e[k], beta[k]);
    }
    if (f.is_zero()) continue;
    out.emplace_back(e - beta, c * f);
  }
  return LaurentPoly::from_terms(p.nvars(), std::move(out));
}

Rational pr(const LaurentPoly& p) { return coeff_at(p, Monomial(p.nvars())); }

Rational coeff_at(const LaurentPoly& p, const Monomial& gamma) {
  require_same_dimension(gamma.size(), p.nvars(), "coeff_at");
  auto it = std::lower_bound(p.terms().begin(), p.terms().end(), gamma,
                             [](const LaurentPoly::Term& t, const Monomial& g) { return t.first > g; });
  if (it != p.terms().end() && it->first == gamma) return it->second;
  return Rational(0);
}

// ---- text ----------------------------------------------------------------

namespace {

class PolyParser {
 public:
  PolyParser(std::string_view text, std::size_t n) : text_(text), n_(n) {}

  LaurentPoly parse() {
    std::vector<LaurentPoly::Term> terms;
    skip_ws();
    if (at_end()) throw ParseError("empty polynomial", pos_);
    bool first = true;
    while (true) {
      skip_ws();
      int sign = 1;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1 : 1;
        ++pos_;
        skip_ws();
      } else if (!first) {
        throw ParseError("expected '+' or '-'", pos_);
      }
      first = false;
      terms.push_back(parse_term(sign));
      skip_ws();
      if (at_end()) break;
    }
    return LaurentPoly::from_terms(n_, std::move(terms));
  }

 private:
  LaurentPoly::Term parse_term(int sign) {
    Rational coeff(sign);
    Monomial m(n_);
    bool need_factor = true;
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      coeff *= parse_coefficient();
      need_factor = false;
      skip_ws();
      if (peek() != '*') return {m, coeff};
      ++pos_;
      skip_ws();
      need_factor = true;
    }
    while (need_factor) {
      parse_factor(m);
      skip_ws();
      if (peek() != '*') break;
      ++pos_;
      skip_ws();
    }
    return {m, coeff};
  }

  Rational parse_coefficient() {
    std::size_t start = pos_;
    std::string digits = read_digits();
    Rational c = Rational::parse(digits);
    skip_ws();
    if (peek() == '/') {
      ++pos_;
      skip_ws();
      if (!std::isdigit(static_cast<unsigned char>(peek()))) throw ParseError("expected denominator", pos_);
      std::string den = read_digits();
      Rational d = Rational::parse(den);
      if (d.is_zero()) throw ParseError("zero denominator", start);
      c /= d;
    }
    return c;
  }

  void parse_factor(Monomial& m) {
    if (peek() != 'x') throw ParseError("expected factor 'xI'", pos_);
    ++pos_;
    if (!std::isdigit(static_cast<unsigned char>(peek()))) throw ParseError("expected variable index", pos_);
    std::size_t idx_pos = pos_;
    std::string idx = read_digits();
    std::size_t var = std::stoul(idx);
    if (var < 1 || var > n_) {
      throw ParseError("variable x" + idx + " outside 1.." + std::to_string(n_), idx_pos);
    }
    Exponent e = 1;
    skip_ws();
    if (peek() == '^') {
      ++pos_;
      skip_ws();
      std::size_t epos = pos_;
      bool neg = false;
      if (peek() == '-' || peek() == '+') {
        neg = peek() == '-';
        ++pos_;
      }
      if (!std::isdigit(static_cast<unsigned char>(peek()))) throw ParseError("expected integer exponent", pos_);
      std::string ds = read_digits();
      if (peek() == '.' || peek() == '/') throw ParseError("non-integer exponent", epos);
      try {
        e = std::stoll(ds);
      } catch (const std::out_of_range&) {
        throw ParseError("exponent out of range", epos);
      }
      if (neg) e = -e;
    }
    m[var - 1] = checked_add(m[var - 1], e);
  }

  std::string read_digits() {
    std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  std::string_view text_;
  std::size_t n_;
  std::size_t pos_ = 0;
};

}  // namespace

LaurentPoly parse_poly(std::string_view text, std::size_t n) {
  if (n == 0) throw DimensionError("parse_poly: need at least one variable");
  return PolyParser(text, n).parse();
}

std::string format_poly(const LaurentPoly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    Rational mag = c.sign() < 0 ? -c : c;
    if (first) {
      if (c.sign() < 0) os << "-";
    } else {
      os << (c.sign() < 0 ? " - " : " + ");
    }
    first = false;
    std::string factors;
    for (std::size_t k = 0; k < m.size(); ++k) {
      if (m[k] == 0) continue;
      if (!factors.empty()) factors += "*";
      factors += "x" + std::to_string(k + 1);
      if (m[k] != 1) factors += "^" + std::to_string(m[k]);
    }
    if (factors.empty()) {
      os << mag;
    } else if (mag.is_one()) {
      os << factors;
    } else {
      os << mag << "*" << factors;
    }
  }
  return os.str();
}

}  // namespace jacalg::laurent
