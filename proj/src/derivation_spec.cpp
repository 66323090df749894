#include "jacalg/derivation_spec.h"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "jacalg/errors.h"

namespace jacalg::derivations {

namespace {

template <class T, class Key, class Less>
std::vector<T> merge_sorted(std::vector<T> terms, Key key, Less less) {
  std::sort(terms.begin(), terms.end(), [&](const T& a, const T& b) { return less(key(a), key(b)); });
  std::vector<T> out;
  for (auto& t : terms) {
    if (!out.empty() && key(out.back()) == key(t)) {
      out.back().coeff += t.coeff;
      if (out.back().coeff.is_zero()) out.pop_back();
    } else if (!t.coeff.is_zero()) {
      out.push_back(std::move(t));
    }
  }
  return out;
}

std::vector<DerivationSpec::DiffTerm> merge_diff(std::vector<DerivationSpec::DiffTerm> v) {
  return merge_sorted(
      std::move(v),
      [](const DerivationSpec::DiffTerm& t) { return std::pair(t.op.coeff_exponent, t.op.derivative); },
      std::less<>());
}

std::vector<DerivationSpec::ExtractionTerm> merge_extraction(std::vector<DerivationSpec::ExtractionTerm> v) {
  return merge_sorted(
      std::move(v), [](const DerivationSpec::ExtractionTerm& t) { return t.gamma; }, std::less<>());
}

std::string format_vec(const Monomial& m) { return m.to_string(); }

class SpecParser {
 public:
  SpecParser(std::string_view text, std::size_t n) : s_(text), n_(n) {}

  DerivationSpec parse() {
    std::vector<DerivationSpec::DiffTerm> diff;
    std::vector<DerivationSpec::ExtractionTerm> extraction;
    skip_ws();
    if (at_end()) throw ParseError("empty derivation spec", pos_);
    bool first = true;
    while (!at_end()) {
      int sign = 1;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1 : 1;
        ++pos_;
        skip_ws();
      } else if (!first) {
        throw ParseError("expected '+' or '-'", pos_);
      }
      first = false;
      term(sign, diff, extraction);
      skip_ws();
    }
    return DerivationSpec(n_, std::move(diff), std::move(extraction));
  }

 private:
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return at_end() ? '\0' : s_[pos_]; }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  void expect(char c) {
    skip_ws();
    if (peek() != c) throw ParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
    skip_ws();
  }

  std::int64_t integer() {
    skip_ws();
    std::size_t start = pos_;
    bool neg = false;
    if (peek() == '-' || peek() == '+') {
      neg = peek() == '-';
      ++pos_;
    }
    if (!std::isdigit(static_cast<unsigned char>(peek()))) throw ParseError("expected integer", pos_);
    std::int64_t v = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      if (__builtin_mul_overflow(v, 10, &v) || __builtin_add_overflow(v, peek() - '0', &v)) {
        throw ParseError("integer too large", start);
      }
      ++pos_;
    }
    skip_ws();
    return neg ? -v : v;
  }

  Monomial vec() {
    expect('[');
    std::vector<std::int64_t> e;
    std::size_t start = pos_;
    if (peek() != ']') {
      e.push_back(integer());
      while (peek() == ',') {
        ++pos_;
        e.push_back(integer());
      }
    }
    expect(']');
    if (e.size() != n_) {
      throw ParseError("exponent vector has " + std::to_string(e.size()) + " entries, expected " +
                           std::to_string(n_),
                       start);
    }
    return Monomial(std::span<const std::int64_t>(e));
  }

  void term(int sign, std::vector<DerivationSpec::DiffTerm>& diff,
            std::vector<DerivationSpec::ExtractionTerm>& extraction) {
    Rational c(sign);
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      std::size_t start = pos_;
      while (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '/') ++pos_;
      try {
        c *= Rational::parse(s_.substr(start, pos_ - start));
      } catch (const std::exception&) {
        throw ParseError("malformed coefficient", start);
      }
      skip_ws();
      if (peek() != '*') {
        diff.push_back({c, DiffOp::identity(n_)});
        return;
      }
      ++pos_;
      skip_ws();
    }
    Monomial alpha(n_), beta(n_);
    bool any = false;
    while (true) {
      if (peek() == 'E') {
        ++pos_;
        if (any) throw ParseError("E[...] cannot be combined with x^ or d^", pos_);
        extraction.push_back({c, vec()});
        return;
      }
      if ((peek() == 'x' || peek() == 'd') && pos_ + 1 < s_.size() && s_[pos_ + 1] == '^') {
        char which = peek();
        pos_ += 2;
        Monomial m = vec();
        if (which == 'x') {
          alpha += m;
        } else {
          if (!m.nonnegative()) throw ParseError("negative derivative order", pos_);
          beta += m;
        }
        any = true;
      } else {
        throw ParseError("expected x^[..], d^[..] or E[..]", pos_);
      }
      skip_ws();
      if (peek() != '*') break;
      ++pos_;
      skip_ws();
    }
    diff.push_back({c, DiffOp{alpha, beta}});
  }

  std::string_view s_;
  std::size_t n_;
  std::size_t pos_ = 0;
};

}  // namespace

DerivationSpec::DerivationSpec(std::size_t n, std::vector<DiffTerm> diff,
                               std::vector<ExtractionTerm> extraction)
    : n_(n) {
  for (const auto& t : diff) {
    laurent::require_same_dimension(n, t.op.coeff_exponent.size(), "DerivationSpec");
    laurent::require_same_dimension(n, t.op.derivative.size(), "DerivationSpec");
    if (!t.op.derivative.nonnegative()) throw std::invalid_argument("DerivationSpec: negative derivative order");
  }
  for (const auto& t : extraction) laurent::require_same_dimension(n, t.gamma.size(), "DerivationSpec");
  diff_ = merge_diff(std::move(diff));
  extraction_ = merge_extraction(std::move(extraction));
}

LaurentPoly DerivationSpec::apply(const LaurentPoly& u) const {
  laurent::require_same_dimension(n_, u.nvars(), "DerivationSpec::apply");
  std::vector<LaurentPoly::Term> out;
  for (const auto& t : diff_) {
    for (const auto& [e, c] : u.terms()) {
      Rational f = t.coeff * c;
      for (std::size_t k = 0; k < n_ && !f.is_zero(); ++k) {
        f *= laurent::falling_factorial(e[k], t.op.derivative[k]);
      }
      if (f.is_zero()) continue;
      out.emplace_back(e - t.op.derivative + t.op.coeff_exponent, std::move(f));
    }
  }
  for (const auto& t : extraction_) {
    Rational c = laurent::coeff_at(u, t.gamma);
    if (!c.is_zero()) out.emplace_back(Monomial(n_), t.coeff * c);
  }
  return LaurentPoly::from_terms(n_, std::move(out));
}

Cochain DerivationSpec::to_cochain() const {
  if (!is_closed()) throw std::invalid_argument("DerivationSpec::to_cochain: extraction terms have no closed form");
  std::vector<cochain::Term> terms;
  for (const auto& t : diff_) terms.push_back({t.coeff, t.op.coeff_exponent, {t.op.derivative}});
  return Cochain::from_terms(1, n_, std::move(terms));
}

DerivationSpec DerivationSpec::operator+(const DerivationSpec& o) const {
  laurent::require_same_dimension(n_, o.n_, "DerivationSpec::+");
  auto d = diff_;
  d.insert(d.end(), o.diff_.begin(), o.diff_.end());
  auto e = extraction_;
  e.insert(e.end(), o.extraction_.begin(), o.extraction_.end());
  return DerivationSpec(n_, std::move(d), std::move(e));
}

DerivationSpec DerivationSpec::operator-(const DerivationSpec& o) const { return *this + Rational(-1) * o; }

DerivationSpec operator*(const Rational& c, const DerivationSpec& d) {
  auto diff = d.diff_;
  for (auto& t : diff) t.coeff *= c;
  auto ext = d.extraction_;
  for (auto& t : ext) t.coeff *= c;
  return DerivationSpec(d.n_, std::move(diff), std::move(ext));
}

bool operator==(const DerivationSpec& a, const DerivationSpec& b) {
  if (a.n_ != b.n_ || a.diff_.size() != b.diff_.size() || a.extraction_.size() != b.extraction_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.diff_.size(); ++i) {
    if (a.diff_[i].coeff != b.diff_[i].coeff || !(a.diff_[i].op == b.diff_[i].op)) return false;
  }
  for (std::size_t i = 0; i < a.extraction_.size(); ++i) {
    if (a.extraction_[i].coeff != b.extraction_[i].coeff || a.extraction_[i].gamma != b.extraction_[i].gamma) {
      return false;
    }
  }
  return true;
}

std::string DerivationSpec::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  auto coeff = [&](const Rational& c) {
    if (c.sign() < 0) {
      os << (first ? "-" : " - ");
    } else if (!first) {
      os << " + ";
    }
    os << (c.sign() < 0 ? -c : c).to_string();
    first = false;
  };
  for (const auto& t : diff_) {
    coeff(t.coeff);
    os << "*x^" << format_vec(t.op.coeff_exponent) << "*d^" << format_vec(t.op.derivative);
  }
  for (const auto& t : extraction_) {
    coeff(t.coeff);
    os << "*E" << format_vec(t.gamma);
  }
  return os.str();
}

DerivationSpec parse_derivation_terms(std::string_view text, std::size_t n) {
  return SpecParser(text, n).parse();
}

}  // namespace jacalg::derivations
