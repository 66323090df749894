#include <algorithm>
#include <cctype>
#include <numeric>

#include "jacalg/errors.h"
#include "jacalg/jacobi.h"

namespace jacalg::jacobi {

namespace {

int permutation_sign(const std::vector<std::size_t>& p) {
  int sign = 1;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      if (p[i] > p[j]) sign = -sign;
    }
  }
  return sign;
}

void require_arity(const Bracket& b, std::size_t got) {
  if (got != b.arity) {
    throw ArityError(b.name + ": expected " + std::to_string(b.arity) + " arguments, got " +
                     std::to_string(got));
  }
}

/// sum_i (-1)^i d(u_i) * omega(u without u_i), the evaluator of d ^ omega.
Evaluator lifted_evaluator(std::function<LaurentPoly(const LaurentPoly&)> d, Evaluator omega) {
  return [d = std::move(d), omega = std::move(omega)](std::span<const LaurentPoly> args) {
    LaurentPoly acc(args.empty() ? 0 : args[0].nvars());
    std::vector<LaurentPoly> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
      rest.clear();
      for (std::size_t j = 0; j < args.size(); ++j) {
        if (j != i) rest.push_back(args[j]);
      }
      LaurentPoly term = d(args[i]) * omega(rest);
      if (i % 2 == 0) {
        acc += term;
      } else {
        acc -= term;
      }
    }
    return acc;
  };
}

}  // namespace

LaurentPoly Bracket::operator()(std::span<const LaurentPoly> args) const {
  require_arity(*this, args.size());
  for (const auto& a : args) laurent::require_same_dimension(n, a.nvars(), name.c_str());
  return evaluate(args);
}

const Cochain& Bracket::closed() const {
  if (!cochain) throw std::invalid_argument(name + " has no closed cochain form");
  return *cochain;
}

LaurentPoly determinant(const std::vector<std::vector<LaurentPoly>>& m) {
  const std::size_t k = m.size();
  if (k == 0) throw std::invalid_argument("determinant of an empty matrix");
  const std::size_t n = m[0][0].nvars();
  std::vector<std::size_t> p(k);
  std::iota(p.begin(), p.end(), 0);
  LaurentPoly acc(n);
  do {
    LaurentPoly prod = LaurentPoly::constant(n, Rational(permutation_sign(p)));
    for (std::size_t r = 0; r < k && !prod.is_zero(); ++r) prod = prod * m[r][p[r]];
    acc += prod;
  } while (std::next_permutation(p.begin(), p.end()));
  return acc;
}

Bracket jac_S(std::size_t n) {
  if (n < 1) throw DimensionError("jac_S: n must be at least 1");
  Cochain c = Cochain::partial(n, 1);
  for (std::size_t i = 2; i <= n; ++i) c = cochain::wedge(c, Cochain::partial(n, i));
  Evaluator ev = [n](std::span<const LaurentPoly> u) {
    std::vector<std::vector<LaurentPoly>> m(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) m[i].push_back(laurent::partial(i + 1, u[j]));
    }
    return determinant(m);
  };
  return Bracket{"jacS", n, n, std::move(c), std::move(ev)};
}

Bracket jac_W(std::size_t n) {
  if (n < 1) throw DimensionError("jac_W: n must be at least 1");
  Cochain c = cochain::wedge(Cochain::identity(n), jac_S(n).closed());
  Evaluator ev = [n](std::span<const LaurentPoly> u) {
    std::vector<std::vector<LaurentPoly>> m(n + 1);
    for (std::size_t j = 0; j <= n; ++j) m[0].push_back(u[j]);
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t j = 0; j <= n; ++j) m[i].push_back(laurent::partial(i, u[j]));
    }
    return determinant(m);
  };
  return Bracket{"jacW", n, n + 1, std::move(c), std::move(ev)};
}

Bracket wedge_of_fields(std::size_t n,
                        std::vector<std::pair<Rational, std::vector<DerivationVectorField>>> terms) {
  if (terms.empty()) throw std::invalid_argument("wedge_of_fields: no terms");
  const std::size_t k = terms[0].second.size();
  if (k == 0) throw ArityError("wedge_of_fields: empty wedge");
  std::optional<Cochain> c = Cochain(k, n);
  for (const auto& [coeff, fields] : terms) {
    if (fields.size() != k) throw ArityError("wedge_of_fields: wedges of different lengths");
    Cochain w = fields[0].to_cochain();
    for (std::size_t i = 1; i < k; ++i) w = cochain::wedge(w, fields[i].to_cochain());
    *c += coeff * w;
  }
  Evaluator ev = [terms, k](std::span<const LaurentPoly> u) {
    LaurentPoly acc(u[0].nvars());
    for (const auto& [coeff, fields] : terms) {
      std::vector<std::vector<LaurentPoly>> m(k);
      for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) m[a].push_back(fields[a].apply(u[b]));
      }
      acc += laurent::scale(coeff, determinant(m));
    }
    return acc;
  };
  return Bracket{"wedge", n, k, std::move(c), std::move(ev)};
}

Bracket bracket_from_text(std::string_view text, std::size_t n) {
  if (text == "jacS") return jac_S(n);
  if (text == "jacW") return jac_W(n);
  if (text.substr(0, 2) != "w:") throw ParseError("unknown bracket '" + std::string(text) + "'", 0);
  std::vector<std::pair<Rational, std::vector<DerivationVectorField>>> terms;
  std::size_t pos = 2;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto number = [&]() -> std::size_t {
    skip_ws();
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) {
      throw ParseError("expected a variable index", pos);
    }
    std::size_t v = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      v = v * 10 + static_cast<std::size_t>(text[pos++] - '0');
      if (v > 1'000'000) throw ParseError("index too large", pos);
    }
    skip_ws();
    return v;
  };
  bool first = true;
  skip_ws();
  while (pos < text.size()) {
    Rational coeff(1);
    if (text[pos] == '+' || text[pos] == '-') {
      if (text[pos] == '-') coeff = Rational(-1);
      ++pos;
    } else if (!first) {
      throw ParseError("expected '+' or '-'", pos);
    }
    first = false;
    std::size_t start = pos;
    std::size_t v = number();
    if (pos < text.size() && text[pos] == '*') {
      coeff *= Rational(static_cast<std::int64_t>(v));
      ++pos;
      start = pos;
      v = number();
    }
    std::vector<DerivationVectorField> fields;
    while (true) {
      if (v < 1 || v > n) throw ParseError("variable index " + std::to_string(v) + " out of range", start);
      fields.push_back(DerivationVectorField::basis(LaurentPoly::constant(n, Rational(1)), v));
      if (pos < text.size() && text[pos] == '^') {
        ++pos;
        start = pos;
        v = number();
      } else {
        break;
      }
    }
    terms.emplace_back(coeff, std::move(fields));
    skip_ws();
  }
  if (terms.empty()) throw ParseError("empty wedge list", pos);
  Bracket b = wedge_of_fields(n, std::move(terms));
  b.name = std::string(text);
  return b;
}

Bracket custom_bracket(std::string name, Cochain c) {
  const std::size_t n = c.nvars();
  const std::size_t k = c.arity();
  Evaluator ev = [c](std::span<const LaurentPoly> u) { return cochain::eval(c, u); };
  return Bracket{std::move(name), n, k, std::move(c), std::move(ev)};
}

Bracket build_bar_omega(const DerivationSpec& d, const Bracket& omega) {
  laurent::require_same_dimension(d.nvars(), omega.n, "build_bar_omega");
  std::optional<Cochain> c;
  if (d.is_closed() && omega.cochain) c = cochain::wedge(d.to_cochain(), *omega.cochain);
  auto apply = [d](const LaurentPoly& u) { return d.apply(u); };
  return Bracket{"D^" + omega.name, omega.n, omega.arity + 1, std::move(c),
                 lifted_evaluator(apply, omega.evaluate)};
}

Bracket build_tilde_omega(const Bracket& omega) {
  std::optional<Cochain> c;
  if (omega.cochain) c = cochain::wedge(Cochain::identity(omega.n), *omega.cochain);
  auto apply = [](const LaurentPoly& u) { return u; };
  return Bracket{"id^" + omega.name, omega.n, omega.arity + 1, std::move(c),
                 lifted_evaluator(apply, omega.evaluate)};
}

Bracket contract_unit(const Bracket& omega) {
  if (omega.arity < 2) throw ArityError("contract_unit: arity must be at least 2");
  const LaurentPoly one = LaurentPoly::constant(omega.n, Rational(1));
  std::optional<Cochain> c;
  if (omega.cochain) c = cochain::contract(one, *omega.cochain);
  Evaluator ev = [one, inner = omega.evaluate](std::span<const LaurentPoly> u) {
    std::vector<LaurentPoly> args{one};
    args.insert(args.end(), u.begin(), u.end());
    return inner(args);
  };
  return Bracket{"i(1)" + omega.name, omega.n, omega.arity - 1, std::move(c), std::move(ev)};
}

LaurentPoly jac_S_monomial(std::size_t n, std::span<const Monomial> rows) {
  if (rows.size() != n) throw ArityError("jac_S_monomial: need n monomials");
  Monomial total(n);
  for (const Monomial& r : rows) {
    laurent::require_same_dimension(n, r.size(), "jac_S_monomial");
    total += r;
  }
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  Rational det(0);
  do {
    Rational prod(permutation_sign(p));
    for (std::size_t r = 0; r < n && !prod.is_zero(); ++r) prod *= Rational(rows[r][p[r]]);
    det += prod;
  } while (std::next_permutation(p.begin(), p.end()));
  if (det.is_zero()) return LaurentPoly(n);
  return LaurentPoly::monomial(total - Monomial::theta(n), det);
}

}  // namespace jacalg::jacobi
