#include <doctest.h>

#include <random>

#include "jacalg/derivation_spec.h"
#include "jacalg/errors.h"
#include "jacalg/jacobi.h"
#include "oracle.h"

using namespace jacalg;
using namespace jacalg::jacobi;
using cochain::is_zero_map;
using laurent::parse_poly;

namespace {

LaurentPoly P(const char* s, std::size_t n) { return parse_poly(s, n); }

std::vector<LaurentPoly> vars(std::size_t n) {
  std::vector<LaurentPoly> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back(LaurentPoly::variable(n, i));
  return out;
}

Bracket random_skew(std::size_t arity, std::uint64_t seed) {
  return custom_bracket("skew" + std::to_string(seed), random_skew_cochain(3, arity, seed));
}

/// The explicit six-term form for ternary brackets.
Formula explicit_r3(const Bracket& w) {
  auto V = [](std::size_t i) { return Expr::var(i); };
  auto Wt = [&](std::size_t a, std::size_t b, std::size_t c) { return Expr::apply(0, {V(a), V(b), V(c)}); };
  Formula f("r3", 6, {w});
  f.add(Rational(1), Expr::mul({Wt(1, 2, 3), Wt(4, 5, 6)}));
  f.add(Rational(-1), Expr::mul({Wt(1, 2, 5), Wt(4, 3, 6)}));
  f.add(Rational(1), Expr::mul({Wt(1, 2, 6), Wt(4, 3, 5)}));
  f.add(Rational(1), Expr::mul({Wt(4, 2, 3), Wt(1, 5, 6)}));
  f.add(Rational(-1), Expr::mul({Wt(4, 2, 5), Wt(1, 3, 6)}));
  f.add(Rational(1), Expr::mul({Wt(4, 2, 6), Wt(1, 3, 5)}));
  return f;
}

std::vector<LaurentPoly> random_monomials(std::mt19937_64& rng, std::size_t n, std::size_t k, long lo = -3,
                                          long hi = 3) {
  std::vector<LaurentPoly> out;
  for (std::size_t j = 0; j < k; ++j) out.push_back(oracle::to(n, oracle::random_monomial(rng, n, lo, hi)));
  return out;
}

}  // namespace

TEST_CASE("jacobi: bracket text") {
  CHECK(bracket_from_text("jacS", 3).arity == 3);
  CHECK(bracket_from_text("jacW", 2).arity == 3);
  const Bracket w = bracket_from_text("w:1^2+3^4", 4);
  CHECK(w.arity == 2);
  const auto x = vars(4);
  CHECK(w(std::vector<LaurentPoly>{x[0], x[1]}) == P("1", 4));
  CHECK(w(std::vector<LaurentPoly>{x[2], x[3]}) == P("1", 4));
  CHECK(w(std::vector<LaurentPoly>{x[0], x[2]}).is_zero());
  const Bracket w2 = bracket_from_text("w:2*1^2-2^1", 2);
  CHECK(w2.closed() == Rational(3) * jac_S(2).closed());
  CHECK_THROWS_AS(bracket_from_text("w:1^5", 4), ParseError);
  CHECK_THROWS_AS(bracket_from_text("bogus", 2), ParseError);
  CHECK_THROWS_AS(bracket_from_text("w:1^", 2), ParseError);
  CHECK_THROWS(jac_S(0));
}

TEST_CASE("jacobi: determinant examples") {
  for (std::size_t n : {2, 3}) CHECK(jac_S(n)(vars(n)) == P("1", n));
  const auto mt = LaurentPoly::monomial(-laurent::Monomial::theta(2));
  std::vector<LaurentPoly> a{mt, P("x1", 2), P("x2", 2)};
  CHECK(jac_W(2)(a) == Rational(3) * mt);
  CHECK(jac_W(2).closed().arity() == 3);
  const auto m2t = LaurentPoly::monomial(laurent::Monomial{-2, -2});
  std::vector<LaurentPoly> b{m2t, P("x1^2", 2), P("x2^2", 2)};
  CHECK(jac_W(2)(b) == Rational(12) * mt);
  // (1 - sum x_i d_i) u through the cochain as well
  std::mt19937_64 rng(1);
  for (int i = 0; i < 20; ++i) {
    const auto u = oracle::to(2, oracle::random_poly(rng, 2, 3, -3, 3));
    std::vector<LaurentPoly> args{u, P("x1", 2), P("x2", 2)};
    const auto expect = u - P("x1", 2) * laurent::partial(1, u) - P("x2", 2) * laurent::partial(2, u);
    CHECK(cochain::eval(jac_W(2).closed(), args) == expect);
  }
}

TEST_CASE("jacobi: monomial Jacobian") {
  using laurent::Monomial;
  CHECK(jac_S_monomial(2, std::vector<Monomial>{Monomial{2, 1}, Monomial{0, 1}}) == P("2*x1*x2", 2));
  CHECK(jac_S_monomial(3, std::vector<Monomial>{Monomial{1, 0, 0}, Monomial{0, 1, 0}, Monomial{0, 0, 1}}) ==
        P("1", 3));
  CHECK(jac_S_monomial(3, std::vector<Monomial>{Monomial{1, 2, 0}, Monomial{-1, 0, 3}, Monomial{0, -2, -3}})
            .is_zero());
}

TEST_CASE("property: monomial Jacobian agrees with evaluation on the full grid") {
  using laurent::Monomial;
  const Bracket j2 = jac_S(2), j3 = jac_S(3);
  std::vector<Monomial> g2, g3;
  for (Exponent a = -2; a <= 2; ++a)
    for (Exponent b = -2; b <= 2; ++b) {
      g2.push_back(Monomial{a, b});
      for (Exponent c = -2; c <= 2; ++c) g3.push_back(Monomial{a, b, c});
    }
  std::size_t mismatches = 0, checked = 0;
  for (const auto& r1 : g2)
    for (const auto& r2 : g2) {
      const std::vector<Monomial> rows{r1, r2};
      const std::vector<LaurentPoly> args{LaurentPoly::monomial(r1), LaurentPoly::monomial(r2)};
      if (!(jac_S_monomial(2, rows) == cochain::eval(j2.closed(), args))) ++mismatches;
      ++checked;
    }
  for (const auto& r1 : g3)
    for (const auto& r2 : g3)
      for (const auto& r3 : g3) {
        const std::vector<Monomial> rows{r1, r2, r3};
        const std::vector<LaurentPoly> args{LaurentPoly::monomial(r1), LaurentPoly::monomial(r2),
                                            LaurentPoly::monomial(r3)};
        if (!(jac_S_monomial(3, rows) == j3(args))) ++mismatches;
        ++checked;
      }
  CHECK(checked == 625 + 125 * 125 * 125);
  CHECK(mismatches == 0);
}

TEST_CASE("property: skew-symmetry of the Jacobian brackets") {
  std::mt19937_64 rng(2);
  for (std::size_t n : {2, 3}) {
    for (const Bracket& w : {jac_S(n), jac_W(n)}) {
      for (int i = 0; i < 100; ++i) {
        auto args = random_monomials(rng, n, w.arity);
        const auto v = w(args);
        for (std::size_t p = 0; p + 1 < w.arity; ++p) {
          auto s = args;
          std::swap(s[p], s[p + 1]);
          CHECK(w(s) == -v);
          CHECK(cochain::eval(w.closed(), s) == -v);
        }
      }
    }
  }
}

TEST_CASE("property: jac_W is graded") {
  // inputs of degree s_j + 1 give output of degree sum s_j + 1 (or zero)
  std::mt19937_64 rng(3);
  for (std::size_t n : {2, 3}) {
    for (int i = 0; i < 200; ++i) {
      const auto args = random_monomials(rng, n, n + 1, -2, 3);
      Exponent s = 0;
      for (const auto& a : args) s += a.terms()[0].first.degree() - 1;
      const auto v = jac_W(n)(args);
      for (const auto& [m, c] : v.terms()) CHECK(m.degree() == s + 1);
    }
  }
}

TEST_CASE("jacobi: strongness of jac_S for n = 1, 2, 3") {
  for (std::size_t n = 1; n <= 3; ++n) {
    const Bracket w = jac_S(n);
    CHECK(is_zero_map(residual_fi1(w)));
    CHECK(is_zero_map(residual_fi2(w)));
    CHECK(is_zero_map(residual_leibniz(w)));
  }
}

TEST_CASE("jacobi: ternary identities for jac_S(3)") {
  const Bracket w = jac_S(3);
  CHECK(is_zero_map(residual_r(w, 3)));
  CHECK(is_zero_map(residual_g3(w)));
  CHECK(is_zero_map(residual_h(w)));
  CHECK(is_zero_map(residual_q(w)));
  CHECK(is_zero_map(combination_27august(w)));
  CHECK(is_zero_map(combination_22sept(w, 3)));
  CHECK(is_zero_map(residual_r(jac_S(2), 2)));
  CHECK_THROWS_AS(residual_g3(jac_S(2)), ArityError);
}

TEST_CASE("jacobi: r at n = 3 equals the explicit six-term form") {
  for (std::uint64_t seed : {1, 2, 3}) {
    const Bracket w = random_skew(3, seed);
    CHECK(r_poly(w).compile() == explicit_r3(w).compile());
  }
  const Bracket j = jac_S(3);
  std::mt19937_64 rng(4);
  for (int i = 0; i < 20; ++i) {
    const auto args = random_monomials(rng, 3, 6);
    CHECK(r_poly(j).evaluate(args) == explicit_r3(j).evaluate(args));
  }
}

TEST_CASE("jacobi: formal combinations on random skew brackets") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Bracket w = random_skew(3, seed);
    CHECK(is_zero_map(combination_3h(w)));
    CHECK(is_zero_map(combination_2q(w)));
  }
  for (std::size_t arity : {2, 3}) {
    CHECK(is_zero_map(combination_22sept(random_skew(arity, 7), arity)));
  }
}

TEST_CASE("jacobi: a 2-Lie-Poisson bracket that is not strong") {
  const Bracket w = bracket_from_text("w:1^2+3^4", 4);
  CHECK(is_zero_map(residual_fi1(w)));
  CHECK(is_zero_map(residual_leibniz(w)));
  const cochain::Cochain f = residual_fi2(w);
  CHECK_FALSE(is_zero_map(f));
  CHECK(cochain::eval(f, vars(4)) == P("-1", 4));
  CHECK(fi2(w).evaluate(vars(4)) == P("-1", 4));
}

TEST_CASE("jacobi: lifts") {
  for (std::size_t n : {2, 3}) CHECK(build_tilde_omega(jac_S(n)).closed() == jac_W(n).closed());
  const Bracket w2 = jac_W(2);
  CHECK(is_zero_map(residual_fi1(w2)));
  CHECK(is_zero_map(residual_fi2(w2)));
  CHECK(is_zero_map(residual_w_unit(w2, 2)));

  const Bracket d1 = bracket_from_text("w:1", 2);
  const auto d2 = derivations::parse_derivation_terms("1*d^[0,1]", 2);
  CHECK(build_bar_omega(d2, d1).closed() == Rational(-1) * jac_S(2).closed());

  const auto d3 = derivations::parse_derivation_terms("1*d^[0,0,1]", 3);
  const Bracket bar = build_bar_omega(d3, bracket_from_text("w:1^2", 3));
  CHECK(is_zero_map(residual_fi1(bar)));
  CHECK(is_zero_map(residual_fi2(bar)));
  CHECK(is_zero_map(residual_leibniz(bar)));

  const auto e = derivations::parse_derivation_terms("1*E[0,0]", 2);
  CHECK_FALSE(build_bar_omega(e, d1).cochain.has_value());
}

TEST_CASE("jacobi: unit identity evaluations") {
  const Formula f = w_unit(jac_W(2));
  CHECK(f.nvars() == 4);
  std::vector<LaurentPoly> ones{P("1", 2), P("1", 2), P("x1*x2^-1", 2), P("x2^3", 2)};
  CHECK(f.evaluate(ones).is_zero());
  std::vector<LaurentPoly> a{P("x1", 2), P("x2", 2), P("x1", 2), P("x2", 2)};
  CHECK(f.evaluate(a).is_zero());
  std::mt19937_64 rng(6);
  for (int i = 0; i < 50; ++i) CHECK(f.evaluate(random_monomials(rng, 2, 4)).is_zero());
  a[0] = P("1", 2);
  CHECK(f.evaluate(a).is_zero());
}

TEST_CASE("jacobi: compiled formulas agree with direct evaluation") {
  std::mt19937_64 rng(5);
  const Bracket w = random_skew(3, 9);
  for (const char* name : {"fi1", "fi2", "leibniz", "r", "g3", "h", "q", "comb-27aug"}) {
    const Formula f = residual_by_name(name, w);
    const cochain::Cochain c = f.compile();
    for (int i = 0; i < 10; ++i) {
      const auto args = random_monomials(rng, 3, f.nvars(), -2, 2);
      CHECK(cochain::eval(c, args) == f.evaluate(args));
    }
  }
  CHECK_THROWS_AS(residual_by_name("bogus", w), std::invalid_argument);
}

TEST_CASE("jacobi: verification reports") {
  const Formula fi1_3 = fi1(jac_S(3));
  const auto rep = verify(fi1_3, Mode::Both, TupleSource::grid(0, 2, 4));
  CHECK(rep.holds());
  CHECK(rep.symbolic);
  CHECK(rep.tuples_checked > 0);
  CHECK(rep.to_json()["evidence"] == "symbolic normal form");

  const auto sampled = verify(fi1_3, Mode::Sampled, TupleSource::random(100, -3, 3, 0));
  CHECK(sampled.holds());
  CHECK_FALSE(sampled.symbolic);
  CHECK(sampled.to_json()["evidence"] == "sampled — not a proof");

  const auto ce = verify(fi2(bracket_from_text("w:1^2+3^4", 4)), Mode::Sampled, TupleSource::random(10, -1, 1, 0));
  CHECK(ce.verdict == "counterexample");
  REQUIRE(ce.counterexample_args.has_value());
  CHECK(*ce.counterexample_args == vars(4));
  CHECK(*ce.counterexample_value == P("-1", 4));

  // byte-stable given the same inputs
  CHECK(verify(fi1_3, Mode::Sampled, TupleSource::random(50, -3, 3, 17)).to_json().dump() ==
        verify(fi1_3, Mode::Sampled, TupleSource::random(50, -3, 3, 17)).to_json().dump());

  const auto big = verify(fi2(jac_S(3)), Mode::Symbolic, TupleSource{}, 100);
  CHECK(big.verdict == "resource");
  CHECK_THROWS_AS(verify(fi1(jac_S(3)), Mode::Sampled, TupleSource::grid(-3, 3)), ResourceError);
  CHECK_THROWS_AS(parse_mode("fast"), std::invalid_argument);
}

TEST_CASE("jacobi: a corrupted bracket is caught") {
  // jac_S(3) plus a non-skew perturbation
  const cochain::Cochain bad =
      jac_S(3).closed() + cochain::Cochain::from_terms(3, 3, {{Rational(1), laurent::Monomial(3),
                                                                {laurent::Monomial{1, 0, 0}, laurent::Monomial(3),
                                                                 laurent::Monomial(3)}}});
  const Bracket w = custom_bracket("corrupted", bad);
  const auto sampled = verify(fi1(w), Mode::Sampled, TupleSource::random(200, -2, 2, 0));
  CHECK(sampled.verdict == "counterexample");
  const auto both = verify(fi1(w), Mode::Both, TupleSource::random(200, -2, 2, 0));
  CHECK(both.verdict == "counterexample");
  CHECK_FALSE(fi1(w).evaluate(*both.counterexample_args).is_zero());
}
