#include <doctest.h>

#include <random>

#include "jacalg/derivations.h"
#include "jacalg/errors.h"
#include "oracle.h"

using namespace jacalg;
using namespace jacalg::derivations;
using cochain::is_zero_map;
using jacobi::jac_S;
using jacobi::jac_W;
using laurent::parse_poly;

namespace {

LaurentPoly P(const char* s, std::size_t n) { return parse_poly(s, n); }

DerivationVectorField field(std::size_t n, std::vector<const char*> comps) {
  std::vector<LaurentPoly> c;
  for (const char* s : comps) c.push_back(P(s, n));
  return DerivationVectorField(std::move(c));
}

std::vector<LaurentPoly> vars(std::size_t n) {
  std::vector<LaurentPoly> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back(LaurentPoly::variable(n, i));
  return out;
}

LaurentPoly rand_mono(std::mt19937_64& rng, std::size_t n, long lo = -3, long hi = 3) {
  return oracle::to(n, oracle::random_monomial(rng, n, lo, hi));
}

DerivationVectorField random_field(std::mt19937_64& rng, std::size_t n) {
  std::vector<LaurentPoly> c;
  for (std::size_t i = 0; i < n; ++i) c.push_back(oracle::to(n, oracle::random_poly(rng, n, 2, -2, 3)));
  return DerivationVectorField(std::move(c));
}

}  // namespace

TEST_CASE("derivations: divergence") {
  CHECK(div(field(3, {"x1", "x2", "x3"})) == P("3", 3));
  CHECK(div(field(2, {"x2", "-x1"})).is_zero());
  CHECK(div(field(2, {"x1^2", "0"})) == P("2*x1", 2));
}

TEST_CASE("derivations: commutator") {
  const auto d1 = field(2, {"1", "0"});
  const auto x1d1 = field(2, {"x1", "0"});
  CHECK(commutator(d1, x1d1) == d1);
  CHECK(commutator(x1d1, x1d1) == DerivationVectorField::zero(2));
  CHECK(commutator(field(2, {"0", "x1"}), field(2, {"x2", "0"})) == field(2, {"x1", "-x2"}));
  CHECK_THROWS_AS(commutator(d1, field(3, {"1", "0", "0"})), DimensionError);
}

TEST_CASE("property: the divergence is a cocycle and commutators satisfy Jacobi") {
  CHECK(div_cocycle_residual(field(2, {"1", "0"}), field(2, {"x1^2", "0"})).is_zero());
  std::mt19937_64 rng(31);
  for (std::size_t n : {2, 3}) {
    for (int i = 0; i < 100; ++i) {
      const auto x = random_field(rng, n), y = random_field(rng, n), z = random_field(rng, n);
      CHECK(div_cocycle_residual(x, y).is_zero());
      CHECK(div_cocycle_residual(x, x).is_zero());
      const auto jac = commutator(x, commutator(y, z)) + commutator(y, commutator(z, x)) +
                       commutator(z, commutator(x, y));
      CHECK(jac == DerivationVectorField::zero(n));
      // [X,Y] acts as X o Y - Y o X
      const auto u = oracle::to(n, oracle::random_poly(rng, n, 3, -2, 2));
      CHECK(commutator(x, y).apply(u) == x.apply(y.apply(u)) - y.apply(x.apply(u)));
    }
  }
}

TEST_CASE("property: u -> X(u) - Div(X) u / n preserves commutators") {
  std::mt19937_64 rng(32);
  for (std::size_t n : {2, 3}) {
    const Rational lambda(-1, static_cast<std::int64_t>(n));
    for (int i = 0; i < 30; ++i) {
      const auto x = random_field(rng, n), y = random_field(rng, n);
      const auto gx = witt_map(x, n, lambda), gy = witt_map(y, n, lambda);
      const auto gxy = witt_map(commutator(x, y), n, lambda);
      for (int k = 0; k < 3; ++k) {
        const auto u = oracle::to(n, oracle::random_poly(rng, n, 3, -2, 2));
        CHECK(gx.apply(gy.apply(u)) - gy.apply(gx.apply(u)) == gxy.apply(u));
      }
    }
    // the kernel probes: g_X(1) = 0 and g_X(x_i) = 0 force X = 0
    const auto g = witt_map(field(n, std::vector<const char*>(n, "x1")), n, lambda);
    CHECK_FALSE(g.apply(LaurentPoly::variable(n, 1)).is_zero());
  }
}

TEST_CASE("derivations: interior maps") {
  for (std::size_t n : {2, 3}) {
    auto us = vars(n);
    us.pop_back();
    const Interior l = interior(jac_S(n), us);
    std::mt19937_64 rng(n);
    for (int i = 0; i < 20; ++i) {
      const auto a = oracle::to(n, oracle::random_poly(rng, n, 3, -3, 3));
      CHECK(l(a) == laurent::partial(n, a));
    }
    CHECK(l(P("7", n)).is_zero());
  }
  CHECK_THROWS_AS(interior(jac_S(3), {P("x1", 3)}), ArityError);
}

TEST_CASE("derivations: interior decomposition under jac_W") {
  std::vector<LaurentPoly> us{P("x1^2", 2), P("x2^3", 2)};
  const auto dec = interior_W_decompose(us);
  CHECK((div(dec.x) + Rational(2) * dec.r).is_zero());

  std::mt19937_64 rng(33);
  for (std::size_t n : {2, 3}) {
    for (int i = 0; i < 30; ++i) {
      std::vector<LaurentPoly> u;
      for (std::size_t j = 0; j < n; ++j) u.push_back(oracle::to(n, oracle::random_poly(rng, n, 2, -2, 3)));
      const auto d = interior_W_decompose(u);
      CHECK((div(d.x) + Rational(static_cast<std::int64_t>(n)) * d.r).is_zero());
      const Interior l = interior(jac_W(n), u);
      const auto a = oracle::to(n, oracle::random_poly(rng, n, 3, -2, 3));
      CHECK(l(a) == d.x.apply(a) + d.r * a);
    }
  }
}

TEST_CASE("derivations: named maps") {
  CHECK(delta(3).apply(P("1", 3)) == P("-3/2", 3));
  CHECK(delta(2).apply(P("x1^2*x2^-1", 2)) == P("-x1^2*x2^-1", 2));
  CHECK_THROWS(delta(1));

  for (std::size_t n : {2, 3}) {
    const auto mt = LaurentPoly::monomial(-laurent::Monomial::theta(n));
    CHECK(d_theta(n).apply(mt) == P("1", n));
    CHECK(d_theta(n).apply(P("x1", n) + Rational(5) * mt) == Rational(5) * P("1", n));
    CHECK(d_theta(n).apply(P("1", n)).is_zero());
    CHECK_FALSE(d_theta(n).is_closed());
    CHECK(d_i(n, 1).apply(P("x1", n)) == LaurentPoly::monomial(-laurent::Monomial::theta(n) +
                                                              laurent::Monomial::unit(n, 1)));
  }

  // d_ij as a slot of the Jacobian: J(x1, .., u@i, .., v@j, ..) = d_ij(u)(v)
  std::mt19937_64 rng(34);
  for (int k = 0; k < 30; ++k) {
    const auto u = oracle::to(3, oracle::random_poly(rng, 3, 2, -2, 3));
    const auto v = oracle::to(3, oracle::random_poly(rng, 3, 2, -2, 3));
    auto args = vars(3);
    args[0] = u;
    args[2] = v;
    CHECK(jac_S(3)(args) == d_ij(3, 1, 3, u).apply(v));
  }
  CHECK_THROWS(d_ij(3, 2, 2, P("x1", 3)));

  CHECK(named_derivation("Delta", 3) == delta(3));
  CHECK(named_derivation("Dtheta", 2) == d_theta(2));
  CHECK(named_derivation("D2", 3) == d_i(3, 2));
  CHECK(named_derivation("1*x^[1,0]*d^[1,0]", 2).apply(P("x1^3", 2)) == P("3*x1^3", 2));
  CHECK_THROWS_AS(named_derivation("D4", 3), ParseError);
  CHECK_THROWS_AS(named_derivation("1*d^[1]", 3), ParseError);
}

TEST_CASE("derivations: residuals against jac_S") {
  for (std::size_t n : {2, 3}) {
    CHECK(is_zero_map(derivation_residual(delta(n), jac_S(n))));
    for (std::size_t i = 1; i <= n; ++i) {
      const auto rep = derivation_grid_check(as_map(d_i(n, i)), jac_S(n), -3, 3);
      CHECK(rep.holds);
      CHECK(rep.skew_reduced);
    }
    const auto rep = derivation_grid_check(as_map(d_theta(n)), jac_S(n), -3, 3);
    CHECK(rep.holds);
    CHECK(rep.tuples_checked > 0);
  }
  const auto x1d1 = named_derivation("1*x^[1,0]*d^[1,0]", 2);
  const auto r = derivation_residual(x1d1, jac_S(2));
  CHECK_FALSE(is_zero_map(r));
  const auto args = vars(2);
  CHECK(derivation_residual_eval(as_map(x1d1), jac_S(2), args) == P("-1", 2));
  CHECK(cochain::eval(r, args) == P("-1", 2));
  const auto grid = derivation_grid_check(as_map(x1d1), jac_S(2), -1, 1);
  CHECK_FALSE(grid.holds);
  REQUIRE(grid.witness.has_value());
  CHECK(derivation_residual_eval(as_map(x1d1), jac_S(2), *grid.witness) == grid.value);
  CHECK_THROWS(derivation_residual(d_theta(2), jac_S(2)));
}

TEST_CASE("property: interior maps of jac_S(3) are derivations") {
  std::mt19937_64 rng(35);
  for (int i = 0; i < 50; ++i) {
    const Interior l = interior(jac_S(3), {rand_mono(rng, 3), rand_mono(rng, 3)});
    for (int k = 0; k < 4; ++k) {
      const std::vector<LaurentPoly> args{rand_mono(rng, 3), rand_mono(rng, 3), rand_mono(rng, 3)};
      CHECK(derivation_residual_eval(l.map(), jac_S(3), args).is_zero());
    }
  }
}

TEST_CASE("property: Jacobians of monomials have no x^-theta coefficient") {
  for (std::size_t n : {2, 3}) {
    const Exponent lo = -2, hi = 2;
    const auto mt = -laurent::Monomial::theta(n);
    std::vector<Monomial> grid;
    Monomial m(n);
    std::function<void(std::size_t)> fill = [&](std::size_t i) {
      if (i == n) {
        grid.push_back(m);
        return;
      }
      for (Exponent e = lo; e <= hi; ++e) {
        m[i] = e;
        fill(i + 1);
      }
    };
    fill(0);
    std::size_t nonzero = 0;
    if (n == 2) {
      for (const auto& a : grid)
        for (const auto& b : grid)
          if (!laurent::coeff_at(jacobi::jac_S_monomial(2, std::vector<Monomial>{a, b}), mt).is_zero()) ++nonzero;
    } else {
      for (const auto& a : grid)
        for (const auto& b : grid)
          for (const auto& c : grid)
            if (!laurent::coeff_at(jacobi::jac_S_monomial(3, std::vector<Monomial>{a, b, c}), mt).is_zero())
              ++nonzero;
    }
    CHECK(nonzero == 0);
  }
}

TEST_CASE("derivations: Witt maps against jac_W") {
  for (std::size_t n : {2, 3}) {
    const Rational inv_n(-1, static_cast<std::int64_t>(n));
    for (std::size_t i = 1; i <= n; ++i) {
      const auto di = DerivationVectorField::basis(P("1", n), i);
      CHECK(is_zero_map(derivation_residual(witt_map(di, n, inv_n), jac_W(n))));
      for (std::size_t j = 1; j <= n; ++j) {
        const auto xjdi = DerivationVectorField::basis(LaurentPoly::variable(n, j), i);
        CHECK(is_zero_map(derivation_residual(witt_map(xjdi, n, inv_n), jac_W(n))));
        std::vector<LaurentPoly> args{P("1", n)};
        for (const auto& v : vars(n)) args.push_back(v);
        for (const Rational& lambda : {Rational(0), Rational(1), inv_n}) {
          const auto value =
              derivation_residual_eval(as_map(witt_map(xjdi, n, lambda)), jac_W(n), args);
          const Rational expect = i == j ? -(Rational(1) + lambda * Rational(static_cast<std::int64_t>(n)))
                                         : Rational(0);
          CHECK(value == LaurentPoly::constant(n, expect));
        }
      }
    }
  }
  // divergence-free fields do not see lambda
  const auto rot = field(2, {"x2", "-x1"});
  CHECK(witt_map(rot, 2, Rational(0)) == witt_map(rot, 2, Rational(7)));
  CHECK(is_zero_map(derivation_residual(witt_map(rot, 2, Rational(3)), jac_W(2))));
}

TEST_CASE("derivations: Jacobian image") {
  for (std::size_t n : {2, 3}) {
    const auto no = monomial_in_jacobian_image(-laurent::Monomial::theta(n), n);
    CHECK_FALSE(no.in_image);
    CHECK_FALSE(no.certificate.empty());
    const auto one = monomial_in_jacobian_image(Monomial(n), n);
    CHECK(one.in_image);
    CHECK(jac_S(n)(one.preimage) == P("1", n));
  }
  std::mt19937_64 rng(36);
  std::uniform_int_distribution<Exponent> e(-4, 4);
  for (std::size_t n : {2, 3}) {
    int checked = 0;
    while (checked < 100) {
      Monomial g(n);
      for (std::size_t i = 0; i < n; ++i) g[i] = e(rng);
      if (g == -laurent::Monomial::theta(n)) continue;
      const auto rep = monomial_in_jacobian_image(g, n);
      REQUIRE(rep.in_image);
      CHECK(jac_S(n)(rep.preimage) == LaurentPoly::monomial(g));
      ++checked;
    }
  }
}

TEST_CASE("derivations: outer witnesses") {
  for (std::size_t n : {2, 3}) {
    CHECK(outer_witness_check(as_map(delta(n)), n).verdict == OuterReport::Verdict::Outer);
    for (std::size_t i = 1; i <= n; ++i)
      CHECK(outer_witness_check(as_map(d_i(n, i)), n).verdict == OuterReport::Verdict::Outer);
  }
  const Interior l = interior(jac_S(2), {P("x1^2", 2)});
  const auto rep = outer_witness_check(l.map(), 2);
  CHECK(rep.verdict == OuterReport::Verdict::Inconclusive);
}

TEST_CASE("derivations: commuting with partials") {
  for (std::size_t n : {2, 3}) {
    const auto ok = commute_with_partials_check(as_map(d_theta(n)), n);
    CHECK(ok.status == CommuteReport::Status::Holds);
    CHECK(ok.checked > 0);
    CHECK(commute_with_partials_check(as_map(delta(n)), n).status ==
          CommuteReport::Status::PreconditionFailed);
  }
  const auto x1sq = named_derivation("1*x^[2,0]*d^[1,0]", 2);
  CHECK(commute_with_partials_check(as_map(x1sq), 2).status == CommuteReport::Status::PreconditionFailed);
  // D(1) = D(x_j) = 0 but D does not commute with d_1
  const auto bad = named_derivation("1*x^[-2,0]*d^[2,0]", 2);
  const auto v = commute_with_partials_check(as_map(bad), 2);
  CHECK(v.status == CommuteReport::Status::Violated);
  CHECK(v.witness.has_value());
}
