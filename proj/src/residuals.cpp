#include <algorithm>
#include <numeric>
#include <random>

#include "jacalg/errors.h"
#include "jacalg/jacobi.h"

namespace jacalg::jacobi {

namespace {

Expr V(std::size_t i) { return Expr::var(i); }

Expr W(std::vector<Expr> args) { return Expr::apply(0, std::move(args)); }

std::vector<Expr> vars(std::size_t from, std::size_t to) {
  std::vector<Expr> out;
  for (std::size_t i = from; i <= to; ++i) out.push_back(V(i));
  return out;
}

std::vector<Expr> cat(std::vector<Expr> a, const std::vector<Expr>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

Rational sign_of(std::size_t k) { return Rational(k % 2 == 0 ? 1 : -1); }

void require_bracket_arity(const Bracket& w, std::size_t k, const char* what) {
  if (w.arity != k) {
    throw ArityError(std::string(what) + ": needs a bracket of arity " + std::to_string(k) + ", got " +
                     std::to_string(w.arity));
  }
}

/// w(t_a, t_b, w(rest of 1..5 ascending)).
Expr candidate(std::size_t a, std::size_t b) {
  std::vector<Expr> rest;
  for (std::size_t i = 1; i <= 5; ++i) {
    if (i != a && i != b) rest.push_back(V(i));
  }
  return W({V(a), V(b), W(std::move(rest))});
}

/// (i, j, rest of 1..5 ascending).
std::vector<std::size_t> pair_first(std::size_t i, std::size_t j) {
  std::vector<std::size_t> out{i, j};
  for (std::size_t k = 1; k <= 5; ++k) {
    if (k != i && k != j) out.push_back(k);
  }
  return out;
}

}  // namespace

Formula fi1(const Bracket& w) {
  const std::size_t n = w.arity;
  Formula f("fi1", 2 * n - 1, {w});
  f.add(Rational(1), W(cat(vars(1, n - 1), {W(vars(n, 2 * n - 1))})));
  for (std::size_t i = n; i <= 2 * n - 1; ++i) {
    Expr inner = W(cat(vars(1, n - 1), {V(i)}));
    f.add(Rational(-1), W(cat(cat(vars(n, i - 1), {inner}), vars(i + 1, 2 * n - 1))));
  }
  return f;
}

Formula fi2(const Bracket& w) {
  const std::size_t n = w.arity;
  // u_1..u_{n-1} are variables 1..n-1; v_1..v_{n+1} are n..2n.
  Formula f("fi2", 2 * n, {w});
  for (std::size_t i = 1; i <= n + 1; ++i) {
    const std::size_t vi = n - 1 + i;
    std::vector<Expr> others;
    for (std::size_t k = n; k <= 2 * n; ++k) {
      if (k != vi) others.push_back(V(k));
    }
    f.add(sign_of(i), Expr::mul({W(cat(vars(1, n - 1), {V(vi)})), W(std::move(others))}));
  }
  return f;
}

Formula leibniz(const Bracket& w) {
  const std::size_t n = w.arity;
  Formula f("leibniz", n + 1, {w});
  f.add(Rational(1), W(cat({Expr::mul({V(1), V(2)})}, vars(3, n + 1))));
  f.add(Rational(-1), Expr::mul({V(1), W(cat({V(2)}, vars(3, n + 1)))}));
  f.add(Rational(-1), Expr::mul({V(2), W(cat({V(1)}, vars(3, n + 1)))}));
  return f;
}

Formula r_poly(const Bracket& w) {
  const std::size_t n = w.arity;
  if (n < 2) throw ArityError("r: needs arity at least 2");
  // Symmetric pair a_1, a_{n+1}; common a_2..a_{n-1}; skew set (a_n, a_{n+2}..a_{2n}).
  std::vector<std::size_t> skew{n};
  for (std::size_t i = n + 2; i <= 2 * n; ++i) skew.push_back(i);
  Formula f("r", 2 * n, {w});
  for (std::size_t p = 0; p < skew.size(); ++p) {
    std::vector<Expr> rest;
    for (std::size_t q = 0; q < skew.size(); ++q) {
      if (q != p) rest.push_back(V(skew[q]));
    }
    const Rational s = sign_of(p);
    f.add(s, Expr::mul({W(cat(cat({V(1)}, vars(2, n - 1)), {V(skew[p])})), W(cat({V(n + 1)}, rest))}));
    f.add(s, Expr::mul({W(cat(cat({V(n + 1)}, vars(2, n - 1)), {V(skew[p])})), W(cat({V(1)}, rest))}));
  }
  return f;
}

Formula g3(const Bracket& w) {
  require_bracket_arity(w, 3, "g3");
  Formula f("g3", 5, {w});
  f.add(Rational(1), W({V(1), V(2), W({V(3), V(4), V(5)})}));
  f.add(Rational(-1), W({W({V(1), V(2), V(3)}), V(4), V(5)}));
  f.add(Rational(1), W({W({V(1), V(2), V(4)}), V(3), V(5)}));
  f.add(Rational(-1), W({W({V(1), V(2), V(5)}), V(3), V(4)}));
  return f;
}

Formula h_poly(const Bracket& w) {
  require_bracket_arity(w, 3, "h");
  Formula f("h", 5, {w});
  for (std::size_t j = 2; j <= 5; ++j) f.add(sign_of(j), candidate(1, j));
  return f;
}

Formula q_poly(const Bracket& w) {
  require_bracket_arity(w, 3, "q");
  Formula f("q", 5, {w});
  for (std::size_t i = 1; i <= 4; ++i) {
    for (std::size_t j = i + 1; j <= 4; ++j) f.add(sign_of(i + j), candidate(i, j));
  }
  return f;
}

Formula w_unit(const Bracket& w_tilde) {
  const std::size_t k = w_tilde.arity;  // n + 1
  if (k < 2) throw ArityError("w-unit: needs arity at least 2");
  Formula f("w-unit", k + 1, {w_tilde, contract_unit(w_tilde)});
  const std::vector<Expr> tail = vars(3, k + 1);
  f.add(Rational(1), W(cat({Expr::mul({V(1), V(2)})}, tail)));
  f.add(Rational(-1), Expr::mul({V(1), W(cat({V(2)}, tail))}));
  f.add(Rational(-1), Expr::mul({V(2), W(cat({V(1)}, tail))}));
  f.add(Rational(1), Expr::mul({V(1), V(2), Expr::apply(1, tail)}));
  return f;
}

Formula comb_27august(const Bracket& w) {
  require_bracket_arity(w, 3, "comb-27aug");
  const Formula r = r_poly(w);
  Formula f("comb-27aug", 6, {w});
  f.add_formula(Rational(3), fi2(w));
  f.add_formula(Rational(-2), r);
  const std::vector<std::vector<std::size_t>> perms{
      {2, 3, 1, 4, 5, 6}, {2, 4, 1, 3, 5, 6}, {2, 5, 1, 3, 4, 6}, {2, 6, 1, 3, 4, 5}};
  for (std::size_t i = 0; i < perms.size(); ++i) f.add_formula(-sign_of(i), r.substituted(perms[i]));
  return f;
}

Formula comb_22sept(const Bracket& w) {
  const std::size_t n = w.arity;
  if (n < 2) throw ArityError("comb-22sept: needs arity at least 2");
  std::vector<std::size_t> r_args{1};
  for (std::size_t i = 2; i <= n - 1; ++i) r_args.push_back(i);
  r_args.push_back(n + 1);
  r_args.push_back(n);
  for (std::size_t i = n + 2; i <= 2 * n; ++i) r_args.push_back(i);
  std::vector<std::size_t> f_args;
  for (std::size_t i = 2; i <= n; ++i) f_args.push_back(i);
  f_args.push_back(1);
  for (std::size_t i = n + 1; i <= 2 * n; ++i) f_args.push_back(i);

  const Formula f2 = fi2(w);
  Formula f("comb-22sept", 2 * n, {w});
  f.add_formula(Rational(1), r_poly(w).substituted(r_args));
  f.add_formula(Rational(-1), f2);
  f.add_formula(-sign_of(n), f2.substituted(f_args));
  return f;
}

Formula comb_3h(const Bracket& w) {
  const Formula g = g3(w);
  Formula f("comb-3h", 5, {w});
  f.add_formula(Rational(3), h_poly(w));
  for (std::size_t i = 2; i <= 5; ++i) {
    for (std::size_t j = i + 1; j <= 5; ++j) f.add_formula(-sign_of(i + j), g.substituted(pair_first(i, j)));
  }
  return f;
}

Formula comb_2q(const Bracket& w) {
  const Formula g = g3(w);
  Formula f("comb-2q", 5, {w});
  const std::vector<std::size_t> rotated{2, 3, 4, 5, 1};
  f.add_formula(Rational(2), q_poly(w).substituted(rotated));
  for (std::size_t i = 1; i <= 5; ++i) {
    for (std::size_t j = i + 1; j <= 5; ++j) f.add_formula(sign_of(i + j), g.substituted(pair_first(i, j)));
  }
  f.add_formula(Rational(-2), h_poly(w));
  return f;
}

Formula residual_by_name(std::string_view name, const Bracket& w) {
  if (name == "fi1") return fi1(w);
  if (name == "fi2") return fi2(w);
  if (name == "leibniz") return leibniz(w);
  if (name == "r") return r_poly(w);
  if (name == "g3") return g3(w);
  if (name == "h") return h_poly(w);
  if (name == "q") return q_poly(w);
  if (name == "w-unit") return w_unit(w);
  if (name == "comb-27aug") return comb_27august(w);
  if (name == "comb-22sept") return comb_22sept(w);
  if (name == "comb-3h") return comb_3h(w);
  if (name == "comb-2q") return comb_2q(w);
  throw std::invalid_argument("unknown identity '" + std::string(name) + "'");
}

Cochain residual_fi1(const Bracket& w, std::size_t budget) { return fi1(w).compile(budget); }
Cochain residual_fi2(const Bracket& w, std::size_t budget) { return fi2(w).compile(budget); }
Cochain residual_leibniz(const Bracket& w, std::size_t budget) { return leibniz(w).compile(budget); }

Cochain residual_r(const Bracket& w, std::size_t n, std::size_t budget) {
  require_bracket_arity(w, n, "r");
  return r_poly(w).compile(budget);
}

Cochain residual_g3(const Bracket& w, std::size_t budget) { return g3(w).compile(budget); }
Cochain residual_h(const Bracket& w, std::size_t budget) { return h_poly(w).compile(budget); }
Cochain residual_q(const Bracket& w, std::size_t budget) { return q_poly(w).compile(budget); }

Cochain residual_w_unit(const Bracket& w_tilde, std::size_t n, std::size_t budget) {
  require_bracket_arity(w_tilde, n + 1, "w-unit");
  return w_unit(w_tilde).compile(budget);
}

Cochain combination_27august(const Bracket& w, std::size_t budget) { return comb_27august(w).compile(budget); }

Cochain combination_22sept(const Bracket& w, std::size_t n, std::size_t budget) {
  require_bracket_arity(w, n, "comb-22sept");
  return comb_22sept(w).compile(budget);
}

Cochain combination_3h(const Bracket& w, std::size_t budget) { return comb_3h(w).compile(budget); }
Cochain combination_2q(const Bracket& w, std::size_t budget) { return comb_2q(w).compile(budget); }

Cochain random_skew_cochain(std::size_t n, std::size_t arity, std::uint64_t seed, std::size_t base_terms) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coeff(-3, 3);
  std::uniform_int_distribution<int> shift(-1, 1);
  std::uniform_int_distribution<int> order(0, 1);
  for (;;) {
    std::vector<cochain::Term> base;
    for (std::size_t t = 0; t < base_terms; ++t) {
      cochain::Term term{Rational(coeff(rng)), Monomial(n), std::vector<Monomial>(arity, Monomial(n))};
      for (std::size_t k = 0; k < n; ++k) term.shift[k] = shift(rng);
      for (auto& b : term.derivs) {
        for (std::size_t k = 0; k < n; ++k) b[k] = order(rng);
      }
      base.push_back(std::move(term));
    }
    const Cochain psi = Cochain::from_terms(arity, n, std::move(base));
    Cochain skew(arity, n);
    std::vector<std::size_t> p(arity);
    std::iota(p.begin(), p.end(), 0);
    do {
      int sign = 1;
      for (std::size_t i = 0; i < arity; ++i) {
        for (std::size_t j = i + 1; j < arity; ++j) {
          if (p[i] > p[j]) sign = -sign;
        }
      }
      skew += Rational(sign) * cochain::permute(psi, p);
    } while (std::next_permutation(p.begin(), p.end()));
    if (!skew.terms().empty()) return skew;
  }
}

}  // namespace jacalg::jacobi
