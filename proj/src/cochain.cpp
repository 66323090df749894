#include "jacalg/cochain.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "jacalg/errors.h"

namespace jacalg::cochain {

using laurent::checked_add;
using laurent::falling_factorial;
using laurent::multi_binomial;
using laurent::multi_factorial;
using laurent::require_same_dimension;

namespace {

bool key_less(const Term& a, const Term& b) {
  if (auto c = a.shift <=> b.shift; c != 0) return c < 0;
  return std::lexicographical_compare(a.derivs.begin(), a.derivs.end(), b.derivs.begin(),
                                      b.derivs.end());
}

bool same_key(const Term& a, const Term& b) { return a.shift == b.shift && a.derivs == b.derivs; }

std::vector<Term> merge_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), key_less);
  std::vector<Term> out;
  out.reserve(terms.size());
  for (auto& t : terms) {
    if (!out.empty() && same_key(out.back(), t)) {
      out.back().coeff += t.coeff;
      if (out.back().coeff.is_zero()) out.pop_back();
    } else if (!t.coeff.is_zero()) {
      out.push_back(std::move(t));
    }
  }
  return out;
}

void require_slot(std::size_t slot, std::size_t arity, const char* where) {
  if (slot < 1 || slot > arity) {
    throw ArityError(std::string(where) + ": slot " + std::to_string(slot) + " outside 1.." +
                     std::to_string(arity));
  }
}

class BudgetGuard {
 public:
  BudgetGuard(std::size_t budget, const char* what) : budget_(budget), what_(what) {}
  void add(std::size_t k = 1) {
    count_ += k;
    if (count_ > budget_) {
      throw ResourceError(std::string(what_) + ": expansion exceeds budget of " +
                              std::to_string(budget_) + " terms",
                          count_);
    }
  }

 private:
  std::size_t budget_;
  const char* what_;
  std::size_t count_ = 0;
};

/// prod_k falling(a[k], b[k]), using machine integers while they suffice.
Rational falling_product(const Monomial& a, const Monomial& b) {
  std::int64_t acc = 1;
  for (std::size_t k = 0; k < a.size(); ++k) {
    for (Exponent s = 0; s < b[k]; ++s) {
      std::int64_t f = a[k] - s;
      if (f == 0) return Rational(0);
      if (__builtin_mul_overflow(acc, f, &acc)) {
        Rational r(1);
        for (std::size_t q = 0; q < a.size(); ++q) r *= falling_factorial(a[q], b[q]);
        return r;
      }
    }
  }
  return Rational(acc);
}

/// Appends the generalized-Leibniz expansion of
///   d^beta( c * x^shift * prod_i d^{derivs_i}(v_i) )
/// to `out`.
void leibniz_expand(const Rational& c, const Monomial& shift, const std::vector<Monomial>& derivs,
                    const Monomial& beta, std::vector<Term>& out, BudgetGuard& guard) {
  const std::size_t n = beta.size();
  const std::size_t parts = derivs.size() + 1;  // part 0 hits x^shift
  // parts x n matrix of the current distribution.
  std::vector<Monomial> delta(parts, Monomial(n));

  auto emit = [&]() {
    Rational coeff = c;
    for (std::size_t k = 0; k < n; ++k) {
      // multinomial(beta[k]; delta[0][k], ..., delta[l][k])
      Exponent rest = beta[k];
      for (std::size_t p = 0; p < parts; ++p) {
        Monomial b(1), g(1);
        b[0] = rest;
        g[0] = delta[p][k];
        coeff *= multi_binomial(b, g);
        rest -= delta[p][k];
      }
    }
    coeff *= falling_product(shift, delta[0]);
    if (coeff.is_zero()) return;
    guard.add();
    Term t{std::move(coeff), shift - delta[0], derivs};
    for (std::size_t i = 0; i < derivs.size(); ++i) t.derivs[i] += delta[i + 1];
    out.push_back(std::move(t));
  };

  // Enumerate compositions variable by variable.
  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (k == n) {
      emit();
      return;
    }
    // compositions of beta[k] into `parts` parts
    auto comp = [&](auto&& inner, std::size_t p, Exponent left) -> void {
      if (p + 1 == parts) {
        delta[p][k] = left;
        self(self, k + 1);
        delta[p][k] = 0;
        return;
      }
      for (Exponent v = 0; v <= left; ++v) {
        delta[p][k] = v;
        inner(inner, p + 1, left - v);
      }
      delta[p][k] = 0;
    };
    comp(comp, 0, beta[k]);
  };
  rec(rec, 0);
}

/// Evaluates psi on single-term arguments x^{a_j} with coefficient `weight`,
/// appending output terms.
void eval_monomials(const Cochain& psi, std::span<const Monomial* const> exps,
                    const Rational& weight, std::vector<LaurentPoly::Term>& out) {
  const std::size_t n = psi.nvars();
  Monomial base(n);
  for (const Monomial* a : exps) base += *a;
  for (const Term& t : psi.terms()) {
    Rational f = t.coeff;
    for (std::size_t j = 0; j < exps.size() && !f.is_zero(); ++j) {
      if (!t.derivs[j].is_zero()) f *= falling_product(*exps[j], t.derivs[j]);
    }
    if (f.is_zero()) continue;
    Monomial e = base + t.shift;
    for (const Monomial& b : t.derivs) e -= b;
    out.emplace_back(std::move(e), weight.is_one() ? std::move(f) : f * weight);
  }
}

LaurentPoly eval_direct(const Cochain& psi, std::span<const LaurentPoly> args) {
  const std::size_t n = psi.nvars();
  std::vector<std::map<Monomial, LaurentPoly>> cache(args.size());
  auto derivative = [&](std::size_t j, const Monomial& b) -> const LaurentPoly& {
    auto it = cache[j].find(b);
    if (it == cache[j].end()) it = cache[j].emplace(b, laurent::higher_partial(b, args[j])).first;
    return it->second;
  };
  LaurentPoly acc(n);
  for (const Term& t : psi.terms()) {
    LaurentPoly prod = LaurentPoly::monomial(t.shift, t.coeff);
    for (std::size_t j = 0; j < args.size() && !prod.is_zero(); ++j) {
      prod = prod * derivative(j, t.derivs[j]);
    }
    acc += prod;
  }
  return acc;
}

/// Lexicographic (k, l)-shuffles of {0..k+l-1}: target[p] for p < k runs
/// over the chosen subset, the rest over its complement; sign is the parity.
template <class F>
void for_each_shuffle(std::size_t k, std::size_t l, F&& f) {
  const std::size_t m = k + l;
  std::vector<std::size_t> chosen(k);
  std::iota(chosen.begin(), chosen.end(), 0);
  std::vector<std::size_t> target(m);
  while (true) {
    std::vector<bool> in(m, false);
    for (std::size_t c : chosen) in[c] = true;
    std::size_t p = 0;
    std::size_t inversions = 0;
    for (std::size_t q = 0; q < k; ++q) {
      target[p++] = chosen[q];
      inversions += chosen[q] - q;
    }
    for (std::size_t c = 0; c < m; ++c) {
      if (!in[c]) target[p++] = c;
    }
    f(std::span<const std::size_t>(target), inversions % 2 == 0 ? 1 : -1);
    // next combination
    std::size_t i = k;
    while (i > 0 && chosen[i - 1] == m - k + i - 1) --i;
    if (i == 0) break;
    ++chosen[i - 1];
    for (std::size_t j = i; j < k; ++j) chosen[j] = chosen[j - 1] + 1;
  }
}

}  // namespace

// ---- DiffOp / Cochain basics -----------------------------------------------

LaurentPoly DiffOp::apply(const LaurentPoly& u) const {
  return laurent::shift(coeff_exponent, laurent::higher_partial(derivative, u));
}

Cochain Cochain::from_terms(std::size_t arity, std::size_t n, std::vector<Term> terms) {
  for (const Term& t : terms) {
    require_same_dimension(n, t.shift.size(), "Cochain::from_terms");
    if (t.derivs.size() != arity) throw ArityError("Cochain::from_terms: slot count mismatch");
    for (const Monomial& b : t.derivs) {
      require_same_dimension(n, b.size(), "Cochain::from_terms");
      if (!b.nonnegative()) throw std::invalid_argument("Cochain: negative derivative order");
    }
  }
  Cochain c(arity, n);
  c.terms_ = merge_terms(std::move(terms));
  return c;
}

Cochain Cochain::from_slots(std::size_t n, const Rational& c, std::span<const DiffOp> slots) {
  Term t{c, Monomial(n), {}};
  for (const DiffOp& op : slots) {
    t.shift += op.coeff_exponent;
    t.derivs.push_back(op.derivative);
  }
  return from_terms(slots.size(), n, {std::move(t)});
}

Cochain Cochain::identity(std::size_t n) { return from_diffop(n, Rational(1), DiffOp::identity(n)); }

Cochain Cochain::partial(std::size_t n, std::size_t var) {
  return from_diffop(n, Rational(1), DiffOp::partial(n, var));
}

Cochain Cochain::from_diffop(std::size_t n, const Rational& c, const DiffOp& op) {
  const DiffOp slots[] = {op};
  return from_slots(n, c, slots);
}

Exponent Cochain::max_order() const {
  Exponent m = 0;
  for (const Term& t : terms_) {
    for (const Monomial& b : t.derivs) m = std::max(m, b.degree());
  }
  return m;
}

bool Cochain::is_constant_coefficient() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.shift.is_zero(); });
}

Cochain Cochain::operator-() const { return Rational(-1) * *this; }

Cochain& Cochain::operator+=(const Cochain& o) {
  if (arity_ != o.arity_) throw ArityError("Cochain::+: arity mismatch");
  require_same_dimension(n_, o.n_, "Cochain::+");
  std::vector<Term> all = terms_;
  all.insert(all.end(), o.terms_.begin(), o.terms_.end());
  terms_ = merge_terms(std::move(all));
  return *this;
}

Cochain& Cochain::operator-=(const Cochain& o) { return *this += -o; }

Cochain operator*(const Rational& c, const Cochain& p) {
  Cochain r(p.arity_, p.n_);
  if (c.is_zero()) return r;
  r.terms_ = p.terms_;
  for (Term& t : r.terms_) t.coeff *= c;
  return r;
}

bool operator==(const Cochain& a, const Cochain& b) {
  if (a.arity_ != b.arity_ || a.n_ != b.n_ || a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (!same_key(a.terms_[i], b.terms_[i]) || a.terms_[i].coeff != b.terms_[i].coeff) return false;
  }
  return true;
}

// ---- evaluation ----------------------------------------------------------

LaurentPoly eval(const Cochain& psi, std::span<const LaurentPoly> args) {
  if (args.size() != psi.arity()) {
    throw ArityError("eval: cochain has arity " + std::to_string(psi.arity()) + ", got " +
                     std::to_string(args.size()) + " arguments");
  }
  const std::size_t n = psi.nvars();
  std::size_t combos = 1;
  for (const LaurentPoly& a : args) {
    require_same_dimension(n, a.nvars(), "eval");
    if (a.is_zero()) return LaurentPoly(n);
    combos = combos > 4096 ? combos : combos * a.size();
  }
  if (combos > 256) return eval_direct(psi, args);

  // Multilinear expansion over argument terms.
  const std::size_t k = args.size();
  std::vector<std::size_t> idx(k, 0);
  std::vector<const Monomial*> exps(k);
  std::vector<LaurentPoly::Term> out;
  while (true) {
    Rational w(1);
    for (std::size_t j = 0; j < k; ++j) {
      const auto& term = args[j].terms()[idx[j]];
      exps[j] = &term.first;
      w *= term.second;
    }
    eval_monomials(psi, exps, w, out);
    std::size_t j = k;
    while (j > 0) {
      --j;
      if (++idx[j] < args[j].size()) break;
      idx[j] = 0;
      if (j == 0) return LaurentPoly::from_terms(n, std::move(out));
    }
    if (k == 0) return LaurentPoly::from_terms(n, std::move(out));
  }
}

Cochain normalize(const Cochain& psi) {
  return Cochain::from_terms(psi.arity(), psi.nvars(), psi.terms());
}

bool is_zero_map(const Cochain& psi) { return normalize(psi).terms().empty(); }

// ---- products and compositions ---------------------------------------------

Cochain cup(const Cochain& psi, const Cochain& phi, std::size_t budget) {
  require_same_dimension(psi.nvars(), phi.nvars(), "cup");
  BudgetGuard guard(budget, "cup");
  guard.add(psi.size() * phi.size());
  std::vector<Term> out;
  out.reserve(psi.size() * phi.size());
  for (const Term& a : psi.terms()) {
    for (const Term& b : phi.terms()) {
      Term t{a.coeff * b.coeff, a.shift + b.shift, a.derivs};
      t.derivs.insert(t.derivs.end(), b.derivs.begin(), b.derivs.end());
      out.push_back(std::move(t));
    }
  }
  return Cochain::from_terms(psi.arity() + phi.arity(), psi.nvars(), std::move(out));
}

Cochain permute(const Cochain& psi, std::span<const std::size_t> target) {
  const std::size_t k = psi.arity();
  if (target.size() != k) throw ArityError("permute: permutation length differs from arity");
  std::vector<bool> seen(k, false);
  for (std::size_t t : target) {
    if (t >= k || seen[t]) throw std::invalid_argument("permute: not a permutation");
    seen[t] = true;
  }
  std::vector<Term> out;
  out.reserve(psi.size());
  for (const Term& a : psi.terms()) {
    Term t{a.coeff, a.shift, std::vector<Monomial>(k)};
    for (std::size_t p = 0; p < k; ++p) t.derivs[target[p]] = a.derivs[p];
    out.push_back(std::move(t));
  }
  return Cochain::from_terms(k, psi.nvars(), std::move(out));
}

Cochain wedge(const Cochain& psi, const Cochain& phi, std::size_t budget) {
  require_same_dimension(psi.nvars(), phi.nvars(), "wedge");
  const Cochain base = cup(psi, phi, budget);
  const std::size_t k = psi.arity();
  const std::size_t l = phi.arity();
  BudgetGuard guard(budget, "wedge");
  std::vector<Term> out;
  for_each_shuffle(k, l, [&](std::span<const std::size_t> target, int sign) {
    guard.add(base.size());
    Cochain p = permute(base, target);
    for (Term t : p.terms()) {
      if (sign < 0) t.coeff = -t.coeff;
      out.push_back(std::move(t));
    }
  });
  return Cochain::from_terms(k + l, psi.nvars(), std::move(out));
}

Cochain wedge_prime(const Cochain& psi, const Cochain& phi, std::size_t budget) {
  require_same_dimension(psi.nvars(), phi.nvars(), "wedge_prime");
  if (psi.arity() == 0) throw ArityError("wedge_prime: psi must have arity >= 1");
  const Cochain base = slot_compose(psi, 1, phi, budget);
  const std::size_t k = psi.arity();
  const std::size_t l = phi.arity();
  BudgetGuard guard(budget, "wedge_prime");
  std::vector<Term> out;
  for_each_shuffle(l, k - 1, [&](std::span<const std::size_t> target, int sign) {
    guard.add(base.size());
    Cochain p = permute(base, target);
    for (Term t : p.terms()) {
      if (sign < 0) t.coeff = -t.coeff;
      out.push_back(std::move(t));
    }
  });
  return Cochain::from_terms(k + l - 1, psi.nvars(), std::move(out));
}

Cochain contract(const LaurentPoly& a, const Cochain& psi) {
  if (psi.arity() < 2) throw ArityError("contract: arity must be at least 2 (use eval for arity 1)");
  require_same_dimension(a.nvars(), psi.nvars(), "contract");
  std::vector<Term> out;
  std::map<Monomial, LaurentPoly> cache;
  for (const Term& t : psi.terms()) {
    auto it = cache.find(t.derivs[0]);
    if (it == cache.end()) it = cache.emplace(t.derivs[0], laurent::higher_partial(t.derivs[0], a)).first;
    for (const auto& [e, c] : it->second.terms()) {
      out.push_back(Term{t.coeff * c, t.shift + e,
                         std::vector<Monomial>(t.derivs.begin() + 1, t.derivs.end())});
    }
  }
  return Cochain::from_terms(psi.arity() - 1, psi.nvars(), std::move(out));
}

Cochain post_compose(const DiffOp& d, const Cochain& psi, std::size_t budget) {
  require_same_dimension(d.derivative.size(), psi.nvars(), "post_compose");
  BudgetGuard guard(budget, "post_compose");
  std::vector<Term> out;
  for (const Term& t : psi.terms()) leibniz_expand(t.coeff, t.shift, t.derivs, d.derivative, out, guard);
  for (Term& t : out) t.shift += d.coeff_exponent;
  return Cochain::from_terms(psi.arity(), psi.nvars(), std::move(out));
}

Cochain slot_compose(const Cochain& psi, std::size_t slot, const Cochain& phi, std::size_t budget) {
  require_slot(slot, psi.arity(), "slot_compose");
  require_same_dimension(psi.nvars(), phi.nvars(), "slot_compose");
  const std::size_t j = slot - 1;
  const std::size_t k = psi.arity();
  const std::size_t l = phi.arity();
  BudgetGuard guard(budget, "slot_compose");
  std::vector<Term> out;
  std::vector<Term> inner;
  for (const Term& a : psi.terms()) {
    inner.clear();
    BudgetGuard inner_guard(budget, "slot_compose");
    for (const Term& b : phi.terms()) {
      leibniz_expand(b.coeff, b.shift, b.derivs, a.derivs[j], inner, inner_guard);
    }
    guard.add(inner.size());
    for (const Term& b : inner) {
      Term t{a.coeff * b.coeff, a.shift + b.shift, {}};
      t.derivs.reserve(k + l - 1);
      t.derivs.insert(t.derivs.end(), a.derivs.begin(), a.derivs.begin() + j);
      t.derivs.insert(t.derivs.end(), b.derivs.begin(), b.derivs.end());
      t.derivs.insert(t.derivs.end(), a.derivs.begin() + j + 1, a.derivs.end());
      out.push_back(std::move(t));
    }
  }
  return Cochain::from_terms(k + l - 1, psi.nvars(), std::move(out));
}

Cochain expand_product_slot(const Cochain& psi, std::size_t slot, std::size_t budget) {
  require_slot(slot, psi.arity(), "expand_product_slot");
  const std::size_t j = slot - 1;
  const std::size_t n = psi.nvars();
  BudgetGuard guard(budget, "expand_product_slot");
  std::vector<Term> out;
  for (const Term& a : psi.terms()) {
    const Monomial& beta = a.derivs[j];
    // gamma runs over 0 <= gamma <= beta
    Monomial gamma(n);
    while (true) {
      guard.add();
      Term t{a.coeff * multi_binomial(beta, gamma), a.shift, {}};
      t.derivs.insert(t.derivs.end(), a.derivs.begin(), a.derivs.begin() + j);
      t.derivs.push_back(gamma);
      t.derivs.push_back(beta - gamma);
      t.derivs.insert(t.derivs.end(), a.derivs.begin() + j + 1, a.derivs.end());
      out.push_back(std::move(t));
      std::size_t v = 0;
      while (v < n && gamma[v] == beta[v]) gamma[v++] = 0;
      if (v == n) break;
      ++gamma[v];
    }
  }
  return Cochain::from_terms(psi.arity() + 1, n, std::move(out));
}

// ---- vector fields and rho -------------------------------------------------

DerivationVectorField::DerivationVectorField(std::vector<LaurentPoly> components)
    : components_(std::move(components)) {
  for (const auto& c : components_) {
    require_same_dimension(components_.size(), c.nvars(), "DerivationVectorField");
  }
}

DerivationVectorField DerivationVectorField::zero(std::size_t n) {
  return DerivationVectorField(std::vector<LaurentPoly>(n, LaurentPoly(n)));
}

DerivationVectorField DerivationVectorField::basis(const LaurentPoly& u, std::size_t var) {
  DerivationVectorField x = zero(u.nvars());
  if (var < 1 || var > u.nvars()) throw DimensionError("DerivationVectorField::basis: bad index");
  x.components_[var - 1] = u;
  return x;
}

LaurentPoly DerivationVectorField::apply(const LaurentPoly& u) const {
  require_same_dimension(nvars(), u.nvars(), "DerivationVectorField::apply");
  LaurentPoly acc(nvars());
  for (std::size_t i = 0; i < nvars(); ++i) {
    if (!components_[i].is_zero()) acc += components_[i] * laurent::partial(i + 1, u);
  }
  return acc;
}

Cochain DerivationVectorField::to_cochain() const {
  const std::size_t n = nvars();
  std::vector<Term> out;
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [e, c] : components_[i].terms()) {
      out.push_back(Term{c, e, {Monomial::unit(n, i + 1)}});
    }
  }
  return Cochain::from_terms(1, n, std::move(out));
}

bool DerivationVectorField::is_constant() const {
  return std::all_of(components_.begin(), components_.end(), [](const LaurentPoly& c) {
    return c.is_zero() || (c.is_monomial() && c.terms()[0].first.is_zero());
  });
}

DerivationVectorField DerivationVectorField::operator+(const DerivationVectorField& o) const {
  require_same_dimension(nvars(), o.nvars(), "DerivationVectorField::+");
  std::vector<LaurentPoly> c = components_;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.components_[i];
  return DerivationVectorField(std::move(c));
}

DerivationVectorField DerivationVectorField::operator-(const DerivationVectorField& o) const {
  require_same_dimension(nvars(), o.nvars(), "DerivationVectorField::-");
  std::vector<LaurentPoly> c = components_;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] -= o.components_[i];
  return DerivationVectorField(std::move(c));
}

Cochain rho(std::size_t var, const Cochain& psi) {
  const std::size_t n = psi.nvars();
  const Monomial e = Monomial::unit(n, var);
  std::vector<Term> out;
  for (const Term& t : psi.terms()) {
    Exponent a = t.shift[var - 1];
    if (a == 0) continue;
    out.push_back(Term{t.coeff * Rational(a), t.shift - e, t.derivs});
  }
  return Cochain::from_terms(psi.arity(), n, std::move(out));
}

Cochain rho(const DerivationVectorField& x, const Cochain& psi) {
  require_same_dimension(x.nvars(), psi.nvars(), "rho");
  if (!x.is_constant()) {
    throw std::invalid_argument("rho: closed form needs a constant field; use rho_eval");
  }
  Cochain acc(psi.arity(), psi.nvars());
  for (std::size_t i = 1; i <= x.nvars(); ++i) {
    Rational c = laurent::pr(x.component(i));
    if (!c.is_zero()) acc += c * rho(i, psi);
  }
  return acc;
}

LaurentPoly rho_eval(const DerivationVectorField& x, const Cochain& psi,
                     std::span<const LaurentPoly> args) {
  LaurentPoly acc = x.apply(eval(psi, args));
  std::vector<LaurentPoly> shifted(args.begin(), args.end());
  for (std::size_t l = 0; l < args.size(); ++l) {
    shifted[l] = x.apply(args[l]);
    acc -= eval(psi, shifted);
    shifted[l] = args[l];
  }
  return acc;
}

// ---- support ---------------------------------------------------------------

namespace {

std::vector<Monomial> nonnegative_monomials(std::size_t n, Exponent max_degree) {
  std::vector<Monomial> out;
  Monomial m(n);
  auto rec = [&](auto&& self, std::size_t k, Exponent left) -> void {
    if (k == n) {
      out.push_back(m);
      return;
    }
    for (Exponent v = 0; v <= left; ++v) {
      m[k] = v;
      self(self, k + 1, left - v);
    }
    m[k] = 0;
  };
  rec(rec, 0, max_degree);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<SupportEntry> support(const Cochain& psi, Exponent max_degree, std::size_t budget) {
  const Exponent order = psi.max_order();
  if (max_degree < order) {
    throw WindowError("support: window degree " + std::to_string(max_degree) +
                          " is below the differential order " + std::to_string(order),
                      static_cast<long>(order));
  }
  const std::size_t n = psi.nvars();
  const std::size_t k = psi.arity();
  const std::vector<Monomial> cands = nonnegative_monomials(n, max_degree);
  std::size_t total = 1;
  for (std::size_t j = 0; j < k; ++j) {
    if (total > budget / std::max<std::size_t>(cands.size(), 1)) {
      throw ResourceError("support: window has too many tuples", total * cands.size());
    }
    total *= cands.size();
  }
  std::vector<SupportEntry> out;
  std::vector<std::size_t> idx(k, 0);
  std::vector<const Monomial*> exps(k);
  std::vector<LaurentPoly::Term> buf;
  const Monomial zero(n);
  for (std::size_t count = 0; count < total; ++count) {
    for (std::size_t j = 0; j < k; ++j) exps[j] = &cands[idx[j]];
    buf.clear();
    eval_monomials(psi, exps, Rational(1), buf);
    Rational value(0);
    for (const auto& [e, c] : buf) {
      if (e == zero) value += c;
    }
    if (!value.is_zero()) {
      SupportEntry s{{}, value};
      for (std::size_t j = 0; j < k; ++j) s.exponents.push_back(*exps[j]);
      out.push_back(std::move(s));
    }
    for (std::size_t j = k; j > 0; --j) {
      if (++idx[j - 1] < cands.size()) break;
      idx[j - 1] = 0;
    }
  }
  return out;
}

LaurentPoly reconstruct_from_support(std::size_t n, std::span<const SupportEntry> supp,
                                     std::span<const LaurentPoly> args) {
  LaurentPoly acc(n);
  for (const SupportEntry& s : supp) {
    if (s.exponents.size() != args.size()) throw ArityError("reconstruct_from_support: arity mismatch");
    LaurentPoly prod = LaurentPoly::constant(n, s.value);
    for (std::size_t j = 0; j < args.size(); ++j) {
      prod = prod * laurent::scale(Rational(1) / multi_factorial(s.exponents[j]),
                                   laurent::higher_partial(s.exponents[j], args[j]));
    }
    acc += prod;
  }
  return acc;
}

std::optional<std::vector<LaurentPoly>> find_nonzero_witness(const Cochain& psi,
                                                             std::uint64_t seed,
                                                             std::size_t budget) {
  const Cochain c = normalize(psi);
  if (c.terms().empty()) return std::nullopt;
  const std::size_t n = c.nvars();
  const std::size_t k = c.arity();
  Exponent d = 0;
  for (const Term& t : c.terms()) {
    for (const Monomial& b : t.derivs) {
      for (Exponent v : b) d = std::max(d, v);
    }
  }
  auto to_args = [&](const std::vector<Monomial>& ms) {
    std::vector<LaurentPoly> args;
    for (const Monomial& m : ms) args.push_back(LaurentPoly::monomial(m));
    return args;
  };

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Exponent> dist(-2, d + 2);
  std::vector<Monomial> ms(k, Monomial(n));
  for (int attempt = 0; attempt < 256; ++attempt) {
    for (auto& m : ms) {
      for (std::size_t v = 0; v < n; ++v) m[v] = dist(rng);
    }
    auto args = to_args(ms);
    if (!eval(c, args).is_zero()) return args;
  }

  // Exhaustive grid {0..d}^(n*k): a nonzero cochain cannot vanish on all of it.
  const std::size_t cells = n * k;
  std::size_t total = 1;
  for (std::size_t i = 0; i < cells; ++i) {
    if (total > budget / static_cast<std::size_t>(d + 1)) {
      throw ResourceError("find_nonzero_witness: grid too large", total * (d + 1));
    }
    total *= static_cast<std::size_t>(d + 1);
  }
  std::vector<Exponent> flat(cells, 0);
  for (std::size_t count = 0; count < total; ++count) {
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t v = 0; v < n; ++v) ms[j][v] = flat[j * n + v];
    }
    auto args = to_args(ms);
    if (!eval(c, args).is_zero()) return args;
    for (std::size_t i = cells; i > 0; --i) {
      if (++flat[i - 1] <= d) break;
      flat[i - 1] = 0;
    }
  }
  throw std::logic_error("find_nonzero_witness: nonzero normal form vanished on the full grid");
}

// ---- serialization ---------------------------------------------------------

nlohmann::json to_json(const Cochain& psi) {
  nlohmann::json terms = nlohmann::json::array();
  const Monomial zero(psi.nvars());
  for (const Term& t : psi.terms()) {
    nlohmann::json slots = nlohmann::json::array();
    for (std::size_t j = 0; j < t.derivs.size(); ++j) {
      const Monomial& a = j == 0 ? t.shift : zero;
      slots.push_back({std::vector<Exponent>(a.begin(), a.end()),
                       std::vector<Exponent>(t.derivs[j].begin(), t.derivs[j].end())});
    }
    terms.push_back({t.coeff.to_string(), slots});
  }
  return {{"arity", psi.arity()}, {"n", psi.nvars()}, {"terms", terms}};
}

Cochain cochain_from_json(const nlohmann::json& j) {
  const std::size_t arity = j.at("arity").get<std::size_t>();
  const std::size_t n = j.at("n").get<std::size_t>();
  std::vector<Term> terms;
  for (const auto& jt : j.at("terms")) {
    Term t{Rational::parse(jt.at(0).get<std::string>()), Monomial(n), {}};
    for (const auto& slot : jt.at(1)) {
      auto a = slot.at(0).get<std::vector<Exponent>>();
      auto b = slot.at(1).get<std::vector<Exponent>>();
      if (a.size() != n || b.size() != n) throw DimensionError("cochain_from_json: bad exponent length");
      t.shift += Monomial(std::span<const Exponent>(a));
      t.derivs.emplace_back(std::span<const Exponent>(b));
    }
    terms.push_back(std::move(t));
  }
  return Cochain::from_terms(arity, n, std::move(terms));
}

std::string describe(const Cochain& psi) {
  std::ostringstream os;
  os << psi.arity() << "-ary cochain over " << psi.nvars() << " variables, " << psi.size()
     << " terms\n";
  for (const Term& t : psi.terms()) {
    os << "  " << t.coeff << " * x^" << t.shift.to_string();
    for (std::size_t j = 0; j < t.derivs.size(); ++j) {
      os << " * d^" << t.derivs[j].to_string() << "(u" << (j + 1) << ")";
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace jacalg::cochain
