#include "jacalg/derivations.h"

#include <algorithm>
#include <array>
#include <unordered_map>

#include "jacalg/errors.h"

namespace jacalg::derivations {

using jacobi::determinant;

LinearMap as_map(const DerivationSpec& d) {
  return [d](const LaurentPoly& u) { return d.apply(u); };
}

LaurentPoly div(const DerivationVectorField& x) {
  LaurentPoly acc(x.nvars());
  for (std::size_t i = 1; i <= x.nvars(); ++i) acc += laurent::partial(i, x.component(i));
  return acc;
}

DerivationVectorField commutator(const DerivationVectorField& x, const DerivationVectorField& y) {
  laurent::require_same_dimension(x.nvars(), y.nvars(), "commutator");
  std::vector<LaurentPoly> c;
  for (std::size_t i = 1; i <= x.nvars(); ++i) c.push_back(x.apply(y.component(i)) - y.apply(x.component(i)));
  return DerivationVectorField(std::move(c));
}

LaurentPoly div_cocycle_residual(const DerivationVectorField& x, const DerivationVectorField& y) {
  return div(commutator(x, y)) - x.apply(div(y)) + y.apply(div(x));
}

DerivationSpec from_field(const DerivationVectorField& x) {
  const std::size_t n = x.nvars();
  std::vector<DerivationSpec::DiffTerm> terms;
  for (std::size_t i = 1; i <= n; ++i) {
    for (const auto& [e, c] : x.component(i).terms()) terms.push_back({c, DiffOp{e, Monomial::unit(n, i)}});
  }
  return DerivationSpec(n, std::move(terms));
}

LaurentPoly Interior::operator()(const LaurentPoly& a) const {
  std::vector<LaurentPoly> args = frozen;
  args.push_back(a);
  return bracket(args);
}

LinearMap Interior::map() const {
  return [self = *this](const LaurentPoly& a) { return self(a); };
}

Interior interior(const Bracket& w, std::vector<LaurentPoly> us) {
  if (us.size() + 1 != w.arity) {
    throw ArityError("interior: bracket of arity " + std::to_string(w.arity) + " needs " +
                     std::to_string(w.arity - 1) + " frozen arguments");
  }
  for (const auto& u : us) laurent::require_same_dimension(w.n, u.nvars(), "interior");
  return Interior{w, std::move(us)};
}

WDecomposition interior_W_decompose(std::span<const LaurentPoly> us) {
  const std::size_t n = us.size();
  if (n == 0) throw ArityError("interior_W_decompose: needs n >= 1 arguments");
  for (const auto& u : us) laurent::require_same_dimension(n, u.nvars(), "interior_W_decompose");
  const Rational sign_n(n % 2 == 0 ? 1 : -1);
  std::vector<LaurentPoly> comps;
  for (std::size_t i = 1; i <= n; ++i) {
    // rows: u, then d_j u for j != i
    std::vector<std::vector<LaurentPoly>> m;
    m.emplace_back(us.begin(), us.end());
    for (std::size_t j = 1; j <= n; ++j) {
      if (j == i) continue;
      std::vector<LaurentPoly> row;
      for (const auto& u : us) row.push_back(laurent::partial(j, u));
      m.push_back(std::move(row));
    }
    const Rational s = (n + i) % 2 == 0 ? Rational(1) : Rational(-1);
    comps.push_back(laurent::scale(s, determinant(m)));
  }
  LaurentPoly r = laurent::scale(sign_n, jacobi::jac_S(n)(us));
  return {DerivationVectorField(std::move(comps)), std::move(r)};
}

DerivationSpec delta(std::size_t n) {
  if (n < 2) throw DimensionError("delta: n must be at least 2");
  std::vector<DerivationSpec::DiffTerm> terms;
  for (std::size_t i = 1; i <= n; ++i) terms.push_back({Rational(1), DiffOp{Monomial::unit(n, i), Monomial::unit(n, i)}});
  const auto nn = static_cast<std::int64_t>(n);
  terms.push_back({Rational(nn, 1 - nn), DiffOp::identity(n)});
  return DerivationSpec(n, std::move(terms));
}

DerivationSpec d_theta(std::size_t n) {
  if (n < 1) throw DimensionError("d_theta: n must be at least 1");
  return DerivationSpec(n, {}, {{Rational(1), -Monomial::theta(n)}});
}

DerivationSpec d_i(std::size_t n, std::size_t i) {
  if (i < 1 || i > n) throw DimensionError("d_i: index out of range");
  const Monomial e = Monomial::unit(n, i);
  return DerivationSpec(n, {{Rational(1), DiffOp{e - Monomial::theta(n), e}}});
}

DerivationVectorField d_ij(std::size_t n, std::size_t i, std::size_t j, const LaurentPoly& u) {
  if (i < 1 || i > n || j < 1 || j > n) throw DimensionError("d_ij: index out of range");
  if (i == j) throw std::invalid_argument("d_ij: needs i != j");
  laurent::require_same_dimension(n, u.nvars(), "d_ij");
  std::vector<LaurentPoly> c(n, LaurentPoly(n));
  c[j - 1] = laurent::partial(i, u);
  c[i - 1] = -laurent::partial(j, u);
  return DerivationVectorField(std::move(c));
}

DerivationSpec named_derivation(std::string_view text, std::size_t n) {
  if (text == "Delta") return delta(n);
  if (text == "Dtheta") return d_theta(n);
  if (text.size() >= 2 && text[0] == 'D' &&
      std::all_of(text.begin() + 1, text.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    if (text.size() > 7) throw ParseError("derivation index too large", 1);
    const std::size_t i = std::stoul(std::string(text.substr(1)));
    if (i < 1 || i > n) throw ParseError("derivation index " + std::to_string(i) + " out of range", 1);
    return d_i(n, i);
  }
  return parse_derivation_terms(text, n);
}

DerivationSpec witt_map(const DerivationVectorField& x, std::size_t n, const Rational& lambda) {
  laurent::require_same_dimension(n, x.nvars(), "witt_map");
  std::vector<DerivationSpec::DiffTerm> mult;
  const LaurentPoly dx = div(x);
  for (const auto& [e, c] : dx.terms()) mult.push_back({lambda * c, DiffOp{e, Monomial(n)}});
  return from_field(x) + DerivationSpec(n, std::move(mult));
}

Cochain derivation_residual(const DerivationSpec& d, const Bracket& w, std::size_t budget) {
  if (!d.is_closed()) throw std::invalid_argument("derivation_residual: extraction terms need grid checking");
  laurent::require_same_dimension(d.nvars(), w.n, "derivation_residual");
  const Cochain& psi = w.closed();
  Cochain acc(psi.arity(), psi.nvars());
  for (const auto& t : d.diff_terms()) acc += t.coeff * cochain::post_compose(t.op, psi, budget);
  const Cochain dc = d.to_cochain();
  for (std::size_t i = 1; i <= psi.arity(); ++i) acc -= cochain::slot_compose(psi, i, dc, budget);
  return acc;
}

LaurentPoly derivation_residual_eval(const LinearMap& d, const Bracket& w, std::span<const LaurentPoly> args) {
  LaurentPoly acc = d(w(args));
  std::vector<LaurentPoly> a(args.begin(), args.end());
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = d(args[i]);
    acc -= w(a);
    a[i] = args[i];
  }
  return acc;
}

// ---- grid sweep ----------------------------------------------------------------

namespace {

constexpr std::size_t kMaxFast = 6;
using Key = std::array<Exponent, kMaxFast>;

struct KeyHash {
  std::size_t operator()(const Key& k) const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    for (Exponent e : k) h = (h ^ static_cast<std::size_t>(e)) * 0x100000001b3ULL;
    return h;
  }
};

using IntTerms = std::vector<std::pair<Key, std::int64_t>>;

Key to_key(const Monomial& m) {
  Key k{};
  for (std::size_t i = 0; i < m.size(); ++i) k[i] = m[i];
  return k;
}

Monomial from_key(const Key& k, std::size_t n) {
  Monomial m(n);
  for (std::size_t i = 0; i < n; ++i) m[i] = k[i];
  return m;
}

/// Integer image of a polynomial; nullopt when a coefficient is not an int64.
std::optional<IntTerms> int_terms(const LaurentPoly& p) {
  IntTerms out;
  for (const auto& [e, c] : p.terms()) {
    if (!c.is_integer()) return std::nullopt;
    try {
      out.emplace_back(to_key(e), c.to_int64());
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  return out;
}

/// Evaluates an integer-coefficient cochain on monomial arguments.
class MonomialKernel {
 public:
  static std::optional<MonomialKernel> make(const Cochain& c) {
    if (c.nvars() > kMaxFast) return std::nullopt;
    MonomialKernel k;
    k.n_ = c.nvars();
    k.arity_ = c.arity();
    for (const auto& t : c.terms()) {
      if (!t.coeff.is_integer()) return std::nullopt;
      Term kt{t.coeff.to_int64(), to_key(t.shift), {}};
      for (const auto& b : t.derivs) kt.derivs.push_back(to_key(b));
      k.terms_.push_back(std::move(kt));
    }
    return k;
  }

  /// Appends weight * psi(x^args) to out; false on overflow.
  bool eval(const Key* const* args, std::int64_t weight, IntTerms& out) const {
    for (const Term& t : terms_) {
      std::int64_t f = t.coeff;
      if (__builtin_mul_overflow(f, weight, &f)) return false;
      Key e = t.shift;
      for (std::size_t j = 0; j < arity_ && f != 0; ++j) {
        const Key& a = *args[j];
        const Key& b = t.derivs[j];
        for (std::size_t v = 0; v < n_; ++v) {
          for (Exponent s = 0; s < b[v]; ++s) {
            if (__builtin_mul_overflow(f, a[v] - s, &f)) return false;
          }
          e[v] += a[v] - b[v];
        }
      }
      if (f != 0) out.emplace_back(e, f);
    }
    return true;
  }

 private:
  struct Term {
    std::int64_t coeff;
    Key shift;
    std::vector<Key> derivs;
  };
  std::size_t n_ = 0;
  std::size_t arity_ = 0;
  std::vector<Term> terms_;
};

bool all_cancel(IntTerms& t) {
  std::sort(t.begin(), t.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::size_t i = 0;
  while (i < t.size()) {
    std::size_t j = i;
    __int128 s = 0;
    while (j < t.size() && t[j].first == t[i].first) s += t[j++].second;
    if (s != 0) return false;
    i = j;
  }
  return true;
}

}  // namespace

GridReport derivation_grid_check(const LinearMap& d, const Bracket& w, Exponent lo, Exponent hi, bool skew,
                                 std::size_t budget) {
  const std::size_t n = w.n;
  const std::size_t k = w.arity;
  GridReport rep;
  rep.lo = lo;
  rep.hi = hi;
  rep.skew_reduced = skew;

  std::vector<Monomial> cands;
  {
    Monomial m(n);
    auto rec = [&](auto&& self, std::size_t v) -> void {
      if (v == n) {
        cands.push_back(m);
        return;
      }
      for (Exponent e = lo; e <= hi; ++e) {
        m[v] = e;
        self(self, v + 1);
      }
    };
    rec(rec, 0);
  }
  double total = 1;
  for (std::size_t j = 0; j < k; ++j) {
    total *= skew ? static_cast<double>(cands.size() - j) / static_cast<double>(j + 1)
                  : static_cast<double>(cands.size());
  }
  if (total > static_cast<double>(budget)) {
    throw ResourceError("derivation_grid_check: grid too large", static_cast<std::size_t>(total));
  }

  std::optional<MonomialKernel> kernel;
  if (w.cochain) kernel = MonomialKernel::make(*w.cochain);
  std::vector<std::optional<IntTerms>> images;
  std::vector<Key> keys;
  std::unordered_map<Key, std::optional<IntTerms>, KeyHash> cache;
  if (kernel) {
    for (const Monomial& m : cands) {
      images.push_back(int_terms(d(LaurentPoly::monomial(m))));
      keys.push_back(to_key(m));
    }
  }
  auto image_of = [&](const Key& e) -> const std::optional<IntTerms>& {
    auto it = cache.find(e);
    if (it == cache.end()) it = cache.emplace(e, int_terms(d(LaurentPoly::monomial(from_key(e, n))))).first;
    return it->second;
  };

  std::vector<std::size_t> idx(k);
  std::vector<LaurentPoly> args(k);
  std::vector<const Key*> kargs(k);
  IntTerms out, tmp;

  auto slow = [&]() {
    for (std::size_t j = 0; j < k; ++j) args[j] = LaurentPoly::monomial(cands[idx[j]]);
    return derivation_residual_eval(d, w, args);
  };
  auto fast = [&]() -> std::optional<bool> {
    out.clear();
    tmp.clear();
    for (std::size_t j = 0; j < k; ++j) kargs[j] = &keys[idx[j]];
    if (!kernel->eval(kargs.data(), 1, tmp)) return std::nullopt;
    for (const auto& [e, c] : tmp) {
      const auto& img = image_of(e);
      if (!img) return std::nullopt;
      for (const auto& [e2, c2] : *img) {
        std::int64_t f;
        if (__builtin_mul_overflow(c, c2, &f)) return std::nullopt;
        out.emplace_back(e2, f);
      }
    }
    for (std::size_t j = 0; j < k; ++j) {
      const auto& img = images[idx[j]];
      if (!img) return std::nullopt;
      for (const auto& [g, c] : *img) {
        kargs[j] = &g;
        if (!kernel->eval(kargs.data(), -c, out)) return std::nullopt;
      }
      kargs[j] = &keys[idx[j]];
    }
    return all_cancel(out);
  };

  bool stop = false;
  auto visit = [&]() {
    ++rep.tuples_checked;
    std::optional<bool> zero;
    if (kernel) zero = fast();
    if (zero && *zero) return;
    LaurentPoly v = slow();
    if (v.is_zero()) return;
    rep.holds = false;
    rep.witness = args;
    rep.value = std::move(v);
    stop = true;
  };
  auto rec = [&](auto&& self, std::size_t j, std::size_t start) -> void {
    if (stop) return;
    if (j == k) {
      visit();
      return;
    }
    for (std::size_t c = skew ? start : 0; c < cands.size() && !stop; ++c) {
      idx[j] = c;
      self(self, j + 1, skew ? c + 1 : 0);
    }
  };
  rec(rec, 0, 0);
  return rep;
}

// ---- Jacobian image, outerness, commutation ---------------------------------------

ImageCertificate monomial_in_jacobian_image(const Monomial& gamma, std::size_t n) {
  laurent::require_same_dimension(n, gamma.size(), "monomial_in_jacobian_image");
  ImageCertificate cert;
  std::size_t i = 0;
  while (i < n && gamma[i] == -1) ++i;
  if (i == n) {
    cert.in_image = false;
    cert.certificate =
        "jac_S(x^a(1),...,x^a(n)) = det(a_ij) x^(a(1)+...+a(n)-theta); reaching x^-theta forces the "
        "rows a(1..n) to sum to zero, so det(a_ij) = 0 and the coefficient of x^-theta in any "
        "Jacobian vanishes";
    return cert;
  }
  for (std::size_t j = 1; j <= n; ++j) {
    if (j == i + 1) {
      cert.preimage.push_back(LaurentPoly::monomial(gamma + Monomial::unit(n, j), Rational(1) / Rational(gamma[i] + 1)));
    } else {
      cert.preimage.push_back(LaurentPoly::variable(n, j));
    }
  }
  if (!(jacobi::jac_S(n)(cert.preimage) == LaurentPoly::monomial(gamma))) {
    throw std::logic_error("monomial_in_jacobian_image: preimage check failed");
  }
  cert.in_image = true;
  cert.certificate = "preimage verified by evaluation (slot " + std::to_string(i + 1) + ")";
  return cert;
}

OuterReport outer_witness_check(const LinearMap& d, std::size_t n) {
  if (n < 2) throw DimensionError("outer_witness_check: n must be at least 2");
  OuterReport rep;
  const LaurentPoly one = LaurentPoly::constant(n, Rational(1));
  const LaurentPoly d1 = d(one);
  if (!d1.is_zero()) {
    rep.verdict = OuterReport::Verdict::Outer;
    rep.reason = "D(1) = " + laurent::format_poly(d1) + " but every interior map kills 1";
    return rep;
  }
  const Monomial theta = Monomial::theta(n);
  for (std::size_t i = 1; i <= n; ++i) {
    const Monomial target = Monomial::unit(n, i) - theta;
    const Rational c = laurent::coeff_at(d(LaurentPoly::variable(n, i)), target);
    if (!c.is_zero()) {
      rep.verdict = OuterReport::Verdict::Outer;
      rep.reason = "coefficient of x^" + target.to_string() + " in D(x" + std::to_string(i) + ") is " +
                   c.to_string() + ", but interior values at x" + std::to_string(i) +
                   " are (n-1)-Jacobians in the other variables, which never reach that monomial";
      return rep;
    }
  }
  rep.reason = "D(1) = 0 and no x^(-theta+e_i) obstruction in D(x_i)";
  return rep;
}

CommuteReport commute_with_partials_check(const LinearMap& d, std::size_t n, Exponent lo, Exponent hi) {
  CommuteReport rep;
  const LaurentPoly d1 = d(LaurentPoly::constant(n, Rational(1)));
  if (!d1.is_zero()) {
    rep.status = CommuteReport::Status::PreconditionFailed;
    rep.detail = "D(1) = " + laurent::format_poly(d1);
    return rep;
  }
  for (std::size_t j = 1; j <= n; ++j) {
    const LaurentPoly dx = d(LaurentPoly::variable(n, j));
    if (!dx.is_zero()) {
      rep.status = CommuteReport::Status::PreconditionFailed;
      rep.detail = "D(x" + std::to_string(j) + ") = " + laurent::format_poly(dx);
      return rep;
    }
  }
  Monomial m(n);
  for (std::size_t v = 0; v < n; ++v) m[v] = lo;
  while (true) {
    const LaurentPoly u = LaurentPoly::monomial(m);
    const LaurentPoly du = d(u);
    for (std::size_t i = 1; i <= n; ++i) {
      ++rep.checked;
      if (!(d(laurent::partial(i, u)) == laurent::partial(i, du))) {
        rep.status = CommuteReport::Status::Violated;
        rep.detail = "D(d" + std::to_string(i) + " u) != d" + std::to_string(i) + " D(u)";
        rep.witness = u;
        return rep;
      }
    }
    std::size_t v = 0;
    while (v < n && m[v] == hi) m[v++] = lo;
    if (v == n) break;
    ++m[v];
  }
  rep.detail = "commutes on [" + std::to_string(lo) + "," + std::to_string(hi) + "]^" + std::to_string(n);
  return rep;
}

}  // namespace jacalg::derivations
