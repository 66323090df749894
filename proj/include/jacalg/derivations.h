#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "jacalg/derivation_spec.h"
#include "jacalg/jacobi.h"

/// Derivation calculus for the Jacobian brackets: divergence, vector-field
/// brackets, interior maps, the named derivations and their checks.
namespace jacalg::derivations {

using cochain::DerivationVectorField;
using jacobi::Bracket;
using laurent::Exponent;

using LinearMap = std::function<LaurentPoly(const LaurentPoly&)>;

LinearMap as_map(const DerivationSpec& d);

/// Div X = sum_i d_i(u_i).
LaurentPoly div(const DerivationVectorField& x);
/// [X, Y] with components X(v_i) - Y(u_i).
DerivationVectorField commutator(const DerivationVectorField& x, const DerivationVectorField& y);
/// Div[X,Y] - X(Div Y) + Y(Div X).
LaurentPoly div_cocycle_residual(const DerivationVectorField& x, const DerivationVectorField& y);
/// The field as a first-order spec.
DerivationSpec from_field(const DerivationVectorField& x);

/// a -> w(u_1, ..., u_{k-1}, a).
struct Interior {
  Bracket bracket;
  std::vector<LaurentPoly> frozen;

  LaurentPoly operator()(const LaurentPoly& a) const;
  LinearMap map() const;
};

Interior interior(const Bracket& w, std::vector<LaurentPoly> us);

/// Interior map of jac_W(n) at u_1..u_n written as X + R with X a vector
/// field and R a multiplier: X_i = (-1)^{n+i} (id ^ d_1..d_i-hat..d_n)(us),
/// R = (-1)^n jac_S(us).
struct WDecomposition {
  DerivationVectorField x;
  LaurentPoly r;
};
WDecomposition interior_W_decompose(std::span<const LaurentPoly> us);

/// sum x_i d_i + n/(1-n); requires n >= 2.
DerivationSpec delta(std::size_t n);
/// x^alpha -> [alpha == -theta].
DerivationSpec d_theta(std::size_t n);
/// x^{-theta+e_i} d_i.
DerivationSpec d_i(std::size_t n, std::size_t i);
/// d_i(u) d_j - d_j(u) d_i; requires i != j.
DerivationVectorField d_ij(std::size_t n, std::size_t i, std::size_t j, const LaurentPoly& u);

/// "Delta", "Dtheta", "D1".."Dn", or the term syntax.
DerivationSpec named_derivation(std::string_view text, std::size_t n);

/// u -> X(u) + lambda Div(X) u.
DerivationSpec witt_map(const DerivationVectorField& x, std::size_t n, const Rational& lambda);

/// D o w - sum_i w o (D at slot i), as a cochain. D must be closed.
Cochain derivation_residual(const DerivationSpec& d, const Bracket& w,
                            std::size_t budget = cochain::kDefaultBudget);
/// The same residual evaluated directly at `args`, for any linear map.
LaurentPoly derivation_residual_eval(const LinearMap& d, const Bracket& w, std::span<const LaurentPoly> args);

struct GridReport {
  bool holds = true;
  std::size_t tuples_checked = 0;
  Exponent lo = 0;
  Exponent hi = 0;
  bool skew_reduced = false;
  std::optional<std::vector<LaurentPoly>> witness;
  LaurentPoly value;
};

/// Evaluates the derivation residual on every tuple of monomials with
/// exponents in [lo, hi]^n. For skew brackets only strictly increasing
/// tuples are visited: the residual is then alternating, so it vanishes on
/// repeated arguments and the rest follow by sign.
GridReport derivation_grid_check(const LinearMap& d, const Bracket& w, Exponent lo, Exponent hi,
                                 bool skew = true, std::size_t budget = 50'000'000);

struct ImageCertificate {
  bool in_image = false;
  std::vector<LaurentPoly> preimage;
  std::string certificate;
};

/// Whether x^gamma = jac_S(n)(v_1..v_n) for some Laurent polynomials.
ImageCertificate monomial_in_jacobian_image(const Monomial& gamma, std::size_t n);

struct OuterReport {
  enum class Verdict { Outer, Inconclusive };
  Verdict verdict = Verdict::Inconclusive;
  std::string reason;
};

/// Probes v = 1 and v = x_i that separate a derivation of jac_S(n) from
/// every interior one. Never certifies innerness.
OuterReport outer_witness_check(const LinearMap& d, std::size_t n);

struct CommuteReport {
  enum class Status { Holds, Violated, PreconditionFailed };
  Status status = Status::Holds;
  std::string detail;
  std::optional<LaurentPoly> witness;
  std::size_t checked = 0;
};

/// With D(1) = 0 and D(x_j) = 0, checks D(d_i u) = d_i D(u) for monomials
/// with exponents in [lo, hi]^n.
CommuteReport commute_with_partials_check(const LinearMap& d, std::size_t n, Exponent lo = -3,
                                          Exponent hi = 3);

}  // namespace jacalg::derivations
