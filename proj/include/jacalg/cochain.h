#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "jacalg/laurent.h"

/// Closed symbolic representation of multilinear maps U x ... x U -> U,
/// U = Q[x1^{±1},...,xn^{±1}], built from differential operators.
///
/// A term is `c * x^A * d^{b_1}(u_1) * ... * d^{b_k}(u_k)`. Over a field of
/// characteristic zero these differential monomials are linearly independent
/// as maps, so a cochain is the zero map iff its normal form has no terms.
/// All values are immutable after construction.
namespace jacalg::cochain {

using laurent::Exponent;
using laurent::LaurentPoly;
using laurent::Monomial;

inline constexpr std::size_t kDefaultBudget = 1'000'000;

/// u -> x^alpha d^beta(u).
struct DiffOp {
  Monomial coeff_exponent;
  Monomial derivative;

  static DiffOp identity(std::size_t n) { return {Monomial(n), Monomial(n)}; }
  /// d/dx_var (1-based).
  static DiffOp partial(std::size_t n, std::size_t var) {
    return {Monomial(n), Monomial::unit(n, var)};
  }

  LaurentPoly apply(const LaurentPoly& u) const;
  friend bool operator==(const DiffOp&, const DiffOp&) = default;
};

struct Term {
  Rational coeff;
  Monomial shift;
  std::vector<Monomial> derivs;
};

class Cochain {
 public:
  Cochain() = default;
  Cochain(std::size_t arity, std::size_t n) : arity_(arity), n_(n) {}

  /// Normalizes: merges equal (shift, derivs) keys and drops zeros.
  static Cochain from_terms(std::size_t arity, std::size_t n, std::vector<Term> terms);
  /// One term `c * prod_j slots[j](u_j)`; the slot coefficient monomials
  /// are folded into the term's shift.
  static Cochain from_slots(std::size_t n, const Rational& c, std::span<const DiffOp> slots);
  /// The 1-cochain u -> u.
  static Cochain identity(std::size_t n);
  /// The 1-cochain u -> d_var(u).
  static Cochain partial(std::size_t n, std::size_t var);
  static Cochain from_diffop(std::size_t n, const Rational& c, const DiffOp& op);

  std::size_t arity() const noexcept { return arity_; }
  std::size_t nvars() const noexcept { return n_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }

  /// Largest |beta| over all slots of all terms.
  Exponent max_order() const;
  /// True when every term has a constant coefficient (rho(d_i) = 0 for all i).
  bool is_constant_coefficient() const;

  Cochain operator-() const;
  Cochain& operator+=(const Cochain& o);
  Cochain& operator-=(const Cochain& o);
  friend Cochain operator+(Cochain a, const Cochain& b) { return a += b; }
  friend Cochain operator-(Cochain a, const Cochain& b) { return a -= b; }
  friend Cochain operator*(const Rational& c, const Cochain& p);

  friend bool operator==(const Cochain& a, const Cochain& b);

 private:
  std::size_t arity_ = 0;
  std::size_t n_ = 0;
  std::vector<Term> terms_;
};

/// Sum of the terms' values at `args`. Throws ArityError / DimensionError.
LaurentPoly eval(const Cochain& psi, std::span<const LaurentPoly> args);

Cochain normalize(const Cochain& psi);
bool is_zero_map(const Cochain& psi);

/// (psi ⌣ phi)(u_1..u_{k+l}) = psi(u_1..u_k) * phi(u_{k+1}..u_{k+l}).
Cochain cup(const Cochain& psi, const Cochain& phi, std::size_t budget = kDefaultBudget);
/// Reorders arguments: slot p of `psi` reads argument `target[p]` (0-based)
/// of the result. `target` must be a permutation.
Cochain permute(const Cochain& psi, std::span<const std::size_t> target);

/// Shuffle product with signs over (k,l)-shuffles in lexicographic order.
Cochain wedge(const Cochain& psi, const Cochain& phi, std::size_t budget = kDefaultBudget);
/// Signed sum over (l,k-1)-shuffles of psi(phi(...), ...).
Cochain wedge_prime(const Cochain& psi, const Cochain& phi, std::size_t budget = kDefaultBudget);

/// Freezes slot 1 at `a`. Requires arity >= 2.
Cochain contract(const LaurentPoly& a, const Cochain& psi);
/// x^alpha d^beta applied to the output of psi (generalized Leibniz rule).
Cochain post_compose(const DiffOp& d, const Cochain& psi, std::size_t budget = kDefaultBudget);
/// Substitutes phi's output into slot `slot` (1-based) of psi; phi's
/// arguments take the place of that slot.
Cochain slot_compose(const Cochain& psi, std::size_t slot, const Cochain& phi,
                     std::size_t budget = kDefaultBudget);
/// chi(.., u, u', ..) = psi(.., u*u', ..) at slot `slot` (1-based).
Cochain expand_product_slot(const Cochain& psi, std::size_t slot,
                            std::size_t budget = kDefaultBudget);

/// Vector field X = sum_i u_i d_i.
class DerivationVectorField {
 public:
  DerivationVectorField() = default;
  explicit DerivationVectorField(std::vector<LaurentPoly> components);
  static DerivationVectorField zero(std::size_t n);
  /// u * d_var.
  static DerivationVectorField basis(const LaurentPoly& u, std::size_t var);

  std::size_t nvars() const noexcept { return components_.size(); }
  const std::vector<LaurentPoly>& components() const noexcept { return components_; }
  const LaurentPoly& component(std::size_t var) const { return components_.at(var - 1); }

  LaurentPoly apply(const LaurentPoly& u) const;
  /// The same field as a 1-cochain.
  Cochain to_cochain() const;
  /// True when every component is a constant.
  bool is_constant() const;

  DerivationVectorField operator+(const DerivationVectorField& o) const;
  DerivationVectorField operator-(const DerivationVectorField& o) const;
  friend bool operator==(const DerivationVectorField&, const DerivationVectorField&) = default;

 private:
  std::vector<LaurentPoly> components_;
};

/// rho(d_var) psi in closed form.
Cochain rho(std::size_t var, const Cochain& psi);
/// rho(X) psi for a constant-coefficient field; throws std::invalid_argument otherwise.
Cochain rho(const DerivationVectorField& x, const Cochain& psi);
/// rho(X) psi evaluated at `args`, for any field X.
LaurentPoly rho_eval(const DerivationVectorField& x, const Cochain& psi,
                     std::span<const LaurentPoly> args);

struct SupportEntry {
  std::vector<Monomial> exponents;
  Rational value;
};

/// Tuples (alpha(1..k)) with alpha(j) >= 0, |alpha(j)| <= max_degree and
/// pr psi(x^alpha(1),...) != 0. Throws WindowError when max_degree is below
/// the differential order of psi, or ResourceError when the window exceeds
/// `budget` tuples.
std::vector<SupportEntry> support(const Cochain& psi, Exponent max_degree,
                                  std::size_t budget = kDefaultBudget);
/// sum over the support of prod_j d^alpha(j)(u_j)/alpha(j)! * value.
LaurentPoly reconstruct_from_support(std::size_t n, std::span<const SupportEntry> supp,
                                     std::span<const LaurentPoly> args);

/// A monomial tuple on which psi does not vanish, when one exists. Tries
/// seeded random tuples first, then sweeps the grid {0..d}^(n*k) with d the
/// largest single derivative exponent, which is complete for nonzero psi.
std::optional<std::vector<LaurentPoly>> find_nonzero_witness(
    const Cochain& psi, std::uint64_t seed = 0, std::size_t budget = kDefaultBudget);

/// {"arity", "n", "terms": [[coeff, [[alpha, beta], ...]], ...]}. The
/// term's coefficient monomial is attached to the first slot.
nlohmann::json to_json(const Cochain& psi);
Cochain cochain_from_json(const nlohmann::json& j);

/// Human-readable listing, one term per line.
std::string describe(const Cochain& psi);

}  // namespace jacalg::cochain
