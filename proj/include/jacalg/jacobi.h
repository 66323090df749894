#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "jacalg/cochain.h"
#include "jacalg/derivation_spec.h"

/// Jacobian brackets, the identity residuals built from them, and their
/// verification by normal form and by sampled evaluation.
namespace jacalg::jacobi {

using cochain::Cochain;
using cochain::DerivationVectorField;
using derivations::DerivationSpec;
using laurent::Exponent;
using laurent::LaurentPoly;
using laurent::Monomial;

using Evaluator = std::function<LaurentPoly(std::span<const LaurentPoly>)>;

/// A multilinear bracket on U with a closed cochain form (when available)
/// and a direct evaluator that does not go through that cochain.
struct Bracket {
  std::string name;
  std::size_t n = 0;  // ambient variable count
  std::size_t arity = 0;
  std::optional<Cochain> cochain;
  Evaluator evaluate;

  LaurentPoly operator()(std::span<const LaurentPoly> args) const;
  const Cochain& closed() const;  // throws std::invalid_argument when absent
};

/// d_1 ^ ... ^ d_n, arity n.
Bracket jac_S(std::size_t n);
/// id ^ d_1 ^ ... ^ d_n, arity n+1.
Bracket jac_W(std::size_t n);
/// sum_t c_t * (X_{t,1} ^ ... ^ X_{t,k}) for vector fields; all wedges must have the same length.
Bracket wedge_of_fields(std::size_t n,
                        std::vector<std::pair<Rational, std::vector<DerivationVectorField>>> terms);
/// Parses "jacS", "jacW" or "w:1^2+3^4-2^3" (sum of wedges of coordinate partials).
Bracket bracket_from_text(std::string_view text, std::size_t n);
Bracket custom_bracket(std::string name, Cochain c);
/// D ^ omega. Closed when D has no extraction terms.
Bracket build_bar_omega(const DerivationSpec& d, const Bracket& omega);
/// id ^ omega.
Bracket build_tilde_omega(const Bracket& omega);
/// Freezes the first argument at 1.
Bracket contract_unit(const Bracket& omega);

/// det(alpha_{i,j}) * x^{alpha(1)+...+alpha(n)-theta} for monomials x^alpha(j).
LaurentPoly jac_S_monomial(std::size_t n, std::span<const Monomial> rows);

/// Determinant of a square matrix of Laurent polynomials (permutation expansion).
LaurentPoly determinant(const std::vector<std::vector<LaurentPoly>>& m);

// ---- formulas ----------------------------------------------------------------

/// Expression tree over variables 1..m: a variable, a bracket applied to
/// subexpressions, or a product of subexpressions.
struct Expr {
  enum class Kind { Var, Apply, Mul };
  Kind kind = Kind::Var;
  std::size_t index = 0;  // variable (1-based) or bracket index
  std::vector<Expr> children;

  static Expr var(std::size_t i) { return {Kind::Var, i, {}}; }
  static Expr apply(std::size_t op, std::vector<Expr> args) { return {Kind::Apply, op, std::move(args)}; }
  static Expr mul(std::vector<Expr> factors) { return {Kind::Mul, 0, std::move(factors)}; }
};

/// Linear combination of multilinear expressions, each using every variable
/// exactly once.
class Formula {
 public:
  Formula() = default;
  Formula(std::string name, std::size_t nvars, std::vector<Bracket> ops)
      : name_(std::move(name)), nvars_(nvars), ops_(std::move(ops)) {}

  const std::string& name() const noexcept { return name_; }
  std::size_t nvars() const noexcept { return nvars_; }
  std::size_t ambient() const;
  const std::vector<Bracket>& ops() const noexcept { return ops_; }
  const std::vector<std::pair<Rational, Expr>>& terms() const noexcept { return terms_; }

  void add(const Rational& c, Expr e);
  /// Same formula with variable k replaced by variable args[k-1] (1-based).
  Formula substituted(std::span<const std::size_t> args) const;
  /// Appends c * other; the operator lists must agree.
  Formula& add_formula(const Rational& c, const Formula& other);

  Cochain compile(std::size_t budget = cochain::kDefaultBudget) const;
  /// Direct evaluation through each bracket's evaluator.
  LaurentPoly evaluate(std::span<const LaurentPoly> args) const;

 private:
  std::string name_;
  std::size_t nvars_ = 0;
  std::vector<Bracket> ops_;
  std::vector<std::pair<Rational, Expr>> terms_;
};

// ---- residuals ----------------------------------------------------------------

Formula fi1(const Bracket& w);
Formula fi2(const Bracket& w);
Formula leibniz(const Bracket& w);
Formula r_poly(const Bracket& w);
/// The 3-Lie forms over t1..t5.
Formula g3(const Bracket& w);
Formula h_poly(const Bracket& w);
Formula q_poly(const Bracket& w);
/// For a bracket of arity n+1 on n variables.
Formula w_unit(const Bracket& w_tilde);
Formula comb_27august(const Bracket& w);
Formula comb_22sept(const Bracket& w);
Formula comb_3h(const Bracket& w);
Formula comb_2q(const Bracket& w);

/// Looks up a residual by its command-line name (fi1, fi2, leibniz, r, h, q,
/// g3, w-unit, comb-27aug, comb-22sept, comb-3h, comb-2q).
Formula residual_by_name(std::string_view name, const Bracket& w);

Cochain residual_fi1(const Bracket& w, std::size_t budget = cochain::kDefaultBudget);
Cochain residual_fi2(const Bracket& w, std::size_t budget = cochain::kDefaultBudget);
Cochain residual_leibniz(const Bracket& w, std::size_t budget = cochain::kDefaultBudget);
Cochain residual_r(const Bracket& w, std::size_t n, std::size_t budget = cochain::kDefaultBudget);
Cochain residual_g3(const Bracket& w, std::size_t budget = cochain::kDefaultBudget);
Cochain residual_h(const Bracket& w, std::size_t budget = cochain::kDefaultBudget);
Cochain residual_q(const Bracket& w, std::size_t budget = cochain::kDefaultBudget);
Cochain residual_w_unit(const Bracket& w_tilde, std::size_t n, std::size_t budget = cochain::kDefaultBudget);
Cochain combination_27august(const Bracket& w, std::size_t budget = cochain::kDefaultBudget);
Cochain combination_22sept(const Bracket& w, std::size_t n, std::size_t budget = cochain::kDefaultBudget);
Cochain combination_3h(const Bracket& w, std::size_t budget = cochain::kDefaultBudget);
Cochain combination_2q(const Bracket& w, std::size_t budget = cochain::kDefaultBudget);

/// A skew-symmetric cochain of the given arity with small random terms.
Cochain random_skew_cochain(std::size_t n, std::size_t arity, std::uint64_t seed,
                            std::size_t base_terms = 2);

// ---- verification --------------------------------------------------------------

struct TupleSource {
  enum class Mode { Grid, Random };
  Mode mode = Mode::Random;
  Exponent lo = -3;
  Exponent hi = 3;
  /// Grid mode: bound on the total degree summed over the whole tuple.
  std::optional<Exponent> degree_cap;
  std::size_t count = 500;
  std::uint64_t seed = 0;

  static TupleSource grid(Exponent lo, Exponent hi, std::optional<Exponent> cap = std::nullopt);
  static TupleSource random(std::size_t count, Exponent lo, Exponent hi, std::uint64_t seed);

  /// Calls f on each monomial tuple until it returns false. Grid mode
  /// refuses more than 3 variables, 6 slots or 30 candidates per slot.
  void for_each(std::size_t n, std::size_t slots,
                const std::function<bool(std::span<const LaurentPoly>)>& f) const;
};

enum class Mode { Symbolic, Sampled, Both };

struct VerificationReport {
  std::string residual;
  std::string bracket;
  std::size_t n = 0;
  Mode mode = Mode::Both;
  std::string verdict;  // holds | counterexample | resource
  bool symbolic = false;  // verdict backed by the normal form
  std::optional<std::vector<LaurentPoly>> counterexample_args;
  std::optional<LaurentPoly> counterexample_value;
  std::size_t tuples_checked = 0;
  std::int64_t elapsed_ms = 0;
  std::uint64_t seed = 0;
  std::string detail;

  bool holds() const { return verdict == "holds"; }
  nlohmann::json to_json() const;
};

std::string mode_name(Mode m);
Mode parse_mode(std::string_view s);

/// Symbolic: normal form of the compiled residual. Sampled: direct evaluation
/// on every tuple from `source`. Both: runs both and requires agreement.
VerificationReport verify(const Formula& residual, Mode mode, const TupleSource& source,
                          std::size_t budget = cochain::kDefaultBudget, bool timing = false);

}  // namespace jacalg::jacobi
