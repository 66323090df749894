#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "jacalg/jacobi.h"

/// Degree-2 identities of a ternary bracket in five arguments:
/// f = sum l_{ab} w(t_a, t_b, w(t_c, t_d, t_e)) over outer pairs a < b, with
/// c < d < e the complement.
namespace jacalg::minident {

using jacobi::Bracket;
using jacobi::Formula;
using laurent::LaurentPoly;
using laurent::Monomial;

inline constexpr std::size_t kUnknowns = 10;

/// Column order 12, 13, 14, 23, 24, 15, 25, 34, 35, 45, so that the last
/// five columns come out free for the standard system.
const std::array<std::pair<int, int>, kUnknowns>& columns();
std::size_t column_of(int a, int b);
std::string column_name(std::size_t col);  // "l12"

using Vector = std::array<Rational, kUnknowns>;
using Tuple = std::array<LaurentPoly, 5>;

struct CandidateIdentity {
  std::string name;
  Vector lambda{};

  Formula to_formula(const Bracket& w) const;
  LaurentPoly evaluate(const Bracket& w, const Tuple& t) const;
};

/// One equation per monomial of the candidate values, divided by the
/// content of its entries.
struct Row {
  Vector coeffs{};
  Tuple tuple;
  Monomial monomial;
};

/// Values of the ten candidates at t (column order).
std::array<LaurentPoly, kUnknowns> candidate_values(const Bracket& w, const Tuple& t);
std::vector<Row> evaluate_row(const Bracket& w, const Tuple& t);

struct ExactSystem {
  std::vector<Row> rows;
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;
  /// Integer vectors with unit content, one per free column in order; the
  /// free entry is positive.
  std::vector<Vector> kernel;
};

/// Fraction-free elimination; kernel vectors are checked against every row.
ExactSystem solve(std::vector<Row> rows);
/// Rows for every tuple, then solve. `jobs` > 1 evaluates tuples in parallel;
/// the row order does not depend on it.
ExactSystem assemble_system(const Bracket& w, const std::vector<Tuple>& tuples, std::size_t jobs = 1);

std::size_t rank_of(const std::vector<Vector>& vectors);

/// The six probe tuples over K[x1,x2,x3] and their expected rows.
std::vector<Tuple> standard_tuples();
std::vector<Vector> standard_rows();
/// Monomial tuples with exponents in [0,2]^3.
std::vector<Tuple> random_tuples(std::size_t count, std::uint64_t seed);

/// f45, f35, f34, f25, f15.
std::vector<CandidateIdentity> known_basis();

/// Coordinates of a formula whose terms are all of the form
/// w(., ., w(., ., .)) up to argument order; throws std::invalid_argument
/// otherwise.
Vector lambda_coordinates(const Formula& f);

struct BasisMatch {
  bool members = false;    // every known vector is in the kernel
  bool same_span = false;  // and they span it
  std::string diff;
  bool matched() const { return members && same_span; }
};
BasisMatch match_basis(const ExactSystem& s);

struct Identification {
  std::string claim;
  bool holds = false;
};
/// f45 = g(t4,t5,t1,t2,t3), f35 = g(t3,t5,t1,t2,t4), f34 = -q,
/// f25 = -h(t2,t1,t3,t4,t5), f15 = -h, plus the 3h and 2q combinations.
std::vector<Identification> identifications();

nlohmann::json vector_to_json(const Vector& v);
nlohmann::json to_json(const ExactSystem& s, const BasisMatch& m);

}  // namespace jacalg::minident
