#include "jacalg/minident.h"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <thread>

#include <gmpxx.h>

#include "jacalg/errors.h"

namespace jacalg::minident {

namespace {

using jacobi::Expr;

constexpr std::array<std::pair<int, int>, kUnknowns> kColumns{
    {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {1, 5}, {2, 5}, {3, 4}, {3, 5}, {4, 5}}};

std::array<int, 3> complement(int a, int b) {
  std::array<int, 3> out{};
  std::size_t k = 0;
  for (int i = 1; i <= 5; ++i) {
    if (i != a && i != b) out[k++] = i;
  }
  return out;
}

LaurentPoly x(int i) { return LaurentPoly::variable(3, static_cast<std::size_t>(i)); }

LaurentPoly x3_squared() { return LaurentPoly::monomial(Monomial{0, 0, 2}); }

Vector make_vector(std::initializer_list<std::pair<int, int>> entries) {
  // entries: (column label ab, value), e.g. {12, -1}
  Vector v{};
  for (auto [label, value] : entries) v[column_of(label / 10, label % 10)] = Rational(value);
  return v;
}

/// Divides by the gcd of the (integer-scaled) entries; sign is kept.
Vector primitive(const Vector& v) {
  mpz_class den = 1;
  for (const auto& c : v) {
    const mpq_class q = c.to_mpq();
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den_mpz_t());
  }
  std::array<mpz_class, kUnknowns> ints;
  mpz_class g = 0;
  for (std::size_t i = 0; i < kUnknowns; ++i) {
    const mpq_class q = v[i].to_mpq() * den;
    ints[i] = q.get_num();
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), ints[i].get_mpz_t());
  }
  if (g == 0) return v;
  Vector out{};
  for (std::size_t i = 0; i < kUnknowns; ++i) out[i] = Rational(mpq_class(ints[i] / g));
  return out;
}

Rational dot(const Vector& a, const Vector& b) {
  Rational s;
  for (std::size_t i = 0; i < kUnknowns; ++i) {
    if (!a[i].is_zero() && !b[i].is_zero()) s += a[i] * b[i];
  }
  return s;
}

struct Echelon {
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;
  std::vector<std::array<mpz_class, kUnknowns>> rows;  // first `rank` rows in echelon form
};

/// Bareiss elimination on integer-scaled rows.
Echelon bareiss(const std::vector<Vector>& vectors) {
  Echelon e;
  for (const auto& v : vectors) {
    const Vector p = primitive(v);
    std::array<mpz_class, kUnknowns> r;
    for (std::size_t i = 0; i < kUnknowns; ++i) r[i] = p[i].to_mpq().get_num();
    e.rows.push_back(std::move(r));
  }
  const std::size_t m = e.rows.size();
  mpz_class prev = 1;
  std::size_t row = 0;
  for (std::size_t col = 0; col < kUnknowns && row < m; ++col) {
    std::size_t p = row;
    while (p < m && e.rows[p][col] == 0) ++p;
    if (p == m) continue;
    std::swap(e.rows[row], e.rows[p]);
    const mpz_class pivot = e.rows[row][col];
    for (std::size_t i = row + 1; i < m; ++i) {
      for (std::size_t j = col + 1; j < kUnknowns; ++j) {
        mpz_class t = pivot * e.rows[i][j] - e.rows[i][col] * e.rows[row][j];
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        e.rows[i][j] = std::move(t);
      }
      e.rows[i][col] = 0;
    }
    prev = pivot;
    e.pivots.push_back(col);
    ++row;
  }
  e.rank = row;
  e.rows.resize(e.rank);
  return e;
}

int sort_with_sign(int* first, int* last) {
  int sign = 1;
  for (int* i = first; i != last; ++i) {
    for (int* j = i + 1; j != last; ++j) {
      if (*j < *i) {
        std::swap(*i, *j);
        sign = -sign;
      } else if (*j == *i) {
        return 0;
      }
    }
  }
  return sign;
}

bool is_var(const Expr& e) { return e.kind == Expr::Kind::Var; }

}  // namespace

const std::array<std::pair<int, int>, kUnknowns>& columns() { return kColumns; }

std::size_t column_of(int a, int b) {
  if (a > b) std::swap(a, b);
  for (std::size_t c = 0; c < kUnknowns; ++c) {
    if (kColumns[c] == std::pair{a, b}) return c;
  }
  throw std::invalid_argument("column_of: no column for pair " + std::to_string(a) + "," + std::to_string(b));
}

std::string column_name(std::size_t col) {
  return "l" + std::to_string(kColumns.at(col).first) + std::to_string(kColumns.at(col).second);
}

Formula CandidateIdentity::to_formula(const Bracket& w) const {
  Formula f(name.empty() ? "candidate" : name, 5, {w});
  for (std::size_t c = 0; c < kUnknowns; ++c) {
    if (lambda[c].is_zero()) continue;
    const auto [a, b] = kColumns[c];
    const auto in = complement(a, b);
    auto v = [](int i) { return Expr::var(static_cast<std::size_t>(i)); };
    f.add(lambda[c], Expr::apply(0, {v(a), v(b), Expr::apply(0, {v(in[0]), v(in[1]), v(in[2])})}));
  }
  return f;
}

LaurentPoly CandidateIdentity::evaluate(const Bracket& w, const Tuple& t) const {
  const auto values = candidate_values(w, t);
  LaurentPoly out(w.n);
  for (std::size_t c = 0; c < kUnknowns; ++c) {
    if (!lambda[c].is_zero()) out += lambda[c] * values[c];
  }
  return out;
}

std::array<LaurentPoly, kUnknowns> candidate_values(const Bracket& w, const Tuple& t) {
  if (w.arity != 3) throw ArityError("minident: the bracket must be ternary");
  std::array<LaurentPoly, kUnknowns> out;
  for (std::size_t c = 0; c < kUnknowns; ++c) {
    const auto [a, b] = kColumns[c];
    const auto in = complement(a, b);
    const std::array<LaurentPoly, 3> inner_args{t[in[0] - 1], t[in[1] - 1], t[in[2] - 1]};
    const std::array<LaurentPoly, 3> outer_args{t[a - 1], t[b - 1], w(inner_args)};
    out[c] = w(outer_args);
  }
  return out;
}

std::vector<Row> evaluate_row(const Bracket& w, const Tuple& t) {
  const auto values = candidate_values(w, t);
  std::vector<Monomial> support;
  for (const auto& v : values) {
    for (const auto& [m, c] : v.terms()) support.push_back(m);
  }
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());

  std::vector<Row> rows;
  for (const auto& m : support) {
    Vector v{};
    for (std::size_t c = 0; c < kUnknowns; ++c) v[c] = laurent::coeff_at(values[c], m);
    rows.push_back({primitive(v), t, m});
  }
  return rows;
}

std::size_t rank_of(const std::vector<Vector>& vectors) { return bareiss(vectors).rank; }

ExactSystem solve(std::vector<Row> rows) {
  ExactSystem s;
  s.rows = std::move(rows);
  std::vector<Vector> vectors;
  vectors.reserve(s.rows.size());
  for (const auto& r : s.rows) vectors.push_back(r.coeffs);
  const Echelon e = bareiss(vectors);
  s.rank = e.rank;
  s.pivots = e.pivots;

  std::vector<bool> is_pivot(kUnknowns, false);
  for (auto p : e.pivots) is_pivot[p] = true;
  for (std::size_t free = 0; free < kUnknowns; ++free) {
    if (is_pivot[free]) continue;
    std::array<mpq_class, kUnknowns> sol;
    sol[free] = 1;
    for (std::size_t k = e.rank; k-- > 0;) {
      const std::size_t pc = e.pivots[k];
      mpq_class acc = 0;
      for (std::size_t j = pc + 1; j < kUnknowns; ++j) acc += mpq_class(e.rows[k][j]) * sol[j];
      sol[pc] = -acc / mpq_class(e.rows[k][pc]);
    }
    Vector v{};
    for (std::size_t j = 0; j < kUnknowns; ++j) v[j] = Rational(sol[j]);
    v = primitive(v);
    if (v[free].sign() < 0) {
      for (auto& c : v) c = -c;
    }
    for (const auto& r : s.rows) {
      if (!dot(r.coeffs, v).is_zero()) throw std::logic_error("minident: kernel vector fails back-substitution");
    }
    s.kernel.push_back(v);
  }
  return s;
}

ExactSystem assemble_system(const Bracket& w, const std::vector<Tuple>& tuples, std::size_t jobs) {
  std::vector<std::vector<Row>> per_tuple(tuples.size());
  jobs = std::max<std::size_t>(1, std::min(jobs, tuples.size()));
  if (jobs == 1) {
    for (std::size_t i = 0; i < tuples.size(); ++i) per_tuple[i] = evaluate_row(w, tuples[i]);
  } else {
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(jobs);
    for (std::size_t j = 0; j < jobs; ++j) {
      workers.emplace_back([&, j] {
        try {
          for (std::size_t i = j; i < tuples.size(); i += jobs) per_tuple[i] = evaluate_row(w, tuples[i]);
        } catch (...) {
          errors[j] = std::current_exception();
        }
      });
    }
    for (auto& t : workers) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  std::vector<Row> rows;
  for (auto& r : per_tuple) std::move(r.begin(), r.end(), std::back_inserter(rows));
  return solve(std::move(rows));
}

std::vector<Tuple> standard_tuples() {
  const LaurentPoly x1 = x(1), x2 = x(2), s = x3_squared();
  return {
      {x1, x2, x1, x2, s}, {x2, x1, x1, x2, s}, {x1, x2, x1, s, x2},
      {x2, x1, x1, s, x2}, {x1, x2, s, x1, x2}, {x2, x1, s, x1, x2},
  };
}

std::vector<Vector> standard_rows() {
  return {
      make_vector({{12, 1}, {14, -1}, {34, 1}, {23, -1}}),
      make_vector({{12, 1}, {13, 1}, {24, 1}, {34, 1}}),
      make_vector({{12, 1}, {15, 1}, {23, -1}, {35, -1}}),
      make_vector({{12, 1}, {13, 1}, {25, -1}, {35, -1}}),
      make_vector({{12, 1}, {15, 1}, {24, 1}, {45, 1}}),
      make_vector({{12, -1}, {14, 1}, {25, 1}, {45, -1}}),
  };
}

std::vector<Tuple> random_tuples(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<Tuple> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    Tuple t;
    for (auto& p : t) {
      Monomial m(3);
      for (std::size_t i = 0; i < 3; ++i) m[i] = static_cast<laurent::Exponent>(gen() % 3);
      p = LaurentPoly::monomial(m);
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<CandidateIdentity> known_basis() {
  return {
      {"f45", make_vector({{12, -1}, {13, 1}, {23, -1}, {45, 1}})},
      {"f35", make_vector({{12, 1}, {14, 1}, {24, -1}, {35, 1}})},
      {"f34", make_vector({{12, 1}, {13, -1}, {14, 1}, {23, 1}, {24, -1}, {34, 1}})},
      {"f25", make_vector({{12, 1}, {23, 1}, {24, -1}, {25, 1}})},
      {"f15", make_vector({{12, -1}, {13, 1}, {14, -1}, {15, 1}})},
  };
}

Vector lambda_coordinates(const Formula& f) {
  Vector out{};
  for (const auto& [c, e] : f.terms()) {
    if (e.kind != Expr::Kind::Apply || e.children.size() != 3) {
      throw std::invalid_argument("lambda_coordinates: term is not a ternary bracket");
    }
    std::array<int, 3> outer{};
    std::array<int, 3> inner{};
    int nested_at = -1;
    std::size_t k = 0;
    for (std::size_t p = 0; p < 3; ++p) {
      const Expr& ch = e.children[p];
      if (is_var(ch)) {
        if (k == 2) throw std::invalid_argument("lambda_coordinates: no nested bracket");
        outer[k++] = static_cast<int>(ch.index);
      } else if (ch.kind == Expr::Kind::Apply && ch.children.size() == 3 && nested_at < 0 &&
                 std::all_of(ch.children.begin(), ch.children.end(), is_var)) {
        nested_at = static_cast<int>(p);
        for (std::size_t q = 0; q < 3; ++q) inner[q] = static_cast<int>(ch.children[q].index);
      } else {
        throw std::invalid_argument("lambda_coordinates: unsupported term shape");
      }
    }
    if (nested_at < 0) throw std::invalid_argument("lambda_coordinates: no nested bracket");
    // Moving the nested argument to the last slot passes 2 - p arguments.
    int sign = (2 - nested_at) % 2 == 0 ? 1 : -1;
    sign *= sort_with_sign(outer.data(), outer.data() + 2);
    sign *= sort_with_sign(inner.data(), inner.data() + 3);
    if (sign == 0) continue;  // repeated argument inside one skew bracket
    const std::size_t col = column_of(outer[0], outer[1]);
    if (complement(outer[0], outer[1]) != inner) {
      throw std::invalid_argument("lambda_coordinates: arguments are not a permutation of t1..t5");
    }
    out[col] += sign > 0 ? c : -c;
  }
  return out;
}

BasisMatch match_basis(const ExactSystem& s) {
  BasisMatch m;
  m.members = true;
  std::vector<Vector> known;
  for (const auto& b : known_basis()) {
    known.push_back(b.lambda);
    for (std::size_t i = 0; i < s.rows.size(); ++i) {
      const Rational d = dot(s.rows[i].coeffs, b.lambda);
      if (!d.is_zero()) {
        m.members = false;
        m.diff += b.name + " violates row " + std::to_string(i + 1) + " (value " + d.to_string() + ")\n";
      }
    }
  }
  const std::size_t rk = rank_of(known);
  std::vector<Vector> both = known;
  both.insert(both.end(), s.kernel.begin(), s.kernel.end());
  const std::size_t rb = rank_of(both);
  m.same_span = rk == s.kernel.size() && rb == rk;
  if (!m.same_span) {
    m.diff += "rank(known)=" + std::to_string(rk) + ", dim(kernel)=" + std::to_string(s.kernel.size()) +
              ", rank(known+kernel)=" + std::to_string(rb) + "\n";
  }
  return m;
}

std::vector<Identification> identifications() {
  const Bracket w = jacobi::jac_S(3);
  const auto basis = known_basis();
  auto by_name = [&](std::string_view n) {
    for (const auto& b : basis) {
      if (b.name == n) return b.lambda;
    }
    throw std::logic_error("identifications: missing basis element");
  };
  auto neg = [](Vector v) {
    for (auto& c : v) c = -c;
    return v;
  };
  const Formula g = jacobi::g3(w);
  const Formula h = jacobi::h_poly(w);
  const Formula q = jacobi::q_poly(w);
  const std::vector<std::size_t> p45{4, 5, 1, 2, 3}, p35{3, 5, 1, 2, 4}, p21{2, 1, 3, 4, 5};
  const Vector zero{};
  return {
      {"f45 = g(t4,t5,t1,t2,t3)", lambda_coordinates(g.substituted(p45)) == by_name("f45")},
      {"f35 = g(t3,t5,t1,t2,t4)", lambda_coordinates(g.substituted(p35)) == by_name("f35")},
      {"f34 = -q", neg(lambda_coordinates(q)) == by_name("f34")},
      {"f25 = -h(t2,t1,t3,t4,t5)", neg(lambda_coordinates(h.substituted(p21))) == by_name("f25")},
      {"f15 = -h", neg(lambda_coordinates(h)) == by_name("f15")},
      {"3h = sum_{2<=i<j<=5} (-1)^(i+j) g(t_i,t_j,rest)", lambda_coordinates(jacobi::comb_3h(w)) == zero},
      {"2q(t2,t3,t4,t5,t1) = 2h - sum_{i<j} (-1)^(i+j) g(t_i,t_j,rest)",
       lambda_coordinates(jacobi::comb_2q(w)) == zero},
  };
}

nlohmann::json vector_to_json(const Vector& v) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& c : v) {
    const mpq_class q = c.to_mpq();
    if (q.get_den() == 1 && q.get_num().fits_slong_p()) {
      a.push_back(q.get_num().get_si());
    } else {
      a.push_back(c.to_string());
    }
  }
  return a;
}

nlohmann::json to_json(const ExactSystem& s, const BasisMatch& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : s.rows) {
    nlohmann::json tuple = nlohmann::json::array();
    for (const auto& p : r.tuple) tuple.push_back(laurent::format_poly(p));
    rows.push_back({{"coeffs", vector_to_json(r.coeffs)}, {"tuple", tuple}, {"monomial", r.monomial.to_string()}});
  }
  nlohmann::json kernel = nlohmann::json::array();
  for (const auto& k : s.kernel) kernel.push_back(vector_to_json(k));
  nlohmann::json free = nlohmann::json::array();
  std::vector<bool> is_pivot(kUnknowns, false);
  for (auto p : s.pivots) is_pivot[p] = true;
  for (std::size_t c = 0; c < kUnknowns; ++c) {
    if (!is_pivot[c]) free.push_back(column_name(c));
  }
  nlohmann::json cols = nlohmann::json::array();
  for (std::size_t c = 0; c < kUnknowns; ++c) cols.push_back(column_name(c));
  nlohmann::json out{{"columns", cols},
                     {"rows", rows},
                     {"rank", s.rank},
                     {"kernel", kernel},
                     {"matched_known_basis", m.matched()},
                     {"free_parameters", free}};
  if (!m.diff.empty()) out["diff"] = m.diff;
  return out;
}

}  // namespace jacalg::minident
