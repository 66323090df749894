#include <chrono>
#include <random>

#include "jacalg/errors.h"
#include "jacalg/jacobi.h"

namespace jacalg::jacobi {

namespace {

constexpr std::size_t kGridMaxVars = 3;
constexpr std::size_t kGridMaxSlots = 6;
constexpr std::size_t kGridMaxCandidates = 30;

std::vector<Monomial> box(std::size_t n, Exponent lo, Exponent hi, std::optional<Exponent> cap) {
  std::vector<Monomial> out;
  Monomial m(n);
  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (k == n) {
      if (!cap || m.degree() <= *cap) out.push_back(m);
      return;
    }
    for (Exponent v = lo; v <= hi; ++v) {
      m[k] = v;
      self(self, k + 1);
    }
  };
  rec(rec, 0);
  return out;
}

nlohmann::json poly_list(const std::vector<LaurentPoly>& ps) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& p : ps) out.push_back(laurent::format_poly(p));
  return out;
}

}  // namespace

TupleSource TupleSource::grid(Exponent lo, Exponent hi, std::optional<Exponent> cap) {
  TupleSource s;
  s.mode = Mode::Grid;
  s.lo = lo;
  s.hi = hi;
  s.degree_cap = cap;
  return s;
}

TupleSource TupleSource::random(std::size_t count, Exponent lo, Exponent hi, std::uint64_t seed) {
  TupleSource s;
  s.mode = Mode::Random;
  s.count = count;
  s.lo = lo;
  s.hi = hi;
  s.seed = seed;
  return s;
}

namespace {

/// (x_{i1}, ..., x_{ik}) with i1 < ... < ik; checked before the configured
/// source since coordinate tuples are the usual small counterexamples.
void for_each_coordinate_tuple(std::size_t n, std::size_t slots,
                               const std::function<bool(std::span<const LaurentPoly>)>& f) {
  if (slots == 0 || slots > n) return;
  std::vector<std::size_t> idx(slots);
  for (std::size_t k = 0; k < slots; ++k) idx[k] = k + 1;
  std::vector<LaurentPoly> args(slots);
  while (true) {
    for (std::size_t k = 0; k < slots; ++k) args[k] = LaurentPoly::variable(n, idx[k]);
    if (!f(args)) return;
    std::size_t k = slots;
    while (k > 0 && idx[k - 1] == n - slots + k) --k;
    if (k == 0) return;
    ++idx[k - 1];
    for (std::size_t j = k; j < slots; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

void TupleSource::for_each(std::size_t n, std::size_t slots,
                           const std::function<bool(std::span<const LaurentPoly>)>& f) const {
  if (lo > hi) throw std::invalid_argument("tuple source: empty exponent range");
  std::vector<LaurentPoly> args(slots);
  if (mode == Mode::Random) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Exponent> dist(lo, hi);
    Monomial m(n);
    for (std::size_t t = 0; t < count; ++t) {
      for (auto& a : args) {
        for (std::size_t k = 0; k < n; ++k) m[k] = dist(rng);
        a = LaurentPoly::monomial(m);
      }
      if (!f(args)) return;
    }
    return;
  }
  if (n > kGridMaxVars || slots > kGridMaxSlots) {
    throw ResourceError("grid source supports at most " + std::to_string(kGridMaxVars) + " variables and " +
                            std::to_string(kGridMaxSlots) + " slots",
                        slots);
  }
  const std::vector<Monomial> cands = box(n, lo, hi, degree_cap);
  if (cands.size() > kGridMaxCandidates) {
    throw ResourceError("grid source allows at most " + std::to_string(kGridMaxCandidates) +
                            " candidates per slot, window has " + std::to_string(cands.size()),
                        cands.size());
  }
  // The degree cap bounds the whole tuple; with lo >= 0 partial sums prune.
  bool stop = false;
  auto rec = [&](auto&& self, std::size_t j, Exponent used) -> void {
    if (stop) return;
    if (j == slots) {
      if (!f(args)) stop = true;
      return;
    }
    for (const Monomial& m : cands) {
      const Exponent d = used + m.degree();
      if (degree_cap && lo >= 0 && d > *degree_cap) continue;
      if (degree_cap && j + 1 == slots && d > *degree_cap) continue;
      args[j] = LaurentPoly::monomial(m);
      self(self, j + 1, d);
      if (stop) return;
    }
  };
  rec(rec, 0, 0);
}

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::Symbolic:
      return "symbolic";
    case Mode::Sampled:
      return "sampled";
    case Mode::Both:
      return "both";
  }
  return "?";
}

Mode parse_mode(std::string_view s) {
  if (s == "symbolic") return Mode::Symbolic;
  if (s == "sampled") return Mode::Sampled;
  if (s == "both") return Mode::Both;
  throw std::invalid_argument("unknown mode '" + std::string(s) + "'");
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json ce = nullptr;
  if (counterexample_args) {
    ce = {{"args", poly_list(*counterexample_args)},
          {"value", laurent::format_poly(counterexample_value.value_or(LaurentPoly()))}};
  }
  std::string evidence = "none";
  if (verdict == "holds") evidence = symbolic ? "symbolic normal form" : "sampled — not a proof";
  if (verdict == "counterexample") evidence = "explicit tuple";
  return {{"residual", residual},
          {"bracket", bracket},
          {"n", n},
          {"mode", mode_name(mode)},
          {"verdict", verdict},
          {"evidence", evidence},
          {"counterexample", ce},
          {"tuples_checked", tuples_checked},
          {"elapsed_ms", elapsed_ms},
          {"seed", seed},
          {"detail", detail}};
}

VerificationReport verify(const Formula& residual, Mode mode, const TupleSource& source, std::size_t budget,
                          bool timing) {
  const auto start = std::chrono::steady_clock::now();
  VerificationReport rep;
  rep.residual = residual.name();
  rep.bracket = residual.ops().at(0).name;
  rep.n = residual.ambient();
  rep.mode = mode;
  rep.seed = source.seed;
  auto finish = [&]() {
    if (timing) {
      rep.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
    }
    return rep;
  };

  std::optional<bool> symbolic_zero;
  std::optional<Cochain> compiled;
  if (mode != Mode::Sampled) {
    try {
      compiled = residual.compile(budget);
    } catch (const ResourceError& e) {
      rep.verdict = "resource";
      rep.detail = e.what();
      return finish();
    }
    symbolic_zero = compiled->terms().empty();
    rep.detail = "normal form has " + std::to_string(compiled->size()) + " terms";
  }

  if (mode != Mode::Symbolic) {
    std::optional<std::vector<LaurentPoly>> found;
    LaurentPoly value;
    auto check = [&](std::span<const LaurentPoly> args) {
      ++rep.tuples_checked;
      LaurentPoly v = residual.evaluate(args);
      if (v.is_zero()) return true;
      found.emplace(args.begin(), args.end());
      value = std::move(v);
      return false;
    };
    for_each_coordinate_tuple(rep.n, residual.nvars(), check);
    if (!found) source.for_each(rep.n, residual.nvars(), check);
    if (symbolic_zero && *symbolic_zero && found) {
      throw std::logic_error(rep.residual + ": normal form is zero but direct evaluation is not");
    }
    if (found) {
      rep.verdict = "counterexample";
      rep.counterexample_args = std::move(found);
      rep.counterexample_value = std::move(value);
      return finish();
    }
  }

  if (symbolic_zero && !*symbolic_zero) {
    auto witness = cochain::find_nonzero_witness(*compiled, source.seed, budget);
    LaurentPoly v = residual.evaluate(*witness);
    if (v.is_zero() || !(v == cochain::eval(*compiled, *witness))) {
      throw std::logic_error(rep.residual + ": witness of the normal form disagrees with direct evaluation");
    }
    rep.verdict = "counterexample";
    rep.counterexample_args = std::move(witness);
    rep.counterexample_value = std::move(v);
    return finish();
  }
  rep.verdict = "holds";
  rep.symbolic = symbolic_zero.has_value();
  return finish();
}

}  // namespace jacalg::jacobi
