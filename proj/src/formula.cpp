#include <algorithm>

#include "jacalg/errors.h"
#include "jacalg/jacobi.h"

namespace jacalg::jacobi {

namespace {

struct Compiled {
  Cochain map;
  std::vector<std::size_t> vars;  // variable read by each slot
};

void flatten_mul(const Expr& e, std::vector<const Expr*>& out) {
  if (e.kind == Expr::Kind::Mul) {
    for (const Expr& c : e.children) flatten_mul(c, out);
  } else {
    out.push_back(&e);
  }
}

class Compiler {
 public:
  Compiler(const std::vector<Bracket>& ops, std::size_t n, std::size_t budget)
      : ops_(ops), n_(n), budget_(budget) {}

  Compiled compile(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::Var:
        return {Cochain::identity(n_), {e.index}};
      case Expr::Kind::Mul: {
        if (e.children.empty()) throw std::invalid_argument("empty product");
        Compiled acc = compile(e.children[0]);
        for (std::size_t i = 1; i < e.children.size(); ++i) {
          Compiled next = compile(e.children[i]);
          acc.map = cochain::cup(acc.map, next.map, budget_);
          acc.vars.insert(acc.vars.end(), next.vars.begin(), next.vars.end());
        }
        return acc;
      }
      case Expr::Kind::Apply:
        return apply(e);
    }
    throw std::logic_error("unreachable");
  }

 private:
  Compiled apply(const Expr& e) {
    const Bracket& op = ops_.at(e.index);
    if (e.children.size() != op.arity) {
      throw ArityError(op.name + ": expected " + std::to_string(op.arity) + " arguments");
    }
    Cochain psi = op.closed();
    std::vector<std::vector<std::size_t>> slot_vars(e.children.size());
    for (std::size_t j = e.children.size(); j > 0; --j) {
      std::vector<const Expr*> factors;
      flatten_mul(e.children[j - 1], factors);
      for (std::size_t f = 1; f < factors.size(); ++f) {
        psi = cochain::expand_product_slot(psi, j + f - 1, budget_);
      }
      for (std::size_t f = factors.size(); f > 0; --f) {
        const Expr& factor = *factors[f - 1];
        std::vector<std::size_t> vars;
        if (factor.kind == Expr::Kind::Var) {
          vars = {factor.index};
        } else {
          Compiled inner = compile(factor);
          psi = cochain::slot_compose(psi, j + f - 1, inner.map, budget_);
          vars = std::move(inner.vars);
        }
        slot_vars[j - 1].insert(slot_vars[j - 1].begin(), vars.begin(), vars.end());
      }
    }
    Compiled out{std::move(psi), {}};
    for (const auto& v : slot_vars) out.vars.insert(out.vars.end(), v.begin(), v.end());
    return out;
  }

  const std::vector<Bracket>& ops_;
  std::size_t n_;
  std::size_t budget_;
};

Expr rename(const Expr& e, std::span<const std::size_t> args) {
  Expr out = e;
  if (e.kind == Expr::Kind::Var) {
    out.index = args[e.index - 1];
    return out;
  }
  for (Expr& c : out.children) c = rename(c, args);
  return out;
}

LaurentPoly eval_expr(const Expr& e, const std::vector<Bracket>& ops, std::span<const LaurentPoly> args) {
  switch (e.kind) {
    case Expr::Kind::Var:
      return args[e.index - 1];
    case Expr::Kind::Mul: {
      LaurentPoly acc = eval_expr(e.children.at(0), ops, args);
      for (std::size_t i = 1; i < e.children.size() && !acc.is_zero(); ++i) {
        acc = acc * eval_expr(e.children[i], ops, args);
      }
      return acc;
    }
    case Expr::Kind::Apply: {
      std::vector<LaurentPoly> vals;
      vals.reserve(e.children.size());
      for (const Expr& c : e.children) vals.push_back(eval_expr(c, ops, args));
      return ops.at(e.index)(vals);
    }
  }
  throw std::logic_error("unreachable");
}

void count_vars(const Expr& e, std::vector<int>& seen) {
  if (e.kind == Expr::Kind::Var) {
    if (e.index < 1 || e.index > seen.size()) throw std::invalid_argument("variable index out of range");
    ++seen[e.index - 1];
    return;
  }
  for (const Expr& c : e.children) count_vars(c, seen);
}

}  // namespace

std::size_t Formula::ambient() const {
  if (ops_.empty()) throw std::logic_error("formula without brackets");
  return ops_[0].n;
}

void Formula::add(const Rational& c, Expr e) {
  std::vector<int> seen(nvars_, 0);
  count_vars(e, seen);
  if (std::any_of(seen.begin(), seen.end(), [](int s) { return s != 1; })) {
    throw std::invalid_argument(name_ + ": each variable must occur exactly once per term");
  }
  if (!c.is_zero()) terms_.emplace_back(c, std::move(e));
}

Formula Formula::substituted(std::span<const std::size_t> args) const {
  if (args.size() != nvars_) throw ArityError(name_ + ": substitution has the wrong length");
  Formula out(name_, nvars_, ops_);
  for (const auto& [c, e] : terms_) out.add(c, rename(e, args));
  return out;
}

Formula& Formula::add_formula(const Rational& c, const Formula& other) {
  if (other.nvars_ != nvars_ || other.ops_.size() != ops_.size()) {
    throw ArityError("add_formula: incompatible formulas");
  }
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    if (ops_[i].name != other.ops_[i].name || ops_[i].arity != other.ops_[i].arity) {
      throw std::invalid_argument("add_formula: formulas use different brackets");
    }
  }
  for (const auto& [k, e] : other.terms_) {
    if (!(c * k).is_zero()) terms_.emplace_back(c * k, e);
  }
  return *this;
}

Cochain Formula::compile(std::size_t budget) const {
  const std::size_t n = ambient();
  Compiler compiler(ops_, n, budget);
  std::vector<cochain::Term> all;
  for (const auto& [c, e] : terms_) {
    Compiled part = compiler.compile(e);
    std::vector<std::size_t> target(part.vars.size());
    for (std::size_t p = 0; p < target.size(); ++p) target[p] = part.vars[p] - 1;
    Cochain placed = cochain::permute(part.map, target);
    for (cochain::Term t : placed.terms()) {
      t.coeff *= c;
      all.push_back(std::move(t));
    }
    if (all.size() > budget) throw ResourceError(name_ + ": residual exceeds the term budget", all.size());
  }
  return Cochain::from_terms(nvars_, n, std::move(all));
}

LaurentPoly Formula::evaluate(std::span<const LaurentPoly> args) const {
  if (args.size() != nvars_) {
    throw ArityError(name_ + ": expected " + std::to_string(nvars_) + " arguments, got " +
                     std::to_string(args.size()));
  }
  LaurentPoly acc(ambient());
  for (const auto& [c, e] : terms_) acc += laurent::scale(c, eval_expr(e, ops_, args));
  return acc;
}

}  // namespace jacalg::jacobi
