#include "jacalg/cli.h"

#include <charconv>
#include <chrono>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "jacalg/derivations.h"
#include "jacalg/errors.h"
#include "jacalg/jacobi.h"
#include "jacalg/minident.h"
#include "jacalg/omega_words.h"

namespace jacalg::cli {

namespace {

using laurent::LaurentPoly;

constexpr std::size_t kGridTupleBudget = 50'000'000;

nlohmann::json poly_list(std::span<const LaurentPoly> ps) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& p : ps) a.push_back(laurent::format_poly(p));
  return a;
}

std::string join_polys(std::span<const LaurentPoly> ps) {
  std::string out;
  for (const auto& p : ps) {
    if (!out.empty()) out += ", ";
    out += laurent::format_poly(p);
  }
  return out;
}

Outcome finish(const RunConfig& cfg, nlohmann::json report, int code, const std::string& text) {
  if (cfg.format == "json") {
    report["config"] = cfg.to_json();
    report["exit_code"] = code;
    return {code, report.dump(2) + "\n"};
  }
  return {code, text};
}

std::int64_t parse_int(std::string_view s, const std::string& what) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw std::invalid_argument("bad " + what + " '" + std::string(s) + "'");
  return v;
}

}  // namespace

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j{{"command", command}, {"format", format}, {"seed", seed}, {"jobs", jobs}};
  if (command == "verify identity" || command == "check derivation" || command == "eval") {
    j["bracket"] = bracket;
    j["n"] = n;
  }
  if (command == "verify identity") {
    j["identity"] = identity;
    j["mode"] = mode;
  }
  if (command == "check derivation") j["spec"] = spec;
  if (grid) j["grid"] = {grid->first, grid->second};
  if (degree_cap) j["degree_cap"] = *degree_cap;
  if (tuples) j["tuples"] = *tuples;
  if (budget) j["budget"] = *budget;
  if (command.starts_with("omega")) {
    j["alphabet"] = alphabet;
    j["word"] = word;
  }
  if (command == "eval") j["args"] = args;
  return j;
}

std::pair<std::int64_t, std::int64_t> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw std::invalid_argument("range must look like lo..hi, got '" + text + "'");
  const auto lo = parse_int(std::string_view(text).substr(0, dots), "range bound");
  const auto hi = parse_int(std::string_view(text).substr(dots + 2), "range bound");
  if (lo > hi) throw std::invalid_argument("empty range '" + text + "'");
  return {lo, hi};
}

Outcome cmd_verify_identity(const RunConfig& cfg) {
  const jacobi::Bracket w = jacobi::bracket_from_text(cfg.bracket, cfg.n);
  const jacobi::Formula f = jacobi::residual_by_name(cfg.identity, w);
  const jacobi::Mode mode = jacobi::parse_mode(cfg.mode);
  jacobi::TupleSource source;
  if (cfg.grid) {
    source = jacobi::TupleSource::grid(cfg.grid->first, cfg.grid->second, cfg.degree_cap);
    source.seed = cfg.seed;
  } else {
    source = jacobi::TupleSource::random(cfg.tuples.value_or(500), -2, 2, cfg.seed);
  }
  const auto rep = jacobi::verify(f, mode, source, cfg.budget.value_or(cochain::kDefaultBudget), cfg.timing);
  int code = kExitOk;
  if (rep.verdict == "counterexample") code = kExitFailed;
  if (rep.verdict == "resource") code = kExitError;

  std::ostringstream text;
  text << cfg.identity << " for " << w.name << " (n=" << cfg.n << ", " << jacobi::mode_name(mode) << "): " << rep.verdict;
  if (rep.holds()) text << " [" << (rep.symbolic ? "symbolic normal form" : "sampled — not a proof") << "]";
  text << "\n";
  if (rep.counterexample_args) {
    text << "  at (" << join_polys(*rep.counterexample_args) << ") value "
         << laurent::format_poly(rep.counterexample_value.value_or(LaurentPoly())) << "\n";
  }
  if (!rep.detail.empty()) text << "  " << rep.detail << "\n";
  text << "  tuples checked: " << rep.tuples_checked << ", seed " << rep.seed << "\n";
  if (cfg.timing) text << "  elapsed: " << rep.elapsed_ms << " ms\n";
  return finish(cfg, rep.to_json(), code, text.str());
}

Outcome cmd_check_derivation(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const jacobi::Bracket w = jacobi::bracket_from_text(cfg.bracket, cfg.n);
  const derivations::DerivationSpec d = derivations::named_derivation(cfg.spec, cfg.n);
  nlohmann::json report{{"spec", d.to_string()}, {"bracket", w.name}, {"n", cfg.n}};
  std::ostringstream text;
  int code = kExitOk;
  std::optional<std::vector<LaurentPoly>> witness;
  LaurentPoly value;

  if (d.is_closed()) {
    const auto budget = cfg.budget.value_or(cochain::kDefaultBudget);
    const cochain::Cochain res = derivations::derivation_residual(d, w, budget);
    report["method"] = "symbolic";
    report["residual_terms"] = res.size();
    if (!res.terms().empty()) {
      witness = cochain::find_nonzero_witness(res, cfg.seed, budget);
      value = derivations::derivation_residual_eval(derivations::as_map(d), w, *witness);
      if (value.is_zero()) throw std::logic_error("derivation witness evaluates to zero");
    }
    text << d.to_string() << " on " << w.name << " (n=" << cfg.n << "): "
         << (witness ? "not a derivation" : "derivation") << " [symbolic normal form, " << res.size()
         << " residual terms]\n";
  } else {
    const auto [lo, hi] = cfg.grid.value_or(std::pair<std::int64_t, std::int64_t>{-3, 3});
    const auto rep = derivations::derivation_grid_check(derivations::as_map(d), w, lo, hi, true,
                                                        cfg.budget.value_or(kGridTupleBudget));
    report["method"] = "grid";
    report["grid"] = {lo, hi};
    report["skew_reduced"] = rep.skew_reduced;
    report["tuples_checked"] = rep.tuples_checked;
    if (!rep.holds) {
      witness = rep.witness;
      value = rep.value;
    }
    text << d.to_string() << " on " << w.name << " (n=" << cfg.n << "): "
         << (witness ? "not a derivation" : "derivation on the grid") << " [grid exponents " << lo << ".." << hi
         << ", " << rep.tuples_checked << " tuples" << (rep.skew_reduced ? ", increasing tuples only" : "")
         << "]\n";
  }
  if (witness) {
    code = kExitFailed;
    report["verdict"] = "violated";
    report["witness"] = {{"args", poly_list(*witness)}, {"value", laurent::format_poly(value)}};
    text << "  residual at (" << join_polys(*witness) << ") = " << laurent::format_poly(value) << "\n";
  } else {
    report["verdict"] = "holds";
    report["witness"] = nullptr;
  }
  report["seed"] = cfg.seed;
  std::int64_t ms = 0;
  if (cfg.timing) {
    ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    text << "  elapsed: " << ms << " ms\n";
  }
  report["elapsed_ms"] = ms;
  return finish(cfg, std::move(report), code, text.str());
}

Outcome cmd_minident(const RunConfig& cfg) {
  const jacobi::Bracket w = jacobi::jac_S(3);
  auto tuples = minident::standard_tuples();
  const auto extra = minident::random_tuples(cfg.tuples.value_or(50), cfg.seed);
  tuples.insert(tuples.end(), extra.begin(), extra.end());
  const auto sys = minident::assemble_system(w, tuples, cfg.jobs);
  const auto match = minident::match_basis(sys);
  const int code = sys.rank == 5 && match.matched() ? kExitOk : kExitFailed;

  std::ostringstream text;
  text << "rows: " << sys.rows.size() << " from " << tuples.size() << " tuples (" << extra.size()
       << " random, seed " << cfg.seed << ")\n";
  text << "rank: " << sys.rank << "\n";
  text << "free parameters:";
  for (std::size_t c = 0; c < minident::kUnknowns; ++c) {
    if (std::find(sys.pivots.begin(), sys.pivots.end(), c) == sys.pivots.end()) text << " " << minident::column_name(c);
  }
  text << "\nkernel (columns";
  for (std::size_t c = 0; c < minident::kUnknowns; ++c) text << " " << minident::column_name(c);
  text << "):\n";
  for (const auto& k : sys.kernel) text << "  " << minident::vector_to_json(k).dump() << "\n";
  text << "matches known basis f45, f35, f34, f25, f15: " << (match.matched() ? "yes" : "no") << "\n";
  if (!match.diff.empty()) text << match.diff;
  return finish(cfg, minident::to_json(sys, match), code, text.str());
}

Outcome cmd_omega(const RunConfig& cfg) {
  const auto alphabet = words::Alphabet::parse(cfg.alphabet);
  const auto seq = words::parse_word_text(cfg.word, alphabet);
  if (seq.empty()) throw std::invalid_argument("empty word");
  nlohmann::json report{{"word", words::format_sequence(seq)}};
  std::ostringstream text;

  if (cfg.command == "omega check") {
    const auto mu = words::mu_sequence(seq);
    const bool in_gamma = words::gamma1_check(seq);
    bool parses = true;
    try {
      words::parse_word(seq);
    } catch (const ParseError&) {
      parses = false;
    }
    if (parses != in_gamma) throw std::logic_error("word parser and suffix-sum test disagree");
    report["mu"] = mu;
    report["accepted"] = in_gamma;
    text << (in_gamma ? "accepted" : "rejected") << ": " << words::format_sequence(seq) << "\n  mu = (";
    for (std::size_t i = 0; i < mu.size(); ++i) text << (i ? "," : "") << mu[i];
    text << ")\n";
    return finish(cfg, std::move(report), in_gamma ? kExitOk : kExitFailed, text.str());
  }

  try {
    const auto tree = words::parse_word(seq);
    const auto deg = words::degrees(tree);
    nlohmann::json by_arity = nlohmann::json::object();
    for (const auto& [a, c] : deg.omega_deg_by_arity) by_arity[std::to_string(a)] = c;
    report["tree"] = words::tree_to_json(tree);
    report["degrees"] = {{"omega", deg.omega_deg}, {"x", deg.x_deg}, {"total", deg.deg}, {"by_arity", by_arity}};
    text << words::format_tree(tree) << "\n  omega-degree " << deg.omega_deg << ", x-degree " << deg.x_deg
         << ", degree " << deg.deg << "\n";
    return finish(cfg, std::move(report), kExitOk, text.str());
  } catch (const ParseError& e) {
    report["error"] = e.what();
    report["position"] = e.position();
    text << "not a word: " << e.what() << "\n";
    return finish(cfg, std::move(report), kExitFailed, text.str());
  }
}

Outcome cmd_eval(const RunConfig& cfg) {
  const jacobi::Bracket w = jacobi::bracket_from_text(cfg.bracket, cfg.n);
  if (cfg.args.size() != w.arity) {
    throw ArityError(w.name + " takes " + std::to_string(w.arity) + " arguments, got " +
                     std::to_string(cfg.args.size()));
  }
  std::vector<LaurentPoly> args;
  for (const auto& a : cfg.args) args.push_back(laurent::parse_poly(a, cfg.n));
  const LaurentPoly v = w(args);
  nlohmann::json report{{"bracket", w.name}, {"args", poly_list(args)}, {"value", laurent::format_poly(v)}};
  return finish(cfg, std::move(report), kExitOk, laurent::format_poly(v) + "\n");
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact verification of Jacobian bracket identities"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string grid;

  auto add_common = [&](CLI::App* c) {
    c->add_option("--seed", cfg.seed, "seed for random tuples (default 0)");
    c->add_option("--format", cfg.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    c->add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::PositiveNumber);
    c->add_option("--budget", cfg.budget, "term budget (symbolic) or tuple budget (grid)");
    c->add_flag("--timing", cfg.timing, "report wall-clock time");
  };
  auto add_bracket = [&](CLI::App* c) {
    c->add_option("--bracket", cfg.bracket, "jacS, jacW or w:1^2+3^4");
    c->add_option("--n", cfg.n, "number of variables")->check(CLI::PositiveNumber);
  };

  auto* verify = app.add_subcommand("verify", "verify an identity");
  verify->require_subcommand(1);
  auto* identity = verify->add_subcommand("identity", "residual of a named identity");
  add_bracket(identity);
  add_common(identity);
  identity->add_option("--identity", cfg.identity, "fi1, fi2, leibniz, r, g3, h, q, w-unit, comb-*")->required();
  identity->add_option("--mode", cfg.mode, "symbolic, sampled or both")
      ->check(CLI::IsMember({"symbolic", "sampled", "both"}));
  identity->add_option("--grid", grid, "exponent grid lo..hi instead of random tuples");
  identity->add_option("--degree-cap", cfg.degree_cap, "total degree cap for the grid");
  identity->add_option("--tuples", cfg.tuples, "random tuples to sample (default 500)");

  auto* check = app.add_subcommand("check", "check a derivation");
  check->require_subcommand(1);
  auto* derivation = check->add_subcommand("derivation", "D o w = sum w o D_i");
  add_bracket(derivation);
  add_common(derivation);
  derivation->add_option("--spec", cfg.spec, "Delta, Dtheta, D<i> or terms like 1*x^[0,0]*d^[1,0]")->required();
  derivation->add_option("--grid", grid, "exponent grid lo..hi (default -3..3)");

  auto* mi = app.add_subcommand("minident", "minimal identities of the ternary Jacobian");
  mi->require_subcommand(1);
  auto* solve = mi->add_subcommand("solve", "assemble and solve the candidate system");
  add_common(solve);
  solve->add_option("--tuples", cfg.tuples, "extra random tuples (default 50)");

  auto* omega = app.add_subcommand("omega", "words over an arity alphabet");
  omega->require_subcommand(1);
  auto* ocheck = omega->add_subcommand("check", "suffix-sum membership test");
  auto* oparse = omega->add_subcommand("parse", "parse into a tree");
  for (auto* c : {ocheck, oparse}) {
    add_common(c);
    c->add_option("--alphabet", cfg.alphabet, "name:arity,...")->required();
    c->add_option("--word", cfg.word, "symbols separated by spaces")->required();
  }

  auto* eval = app.add_subcommand("eval", "evaluate a bracket");
  add_bracket(eval);
  add_common(eval);
  eval->add_option("--args", cfg.args, "argument polynomials")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, er;
    app.exit(e, o, er);
    err << er.str() << o.str();
    return kExitError;
  }

  Outcome result;
  try {
    if (!grid.empty()) cfg.grid = parse_range(grid);
    if (identity->parsed()) {
      cfg.command = "verify identity";
      result = cmd_verify_identity(cfg);
    } else if (derivation->parsed()) {
      cfg.command = "check derivation";
      result = cmd_check_derivation(cfg);
    } else if (solve->parsed()) {
      cfg.command = "minident solve";
      result = cmd_minident(cfg);
    } else if (ocheck->parsed() || oparse->parsed()) {
      cfg.command = ocheck->parsed() ? "omega check" : "omega parse";
      result = cmd_omega(cfg);
    } else {
      cfg.command = "eval";
      result = cmd_eval(cfg);
    }
  } catch (const std::logic_error& e) {
    // invalid_argument and its subclasses are usage errors; the rest are bugs.
    if (dynamic_cast<const std::invalid_argument*>(&e) == nullptr) {
      err << "internal error: " << e.what() << "\n";
      return kExitError;
    }
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  out << result.output;
  return result.exit_code;
}

}  // namespace jacalg::cli
