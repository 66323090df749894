#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

/// Prefix-notation words over an arity-tagged alphabet.
namespace jacalg::words {

struct Symbol {
  std::string name;
  int arity = 0;

  int weight() const noexcept { return 1 - arity; }
  bool is_variable() const noexcept { return arity == 0; }
  friend bool operator==(const Symbol&, const Symbol&) = default;
};

using WordSequence = std::vector<Symbol>;

struct WordTree {
  Symbol symbol;
  std::vector<WordTree> children;
};

class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<Symbol> symbols);
  /// Comma-separated `name:arity` pairs. Throws ParseError.
  static Alphabet parse(std::string_view text);

  const std::vector<Symbol>& symbols() const noexcept { return symbols_; }
  /// Names outside the alphabet are variables.
  Symbol lookup(std::string_view name) const;

 private:
  std::vector<Symbol> symbols_;
};

/// Suffix weight sums, last position first: (mu_k, ..., mu_1).
std::vector<int> mu_sequence(const WordSequence& a);
/// Total weight 1 and every suffix sum at least 1.
bool gamma1_check(const WordSequence& a);

/// Recursive descent from the left. Throws ParseError at the premature end
/// or at the first unconsumed symbol.
WordTree parse_word(const WordSequence& a);
WordSequence flatten(const WordTree& t);

struct Degrees {
  std::size_t omega_deg = 0;
  std::size_t x_deg = 0;
  std::size_t deg = 0;
  std::map<int, std::size_t> omega_deg_by_arity;
};
Degrees degrees(const WordTree& t);

/// Every sequence of length 1..max_length over the alphabet, in
/// lexicographic order of symbol indices; stops when f returns false.
void for_each_sequence(const std::vector<Symbol>& alphabet, std::size_t max_length,
                       const std::function<bool(const WordSequence&)>& f);
/// The words among those sequences. Throws ResourceError above `cap`.
std::vector<WordSequence> enumerate_words(const std::vector<Symbol>& alphabet, std::size_t max_length,
                                          std::size_t cap = 10);

/// Whitespace-separated names; `(`, `)` and `,` are separators only.
WordSequence parse_word_text(std::string_view text, const Alphabet& alphabet);
std::string format_sequence(const WordSequence& a);
/// `name(child,...)`.
std::string format_tree(const WordTree& t);
nlohmann::json tree_to_json(const WordTree& t);

}  // namespace jacalg::words
