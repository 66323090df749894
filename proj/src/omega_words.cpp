#include "jacalg/omega_words.h"

#include <algorithm>
#include <cctype>

#include "jacalg/errors.h"

namespace jacalg::words {

namespace {

void require_nonempty(const WordSequence& a, const char* where) {
  if (a.empty()) throw std::invalid_argument(std::string(where) + ": empty sequence");
}

WordTree parse_at(const WordSequence& a, std::size_t& pos) {
  if (pos >= a.size()) throw ParseError("word ends before all arguments are supplied", pos);
  WordTree t{a[pos++], {}};
  for (int i = 0; i < t.symbol.arity; ++i) t.children.push_back(parse_at(a, pos));
  return t;
}

void flatten_into(const WordTree& t, WordSequence& out) {
  out.push_back(t.symbol);
  for (const auto& c : t.children) flatten_into(c, out);
}

void count(const WordTree& t, Degrees& d) {
  if (t.symbol.is_variable()) {
    ++d.x_deg;
  } else {
    ++d.omega_deg;
    ++d.omega_deg_by_arity[t.symbol.arity];
  }
  for (const auto& c : t.children) count(c, d);
}

}  // namespace

Alphabet::Alphabet(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
  for (const auto& s : symbols_) {
    if (s.arity < 0) throw std::invalid_argument("alphabet: negative arity for '" + s.name + "'");
  }
}

Alphabet Alphabet::parse(std::string_view text) {
  std::vector<Symbol> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t start = pos;
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view item = text.substr(pos, end - pos);
    const std::size_t colon = item.find(':');
    if (colon == std::string_view::npos) throw ParseError("expected name:arity", start);
    auto trim = [](std::string_view s) {
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
      return s;
    };
    std::string_view name = trim(item.substr(0, colon));
    std::string_view ar = trim(item.substr(colon + 1));
    if (name.empty()) throw ParseError("empty symbol name", start);
    if (ar.empty() || !std::all_of(ar.begin(), ar.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      throw ParseError("arity must be a nonnegative integer", start + colon + 1);
    }
    out.push_back({std::string(name), std::stoi(std::string(ar))});
    pos = end + 1;
  }
  return Alphabet(std::move(out));
}

Symbol Alphabet::lookup(std::string_view name) const {
  for (const auto& s : symbols_) {
    if (s.name == name) return s;
  }
  return {std::string(name), 0};
}

std::vector<int> mu_sequence(const WordSequence& a) {
  require_nonempty(a, "mu_sequence");
  std::vector<int> mu;
  int sum = 0;
  for (std::size_t i = a.size(); i > 0; --i) {
    sum += a[i - 1].weight();
    mu.push_back(sum);
  }
  return mu;
}

bool gamma1_check(const WordSequence& a) {
  require_nonempty(a, "gamma1_check");
  int sum = 0;
  for (std::size_t i = a.size(); i > 0; --i) {
    sum += a[i - 1].weight();
    if (sum < 1) return false;
  }
  return sum == 1;
}

WordTree parse_word(const WordSequence& a) {
  require_nonempty(a, "parse_word");
  std::size_t pos = 0;
  WordTree t = parse_at(a, pos);
  if (pos != a.size()) throw ParseError("unconsumed symbols after a complete word", pos);
  return t;
}

WordSequence flatten(const WordTree& t) {
  WordSequence out;
  flatten_into(t, out);
  return out;
}

Degrees degrees(const WordTree& t) {
  Degrees d;
  count(t, d);
  d.deg = d.omega_deg + d.x_deg;
  return d;
}

void for_each_sequence(const std::vector<Symbol>& alphabet, std::size_t max_length,
                       const std::function<bool(const WordSequence&)>& f) {
  if (alphabet.empty()) return;
  WordSequence seq;
  std::vector<std::size_t> idx;
  for (std::size_t len = 1; len <= max_length; ++len) {
    idx.assign(len, 0);
    seq.assign(len, alphabet[0]);
    while (true) {
      if (!f(seq)) return;
      std::size_t j = len;
      while (j > 0 && idx[j - 1] + 1 == alphabet.size()) {
        idx[j - 1] = 0;
        seq[j - 1] = alphabet[0];
        --j;
      }
      if (j == 0) break;
      seq[j - 1] = alphabet[++idx[j - 1]];
    }
  }
}

std::vector<WordSequence> enumerate_words(const std::vector<Symbol>& alphabet, std::size_t max_length,
                                          std::size_t cap) {
  if (max_length > cap) {
    throw ResourceError("enumerate_words: length " + std::to_string(max_length) + " exceeds the cap " +
                            std::to_string(cap),
                        max_length);
  }
  std::vector<WordSequence> out;
  for_each_sequence(alphabet, max_length, [&](const WordSequence& s) {
    try {
      parse_word(s);
      out.push_back(s);
    } catch (const ParseError&) {
    }
    return true;
  });
  return out;
}

WordSequence parse_word_text(std::string_view text, const Alphabet& alphabet) {
  WordSequence out;
  std::size_t pos = 0;
  auto separator = [](char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ',';
  };
  while (pos < text.size()) {
    while (pos < text.size() && separator(text[pos])) ++pos;
    const std::size_t start = pos;
    while (pos < text.size() && !separator(text[pos])) ++pos;
    if (pos > start) out.push_back(alphabet.lookup(text.substr(start, pos - start)));
  }
  return out;
}

std::string format_sequence(const WordSequence& a) {
  std::string out;
  for (const auto& s : a) {
    if (!out.empty()) out += ' ';
    out += s.name;
  }
  return out;
}

std::string format_tree(const WordTree& t) {
  if (t.children.empty()) return t.symbol.name;
  std::string out = t.symbol.name + "(";
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    if (i > 0) out += ",";
    out += format_tree(t.children[i]);
  }
  return out + ")";
}

nlohmann::json tree_to_json(const WordTree& t) {
  nlohmann::json children = nlohmann::json::array();
  for (const auto& c : t.children) children.push_back(tree_to_json(c));
  return {{"symbol", t.symbol.name}, {"arity", t.symbol.arity}, {"children", children}};
}

}  // namespace jacalg::words
