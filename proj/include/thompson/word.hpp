#pragma once

// Words over the generators x0, x1.
//
//   word := "id" | term (SP term)*
//   term := ("x0" | "x1") ("^" signed-int)?

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "thompson/element.hpp"
#include "thompson/errors.hpp"

namespace thompson {

enum class Generator : std::uint8_t { X0 = 0, X1 = 1 };

struct GeneratorPower {
  Generator gen;
  std::int64_t exponent;
  friend bool operator==(const GeneratorPower&, const GeneratorPower&) = default;
};

using Word = std::vector<GeneratorPower>;

inline const Element& generator_element(Generator g);

inline Word parse_word(std::string_view text) {
  Word word;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_ws();
  if (text.substr(i, 2) == "id") {
    std::size_t j = i + 2;
    while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j == text.size()) return word;
  }
  if (i == text.size()) throw ParseError(0, i + 1, "empty word (use \"id\" for the identity)");
  while (i < text.size()) {
    const std::size_t start = i;
    if (text.substr(i, 2) != "x0" && text.substr(i, 2) != "x1") {
      std::size_t end = i;
      while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end]))) ++end;
      throw ParseError(0, start + 1, "unknown letter '" + std::string(text.substr(i, end - i)) + "'");
    }
    const Generator g = text[i + 1] == '0' ? Generator::X0 : Generator::X1;
    i += 2;
    std::int64_t exponent = 1;
    if (i < text.size() && text[i] == '^') {
      ++i;
      bool negative = false;
      if (i < text.size() && (text[i] == '-' || text[i] == '+')) negative = text[i++] == '-';
      if (i == text.size() || !std::isdigit(static_cast<unsigned char>(text[i]))) {
        throw ParseError(0, i + 1, "expected an integer exponent");
      }
      std::int64_t value = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        value = value * 10 + (text[i++] - '0');
        if (value > (std::int64_t{1} << 40)) throw ParseError(0, i, "exponent too large");
      }
      exponent = negative ? -value : value;
    }
    if (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) {
      throw ParseError(0, i + 1, "unexpected character '" + std::string(1, text[i]) + "'");
    }
    word.push_back({g, exponent});
    skip_ws();
  }
  return word;
}

inline std::string to_string(const Word& word) {
  if (word.empty()) return "id";
  std::string out;
  for (const auto& [gen, exp] : word) {
    if (!out.empty()) out += ' ';
    out += gen == Generator::X0 ? "x0" : "x1";
    if (exp != 1) out += "^" + std::to_string(exp);
  }
  return out;
}

inline Element word_to_element(const Word& word) {
  Element result;
  for (const auto& [gen, exp] : word) result = compose(result, power(generator_element(gen), exp));
  return result;
}

inline Element word_to_element(std::string_view text) { return word_to_element(parse_word(text)); }

/// Concatenation of single letters x0^{+-1}, x1^{+-1}; used by enumeration.
struct Letter {
  Generator gen;
  bool inverse;
  friend bool operator==(const Letter&, const Letter&) = default;
};

inline Word letters_to_word(const std::vector<Letter>& letters) {
  Word w;
  for (const auto& l : letters) {
    const std::int64_t e = l.inverse ? -1 : 1;
    if (!w.empty() && w.back().gen == l.gen) {
      w.back().exponent += e;
      if (w.back().exponent == 0) w.pop_back();
    } else {
      w.push_back({l.gen, e});
    }
  }
  return w;
}

}  // namespace thompson

#include "thompson/constants.hpp"

namespace thompson {

inline const Element& generator_element(Generator g) {
  return g == Generator::X0 ? constants().x0 : constants().x1;
}

}  // namespace thompson
