#pragma once

// Text format for group-equation systems and JSON assignment files.
//
//   line      := comment | constdecl | equation
//   comment   := "#" text
//   constdecl := "const" NAME "=" word
//   equation  := side "=" side
//   side      := "1" | atom+
//   atom      := ("$" VAR | NAME) ("^-1")?
//
// `u = v` is stored as u v^-1 = 1. Serialization always writes `w = 1`.

#include <cctype>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "thompson/constants.hpp"
#include "thompson/equation.hpp"
#include "thompson/word.hpp"

namespace thompson {

namespace detail {

inline bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class LineParser {
 public:
  LineParser(std::string_view line, std::size_t line_no) : s_(line), line_(line_no) {}

  void skip_ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool at_end() {
    skip_ws();
    return i_ >= s_.size();
  }
  std::size_t column() const { return i_ + 1; }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, column(), msg); }

  bool consume(char c) {
    skip_ws();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }

  std::string ident() {
    skip_ws();
    if (i_ >= s_.size() || !is_ident_start(s_[i_])) fail("expected a name");
    std::size_t start = i_;
    while (i_ < s_.size() && is_ident_char(s_[i_])) ++i_;
    return std::string(s_.substr(start, i_ - start));
  }

  std::string_view rest() {
    skip_ws();
    return s_.substr(i_);
  }

  // side := "1" | atom+ ; stops at '=' or end of line
  GroupWord side(const EquationSystem& sys) {
    GroupWord out;
    skip_ws();
    if (i_ < s_.size() && s_[i_] == '1') {
      ++i_;
      skip_ws();
      if (i_ < s_.size() && s_[i_] != '=') fail("'1' must stand alone on its side");
      return out;
    }
    while (true) {
      skip_ws();
      if (i_ >= s_.size() || s_[i_] == '=') break;
      const std::size_t col = column();
      WordLetter l{Variable{}, 1};
      if (s_[i_] == '$') {
        ++i_;
        if (i_ >= s_.size() || !is_ident_start(s_[i_])) fail("expected a variable name after '$'");
        l.term = Variable{ident()};
      } else {
        const std::string name = ident();
        if (auto b = builtin_constant(name)) {
          l.term = Constant(name, *b);
        } else if (const auto* d = sys.find_constant(name)) {
          l.term = Constant(name, d->value);
        } else {
          throw ParseError(ErrorCode::UnknownConstant, line_, col, "unknown constant '" + name + "'");
        }
      }
      if (i_ < s_.size() && s_[i_] == '^') {
        if (s_.substr(i_, 3) != "^-1") fail("only the exponent ^-1 is allowed on atoms");
        i_ += 3;
        l.exponent = -1;
      }
      if (i_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[i_])) && s_[i_] != '=') {
        fail(std::string("unexpected character '") + s_[i_] + "'");
      }
      out.push_back(std::move(l));
    }
    if (out.empty()) fail("empty side (write 1 for the identity)");
    return out;
  }

 private:
  std::string_view s_;
  std::size_t line_;
  std::size_t i_ = 0;
};

inline bool is_reserved_name(std::string_view name) { return builtin_constant(name).has_value(); }

}  // namespace detail

inline EquationSystem parse_group_system(std::string_view text) {
  EquationSystem sys;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = end + 1;
    ++line_no;

    detail::LineParser p(line, line_no);
    if (p.at_end()) continue;
    if (p.consume('#')) {
      std::string_view body = line.substr(line.find('#') + 1);
      if (!body.empty() && body.front() == ' ') body.remove_prefix(1);
      sys.add_comment(std::string(body));
      continue;
    }
    std::string_view rest = p.rest();
    if (rest.starts_with("const") && rest.size() > 5 && std::isspace(static_cast<unsigned char>(rest[5]))) {
      p.ident();
      const std::size_t name_col = p.column() + 1;
      const std::string name = p.ident();
      if (detail::is_reserved_name(name)) throw ParseError(line_no, name_col, "cannot redefine builtin " + name);
      if (sys.find_constant(name)) throw ParseError(line_no, name_col, "duplicate constant " + name);
      if (!p.consume('=')) p.fail("expected '=' in const declaration");
      p.skip_ws();
      const std::size_t word_col = p.column();
      const std::string word(detail::trim(p.rest()));
      Element value;
      try {
        value = word_to_element(word);
      } catch (const ParseError& e) {
        throw ParseError(line_no, word_col + e.column() - 1, e.message());
      }
      sys.declare_constant(name, word, value);
      continue;
    }
    GroupWord lhs = p.side(sys);
    if (!p.consume('=')) p.fail("expected '='");
    GroupWord rhs = p.side(sys);
    if (!p.at_end()) p.fail("unexpected text after equation");
    sys.add_equation(concat({lhs, inverse(rhs)}));
  }
  return sys;
}

inline std::string serialize_word(const GroupWord& w) {
  if (w.empty()) return "1";
  std::string out;
  for (const auto& l : w) {
    if (!out.empty()) out += ' ';
    if (const auto* v = std::get_if<Variable>(&l.term)) {
      out += "$" + v->name;
    } else {
      out += std::get<Constant>(l.term).name;
    }
    if (l.exponent < 0) out += "^-1";
  }
  return out;
}

inline std::string serialize_group_system(const EquationSystem& sys) {
  std::string out;
  for (const auto& item : sys.items()) {
    switch (item.kind) {
      case EquationSystem::Item::Kind::Comment:
        out += "# " + sys.comments()[item.index] + "\n";
        break;
      case EquationSystem::Item::Kind::ConstDecl: {
        const auto& c = sys.declared_constants()[item.index];
        out += "const " + c.name + " = " + c.word + "\n";
        break;
      }
      case EquationSystem::Item::Kind::Equation:
        out += serialize_word(sys.equations()[item.index]) + " = 1\n";
        break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Assignment files: {"X": {"word": "x0^2"}, "Y": {"breakpoints": [["p/2^e","q/2^e"], ...]}}

inline Element element_from_json(const nlohmann::json& j) {
  if (j.contains("word")) return word_to_element(j.at("word").get<std::string>());
  if (j.contains("breakpoints")) {
    std::vector<Breakpoint> pts;
    for (const auto& pair : j.at("breakpoints")) {
      if (!pair.is_array() || pair.size() != 2) {
        throw Error(ErrorCode::ParseError, "breakpoints must be [x, y] pairs");
      }
      pts.push_back({DyadicRational::parse(pair[0].get<std::string>()),
                     DyadicRational::parse(pair[1].get<std::string>())});
    }
    return make_element(std::move(pts));
  }
  throw Error(ErrorCode::ParseError, "element must have a \"word\" or \"breakpoints\" field");
}

inline nlohmann::json element_to_json(const Element& e) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : e.breakpoints()) pts.push_back({p.x.to_serial(), p.y.to_serial()});
  return {{"breakpoints", std::move(pts)}};
}

inline Assignment assignment_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "assignment must be a JSON object");
  Assignment a;
  for (const auto& [name, value] : j.items()) a.emplace(name, element_from_json(value));
  return a;
}

inline nlohmann::json assignment_to_json(const Assignment& a) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [name, e] : a) j[name] = element_to_json(e);
  return j;
}

inline Assignment parse_assignment(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  try {
    return assignment_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

inline std::string serialize_assignment(const Assignment& a) { return assignment_to_json(a).dump(2) + "\n"; }

}  // namespace thompson
