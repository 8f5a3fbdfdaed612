#pragma once

// Polynomial systems over the non-negative integers and their flattening
// into atomic constraints a + b = c and a * b = c.
//
//   stmt    := poly "=" poly
//   poly    := mono ("+" mono)*
//   mono    := NAT | NAT "*" factors | factors
//   factors := VAR ("*" VAR)*

#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "thompson/errors.hpp"

namespace thompson {

struct Monomial {
  std::optional<std::int64_t> coefficient;  // explicit NAT, if written
  std::vector<std::string> factors;
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

using Polynomial = std::vector<Monomial>;

struct PolyEquation {
  Polynomial lhs;
  Polynomial rhs;
  friend bool operator==(const PolyEquation&, const PolyEquation&) = default;
};

namespace detail {

class PolyLineParser {
 public:
  PolyLineParser(std::string_view s, std::size_t line) : s_(s), line_(line) {}

  PolyEquation equation() {
    PolyEquation eq;
    eq.lhs = poly();
    skip_ws();
    if (!eat('=')) fail("expected '='");
    eq.rhs = poly();
    skip_ws();
    if (i_ < s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
    return eq;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, i_ + 1, msg); }

  void skip_ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(char c) {
    skip_ws();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  void check_sign() {
    skip_ws();
    if (i_ < s_.size() && s_[i_] == '-') {
      throw ParseError(ErrorCode::NegativeCoefficient, line_, i_ + 1,
                       "subtraction and negative coefficients are not allowed over Z>=0");
    }
  }

  Polynomial poly() {
    Polynomial p;
    p.push_back(mono());
    while (true) {
      check_sign();
      if (!eat('+')) break;
      p.push_back(mono());
    }
    return p;
  }

  Monomial mono() {
    check_sign();
    skip_ws();
    Monomial m;
    if (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
      std::int64_t v = 0;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
        v = v * 10 + (s_[i_++] - '0');
        if (v > (std::int64_t{1} << 40)) fail("constant too large");
      }
      m.coefficient = v;
      if (!eat('*')) return m;
    }
    m.factors.push_back(var());
    while (eat('*')) m.factors.push_back(var());
    return m;
  }

  std::string var() {
    skip_ws();
    check_sign();
    if (i_ >= s_.size() || !(std::isalpha(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) {
      fail("expected a variable");
    }
    if (s_[i_] == '_') fail("names starting with '_' are reserved");
    std::size_t start = i_;
    while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
    return std::string(s_.substr(start, i_ - start));
  }

  std::string_view s_;
  std::size_t line_;
  std::size_t i_ = 0;
};

}  // namespace detail

/// One equation per non-blank line; `#` starts a comment.
inline std::vector<PolyEquation> parse_poly_system(std::string_view text) {
  std::vector<PolyEquation> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    bool blank = true;
    for (char c : line) blank = blank && std::isspace(static_cast<unsigned char>(c));
    if (blank) continue;
    out.push_back(detail::PolyLineParser(line, line_no).equation());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Atomic systems

/// A constant or a variable.
using PolyTerm = std::variant<std::int64_t, std::string>;

inline std::string to_string(const PolyTerm& t) {
  if (const auto* c = std::get_if<std::int64_t>(&t)) return std::to_string(*c);
  return std::get<std::string>(t);
}

enum class AtomKind { Sum, Product };

/// a + b = c or a * b = c.
struct PolyAtom {
  AtomKind kind;
  PolyTerm a;
  PolyTerm b;
  PolyTerm c;
  friend bool operator==(const PolyAtom&, const PolyAtom&) = default;
};

inline std::string to_string(const PolyAtom& atom) {
  return std::string(atom.kind == AtomKind::Sum ? "Sum(" : "Product(") + to_string(atom.a) + ", " +
         to_string(atom.b) + ", " + to_string(atom.c) + ")";
}

struct PolySystem {
  std::vector<PolyAtom> atoms;
  std::vector<std::string> source_vars;  // in order of first appearance
  std::vector<std::string> aux_vars;     // _t0, _t1, ...

  std::vector<std::string> all_vars() const {
    auto v = source_vars;
    v.insert(v.end(), aux_vars.begin(), aux_vars.end());
    return v;
  }
};

namespace detail {

inline std::optional<PolyTerm> simple_term(const Monomial& m) {
  if (m.factors.empty()) return PolyTerm{*m.coefficient};
  if (!m.coefficient && m.factors.size() == 1) return PolyTerm{m.factors[0]};
  return std::nullopt;
}

inline std::optional<PolyTerm> simple_side(const Polynomial& p) {
  if (p.size() != 1) return std::nullopt;
  return simple_term(p[0]);
}

// The side as a single atomic operation, when it is literally `u + v` or `u * v`.
inline std::optional<PolyAtom> atomic_side(const Polynomial& p, const PolyTerm& result) {
  if (p.size() == 2) {
    auto a = simple_term(p[0]);
    auto b = simple_term(p[1]);
    if (a && b) return PolyAtom{AtomKind::Sum, *a, *b, result};
  }
  if (p.size() == 1 && !p[0].coefficient && p[0].factors.size() == 2) {
    return PolyAtom{AtomKind::Product, p[0].factors[0], p[0].factors[1], result};
  }
  return std::nullopt;
}

class Flattener {
 public:
  PolySystem run(const std::vector<PolyEquation>& equations) {
    for (const auto& eq : equations) {
      for (const auto* side : {&eq.lhs, &eq.rhs}) {
        for (const auto& m : *side) {
          for (const auto& f : m.factors) note_source(f);
        }
      }
    }
    for (const auto& eq : equations) {
      if (auto rhs = simple_side(eq.rhs)) {
        if (auto atom = atomic_side(eq.lhs, *rhs)) {
          out_.atoms.push_back(*atom);
          continue;
        }
      }
      if (auto lhs = simple_side(eq.lhs)) {
        if (auto atom = atomic_side(eq.rhs, *lhs)) {
          out_.atoms.push_back(*atom);
          continue;
        }
      }
      PolyTerm top_l = side(eq.lhs);
      PolyTerm top_r = side(eq.rhs);
      out_.atoms.push_back({AtomKind::Sum, top_l, std::int64_t{0}, top_r});
    }
    return std::move(out_);
  }

 private:
  void note_source(const std::string& v) {
    if (seen_.insert(v).second) out_.source_vars.push_back(v);
  }

  std::string fresh() {
    std::string name = "_t" + std::to_string(counter_++);
    out_.aux_vars.push_back(name);
    return name;
  }

  // Products inside each monomial first (left to right), then the sum chain.
  PolyTerm side(const Polynomial& p) {
    std::vector<PolyTerm> monos;
    for (const auto& m : p) {
      std::vector<PolyTerm> chain;
      if (m.coefficient || m.factors.empty()) chain.emplace_back(*m.coefficient);
      for (const auto& f : m.factors) chain.emplace_back(f);
      PolyTerm acc = chain[0];
      for (std::size_t i = 1; i < chain.size(); ++i) {
        std::string t = fresh();
        out_.atoms.push_back({AtomKind::Product, acc, chain[i], t});
        acc = t;
      }
      monos.push_back(acc);
    }
    PolyTerm acc = monos[0];
    for (std::size_t i = 1; i < monos.size(); ++i) {
      std::string t = fresh();
      out_.atoms.push_back({AtomKind::Sum, acc, monos[i], t});
      acc = t;
    }
    return acc;
  }

  PolySystem out_;
  std::set<std::string> seen_;
  std::size_t counter_ = 0;
};

}  // namespace detail

/// Flattens to atoms. Each equation p = q becomes the atoms building p and q
/// (temporaries _t<N>) tied by Sum(t_p, 0, t_q); an equation that is already
/// of the form u + v = w or u * v = w is kept as a single atom.
inline PolySystem normalize(const std::vector<PolyEquation>& equations) {
  return detail::Flattener{}.run(equations);
}

using IntAssignment = std::map<std::string, std::int64_t>;

inline std::int64_t term_value(const PolyTerm& t, const IntAssignment& n) {
  if (const auto* c = std::get_if<std::int64_t>(&t)) return *c;
  return n.at(std::get<std::string>(t));
}

inline bool atom_holds(const PolyAtom& atom, const IntAssignment& n) {
  const auto a = term_value(atom.a, n);
  const auto b = term_value(atom.b, n);
  const auto c = term_value(atom.c, n);
  return atom.kind == AtomKind::Sum ? a + b == c : a * b == c;
}

inline bool satisfies(const PolySystem& p, const IntAssignment& n) {
  for (const auto& atom : p.atoms) {
    if (!atom_holds(atom, n)) return false;
  }
  return true;
}

inline std::int64_t evaluate(const Polynomial& p, const IntAssignment& n) {
  std::int64_t total = 0;
  for (const auto& m : p) {
    std::int64_t v = m.coefficient.value_or(1);
    for (const auto& f : m.factors) v *= n.at(f);
    total += v;
  }
  return total;
}

inline bool satisfies(const std::vector<PolyEquation>& eqs, const IntAssignment& n) {
  for (const auto& eq : eqs) {
    if (evaluate(eq.lhs, n) != evaluate(eq.rhs, n)) return false;
  }
  return true;
}

/// Extends a partial assignment by propagating through the atoms, then
/// checks it. Throws NotASolution when a value is negative, inconsistent or
/// cannot be determined.
inline IntAssignment complete_assignment(const PolySystem& p, IntAssignment n) {
  for (const auto& [name, value] : n) {
    if (value < 0) throw Error(ErrorCode::NotASolution, name + " is negative");
  }
  auto known = [&n](const PolyTerm& t) {
    return std::holds_alternative<std::int64_t>(t) || n.contains(std::get<std::string>(t));
  };
  auto set = [&n](const PolyTerm& t, std::int64_t v) {
    if (v < 0) throw Error(ErrorCode::NotASolution, to_string(t) + " would be negative");
    n[std::get<std::string>(t)] = v;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& atom : p.atoms) {
      const bool ka = known(atom.a), kb = known(atom.b), kc = known(atom.c);
      if (ka && kb && !kc) {
        const auto a = term_value(atom.a, n), b = term_value(atom.b, n);
        set(atom.c, atom.kind == AtomKind::Sum ? a + b : a * b);
        changed = true;
      } else if (kc && (ka != kb)) {
        const auto c = term_value(atom.c, n);
        const PolyTerm& known_t = ka ? atom.a : atom.b;
        const PolyTerm& unknown_t = ka ? atom.b : atom.a;
        const auto k = term_value(known_t, n);
        if (atom.kind == AtomKind::Sum) {
          set(unknown_t, c - k);
          changed = true;
        } else if (k != 0) {
          if (c % k != 0) throw Error(ErrorCode::NotASolution, to_string(atom) + " has no integer solution");
          set(unknown_t, c / k);
          changed = true;
        }
      }
    }
  }
  for (const auto& v : p.all_vars()) {
    if (!n.contains(v)) throw Error(ErrorCode::NotASolution, "cannot determine a value for " + v);
  }
  for (const auto& atom : p.atoms) {
    if (!atom_holds(atom, n)) throw Error(ErrorCode::NotASolution, to_string(atom) + " is violated");
  }
  return n;
}

}  // namespace thompson
