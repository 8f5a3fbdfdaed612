#pragma once

// Group equations over F: words in constants and variables, systems of
// one-sided equations w = 1, and assignments of elements to variables.

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "thompson/element.hpp"
#include "thompson/errors.hpp"

namespace thompson {

struct Variable {
  std::string name;
  friend auto operator<=>(const Variable&, const Variable&) = default;
};

/// A named constant. The name is what the text format prints; the value is
/// what evaluation uses.
struct Constant {
  std::string name;
  std::shared_ptr<const Element> value;

  Constant(std::string n, Element e)
      : name(std::move(n)), value(std::make_shared<const Element>(std::move(e))) {}

  friend bool operator==(const Constant& a, const Constant& b) {
    return a.name == b.name && *a.value == *b.value;
  }
};

using Term = std::variant<Constant, Variable>;

struct WordLetter {
  Term term;
  int exponent = 1;  // +1 or -1
  friend bool operator==(const WordLetter&, const WordLetter&) = default;
};

using GroupWord = std::vector<WordLetter>;

inline WordLetter letter(const Term& t, int exponent = 1) { return {t, exponent}; }

/// w^-1 as a word.
inline GroupWord inverse(const GroupWord& w) {
  GroupWord out(w.rbegin(), w.rend());
  for (auto& l : out) l.exponent = -l.exponent;
  return out;
}

inline GroupWord concat(std::initializer_list<GroupWord> parts) {
  GroupWord out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

inline GroupWord word_of(const Term& t) { return {letter(t)}; }

/// [a, b] = a^-1 b^-1 a b.
inline GroupWord commutator_word(const GroupWord& a, const GroupWord& b) {
  return concat({inverse(a), inverse(b), a, b});
}

/// b^-1 a b.
inline GroupWord conjugate_word(const GroupWord& a, const GroupWord& b) {
  return concat({inverse(b), a, b});
}

using Assignment = std::map<std::string, Element>;

inline Element evaluate_word(const GroupWord& w, const Assignment& a) {
  Element result;
  for (const auto& l : w) {
    const Element* e = nullptr;
    if (const auto* c = std::get_if<Constant>(&l.term)) {
      e = c->value.get();
    } else {
      const auto& name = std::get<Variable>(l.term).name;
      auto it = a.find(name);
      if (it == a.end()) throw Error(ErrorCode::UnboundVariable, "variable $" + name + " is unassigned");
      e = &it->second;
    }
    result = compose(result, l.exponent > 0 ? *e : invert(*e));
  }
  return result;
}

inline void collect_variables(const GroupWord& w, std::vector<std::string>& out, std::set<std::string>& seen) {
  for (const auto& l : w) {
    if (const auto* v = std::get_if<Variable>(&l.term)) {
      if (seen.insert(v->name).second) out.push_back(v->name);
    }
  }
}

/// A constant introduced by a `const NAME = word` declaration.
struct DeclaredConstant {
  std::string name;
  std::string word;
  Element value;
  friend bool operator==(const DeclaredConstant&, const DeclaredConstant&) = default;
};

/// A finite system of equations w = 1 plus the bookkeeping needed to extend
/// it: a variable registry, declared constants, the fresh-name counter and
/// comment lines kept for serialization.
class EquationSystem {
 public:
  struct Item {
    enum class Kind { Comment, ConstDecl, Equation } kind;
    std::size_t index;  // into comments, constants or equations
  };

  const std::vector<GroupWord>& equations() const noexcept { return equations_; }
  const std::vector<std::string>& variables() const noexcept { return variables_; }
  const std::vector<DeclaredConstant>& declared_constants() const noexcept { return constants_; }
  const std::vector<std::string>& comments() const noexcept { return comments_; }
  const std::vector<Item>& items() const noexcept { return items_; }
  std::size_t fresh_counter() const noexcept { return counter_; }

  bool has_variable(const std::string& name) const { return variable_set_.contains(name); }

  void declare_variable(const std::string& name) {
    if (variable_set_.insert(name).second) {
      variables_.push_back(name);
      bump_counter(name);
    }
  }

  /// Returns `_aux<N>` and advances the counter.
  Variable fresh_variable() {
    std::string name;
    do {
      name = "_aux" + std::to_string(counter_++);
    } while (variable_set_.contains(name));
    variable_set_.insert(name);
    variables_.push_back(name);
    return {name};
  }

  void add_equation(GroupWord w) {
    for (const auto& l : w) {
      if (const auto* v = std::get_if<Variable>(&l.term)) declare_variable(v->name);
    }
    items_.push_back({Item::Kind::Equation, equations_.size()});
    equations_.push_back(std::move(w));
  }

  void add_comment(std::string text) {
    items_.push_back({Item::Kind::Comment, comments_.size()});
    comments_.push_back(std::move(text));
  }

  /// Declares (once) a named constant given by a word over x0, x1.
  Constant declare_constant(const std::string& name, const std::string& word, const Element& value) {
    for (const auto& c : constants_) {
      if (c.name == name) {
        if (c.value != value) throw Error(ErrorCode::UnknownConstant, "conflicting declaration of " + name);
        return {name, value};
      }
    }
    items_.push_back({Item::Kind::ConstDecl, constants_.size()});
    constants_.push_back({name, word, value});
    return {name, value};
  }

  const DeclaredConstant* find_constant(const std::string& name) const {
    for (const auto& c : constants_) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }

  /// Equality ignores comments and registration order.
  friend bool operator==(const EquationSystem& a, const EquationSystem& b) {
    return a.equations_ == b.equations_ && a.variable_set_ == b.variable_set_ &&
           a.constants_ == b.constants_ && a.counter_ == b.counter_;
  }

 private:
  void bump_counter(const std::string& name) {
    if (name.size() <= 4 || name.compare(0, 4, "_aux") != 0) return;
    std::size_t n = 0;
    for (std::size_t i = 4; i < name.size(); ++i) {
      if (name[i] < '0' || name[i] > '9') return;
      n = n * 10 + static_cast<std::size_t>(name[i] - '0');
    }
    if (n + 1 > counter_) counter_ = n + 1;
  }

  std::vector<GroupWord> equations_;
  std::vector<std::string> variables_;
  std::set<std::string> variable_set_;
  std::vector<DeclaredConstant> constants_;
  std::vector<std::string> comments_;
  std::vector<Item> items_;
  std::size_t counter_ = 0;
};

inline Variable fresh_variable(EquationSystem& system) { return system.fresh_variable(); }

/// True iff every equation evaluates to the identity under `a`.
inline bool check_system(const EquationSystem& s, const Assignment& a) {
  for (const auto& v : s.variables()) {
    if (!a.contains(v)) throw Error(ErrorCode::UnboundVariable, "variable $" + v + " is unassigned");
  }
  for (const auto& w : s.equations()) {
    if (!evaluate_word(w, a).is_identity()) return false;
  }
  return true;
}

}  // namespace thompson
