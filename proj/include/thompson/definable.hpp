#pragma once

// Builders for equation-system fragments whose solution sets (projected to
// the designated variables) are the definable subsets of F used by the
// reduction, plus direct membership tests for the same sets.
//
// Convention: [a, b] = a^-1 b^-1 a b, and words are read left to right.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "thompson/constants.hpp"
#include "thompson/equation.hpp"
#include "thompson/support.hpp"
#include "thompson/word.hpp"

namespace thompson {

/// paper: the commutator subgroup is defined as products of two commutators.
/// germ: it is defined as the elements fixing neighbourhoods of 0 and 1, by
/// commuting with conjugated copies of F supported near each endpoint.
enum class Mode { Paper, Germ };

inline std::string_view to_string(Mode m) { return m == Mode::Paper ? "paper" : "germ"; }

inline Mode parse_mode(std::string_view s) {
  if (s == "paper") return Mode::Paper;
  if (s == "germ") return Mode::Germ;
  throw Error(ErrorCode::ParseError, "unknown mode '" + std::string(s) + "' (expected germ|paper)");
}

enum class FragmentKind {
  CyclicX0,
  CyclicX1,
  MonoidPower,
  MonoidX1,
  PairS,
  CommutatorSubgroup,
  ExpsumZero,
  ExpsumEqual,
  ExpsumMixedNonneg,
};

inline std::string_view to_string(FragmentKind k) {
  switch (k) {
    case FragmentKind::CyclicX0: return "cyclic_x0";
    case FragmentKind::CyclicX1: return "cyclic_x1";
    case FragmentKind::MonoidPower: return "monoid_power";
    case FragmentKind::MonoidX1: return "monoid_x1";
    case FragmentKind::PairS: return "pair_S";
    case FragmentKind::CommutatorSubgroup: return "comm_subgroup";
    case FragmentKind::ExpsumZero: return "expsum_zero";
    case FragmentKind::ExpsumEqual: return "expsum_equal";
    case FragmentKind::ExpsumMixedNonneg: return "expsum_mixed_nonneg";
  }
  return "?";
}

/// A piece of an equation system. `arguments` are the terms in designated
/// positions (variables, or constants when a caller plugs one in);
/// `designated` lists those that are variables. `roles` names the auxiliary
/// variables introduced directly by this fragment; nested fragments carry
/// their own.
struct Fragment {
  FragmentKind kind;
  Mode mode = Mode::Germ;
  std::int64_t k = 0;             // MonoidPower
  Generator which = Generator::X0;  // ExpsumZero / ExpsumEqual
  std::vector<Term> arguments;
  std::vector<Variable> designated;
  std::vector<Variable> auxiliary;  // all auxiliaries, including nested ones
  std::vector<std::pair<std::string, Variable>> roles;
  std::vector<GroupWord> local_equations;
  std::vector<Fragment> children;

  /// Own equations followed by those of the children, depth first.
  std::vector<GroupWord> equations() const {
    std::vector<GroupWord> out = local_equations;
    for (const auto& c : children) {
      auto sub = c.equations();
      out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
  }

  const Variable& role(std::string_view name) const {
    for (const auto& [r, v] : roles) {
      if (r == name) return v;
    }
    throw Error(ErrorCode::UnboundVariable, "fragment has no role " + std::string(name));
  }

  std::string header() const {
    std::string h = "fragment: " + std::string(to_string(kind));
    if (kind == FragmentKind::MonoidPower) h += " k=" + std::to_string(k);
    if (kind == FragmentKind::ExpsumZero || kind == FragmentKind::ExpsumEqual) {
      h += std::string(" which=") + (which == Generator::X0 ? "x0" : "x1");
    }
    h += " mode=" + std::string(to_string(mode));
    for (const auto& a : arguments) {
      if (const auto* v = std::get_if<Variable>(&a)) {
        h += " $" + v->name;
      } else {
        h += " " + std::get<Constant>(a).name;
      }
    }
    return h;
  }
};

/// Adds the fragment's equations to `system`, each fragment preceded by a
/// `# fragment: ...` comment.
inline void append_fragment(EquationSystem& system, const Fragment& f) {
  system.add_comment(f.header());
  for (const auto& w : f.local_equations) system.add_equation(w);
  for (const auto& c : f.children) append_fragment(system, c);
}

namespace detail {

inline Term builtin_term(std::string_view name) {
  return Constant(std::string(name), *builtin_constant(name));
}

inline GroupWord w(const Term& t) { return word_of(t); }

inline Fragment start(FragmentKind kind, Mode mode, std::vector<Term> args) {
  Fragment f;
  f.kind = kind;
  f.mode = mode;
  for (const auto& a : args) {
    if (const auto* v = std::get_if<Variable>(&a)) f.designated.push_back(*v);
  }
  f.arguments = std::move(args);
  return f;
}

inline Variable add_role(EquationSystem& sys, Fragment& f, std::string role) {
  auto v = sys.fresh_variable();
  f.roles.emplace_back(std::move(role), v);
  f.auxiliary.push_back(v);
  return v;
}

inline void adopt(Fragment& parent, Fragment child) {
  for (const auto& v : child.designated) {
    bool known = false;
    for (const auto& d : parent.designated) known = known || d == v;
    for (const auto& a : parent.auxiliary) known = known || a == v;
    if (!known) parent.auxiliary.push_back(v);
  }
  for (const auto& v : child.auxiliary) parent.auxiliary.push_back(v);
  parent.children.push_back(std::move(child));
}

}  // namespace detail

/// x0 x1^k, declared in `sys` as `x0x1pow<k>` (plain x0 for k = 0).
inline Term x0x1k_constant(EquationSystem& sys, std::int64_t k) {
  if (k == 0) return detail::builtin_term("x0");
  const Word word{{Generator::X0, 1}, {Generator::X1, k}};
  return sys.declare_constant("x0x1pow" + std::to_string(k), to_string(word), word_to_element(word));
}

/// The image of l under the rescaling onto [1/2, 1].
inline Term lphi_constant(EquationSystem& sys) {
  static const std::string word = "x1^2 x0^-1 x1^-1 x0 x1^-1";
  return sys.declare_constant("lphi", word, constants().lphi);
}

/// x0^n, declared as `x0pow<n>`.
inline Term x0_power_constant(EquationSystem& sys, std::int64_t n) {
  const Word word = n == 0 ? Word{} : Word{{Generator::X0, n}};
  return sys.declare_constant("x0pow" + std::to_string(n), to_string(word), power(constants().x0, n));
}

/// {X : [X, x0] = 1}, the cyclic group <x0>.
inline Fragment define_cyclic_x0(EquationSystem&, const Term& x) {
  using detail::w;
  auto f = detail::start(FragmentKind::CyclicX0, Mode::Germ, {x});
  f.local_equations.push_back(commutator_word(w(x), w(detail::builtin_term("x0"))));
  return f;
}

/// <x1>: commute with x1 and with x0', x1' (so the support avoids (0, 1/2)).
inline Fragment define_cyclic_x1(EquationSystem&, const Term& x) {
  using detail::w;
  auto f = detail::start(FragmentKind::CyclicX1, Mode::Germ, {x});
  for (const char* c : {"x1", "x0p", "x1p"}) {
    f.local_equations.push_back(commutator_word(w(x), w(detail::builtin_term(c))));
  }
  return f;
}

/// Mon<x0 x1^k>: [X, x0 x1^k] = 1 and [X^-1 x1 X, l] = 1. The second
/// equation holds for a power (x0 x1^k)^n exactly when n >= 0.
inline Fragment define_monoid_power(EquationSystem& sys, const Term& x, std::int64_t k) {
  using detail::w;
  auto f = detail::start(FragmentKind::MonoidPower, Mode::Germ, {x});
  f.k = k;
  const Term g = x0x1k_constant(sys, k);
  f.local_equations.push_back(commutator_word(w(x), w(g)));
  f.local_equations.push_back(
      commutator_word(conjugate_word(w(detail::builtin_term("x1")), w(x)), w(detail::builtin_term("l"))));
  return f;
}

/// Mon<x1>: the centraliser conditions for <x1>, plus the sign test
/// transported to [1/2, 1].
inline Fragment define_monoid_x1(EquationSystem& sys, const Term& x) {
  using detail::w;
  auto f = detail::start(FragmentKind::MonoidX1, Mode::Germ, {x});
  for (const char* c : {"x1", "x0p", "x1p"}) {
    f.local_equations.push_back(commutator_word(w(x), w(detail::builtin_term(c))));
  }
  f.local_equations.push_back(
      commutator_word(conjugate_word(w(detail::builtin_term("x1pp")), w(x)), w(lphi_constant(sys))));
  return f;
}

/// {(r, s) : r in Mon<x1>, s in Mon<x0 r>}.
inline Fragment define_pair_S(EquationSystem& sys, const Term& r, const Term& s) {
  using detail::w;
  auto f = detail::start(FragmentKind::PairS, Mode::Germ, {r, s});
  const GroupWord x0r = concat({w(detail::builtin_term("x0")), w(r)});
  f.local_equations.push_back(commutator_word(w(s), x0r));
  f.local_equations.push_back(
      commutator_word(conjugate_word(w(detail::builtin_term("x1")), w(s)), w(detail::builtin_term("l"))));
  detail::adopt(f, define_monoid_x1(sys, r));
  return f;
}

/// The commutator subgroup [F, F].
inline Fragment define_commutator_subgroup(EquationSystem& sys, const Term& c, Mode mode) {
  using detail::w;
  auto f = detail::start(FragmentKind::CommutatorSubgroup, mode, {c});
  if (mode == Mode::Paper) {
    const Term y1 = detail::add_role(sys, f, "Y1");
    const Term y2 = detail::add_role(sys, f, "Y2");
    const Term y3 = detail::add_role(sys, f, "Y3");
    const Term y4 = detail::add_role(sys, f, "Y4");
    const GroupWord product = concat({commutator_word(w(y1), w(y2)), commutator_word(w(y3), w(y4))});
    f.local_equations.push_back(concat({w(c), inverse(product)}));
    return f;
  }
  const Term h1 = detail::add_role(sys, f, "H1");
  const Term h2 = detail::add_role(sys, f, "H2");
  for (const char* g : {"x0p", "x1p"}) {
    f.local_equations.push_back(commutator_word(w(c), conjugate_word(w(detail::builtin_term(g)), w(h1))));
  }
  for (const char* g : {"x1", "x1pp"}) {
    f.local_equations.push_back(commutator_word(w(c), conjugate_word(w(detail::builtin_term(g)), w(h2))));
  }
  return f;
}

/// {g : expsum_which(g) = 0}.
///   which = x0: paper mode X = C Z with C in [F,F], Z in <x1>; germ mode X
///               fixes a neighbourhood of 0 (commutes with H^-1 x0' H, H^-1 x1' H).
///   which = x1: X = C Z with Z in <x0> and C in [F,F] (in the given mode).
inline Fragment define_expsum_zero(EquationSystem& sys, const Term& x, Generator which, Mode mode) {
  using detail::w;
  auto f = detail::start(FragmentKind::ExpsumZero, mode, {x});
  f.which = which;
  if (which == Generator::X0 && mode == Mode::Germ) {
    const Term h = detail::add_role(sys, f, "H");
    for (const char* g : {"x0p", "x1p"}) {
      f.local_equations.push_back(commutator_word(w(x), conjugate_word(w(detail::builtin_term(g)), w(h))));
    }
    return f;
  }
  const Variable c = detail::add_role(sys, f, "C");
  const Variable z = detail::add_role(sys, f, "Z");
  // C Z X^-1 = 1, i.e. X = C Z
  f.local_equations.push_back(concat({w(c), w(z), inverse(w(x))}));
  detail::adopt(f, define_commutator_subgroup(sys, c, mode));
  detail::adopt(f, which == Generator::X0 ? define_cyclic_x1(sys, z) : define_cyclic_x0(sys, z));
  return f;
}

/// {(g, h) : expsum_which(g) = expsum_which(h)}, via W = X Y^-1.
inline Fragment define_expsum_equal(EquationSystem& sys, const Term& x, const Term& y, Generator which,
                                    Mode mode) {
  using detail::w;
  auto f = detail::start(FragmentKind::ExpsumEqual, mode, {x, y});
  f.which = which;
  const Variable wv = detail::add_role(sys, f, "W");
  // W Y X^-1 = 1
  f.local_equations.push_back(concat({w(wv), w(y), inverse(w(x))}));
  detail::adopt(f, define_expsum_zero(sys, wv, which, mode));
  return f;
}

/// {(g, h) : expsum_x0(g) = expsum_x1(h) >= 0}, witnessed by some Z' in
/// Mon<x0 x1>.
inline Fragment define_expsum_mixed_nonneg(EquationSystem& sys, const Term& x, const Term& y, Mode mode) {
  auto f = detail::start(FragmentKind::ExpsumMixedNonneg, mode, {x, y});
  const Variable zp = detail::add_role(sys, f, "Zp");
  detail::adopt(f, define_monoid_power(sys, zp, 1));
  detail::adopt(f, define_expsum_equal(sys, x, zp, Generator::X0, mode));
  detail::adopt(f, define_expsum_equal(sys, y, zp, Generator::X1, mode));
  return f;
}

/// A standalone system holding just this fragment.
template <class Builder>
std::pair<EquationSystem, Fragment> build_standalone(Builder&& build) {
  EquationSystem sys;
  Fragment f = build(sys);
  append_fragment(sys, f);
  return {std::move(sys), std::move(f)};
}

// ---------------------------------------------------------------------------
// Membership oracles

enum class SetKind {
  CyclicX0,
  CyclicX1,
  MonX0,
  MonX1,
  MonX0X1k,
  PairS,
  CommSubgroup,
  Expsum0X0,
  Expsum0X1,
  ExpsumEqX0,
  ExpsumEqX1,
  MixedNonneg,
};

struct SetId {
  SetKind kind;
  std::int64_t k = 0;  // MonX0X1k only
};

/// Accepts cyclic_x0, cyclic_x1, mon_x0, mon_x1, mon_x0x1k(k), pair_S,
/// comm_subgroup, expsum0_x0, expsum0_x1, expsum_eq_x0, expsum_eq_x1,
/// mixed_nonneg.
inline SetId parse_set_id(std::string_view s) {
  static const std::pair<std::string_view, SetKind> names[] = {
      {"cyclic_x0", SetKind::CyclicX0},     {"cyclic_x1", SetKind::CyclicX1},
      {"mon_x0", SetKind::MonX0},           {"mon_x1", SetKind::MonX1},
      {"pair_S", SetKind::PairS},           {"comm_subgroup", SetKind::CommSubgroup},
      {"expsum0_x0", SetKind::Expsum0X0},   {"expsum0_x1", SetKind::Expsum0X1},
      {"expsum_eq_x0", SetKind::ExpsumEqX0}, {"expsum_eq_x1", SetKind::ExpsumEqX1},
      {"mixed_nonneg", SetKind::MixedNonneg},
  };
  for (const auto& [name, kind] : names) {
    if (s == name) return {kind};
  }
  constexpr std::string_view prefix = "mon_x0x1k(";
  if (s.starts_with(prefix) && s.ends_with(")") && s.size() > prefix.size() + 1) {
    std::int64_t k = 0;
    for (char ch : s.substr(prefix.size(), s.size() - prefix.size() - 1)) {
      if (ch < '0' || ch > '9') throw Error(ErrorCode::UnknownSet, std::string(s));
      k = k * 10 + (ch - '0');
    }
    return {SetKind::MonX0X1k, k};
  }
  throw Error(ErrorCode::UnknownSet, "unknown set '" + std::string(s) + "'");
}

namespace detail {

// The exponent n with g = base^n, if any. base must have a nontrivial germ
// at `at_zero ? 0 : 1`; the candidate n is read off that germ.
inline std::optional<std::int64_t> power_of(const Element& g, const Element& base, bool at_zero) {
  const auto gs = endpoint_slopes(g);
  const auto bs = endpoint_slopes(base);
  const std::int64_t gv = at_zero ? gs.at_zero : gs.at_one;
  const std::int64_t bv = at_zero ? bs.at_zero : bs.at_one;
  if (gv % bv != 0) return std::nullopt;
  const std::int64_t n = gv / bv;
  if (power(base, n) != g) return std::nullopt;
  return n;
}

inline void require_arity(const std::vector<Element>& t, std::size_t n) {
  if (t.size() != n) throw Error(ErrorCode::UnknownSet, "wrong tuple size for set");
}

}  // namespace detail

/// Decides membership directly, without equations.
inline bool membership_oracle(const SetId& set, const std::vector<Element>& tuple) {
  const auto& c = constants();
  switch (set.kind) {
    case SetKind::CyclicX0:
      detail::require_arity(tuple, 1);
      return detail::power_of(tuple[0], c.x0, true).has_value();
    case SetKind::CyclicX1:
      detail::require_arity(tuple, 1);
      return detail::power_of(tuple[0], c.x1, false).has_value();
    case SetKind::MonX0: {
      detail::require_arity(tuple, 1);
      auto n = detail::power_of(tuple[0], c.x0, true);
      return n && *n >= 0;
    }
    case SetKind::MonX1: {
      detail::require_arity(tuple, 1);
      auto n = detail::power_of(tuple[0], c.x1, false);
      return n && *n >= 0;
    }
    case SetKind::MonX0X1k: {
      detail::require_arity(tuple, 1);
      auto n = detail::power_of(tuple[0], compose(c.x0, power(c.x1, set.k)), true);
      return n && *n >= 0;
    }
    case SetKind::PairS: {
      detail::require_arity(tuple, 2);
      const std::int64_t p = abelianise(tuple[0]).x1;
      const std::int64_t q = abelianise(tuple[1]).x0;
      if (p < 0 || q < 0) return false;
      return power(c.x1, p) == tuple[0] && power(compose(c.x0, power(c.x1, p)), q) == tuple[1];
    }
    case SetKind::CommSubgroup:
      detail::require_arity(tuple, 1);
      return abelianise(tuple[0]) == ExpSums{0, 0};
    case SetKind::Expsum0X0:
      detail::require_arity(tuple, 1);
      return abelianise(tuple[0]).x0 == 0;
    case SetKind::Expsum0X1:
      detail::require_arity(tuple, 1);
      return abelianise(tuple[0]).x1 == 0;
    case SetKind::ExpsumEqX0:
      detail::require_arity(tuple, 2);
      return abelianise(tuple[0]).x0 == abelianise(tuple[1]).x0;
    case SetKind::ExpsumEqX1:
      detail::require_arity(tuple, 2);
      return abelianise(tuple[0]).x1 == abelianise(tuple[1]).x1;
    case SetKind::MixedNonneg: {
      detail::require_arity(tuple, 2);
      const auto a = abelianise(tuple[0]).x0;
      return a >= 0 && a == abelianise(tuple[1]).x1;
    }
  }
  throw Error(ErrorCode::UnknownSet, "unhandled set");
}

inline bool membership_oracle(std::string_view set_id, const std::vector<Element>& tuple) {
  return membership_oracle(parse_set_id(set_id), tuple);
}

}  // namespace thompson
