#pragma once

// Reduction of atomic polynomial systems over Z>=0 to systems of equations
// over F, witness construction from integer solutions, and decoding.
//
// n is represented by x0^n; every variable is constrained to Mon<x0>.
//   a + b = c  becomes  E(a) E(b) E(c)^-1 = 1
//   a * b = c  uses fresh (R, S) in {(x1^p, (x0 x1^p)^q)} with
//              expsum_x0(E(a)) = expsum_x1(R) >= 0,
//              expsum_x0(E(b)) = expsum_x0(S),
//              expsum_x0(E(c)) = expsum_x1(S) >= 0,
// since expsum_x1((x0 x1^p)^q) = pq.

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "thompson/ball.hpp"
#include "thompson/definable.hpp"
#include "thompson/poly.hpp"
#include "thompson/system_io.hpp"

namespace thompson {

inline constexpr const char* kToolVersion = "1.0.0";

using CommutatorTuple = std::array<Element, 4>;

/// Returns (a1, a2, a3, a4) with [a1,a2][a3,a4] = y, or nothing. Results
/// are always re-verified by the caller.
using CommutatorOracle = std::function<std::optional<CommutatorTuple>(const Element&)>;

inline Element commutator_product(const CommutatorTuple& t) {
  return compose(commutator(t[0], t[1]), commutator(t[2], t[3]));
}

/// Searches for y = [a1,a2][a3,a4] with all ai in the ball of the given
/// radius. Tries a single commutator first, then a meet-in-the-middle pass
/// over pairs of commutators; the first hit in enumeration order wins.
inline std::optional<CommutatorTuple> decompose_commutators(const Element& y, int search_radius) {
  if (abelianise(y) != ExpSums{0, 0}) {
    throw Error(ErrorCode::NotInCommutatorSubgroup, "element has nonzero exponent sums");
  }
  const Element id;
  if (y.is_identity()) return CommutatorTuple{id, id, id, id};

  const Ball ball = enumerate_ball(search_radius);
  const auto& entries = ball.elements;
  std::vector<std::pair<Element, std::pair<std::size_t, std::size_t>>> commutators;
  std::unordered_map<Element, std::pair<std::size_t, std::size_t>> first;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    for (std::size_t j = 0; j < entries.size(); ++j) {
      Element c = commutator(entries[i].element, entries[j].element);
      if (first.emplace(c, std::pair{i, j}).second) commutators.emplace_back(std::move(c), std::pair{i, j});
    }
  }
  if (auto it = first.find(y); it != first.end()) {
    return CommutatorTuple{entries[it->second.first].element, entries[it->second.second].element, id, id};
  }
  for (const auto& [c1, ij] : commutators) {
    const Element rest = compose(invert(c1), y);
    if (auto it = first.find(rest); it != first.end()) {
      CommutatorTuple t{entries[ij.first].element, entries[ij.second].element,
                        entries[it->second.first].element, entries[it->second.second].element};
      if (commutator_product(t) == y) return t;
    }
  }
  return std::nullopt;
}

inline CommutatorOracle search_oracle(int radius) {
  return [radius](const Element& y) { return decompose_commutators(y, radius); };
}

/// Looks up user-supplied decompositions first, then falls back.
inline CommutatorOracle table_oracle(std::vector<std::pair<Element, CommutatorTuple>> table,
                                     CommutatorOracle fallback = {}) {
  return [table = std::move(table), fallback = std::move(fallback)](const Element& y)
             -> std::optional<CommutatorTuple> {
    for (const auto& [target, tuple] : table) {
      if (target == y) return tuple;
    }
    if (fallback) return fallback(y);
    return std::nullopt;
  };
}

/// File format: [{"target": <element>, "factors": [<element> x4]}, ...]
/// where <element> is {"word": ...} or {"breakpoints": ...}.
inline std::vector<std::pair<Element, CommutatorTuple>> parse_decompositions(const nlohmann::json& j) {
  std::vector<std::pair<Element, CommutatorTuple>> out;
  for (const auto& entry : j) {
    const auto& f = entry.at("factors");
    if (f.size() != 4) throw Error(ErrorCode::ParseError, "a decomposition needs exactly 4 factors");
    CommutatorTuple t{element_from_json(f[0]), element_from_json(f[1]), element_from_json(f[2]),
                      element_from_json(f[3])};
    Element target = entry.contains("target") ? element_from_json(entry.at("target")) : commutator_product(t);
    out.emplace_back(std::move(target), std::move(t));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Encoding

/// Maps polynomial variables to group variables and records what every
/// auxiliary group variable is for.
struct VarMap {
  Mode mode = Mode::Germ;
  std::vector<std::pair<std::string, std::string>> source_vars;  // polynomial -> group
  std::vector<std::pair<std::string, std::string>> temp_vars;
  std::vector<PolyAtom> atoms;
  std::vector<std::pair<std::string, std::string>> aux_roles;  // group variable -> role path

  const std::string& group_variable(const std::string& poly_var) const {
    for (const auto& [p, g] : source_vars) {
      if (p == poly_var) return g;
    }
    for (const auto& [p, g] : temp_vars) {
      if (p == poly_var) return g;
    }
    throw Error(ErrorCode::UnboundVariable, "no group variable for " + poly_var);
  }
};

inline nlohmann::ordered_json varmap_to_json(const VarMap& m) {
  nlohmann::ordered_json j;
  j["mode"] = std::string(to_string(m.mode));
  j["tool_version"] = kToolVersion;
  j["source_vars"] = nlohmann::ordered_json::object();
  for (const auto& [p, g] : m.source_vars) j["source_vars"][p] = g;
  j["temp_vars"] = nlohmann::ordered_json::object();
  for (const auto& [p, g] : m.temp_vars) j["temp_vars"][p] = g;
  j["atoms"] = nlohmann::ordered_json::array();
  for (const auto& a : m.atoms) {
    j["atoms"].push_back({{"kind", a.kind == AtomKind::Sum ? "sum" : "product"},
                          {"terms", {to_string(a.a), to_string(a.b), to_string(a.c)}}});
  }
  j["aux_roles"] = nlohmann::ordered_json::object();
  for (const auto& [v, role] : m.aux_roles) j["aux_roles"][v] = role;
  return j;
}

inline VarMap varmap_from_json(const nlohmann::ordered_json& j) {
  VarMap m;
  try {
    m.mode = parse_mode(j.at("mode").get<std::string>());
    for (const auto& [p, g] : j.at("source_vars").items()) m.source_vars.emplace_back(p, g.get<std::string>());
    if (j.contains("temp_vars")) {
      for (const auto& [p, g] : j.at("temp_vars").items()) m.temp_vars.emplace_back(p, g.get<std::string>());
    }
    auto term = [](const nlohmann::ordered_json& t) -> PolyTerm {
      const auto s = t.get<std::string>();
      if (!s.empty() && std::isdigit(static_cast<unsigned char>(s[0]))) return std::int64_t{std::stoll(s)};
      return s;
    };
    for (const auto& a : j.at("atoms")) {
      const auto& t = a.at("terms");
      m.atoms.push_back({a.at("kind").get<std::string>() == "sum" ? AtomKind::Sum : AtomKind::Product,
                         term(t.at(0)), term(t.at(1)), term(t.at(2))});
    }
    if (j.contains("aux_roles")) {
      for (const auto& [v, r] : j.at("aux_roles").items()) m.aux_roles.emplace_back(v, r.get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("bad variable map: ") + e.what());
  }
  return m;
}

/// The encoding of one atom: its fragments and, for products, the (R, S) pair.
struct EncodedAtom {
  PolyAtom atom;
  std::optional<Variable> r;
  std::optional<Variable> s;
  std::vector<Fragment> fragments;
};

struct Encoding {
  EquationSystem system;
  VarMap map;
  std::vector<Fragment> variable_fragments;  // Mon<x0> constraint per variable
  std::vector<EncodedAtom> atoms;
};

namespace detail {

inline void stamp_mode(Fragment& f, Mode mode) {
  f.mode = mode;
  for (auto& c : f.children) stamp_mode(c, mode);
}

inline void record_roles(const Fragment& f, const std::string& path, VarMap& map) {
  const std::string here = path + "." + std::string(to_string(f.kind));
  for (const auto& [role, v] : f.roles) map.aux_roles.emplace_back(v.name, here + "." + role);
  for (const auto& c : f.children) record_roles(c, here, map);
}

}  // namespace detail

/// Full encoding with the structure needed for witness construction.
inline Encoding encode_structured(const PolySystem& p, Mode mode) {
  Encoding enc;
  auto& sys = enc.system;
  enc.map.mode = mode;
  enc.map.atoms = p.atoms;
  sys.add_comment("thompson-f reduce");
  sys.add_comment("mode: " + std::string(to_string(mode)));
  sys.add_comment("tool-version: " + std::string(kToolVersion));
  sys.add_comment("atoms: " + std::to_string(p.atoms.size()));

  auto term_of = [&](const PolyTerm& t) -> Term {
    if (const auto* c = std::get_if<std::int64_t>(&t)) return x0_power_constant(sys, *c);
    return Variable{std::get<std::string>(t)};
  };

  for (const auto& v : p.source_vars) enc.map.source_vars.emplace_back(v, v);
  for (const auto& v : p.aux_vars) enc.map.temp_vars.emplace_back(v, v);
  for (const auto& v : p.all_vars()) {
    sys.add_comment("variable " + v + " in Mon<x0>");
    auto f = define_monoid_power(sys, Variable{v}, 0);
    detail::stamp_mode(f, mode);
    append_fragment(sys, f);
    enc.variable_fragments.push_back(std::move(f));
  }

  for (std::size_t i = 0; i < p.atoms.size(); ++i) {
    const auto& atom = p.atoms[i];
    EncodedAtom ea{atom, std::nullopt, std::nullopt, {}};
    const std::string path = "atom" + std::to_string(i);
    sys.add_comment("atom " + std::to_string(i) + ": " + to_string(atom));
    const Term a = term_of(atom.a);
    const Term b = term_of(atom.b);
    const Term c = term_of(atom.c);
    if (atom.kind == AtomKind::Sum) {
      sys.add_equation(concat({word_of(a), word_of(b), inverse(word_of(c))}));
    } else {
      ea.r = sys.fresh_variable();
      ea.s = sys.fresh_variable();
      enc.map.aux_roles.emplace_back(ea.r->name, path + ".R");
      enc.map.aux_roles.emplace_back(ea.s->name, path + ".S");
      ea.fragments.push_back(define_pair_S(sys, *ea.r, *ea.s));
      ea.fragments.push_back(define_expsum_mixed_nonneg(sys, a, *ea.r, mode));
      ea.fragments.push_back(define_expsum_equal(sys, b, *ea.s, Generator::X0, mode));
      ea.fragments.push_back(define_expsum_mixed_nonneg(sys, c, *ea.s, mode));
      for (auto& f : ea.fragments) {
        detail::stamp_mode(f, mode);
        detail::record_roles(f, path, enc.map);
        append_fragment(sys, f);
      }
    }
    enc.atoms.push_back(std::move(ea));
  }
  return enc;
}

inline std::pair<EquationSystem, VarMap> encode(const PolySystem& p, Mode mode) {
  auto enc = encode_structured(p, mode);
  return {std::move(enc.system), std::move(enc.map)};
}

// ---------------------------------------------------------------------------
// Witnesses

namespace detail {

// Least m >= 0 with (1/2) x0^-m = 2^-(m+1) <= inf supt(e).
inline std::int64_t low_conjugator_exponent(const Element& e) {
  if (e.is_identity()) return 0;
  const Rational lo = support(e).front().lo;
  if (lo <= 0) throw Error(ErrorCode::NotASolution, "element moves points arbitrarily close to 0");
  std::int64_t m = 0;
  while (Rational(1, detail::pow2(static_cast<std::uint64_t>(m + 1))) > lo) ++m;
  return m;
}

// Least m >= 0 with (1/2) x0^m = 1 - 2^-(m+1) >= sup supt(e).
inline std::int64_t high_conjugator_exponent(const Element& e) {
  if (e.is_identity()) return 0;
  const Rational hi = support(e).back().hi;
  if (hi >= 1) throw Error(ErrorCode::NotASolution, "element moves points arbitrarily close to 1");
  std::int64_t m = 0;
  while (Rational(1) - Rational(1, detail::pow2(static_cast<std::uint64_t>(m + 1))) < hi) ++m;
  return m;
}

inline Element term_value(const Term& t, const Assignment& a) {
  if (const auto* c = std::get_if<Constant>(&t)) return *c->value;
  const auto& name = std::get<Variable>(t).name;
  auto it = a.find(name);
  if (it == a.end()) throw Error(ErrorCode::UnboundVariable, "no value for $" + name);
  return it->second;
}

}  // namespace detail

/// Assigns every auxiliary variable of `f` (recursively), given values for
/// its arguments in `a`.
inline void fill_fragment_witness(const Fragment& f, Assignment& a, const CommutatorOracle& oracle) {
  const auto& k = constants();
  switch (f.kind) {
    case FragmentKind::CyclicX0:
    case FragmentKind::CyclicX1:
    case FragmentKind::MonoidPower:
    case FragmentKind::MonoidX1:
    case FragmentKind::PairS:
      break;
    case FragmentKind::CommutatorSubgroup: {
      const Element c = detail::term_value(f.arguments[0], a);
      if (f.mode == Mode::Germ) {
        a[f.role("H1").name] = power(k.x0, -detail::low_conjugator_exponent(c));
        a[f.role("H2").name] = power(k.x0, detail::high_conjugator_exponent(c));
        break;
      }
      std::optional<CommutatorTuple> t;
      if (oracle) t = oracle(c);
      if (!t || commutator_product(*t) != c) {
        throw Error(ErrorCode::DecompositionNotFound,
                    "no verified two-commutator decomposition for " + breakpoints_display(c));
      }
      for (int i = 0; i < 4; ++i) a[f.role("Y" + std::to_string(i + 1)).name] = (*t)[static_cast<std::size_t>(i)];
      break;
    }
    case FragmentKind::ExpsumZero: {
      const Element x = detail::term_value(f.arguments[0], a);
      if (f.which == Generator::X0 && f.mode == Mode::Germ) {
        a[f.role("H").name] = power(k.x0, -detail::low_conjugator_exponent(x));
        break;
      }
      const auto sums = abelianise(x);
      const Element z = f.which == Generator::X0 ? power(k.x1, sums.x1) : power(k.x0, sums.x0);
      a[f.role("Z").name] = z;
      a[f.role("C").name] = compose(x, invert(z));
      break;
    }
    case FragmentKind::ExpsumEqual: {
      const Element x = detail::term_value(f.arguments[0], a);
      const Element y = detail::term_value(f.arguments[1], a);
      a[f.role("W").name] = compose(x, invert(y));
      break;
    }
    case FragmentKind::ExpsumMixedNonneg: {
      const Element x = detail::term_value(f.arguments[0], a);
      a[f.role("Zp").name] = power(compose(k.x0, k.x1), abelianise(x).x0);
      break;
    }
  }
  for (const auto& c : f.children) fill_fragment_witness(c, a, oracle);
}

/// Builds a verified assignment for encode(p, mode) from a (possibly
/// partial) non-negative solution n; missing values are propagated.
inline Assignment witness(const PolySystem& p, const IntAssignment& n, Mode mode,
                          const CommutatorOracle& oracle = search_oracle(2)) {
  const IntAssignment full = complete_assignment(p, n);
  const auto enc = encode_structured(p, mode);
  const auto& k = constants();

  Assignment a;
  for (const auto& v : p.all_vars()) a[enc.map.group_variable(v)] = power(k.x0, full.at(v));
  for (const auto& f : enc.variable_fragments) fill_fragment_witness(f, a, oracle);
  for (const auto& ea : enc.atoms) {
    if (ea.atom.kind == AtomKind::Product) {
      const auto pk = term_value(ea.atom.a, full);
      const auto ql = term_value(ea.atom.b, full);
      const Element r = power(k.x1, pk);
      a[ea.r->name] = r;
      a[ea.s->name] = power(compose(k.x0, r), ql);
    }
    for (const auto& f : ea.fragments) fill_fragment_witness(f, a, oracle);
  }
  if (!check_system(enc.system, a)) {
    throw Error(ErrorCode::NotASolution, "constructed witness failed verification");
  }
  return a;
}

/// n_v = expsum_x0(a(X_v)) for each source variable, after checking that
/// a(X_v) lies in Mon<x0>.
inline IntAssignment decode(const Assignment& a, const VarMap& m) {
  IntAssignment out;
  for (const auto& [poly_var, group_var] : m.source_vars) {
    auto it = a.find(group_var);
    if (it == a.end()) throw Error(ErrorCode::UnboundVariable, "no value for $" + group_var);
    if (!membership_oracle(SetId{SetKind::MonX0}, {it->second})) {
      throw Error(ErrorCode::NotInImage, "$" + group_var + " is not a non-negative power of x0");
    }
    out[poly_var] = abelianise(it->second).x0;
  }
  return out;
}

}  // namespace thompson
