#pragma once

// Balls in the Cayley graph of F over {x0^{+-1}, x1^{+-1}}, and bounded
// brute-force search for solutions of equation systems.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "thompson/equation.hpp"
#include "thompson/word.hpp"

namespace thompson {

struct BallEntry {
  Element element;
  std::vector<Letter> word;  // a shortest word for the element
};

struct Ball {
  int radius = 0;
  std::vector<BallEntry> elements;  // breadth-first order
};

inline constexpr std::array<Letter, 4> kDefaultGeneratorOrder{
    Letter{Generator::X0, false}, Letter{Generator::X0, true}, Letter{Generator::X1, false},
    Letter{Generator::X1, true}};

struct BallOptions {
  std::size_t max_elements = 1'000'000;
  std::array<Letter, 4> generator_order = kDefaultGeneratorOrder;
};

/// Breadth-first closure of the identity under right multiplication by the
/// generators, deduplicated on canonical form.
inline Ball enumerate_ball(int radius, const BallOptions& options = {}) {
  if (radius < 0) throw Error(ErrorCode::OutOfRange, "radius must be non-negative");
  std::array<Element, 4> gens;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& l = options.generator_order[i];
    gens[i] = l.inverse ? invert(generator_element(l.gen)) : generator_element(l.gen);
  }
  Ball ball;
  ball.radius = radius;
  ball.elements.push_back({Element(), {}});
  std::unordered_map<Element, std::size_t> index{{Element(), 0}};
  std::size_t layer_begin = 0;
  for (int r = 0; r < radius; ++r) {
    const std::size_t layer_end = ball.elements.size();
    for (std::size_t i = layer_begin; i < layer_end; ++i) {
      for (std::size_t g = 0; g < 4; ++g) {
        Element next = compose(ball.elements[i].element, gens[g]);
        if (index.contains(next)) continue;
        if (ball.elements.size() >= options.max_elements) {
          throw Error(ErrorCode::ResourceLimit, "ball exceeds " + std::to_string(options.max_elements) + " elements");
        }
        index.emplace(next, ball.elements.size());
        auto word = ball.elements[i].word;
        word.push_back(options.generator_order[g]);
        ball.elements.push_back({std::move(next), std::move(word)});
      }
    }
    layer_begin = layer_end;
  }
  return ball;
}

struct SolveOptions {
  bool exhaustive = false;
  std::uint64_t max_checks = 100'000'000;
  BallOptions ball;
};

struct SolveResult {
  std::vector<std::string> searched;  // variables searched, in search order
  std::vector<Assignment> solutions;  // lexicographic in ball index
  std::uint64_t checks = 0;
};

/// Tries every assignment of ball elements to the searched variables
/// (lexicographically by ball index), holding the others at `fixed`.
/// Equations are checked as soon as all of their variables are bound.
inline SolveResult brute_force_solve(const EquationSystem& s, int radius,
                                     const std::optional<std::vector<std::string>>& vars = std::nullopt,
                                     const Assignment& fixed = {}, const SolveOptions& options = {}) {
  SolveResult result;
  if (vars) {
    for (const auto& v : *vars) {
      if (!s.has_variable(v)) throw Error(ErrorCode::UnboundVariable, "system has no variable $" + v);
    }
    result.searched = *vars;
  } else {
    for (const auto& v : s.variables()) {
      if (!fixed.contains(v)) result.searched.push_back(v);
    }
  }
  for (const auto& v : s.variables()) {
    bool searched = false;
    for (const auto& x : result.searched) searched = searched || x == v;
    if (!searched && !fixed.contains(v)) {
      throw Error(ErrorCode::UnboundVariable, "$" + v + " is neither searched nor fixed");
    }
  }

  // Equations grouped by the deepest searched variable they mention.
  const std::size_t depth = result.searched.size();
  std::vector<std::vector<const GroupWord*>> at_level(depth + 1);
  for (const auto& eq : s.equations()) {
    std::size_t level = 0;
    for (const auto& l : eq) {
      if (const auto* v = std::get_if<Variable>(&l.term)) {
        for (std::size_t i = 0; i < depth; ++i) {
          if (result.searched[i] == v->name) level = std::max(level, i + 1);
        }
      }
    }
    at_level[level].push_back(&eq);
  }

  Assignment current = fixed;
  auto level_ok = [&](std::size_t level) {
    for (const auto* eq : at_level[level]) {
      if (++result.checks > options.max_checks) {
        throw Error(ErrorCode::ResourceLimit, "more than " + std::to_string(options.max_checks) + " checks");
      }
      if (!evaluate_word(*eq, current).is_identity()) return false;
    }
    return true;
  };
  if (!level_ok(0)) return result;
  if (depth == 0) {
    result.solutions.push_back(current);
    return result;
  }

  const Ball ball = enumerate_ball(radius, options.ball);
  std::vector<std::size_t> choice(depth, 0);
  std::size_t level = 0;
  // Iterative depth-first search; choice[level] is the next candidate index.
  while (true) {
    if (choice[level] == ball.elements.size()) {
      if (level == 0) break;
      choice[level] = 0;
      --level;
      continue;
    }
    current[result.searched[level]] = ball.elements[choice[level]].element;
    ++choice[level];
    if (!level_ok(level + 1)) continue;
    if (level + 1 == depth) {
      Assignment sol;
      for (const auto& v : s.variables()) sol[v] = current.at(v);
      result.solutions.push_back(std::move(sol));
      if (!options.exhaustive) break;
      continue;
    }
    ++level;
  }
  return result;
}

}  // namespace thompson
