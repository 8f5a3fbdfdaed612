#pragma once

#include <optional>
#include <string_view>

#include "thompson/element.hpp"

namespace thompson {

/// Named elements used by the equation builders.
///
/// x0p and x1p generate the copy of F supported on (0, 1/2); x1pp is the
/// image of x1 under the rescaling of F onto [1/2, 1] (which sends x0 to x1).
/// l is the chosen element with support (0, 1/2), and lphi its image under
/// that rescaling.
struct Constants {
  Element x0;
  Element x1;
  Element x0p;
  Element x1p;
  Element x1pp;
  Element l;
  Element lphi;
};

inline const Constants& constants() {
  static const Constants c = [] {
    Constants k;
    const DyadicRational half(1, 1);
    k.x0 = make_element(std::vector<Breakpoint>{{0, 0}, {{1, 2}, {1, 1}}, {{1, 1}, {3, 2}}, {1, 1}});
    k.x1 = make_element(std::vector<Breakpoint>{
        {0, 0}, {{1, 1}, {1, 1}}, {{5, 3}, {3, 2}}, {{3, 2}, {7, 3}}, {1, 1}});
    k.x0p = rescale_into(k.x0, 0, half);
    k.x1p = rescale_into(k.x1, 0, half);
    k.x1pp = rescale_into(k.x1, half, 1);
    k.l = k.x0p;
    k.lphi = rescale_into(k.l, half, 1);
    return k;
  }();
  return c;
}

/// Builtin constant names accepted in group-system files.
inline std::optional<Element> builtin_constant(std::string_view name) {
  const auto& c = constants();
  if (name == "x0") return c.x0;
  if (name == "x1") return c.x1;
  if (name == "x0p") return c.x0p;
  if (name == "x1p") return c.x1p;
  if (name == "x1pp") return c.x1pp;
  if (name == "l") return c.l;
  return std::nullopt;
}

}  // namespace thompson
