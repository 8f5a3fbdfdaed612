#pragma once

// Elements of Thompson's group F as canonical breakpoint lists.
//
// Maps act on the right: (x)f. compose(f, g) is "f then g", so
// (x)compose(f, g) = ((x)f)g. This is the order in which group words are
// read left to right.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "thompson/dyadic.hpp"
#include "thompson/errors.hpp"

namespace thompson {

struct Breakpoint {
  DyadicRational x;
  DyadicRational y;

  friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
  friend std::strong_ordering operator<=>(const Breakpoint& a, const Breakpoint& b) {
    if (auto c = a.x <=> b.x; c != 0) return c;
    return a.y <=> b.y;
  }
};

class Element;
Element make_element(const std::vector<std::pair<Rational, Rational>>& points);
Element make_element(std::vector<Breakpoint> points);

/// A PL homeomorphism of [0,1] with dyadic breakpoints and power-of-two
/// slopes. Always canonical: no interior breakpoint joins two segments of
/// equal slope, so equality of maps is equality of breakpoint lists.
class Element {
 public:
  /// The identity.
  Element() : points_{{0, 0}, {1, 1}}, slopes_{0} {}

  static Element identity() { return Element(); }

  const std::vector<Breakpoint>& breakpoints() const noexcept { return points_; }

  /// log2 of the slope on each segment; size is breakpoints().size() - 1.
  std::span<const std::int64_t> slope_exponents() const noexcept { return slopes_; }

  std::size_t segment_count() const noexcept { return slopes_.size(); }

  bool is_identity() const noexcept { return slopes_.size() == 1; }

  friend bool operator==(const Element& a, const Element& b) { return a.points_ == b.points_; }
  friend std::strong_ordering operator<=>(const Element& a, const Element& b) {
    return std::lexicographical_compare_three_way(a.points_.begin(), a.points_.end(),
                                                  b.points_.begin(), b.points_.end());
  }

  std::size_t hash() const {
    std::size_t h = points_.size();
    for (const auto& p : points_) {
      h ^= p.x.hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h ^= p.y.hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }

  /// Builds from breakpoints and slopes that are already known to be
  /// consistent; merges collinear segments.
  static Element from_trusted(std::vector<Breakpoint> points, std::vector<std::int64_t> slopes) {
    Element e(std::move(points), std::move(slopes));
    e.canonicalize();
    return e;
  }

 private:
  friend Element make_element(std::vector<Breakpoint> points);

  Element(std::vector<Breakpoint> points, std::vector<std::int64_t> slopes)
      : points_(std::move(points)), slopes_(std::move(slopes)) {}

  void canonicalize() {
    if (slopes_.size() <= 1) return;
    std::vector<Breakpoint> pts;
    std::vector<std::int64_t> sl;
    pts.reserve(points_.size());
    sl.reserve(slopes_.size());
    pts.push_back(std::move(points_[0]));
    for (std::size_t i = 0; i < slopes_.size(); ++i) {
      if (!sl.empty() && sl.back() == slopes_[i]) {
        pts.back() = std::move(points_[i + 1]);
      } else {
        sl.push_back(slopes_[i]);
        pts.push_back(std::move(points_[i + 1]));
      }
    }
    points_ = std::move(pts);
    slopes_ = std::move(sl);
  }

  std::vector<Breakpoint> points_;
  std::vector<std::int64_t> slopes_;
};

/// Validates a breakpoint list and returns its canonical element.
inline Element make_element(std::vector<Breakpoint> points) {
  if (points.size() < 2 || points.front() != Breakpoint{0, 0} || points.back() != Breakpoint{1, 1}) {
    throw Error(ErrorCode::BadEndpoints, "breakpoints must start at (0,0) and end at (1,1)");
  }
  std::vector<std::int64_t> slopes;
  slopes.reserve(points.size() - 1);
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const auto dx = points[i + 1].x - points[i].x;
    const auto dy = points[i + 1].y - points[i].y;
    if (dx.sign() <= 0 || dy.sign() <= 0) {
      throw Error(ErrorCode::NonMonotone, "coordinates must strictly increase at breakpoint " +
                                              std::to_string(i + 1));
    }
    auto [ox, ex] = dx.odd_part();
    auto [oy, ey] = dy.odd_part();
    if (ox != oy) {
      throw Error(ErrorCode::BadSlope, "slope of segment " + std::to_string(i) + " is not a power of 2");
    }
    slopes.push_back(ey - ex);
  }
  return Element::from_trusted(std::move(points), std::move(slopes));
}

inline Element make_element(const std::vector<std::pair<Rational, Rational>>& points) {
  std::vector<Breakpoint> pts;
  pts.reserve(points.size());
  for (const auto& [x, y] : points) {
    pts.push_back({DyadicRational::from_rational(x), DyadicRational::from_rational(y)});
  }
  return make_element(std::move(pts));
}

namespace detail {

// Index of the segment containing x (the last one whose left end is <= x).
template <class T, class Key>
std::size_t segment_index(const std::vector<Breakpoint>& pts, const T& x, Key key) {
  auto it = std::upper_bound(pts.begin() + 1, pts.end() - 1, x,
                             [&](const T& v, const Breakpoint& b) { return v < key(b); });
  return static_cast<std::size_t>(it - pts.begin()) - 1;
}

}  // namespace detail

/// (x)f for a dyadic point; requires 0 <= x <= 1.
inline DyadicRational evaluate(const Element& f, const DyadicRational& x) {
  if (x.sign() < 0 || x > DyadicRational(1)) {
    throw Error(ErrorCode::OutOfRange, x.to_string() + " is outside [0,1]");
  }
  const auto& pts = f.breakpoints();
  auto i = detail::segment_index(pts, x, [](const Breakpoint& b) -> const DyadicRational& { return b.x; });
  return pts[i].y + (x - pts[i].x).scaled_by_pow2(f.slope_exponents()[i]);
}

inline Rational scale_pow2(const Rational& r, std::int64_t k) {
  if (k >= 0) return r * Rational(detail::pow2(static_cast<std::uint64_t>(k)));
  return r / Rational(detail::pow2(static_cast<std::uint64_t>(-k)));
}

/// (p)f for an arbitrary rational point; requires 0 <= p <= 1.
inline Rational evaluate(const Element& f, const Rational& p) {
  if (p < 0 || p > 1) throw Error(ErrorCode::OutOfRange, p.str() + " is outside [0,1]");
  const auto& pts = f.breakpoints();
  auto i = detail::segment_index(pts, p, [](const Breakpoint& b) { return b.x.to_rational(); });
  return pts[i].y.to_rational() + scale_pow2(p - pts[i].x.to_rational(), f.slope_exponents()[i]);
}

/// The element h with (x)h = ((x)f)g.
inline Element compose(const Element& f, const Element& g) {
  const auto& fp = f.breakpoints();
  const auto& gp = g.breakpoints();
  const auto fs = f.slope_exponents();
  const auto gs = g.slope_exponents();

  std::vector<Breakpoint> out;
  std::vector<std::int64_t> slopes;
  out.reserve(fp.size() + gp.size());
  slopes.reserve(fp.size() + gp.size());
  out.push_back({0, 0});

  // Sweep the intermediate coordinate: f's y-values and g's x-values.
  std::size_t a = 1;
  std::size_t b = 1;
  while (a < fp.size() && b < gp.size()) {
    const auto cmp = fp[a].y <=> gp[b].x;
    const DyadicRational& mid = cmp <= 0 ? fp[a].y : gp[b].x;
    DyadicRational x = cmp <= 0 ? fp[a].x : fp[a - 1].x + (mid - fp[a - 1].y).scaled_by_pow2(-fs[a - 1]);
    DyadicRational z = cmp >= 0 ? gp[b].y : gp[b - 1].y + (mid - gp[b - 1].x).scaled_by_pow2(gs[b - 1]);
    slopes.push_back(fs[a - 1] + gs[b - 1]);
    out.push_back({std::move(x), std::move(z)});
    if (cmp <= 0) ++a;
    if (cmp >= 0) ++b;
  }
  return Element::from_trusted(std::move(out), std::move(slopes));
}

inline Element invert(const Element& f) {
  std::vector<Breakpoint> pts;
  pts.reserve(f.breakpoints().size());
  for (const auto& p : f.breakpoints()) pts.push_back({p.y, p.x});
  std::vector<std::int64_t> slopes(f.slope_exponents().begin(), f.slope_exponents().end());
  for (auto& s : slopes) s = -s;
  return Element::from_trusted(std::move(pts), std::move(slopes));
}

inline Element power(const Element& f, std::int64_t n) {
  Element base = n < 0 ? invert(f) : f;
  auto e = static_cast<std::uint64_t>(n < 0 ? -n : n);
  Element result;
  while (e > 0) {
    if (e & 1U) result = compose(result, base);
    e >>= 1U;
    if (e > 0) base = compose(base, base);
  }
  return result;
}

inline bool equals(const Element& f, const Element& g) { return f == g; }

/// [f, g] = f^-1 g^-1 f g.
inline Element commutator(const Element& f, const Element& g) {
  return compose(compose(invert(f), invert(g)), compose(f, g));
}

/// g^-1 f g.
inline Element conjugate(const Element& f, const Element& g) {
  return compose(compose(invert(g), f), g);
}

inline bool commutes(const Element& f, const Element& g) { return compose(f, g) == compose(g, f); }

/// The affine copy of f acting on [a, b], identity elsewhere.
inline Element rescale_into(const Element& f, const DyadicRational& a, const DyadicRational& b) {
  if (a.sign() < 0 || !(a < b) || b > DyadicRational(1)) {
    throw Error(ErrorCode::BadInterval, "need 0 <= a < b <= 1, got [" + a.to_string() + ", " +
                                            b.to_string() + "]");
  }
  const DyadicRational width = b - a;
  std::vector<Breakpoint> pts;
  std::vector<std::int64_t> slopes;
  if (a.sign() > 0) {
    pts.push_back({0, 0});
    slopes.push_back(0);
  }
  for (const auto& p : f.breakpoints()) pts.push_back({a + width * p.x, a + width * p.y});
  slopes.insert(slopes.end(), f.slope_exponents().begin(), f.slope_exponents().end());
  if (b < DyadicRational(1)) {
    pts.push_back({1, 1});
    slopes.push_back(0);
  }
  return Element::from_trusted(std::move(pts), std::move(slopes));
}

/// The element agreeing with f on [a, b] and the identity elsewhere. f must
/// fix both a and b.
inline Element restrict_to(const Element& f, const DyadicRational& a, const DyadicRational& b) {
  if (a.sign() < 0 || !(a < b) || b > DyadicRational(1)) {
    throw Error(ErrorCode::BadInterval, "need 0 <= a < b <= 1");
  }
  if (evaluate(f, a) != a || evaluate(f, b) != b) {
    throw Error(ErrorCode::BadInterval, "restriction endpoints must be fixed");
  }
  const auto& fp = f.breakpoints();
  const auto fs = f.slope_exponents();
  std::vector<Breakpoint> pts;
  std::vector<std::int64_t> slopes;
  if (a.sign() > 0) {
    pts.push_back({0, 0});
    slopes.push_back(0);
  }
  pts.push_back({a, a});
  for (std::size_t i = 0; i < fs.size(); ++i) {
    // segment i spans [fp[i].x, fp[i+1].x]; keep the part inside [a, b]
    if (!(fp[i].x < b) || !(a < fp[i + 1].x)) continue;
    slopes.push_back(fs[i]);
    if (fp[i + 1].x < b) pts.push_back(fp[i + 1]);
  }
  pts.push_back({b, b});
  if (b < DyadicRational(1)) {
    pts.push_back({1, 1});
    slopes.push_back(0);
  }
  return Element::from_trusted(std::move(pts), std::move(slopes));
}

/// Serializes breakpoints as [["p/2^e","q/2^e"], ...] text (JSON-compatible).
inline std::string breakpoints_to_string(const Element& f) {
  std::string out = "[";
  bool first = true;
  for (const auto& p : f.breakpoints()) {
    if (!first) out += ",";
    first = false;
    out += "[\"" + p.x.to_serial() + "\",\"" + p.y.to_serial() + "\"]";
  }
  return out + "]";
}

/// Human-readable breakpoints: [(0,0),(1/2^2,1/2^1),...].
inline std::string breakpoints_display(const Element& f) {
  std::string out = "[";
  bool first = true;
  for (const auto& p : f.breakpoints()) {
    if (!first) out += ",";
    first = false;
    out += "(" + p.x.to_string() + "," + p.y.to_string() + ")";
  }
  return out + "]";
}

}  // namespace thompson

template <>
struct std::hash<thompson::Element> {
  std::size_t operator()(const thompson::Element& e) const { return e.hash(); }
};
