#pragma once

// Supports, fixed-point structure, germs at the endpoints and the
// abelianisation map F -> Z^2.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "thompson/dyadic.hpp"
#include "thompson/element.hpp"

namespace thompson {

struct OpenInterval {
  Rational lo;
  Rational hi;
  friend bool operator==(const OpenInterval&, const OpenInterval&) = default;
};

/// Disjoint open intervals in increasing order.
using IntervalSet = std::vector<OpenInterval>;

inline std::string to_string(const IntervalSet& set) {
  if (set.empty()) return "∅";
  std::string out;
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (i > 0) out += " u ";
    out += "(" + set[i].lo.str() + "," + set[i].hi.str() + ")";
  }
  return out;
}

namespace detail {

// A maximal closed piece of the fixed-point set; lo == hi for an isolated
// fixed point.
struct FixedPiece {
  Rational lo;
  Rational hi;
};

inline std::vector<FixedPiece> fixed_pieces(const Element& f) {
  const auto& pts = f.breakpoints();
  const auto slopes = f.slope_exponents();
  std::vector<FixedPiece> pieces;
  auto add = [&pieces](Rational lo, Rational hi) {
    if (!pieces.empty() && pieces.back().hi >= lo) {
      if (hi > pieces.back().hi) pieces.back().hi = std::move(hi);
      return;
    }
    pieces.push_back({std::move(lo), std::move(hi)});
  };
  for (std::size_t i = 0; i < slopes.size(); ++i) {
    const auto& p = pts[i];
    if (slopes[i] == 0) {
      if (p.x == p.y) add(p.x.to_rational(), pts[i + 1].x.to_rational());
      continue;
    }
    // x = y_i + (x - x_i) 2^k  =>  x = (y_i - x_i 2^k) / (1 - 2^k)
    const Rational scale = scale_pow2(Rational(1), slopes[i]);
    const Rational fixed = (p.y.to_rational() - p.x.to_rational() * scale) / (Rational(1) - scale);
    if (fixed >= p.x.to_rational() && fixed <= pts[i + 1].x.to_rational()) add(fixed, fixed);
  }
  return pieces;
}

}  // namespace detail

/// {x : (x)f != x} as disjoint open intervals.
inline IntervalSet support(const Element& f) {
  auto pieces = detail::fixed_pieces(f);
  IntervalSet out;
  for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
    out.push_back({pieces[i].hi, pieces[i + 1].lo});
  }
  return out;
}

enum class IntervalKind { FixedPointwise, SupportDense };

inline const char* to_string(IntervalKind k) {
  return k == IntervalKind::FixedPointwise ? "FixedPointwise" : "SupportDense";
}

/// Cut points 0 = d_0 < ... < d_k = 1 and the kind of each [d_i, d_{i+1}].
struct FixedDecomposition {
  std::vector<DyadicRational> cuts;
  std::vector<IntervalKind> kinds;
  friend bool operator==(const FixedDecomposition&, const FixedDecomposition&) = default;
};

/// Cuts are the ends of maximal pointwise-fixed intervals and the isolated
/// dyadic fixed points. Isolated non-dyadic fixed points do not cut: every
/// dyadic point near them is moved.
inline FixedDecomposition fixed_decomposition(const Element& f) {
  FixedDecomposition out;
  for (const auto& piece : detail::fixed_pieces(f)) {
    if (piece.lo == piece.hi) {
      if (auto d = DyadicRational::try_from_rational(piece.lo)) {
        if (!out.cuts.empty()) out.kinds.push_back(IntervalKind::SupportDense);
        out.cuts.push_back(std::move(*d));
      }
      continue;
    }
    // Interval ends are breakpoints, hence dyadic.
    auto lo = DyadicRational::from_rational(piece.lo);
    auto hi = DyadicRational::from_rational(piece.hi);
    if (!out.cuts.empty()) out.kinds.push_back(IntervalKind::SupportDense);
    out.cuts.push_back(std::move(lo));
    out.kinds.push_back(IntervalKind::FixedPointwise);
    out.cuts.push_back(std::move(hi));
  }
  return out;
}

/// log2 of the slopes at 0 and at 1.
struct EndpointSlopes {
  std::int64_t at_zero;
  std::int64_t at_one;
  friend bool operator==(const EndpointSlopes&, const EndpointSlopes&) = default;
};

inline EndpointSlopes endpoint_slopes(const Element& f) {
  const auto s = f.slope_exponents();
  return {s.front(), s.back()};
}

/// Exponent sums of x0 and x1.
struct ExpSums {
  std::int64_t x0;
  std::int64_t x1;
  friend bool operator==(const ExpSums&, const ExpSums&) = default;
  friend ExpSums operator+(const ExpSums& a, const ExpSums& b) { return {a.x0 + b.x0, a.x1 + b.x1}; }
};

/// The germ map f -> (alpha, beta) is a homomorphism to Z^2 with
/// x0 -> (1, -1) and x1 -> (0, -1); inverting that basis change gives
/// expsum_x0 = alpha and expsum_x1 = -alpha - beta.
inline ExpSums abelianise(const Element& f) {
  const auto [alpha, beta] = endpoint_slopes(f);
  return {alpha, -alpha - beta};
}

/// Commutation test via the fixed-point decomposition of f: g must fix every
/// cut, and on each piece the restrictions of f and g must commute.
inline bool centraliser_criterion(const Element& f, const Element& g) {
  const auto dec = fixed_decomposition(f);
  for (const auto& d : dec.cuts) {
    if (evaluate(g, d) != d) return false;
  }
  for (std::size_t i = 0; i < dec.kinds.size(); ++i) {
    if (dec.kinds[i] == IntervalKind::FixedPointwise) continue;
    const auto fr = restrict_to(f, dec.cuts[i], dec.cuts[i + 1]);
    const auto gr = restrict_to(g, dec.cuts[i], dec.cuts[i + 1]);
    if (compose(fr, gr) != compose(gr, fr)) return false;
  }
  return true;
}

}  // namespace thompson
