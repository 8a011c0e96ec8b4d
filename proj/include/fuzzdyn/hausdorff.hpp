#pragma once

#include <vector>

#include "fuzzdyn/compact_set.hpp"
#include "fuzzdyn/metric_space.hpp"

namespace fuzzdyn {

// min_{y in b} d(x, y); b nonempty
inline Rational distance_to_mask(const FiniteMetricSpace& space, PointId x, Mask b) {
    Rational best = space.diameter();
    bool seen = false;
    for_each_point(b, [&](PointId y) {
        const Rational& d = space.distance(x, y);
        if (!seen || d < best) {
            best = d;
            seen = true;
        }
    });
    return best;
}

inline Rational directed_hausdorff(const FiniteMetricSpace& space, Mask a, Mask b) {
    Rational worst = 0;
    for_each_point(a, [&](PointId x) {
        Rational d = distance_to_mask(space, x, b);
        if (d > worst) worst = d;
    });
    return worst;
}

// Hausdorff distance extended to the empty set: d_H(0,0) = 0 and
// d_H(0, A) = diam X for nonempty A. The extension is what makes the
// levelwise metric total when cut stacks have different heights.
inline Rational hausdorff_ext(const FiniteMetricSpace& space, Mask a, Mask b) {
    if (a == 0 && b == 0) return 0;
    if (a == 0 || b == 0) return space.diameter();
    if (a == b) return 0;
    return rat_max(directed_hausdorff(space, a, b), directed_hausdorff(space, b, a));
}

inline Rational hausdorff(const CompactSet& a, const CompactSet& b) {
    if (&a.space() != &b.space()) throw SpaceMismatch();
    return hausdorff_ext(a.space(), a.bits(), b.bits());
}

// d_H(a, b) < bound, with early exit. Equivalent to hausdorff_ext < bound.
inline bool hausdorff_lt(const FiniteMetricSpace& space, Mask a, Mask b, const Rational& bound) {
    if (bound <= 0) return false;
    if (a == b) return true;
    if (a == 0 || b == 0) return space.diameter() < bound;
    bool ok = true;
    for_each_point(a, [&](PointId x) {
        if (ok && distance_to_mask(space, x, b) >= bound) ok = false;
    });
    if (!ok) return false;
    for_each_point(b, [&](PointId y) {
        if (ok && distance_to_mask(space, y, a) >= bound) ok = false;
    });
    return ok;
}

// d_H(a, b) <= bound, with early exit; !hausdorff_le is the separation test.
inline bool hausdorff_le(const FiniteMetricSpace& space, Mask a, Mask b, const Rational& bound) {
    if (bound < 0) return false;
    if (a == b) return true;
    if (a == 0 || b == 0) return space.diameter() <= bound;
    bool ok = true;
    for_each_point(a, [&](PointId x) {
        if (ok && distance_to_mask(space, x, b) > bound) ok = false;
    });
    if (!ok) return false;
    for_each_point(b, [&](PointId y) {
        if (ok && distance_to_mask(space, y, a) > bound) ok = false;
    });
    return ok;
}

inline Rational mask_diameter(const FiniteMetricSpace& space, Mask m) {
    Rational worst = 0;
    auto pts = mask_points(m);
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const Rational& d = space.distance(pts[i], pts[j]);
            if (d > worst) worst = d;
        }
    return worst;
}

// Instance check for the union bound: preconditions d_H(A, B_l) < xi for
// every l, conclusion d_H(A, union of the B_l) <= xi. Closure of the union
// is the union itself on a finite space.
inline bool union_bound_check(const CompactSet& a, const std::vector<CompactSet>& b_list,
                              const Rational& xi) {
    if (b_list.empty()) throw PreconditionViolated("union_bound_check: empty family");
    Mask all = 0;
    for (const auto& b : b_list) {
        if (&b.space() != &a.space()) throw SpaceMismatch();
        if (hausdorff(a, b) >= xi)
            throw PreconditionViolated("union_bound_check: d_H(A, B) >= xi for " +
                                       mask_to_string(b.space(), b.bits()));
        all |= b.bits();
    }
    return hausdorff_ext(a.space(), a.bits(), all) <= xi;
}

}  // namespace fuzzdyn
