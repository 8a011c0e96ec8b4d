#pragma once

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

#include "fuzzdyn/dynamics.hpp"
#include "fuzzdyn/fuzzy_set.hpp"
#include "fuzzdyn/rng.hpp"
#include "fuzzdyn/unit_function.hpp"

namespace fuzzdyn {

// Random finite metric spaces for the randomized suites. Two flavors:
// sorted rational points on a line, and symmetric matrices with entries in
// [1/2, 1], where the triangle inequality holds for free.
inline SpaceHandle random_space(Rng& rng, std::size_t n) {
    if (rng.coin()) {
        std::set<Rational> coords;
        coords.insert(Rational(0));
        const int den = 16 + static_cast<int>(rng.below(4)) * 16;
        while (coords.size() < n) coords.insert(Rational(rng.range(1, den), den));
        std::vector<Rational> sorted(coords.begin(), coords.end());
        return line_space(sorted);
    }
    std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            Rational d(4 + rng.range(0, 4), 8);  // in [1/2, 1]
            m[i][j] = d;
            m[j][i] = d;
        }
    return build_space(std::move(m));
}

inline std::vector<PointId> random_table(Rng& rng, std::size_t n) {
    std::vector<PointId> table(n);
    for (auto& t : table) t = static_cast<PointId>(rng.below(n));
    return table;
}

inline DynMap random_map(Rng& rng, const SpaceHandle& space) {
    return DynMap(space, random_table(rng, space->size()));
}

inline LevelLattice random_lattice(Rng& rng, std::size_t max_extra = 3) {
    std::set<Rational> levels;
    levels.insert(Rational(1));
    const int den = 2 + static_cast<int>(rng.below(11));
    // at most den distinct values of the form k/den exist in (0,1]
    const std::size_t target = std::min<std::size_t>(rng.below(max_extra + 1) + 1,
                                                     static_cast<std::size_t>(den));
    while (levels.size() < target) levels.insert(Rational(rng.range(1, den), den));
    return LevelLattice(std::vector<Rational>(levels.begin(), levels.end()));
}

inline FuzzySet random_fuzzy_set(Rng& rng, const SpaceHandle& space, const LevelLattice& lattice,
                                 bool normal) {
    const std::size_t n = space->size();
    std::vector<Rational> values(n, Rational(0));
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t d = rng.below(lattice.size() + 1);
        values[i] = d == 0 ? Rational(0) : lattice[d - 1];
    }
    if (normal) values[rng.below(n)] = Rational(1);
    return FuzzySet::from_membership(space, values);
}

inline Mask random_nonempty_mask(Rng& rng, std::size_t n) {
    const Mask full = full_mask(n);
    Mask m = static_cast<Mask>(rng.next()) & full;
    if (m == 0) m = Mask{1} << rng.below(n);
    return m;
}

// Step function in D_m(I) with a handful of pieces on a dyadic grid.
// With cap_below_one the values stay below 1, so g^{-1}(1) = {1}.
inline MonotoneUnitFunction random_step_g(Rng& rng, bool cap_below_one = false) {
    const int den = 8;
    std::set<Rational> interior;
    const std::size_t pieces = 1 + rng.below(3);
    while (interior.size() < pieces) interior.insert(Rational(rng.range(1, den - 1), den));
    std::vector<Rational> breaks;
    breaks.push_back(Rational(0));
    breaks.insert(breaks.end(), interior.begin(), interior.end());
    breaks.push_back(Rational(1));
    std::vector<Rational> values;
    values.push_back(Rational(0));
    int prev_num = 0;
    const int hi = cap_below_one ? den - 1 : den;
    for (std::size_t j = 1; j + 1 < breaks.size(); ++j) {
        prev_num = rng.range(prev_num, hi);
        values.push_back(Rational(prev_num, den));
    }
    return MonotoneUnitFunction::step(std::move(breaks), std::move(values));
}

}  // namespace fuzzdyn
