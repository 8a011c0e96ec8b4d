#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fuzzdyn/compact_set.hpp"
#include "fuzzdyn/hausdorff.hpp"
#include "fuzzdyn/metric_space.hpp"
#include "fuzzdyn/unit_function.hpp"

namespace fuzzdyn {

// Upper-semicontinuous fuzzy set on a finite space, stored as its level-cut
// stack: levels 0 < a_1 < ... < a_k <= 1 with nested nonempty cuts
// C_1 >= C_2 >= ... >= C_k. Membership semantics
//   A(x) = max{a_i : x in C_i},  0 if x not in C_1,
// so [A]_alpha = C_i for alpha in (a_{i-1}, a_i] and empty above a_k.
//
// The representation is canonical: a level whose cut repeats the next one is
// dropped, which makes structural equality decide extensional equality. The
// k = 0 stack is the empty fuzzy set.
class FuzzySet {
public:
    static FuzzySet empty(SpaceHandle space) { return FuzzySet(std::move(space), {}, {}); }

    static FuzzySet from_stack(SpaceHandle space, std::vector<Rational> levels, std::vector<Mask> cuts) {
        require_mask_capacity(*space);
        if (levels.size() != cuts.size()) throw InvalidFuzzySet("level and cut counts differ");
        const Mask full = full_mask(space->size());
        for (std::size_t i = 0; i < levels.size(); ++i) {
            if (!(levels[i] > 0 && levels[i] <= 1))
                throw InvalidFuzzySet("level " + fuzzdyn::to_string(levels[i]) + " outside (0,1]");
            if (i > 0 && !(levels[i - 1] < levels[i]))
                throw InvalidFuzzySet("levels must be strictly increasing");
            if (cuts[i] == 0) throw InvalidFuzzySet("cuts must be nonempty");
            if (!mask_subset(cuts[i], full)) throw InvalidFuzzySet("cut leaves the point set");
            if (i > 0 && !mask_subset(cuts[i], cuts[i - 1]))
                throw InvalidFuzzySet("cuts must be nested downward");
        }
        // canonical form: drop the lower level of any adjacent equal-cut pair
        std::vector<Rational> lv;
        std::vector<Mask> ct;
        for (std::size_t i = 0; i < levels.size(); ++i) {
            if (i + 1 < levels.size() && cuts[i] == cuts[i + 1]) continue;
            lv.push_back(levels[i]);
            ct.push_back(cuts[i]);
        }
        return FuzzySet(std::move(space), std::move(lv), std::move(ct));
    }

    static FuzzySet from_membership(SpaceHandle space, const std::vector<Rational>& values) {
        require_mask_capacity(*space);
        if (values.size() != space->size()) throw InvalidFuzzySet("membership vector size mismatch");
        std::vector<Rational> lv;
        for (const auto& v : values) {
            if (!in_unit_interval(v)) throw InvalidFuzzySet("membership outside [0,1]");
            if (v > 0) lv.push_back(v);
        }
        std::sort(lv.begin(), lv.end());
        lv.erase(std::unique(lv.begin(), lv.end()), lv.end());
        std::vector<Mask> ct(lv.size(), 0);
        for (PointId x = 0; x < values.size(); ++x)
            for (std::size_t i = 0; i < lv.size(); ++i)
                if (values[x] >= lv[i]) ct[i] |= Mask{1} << x;
        return FuzzySet(std::move(space), std::move(lv), std::move(ct));
    }

    static FuzzySet characteristic(const CompactSet& a) {
        return FuzzySet(a.space_handle(), {Rational(1)}, {a.bits()});
    }

    static FuzzySet characteristic(SpaceHandle space, Mask bits) {
        return FuzzySet::from_stack(std::move(space), {Rational(1)}, {bits});
    }

    const FiniteMetricSpace& space() const { return *space_; }
    const SpaceHandle& space_handle() const { return space_; }

    const std::vector<Rational>& levels() const { return levels_; }
    const std::vector<Mask>& cuts() const { return cuts_; }
    std::size_t level_count() const { return levels_.size(); }

    bool is_empty() const { return levels_.empty(); }
    bool is_normal() const { return !levels_.empty() && levels_.back() == 1; }

    // characteristic functions are the one-level stacks at level 1
    bool is_characteristic() const { return levels_.size() == 1 && levels_[0] == 1; }

    Mask support() const { return levels_.empty() ? 0 : cuts_.front(); }

    Rational membership(PointId x) const {
        for (std::size_t i = levels_.size(); i-- > 0;)
            if (mask_contains(cuts_[i], x)) return levels_[i];
        return 0;
    }

    std::vector<Rational> membership_vector() const {
        std::vector<Rational> out(space_->size(), Rational(0));
        for (std::size_t i = 0; i < levels_.size(); ++i)
            for_each_point(cuts_[i], [&](PointId x) { out[x] = levels_[i]; });
        return out;
    }

    // [A]_alpha for alpha in (0,1]; mask 0 plays the empty-set sentinel.
    Mask cut_mask(const Rational& alpha) const {
        if (!(alpha > 0 && alpha <= 1))
            throw AlphaOutOfRange("cut level must lie in (0,1], got " + fuzzdyn::to_string(alpha));
        auto it = std::lower_bound(levels_.begin(), levels_.end(), alpha);
        if (it == levels_.end()) return 0;
        return cuts_[static_cast<std::size_t>(it - levels_.begin())];
    }

    std::optional<CompactSet> cut(const Rational& alpha) const {
        Mask m = cut_mask(alpha);
        if (m == 0) return std::nullopt;
        return CompactSet(space_, m);
    }

    friend bool operator==(const FuzzySet& a, const FuzzySet& b) {
        return a.space_.get() == b.space_.get() && a.levels_ == b.levels_ && a.cuts_ == b.cuts_;
    }

    std::string to_string() const {
        if (levels_.empty()) return "0";
        std::string out;
        for (std::size_t i = levels_.size(); i-- > 0;) {
            if (!out.empty()) out += " ";
            out += fuzzdyn::to_string(levels_[i]) + "@" + mask_to_string(*space_, cuts_[i]);
        }
        return out;
    }

private:
    FuzzySet(SpaceHandle space, std::vector<Rational> levels, std::vector<Mask> cuts)
        : space_(std::move(space)), levels_(std::move(levels)), cuts_(std::move(cuts)) {}

    SpaceHandle space_;
    std::vector<Rational> levels_;
    std::vector<Mask> cuts_;
};

// [A]^g_alpha = {x in supp(A) : g(A(x)) >= alpha}, computed through the
// reduction [A]^g_alpha = [A]_{xi_g(alpha)}. The pointwise form is kept in
// the test oracles.
inline Mask g_cut_mask(const FuzzySet& a, const MonotoneUnitFunction& g, const Rational& alpha) {
    if (!(alpha > 0 && alpha <= 1))
        throw AlphaOutOfRange("g-cut level must lie in (0,1], got " + to_string(alpha));
    return a.cut_mask(g.xi(alpha));  // xi_g(alpha) > 0 because alpha > 0
}

inline std::optional<CompactSet> g_cut(const FuzzySet& a, const MonotoneUnitFunction& g,
                                       const Rational& alpha) {
    Mask m = g_cut_mask(a, g, alpha);
    if (m == 0) return std::nullopt;
    return CompactSet(a.space_handle(), m);
}

// d_inf(A,B) = sup over alpha in (0,1] of d_H([A]_alpha, [B]_alpha), with the
// empty-set extension above a stack's top level. The cut pair is constant on
// each half-open interval of the merged level set, so sampling every merged
// level (each interval's right endpoint) computes the supremum exactly.
inline Rational levelwise_distance(const FuzzySet& a, const FuzzySet& b) {
    if (&a.space() != &b.space()) throw SpaceMismatch();
    if (a.is_empty() && b.is_empty()) return 0;
    std::vector<Rational> merged;
    merged.reserve(a.levels().size() + b.levels().size());
    merged.insert(merged.end(), a.levels().begin(), a.levels().end());
    merged.insert(merged.end(), b.levels().begin(), b.levels().end());
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    Rational worst = 0;
    for (const auto& alpha : merged) {
        Rational d = hausdorff_ext(a.space(), a.cut_mask(alpha), b.cut_mask(alpha));
        if (d > worst) worst = d;
    }
    return worst;
}

// d_inf(a, b) < bound with early exit; used for ball membership tests.
inline bool levelwise_lt(const FuzzySet& a, const FuzzySet& b, const Rational& bound) {
    if (&a.space() != &b.space()) throw SpaceMismatch();
    if (bound <= 0) return false;
    if (a.is_empty() && b.is_empty()) return true;
    std::vector<Rational> merged;
    merged.reserve(a.levels().size() + b.levels().size());
    merged.insert(merged.end(), a.levels().begin(), a.levels().end());
    merged.insert(merged.end(), b.levels().begin(), b.levels().end());
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    for (const auto& alpha : merged)
        if (!hausdorff_lt(a.space(), a.cut_mask(alpha), b.cut_mask(alpha), bound)) return false;
    return true;
}

// Finite set of candidate membership levels in (0,1], always containing 1.
class LevelLattice {
public:
    explicit LevelLattice(std::vector<Rational> levels) : levels_(std::move(levels)) {
        std::sort(levels_.begin(), levels_.end());
        levels_.erase(std::unique(levels_.begin(), levels_.end()), levels_.end());
        if (levels_.empty()) throw Error("level lattice must be nonempty");
        for (const auto& v : levels_)
            if (!(v > 0 && v <= 1)) throw Error("lattice level " + to_string(v) + " outside (0,1]");
        if (levels_.back() != 1) throw Error("level lattice must contain 1");
    }

    std::size_t size() const { return levels_.size(); }
    const std::vector<Rational>& values() const { return levels_; }
    const Rational& operator[](std::size_t i) const { return levels_[i]; }

    bool contains(const Rational& v) const {
        return std::binary_search(levels_.begin(), levels_.end(), v);
    }

    LevelLattice merged_with(const std::vector<Rational>& extra) const {
        std::vector<Rational> all = levels_;
        for (const auto& v : extra)
            if (v > 0 && v <= 1) all.push_back(v);
        return LevelLattice(std::move(all));
    }

private:
    std::vector<Rational> levels_;
};

inline std::size_t default_grid_cap() {
    if (const char* env = std::getenv("FUZZDYN_CAP")) {
        // FUZZDYN_CAP also bounds hyperspace enumeration; reuse it scaled
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<std::size_t>(v) * 65536;
    }
    return 1000000;
}

inline std::size_t fuzzy_grid_size(std::size_t points, std::size_t lattice_size, std::size_t cap) {
    std::size_t total = 1;
    for (std::size_t i = 0; i < points; ++i) {
        if (total > cap / (lattice_size + 1) + 1) return cap + 1;  // saturate
        total *= lattice_size + 1;
        if (total > cap) return cap + 1;
    }
    return total;
}

// All membership functions X -> lattice-or-0, enumerated in odometer order;
// with require_normal only those attaining 1. The zero function (the empty
// fuzzy set) is included when require_normal is false.
template <typename Fn>
inline void for_each_fuzzy_grid(const SpaceHandle& space, const LevelLattice& lattice,
                                bool require_normal, Fn&& fn, std::size_t cap = default_grid_cap()) {
    const std::size_t n = space->size();
    if (fuzzy_grid_size(n, lattice.size(), cap) > cap)
        throw GridTooLarge("fuzzy grid exceeds cap of " + std::to_string(cap) + " elements");
    std::vector<std::size_t> digit(n, 0);  // 0 = membership 0, d = lattice[d-1]
    const std::size_t base = lattice.size() + 1;
    std::vector<Rational> values(n, Rational(0));
    for (;;) {
        bool attains_one = false;
        for (std::size_t i = 0; i < n; ++i) {
            values[i] = digit[i] ? lattice[digit[i] - 1] : Rational(0);
            if (digit[i] == base - 1) attains_one = true;  // lattice.back() == 1
        }
        if (!require_normal || attains_one) fn(FuzzySet::from_membership(space, values));
        std::size_t pos = 0;
        while (pos < n && ++digit[pos] == base) digit[pos++] = 0;
        if (pos == n) break;
    }
}

inline std::vector<FuzzySet> enumerate_fuzzy_grid(const SpaceHandle& space, const LevelLattice& lattice,
                                                  bool require_normal,
                                                  std::size_t cap = default_grid_cap()) {
    std::vector<FuzzySet> out;
    for_each_fuzzy_grid(space, lattice, require_normal, [&](FuzzySet f) { out.push_back(std::move(f)); }, cap);
    return out;
}

}  // namespace fuzzdyn
