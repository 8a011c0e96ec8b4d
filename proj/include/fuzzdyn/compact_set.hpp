#pragma once

#include <bit>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "fuzzdyn/dynamics.hpp"
#include "fuzzdyn/metric_space.hpp"

namespace fuzzdyn {

// Subsets of a finite metric space are bit vectors; bit i = point i.
// Mask 0 is the empty set and is only ever produced by cut operations,
// never stored in a CompactSet.
using Mask = std::uint64_t;

constexpr std::size_t kMaxMaskPoints = 64;

inline Mask full_mask(std::size_t n) {
    return n >= kMaxMaskPoints ? ~Mask{0} : ((Mask{1} << n) - 1);
}

inline bool mask_contains(Mask m, PointId i) { return (m >> i) & 1U; }
inline int mask_size(Mask m) { return std::popcount(m); }
inline bool mask_subset(Mask a, Mask b) { return (a & ~b) == 0; }

template <typename Fn>
inline void for_each_point(Mask m, Fn&& fn) {
    while (m) {
        const PointId i = static_cast<PointId>(std::countr_zero(m));
        fn(i);
        m &= m - 1;
    }
}

inline std::vector<PointId> mask_points(Mask m) {
    std::vector<PointId> out;
    out.reserve(static_cast<std::size_t>(mask_size(m)));
    for_each_point(m, [&](PointId i) { out.push_back(i); });
    return out;
}

inline Mask mask_of_points(const std::vector<PointId>& pts) {
    Mask m = 0;
    for (PointId p : pts) m |= Mask{1} << p;
    return m;
}

inline void require_mask_capacity(const FiniteMetricSpace& space) {
    if (space.size() > kMaxMaskPoints)
        throw SpaceTooLarge("set-valued operations support at most 64 points, space has " +
                            std::to_string(space.size()));
}

// Image of a subset under the map table.
inline Mask image_mask(const std::vector<PointId>& table, Mask m) {
    Mask out = 0;
    for_each_point(m, [&](PointId i) { out |= Mask{1} << table[i]; });
    return out;
}

inline Mask image_mask_iter(const DynMap& f, Mask m, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) m = image_mask(f.table(), m);
    return m;
}

// Nonempty compact subset of a finite space; element of the hyperspace.
class CompactSet {
public:
    CompactSet(SpaceHandle space, Mask bits) : space_(std::move(space)), bits_(bits) {
        require_mask_capacity(*space_);
        if (bits_ == 0) throw Error("CompactSet must be nonempty");
        if (!mask_subset(bits_, full_mask(space_->size()))) throw Error("CompactSet has bits outside the space");
    }

    const FiniteMetricSpace& space() const { return *space_; }
    const SpaceHandle& space_handle() const { return space_; }
    Mask bits() const { return bits_; }
    int size() const { return mask_size(bits_); }
    bool contains(PointId i) const { return mask_contains(bits_, i); }
    std::vector<PointId> points() const { return mask_points(bits_); }

    friend bool operator==(const CompactSet& a, const CompactSet& b) {
        return a.space_.get() == b.space_.get() && a.bits_ == b.bits_;
    }

private:
    SpaceHandle space_;
    Mask bits_;
};

inline CompactSet induced_map(const DynMap& f, const CompactSet& a) {
    if (&f.space() != &a.space()) throw SpaceMismatch();
    return CompactSet(a.space_handle(), image_mask(f.table(), a.bits()));
}

inline std::size_t default_hyperspace_cap() {
    if (const char* env = std::getenv("FUZZDYN_CAP")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0 && v <= 64) return static_cast<std::size_t>(v);
    }
    return 16;
}

// All 2^n - 1 nonempty subsets, each exactly once, in mask order.
template <typename Fn>
inline void for_each_compact(const FiniteMetricSpace& space, Fn&& fn,
                             std::size_t cap = default_hyperspace_cap()) {
    if (space.size() > cap)
        throw SpaceTooLarge("hyperspace enumeration capped at " + std::to_string(cap) +
                            " points, space has " + std::to_string(space.size()));
    const Mask full = full_mask(space.size());
    for (Mask m = 1; m <= full; ++m) fn(m);
}

inline std::vector<CompactSet> enumerate_hyperspace(const SpaceHandle& space,
                                                    std::size_t cap = default_hyperspace_cap()) {
    std::vector<CompactSet> out;
    for_each_compact(*space, [&](Mask m) { out.emplace_back(space, m); }, cap);
    return out;
}

// Membership of A in the Vietoris basis element <U_1,...,U_n>:
// A covered by the union and meeting every U_i.
inline bool vietoris_contains(const std::vector<Mask>& u_list, Mask a) {
    if (u_list.empty()) throw Error("Vietoris basis element needs at least one set");
    Mask cover = 0;
    for (Mask u : u_list) {
        if ((a & u) == 0) return false;
        cover |= u;
    }
    return mask_subset(a, cover);
}

inline std::string mask_to_string(const FiniteMetricSpace& space, Mask m) {
    if (m == 0) return "{}";
    std::string out = "{";
    bool first = true;
    for_each_point(m, [&](PointId i) {
        if (!first) out += ",";
        out += space.label(i);
        first = false;
    });
    return out + "}";
}

}  // namespace fuzzdyn
