#pragma once

#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "fuzzdyn/metric_space.hpp"

namespace fuzzdyn {

// Total self-map of a finite metric space, given by a lookup table.
// Continuity is automatic on finite spaces.
class DynMap {
public:
    DynMap(SpaceHandle space, std::vector<PointId> table)
        : space_(std::move(space)), table_(std::move(table)) {
        if (table_.size() != space_->size())
            throw Error("map table size does not match point count");
        for (PointId y : table_)
            if (y >= space_->size()) throw Error("map table leaves the point set");
    }

    const FiniteMetricSpace& space() const { return *space_; }
    const SpaceHandle& space_handle() const { return space_; }
    const std::vector<PointId>& table() const { return table_; }

    PointId apply(PointId x) const { return table_[x]; }

    PointId iterate(PointId x, std::size_t n) const {
        for (std::size_t i = 0; i < n; ++i) x = table_[x];
        return x;
    }

    // table of f^0..f^horizon, each as a point->point map
    std::vector<std::vector<PointId>> power_tables(std::size_t horizon) const {
        std::vector<std::vector<PointId>> pow(horizon + 1);
        pow[0].resize(space_->size());
        std::iota(pow[0].begin(), pow[0].end(), 0U);
        for (std::size_t n = 1; n <= horizon; ++n) {
            pow[n].resize(space_->size());
            for (std::size_t x = 0; x < space_->size(); ++x) pow[n][x] = table_[pow[n - 1][x]];
        }
        return pow;
    }

    std::vector<std::vector<PointId>> preimages() const {
        std::vector<std::vector<PointId>> pre(space_->size());
        for (PointId x = 0; x < space_->size(); ++x) pre[table_[x]].push_back(x);
        return pre;
    }

private:
    SpaceHandle space_;
    std::vector<PointId> table_;
};

inline PointId iterate(const DynMap& f, PointId x, std::size_t n) { return f.iterate(x, n); }

// A realized model system: space + map, plus the point coordinates for the
// grid families (empty when points carry no numeric coordinate).
struct NamedSystem {
    std::string name;
    SpaceHandle space;
    DynMap map;
    std::vector<Rational> coords;
};

// Dyadic grid {i/2^k} with the tent map x -> min(2x, 2-2x). The tent map
// sends this grid onto the coarser dyadic grid, so iteration stays exact.
inline NamedSystem tent_grid(unsigned k) {
    if (k == 0 || k > 16) throw Error("tent_grid: k must be in [1,16]");
    const std::size_t denom = std::size_t{1} << k;
    std::vector<Rational> coords;
    coords.reserve(denom + 1);
    for (std::size_t i = 0; i <= denom; ++i) coords.emplace_back(static_cast<long long>(i), static_cast<long long>(denom));
    auto space = line_space(coords);
    std::vector<PointId> table(denom + 1);
    for (std::size_t i = 0; i <= denom; ++i) {
        const std::size_t image = std::min(2 * i, 2 * denom - 2 * i);
        table[i] = static_cast<PointId>(image);
    }
    return NamedSystem{"tent_grid(" + std::to_string(k) + ")", space, DynMap(space, std::move(table)), std::move(coords)};
}

// Rational circle rotation i/q -> (i+p)/q under the circle metric.
inline NamedSystem rotation(unsigned p, unsigned q) {
    if (q == 0) throw Error("rotation: q must be positive");
    std::vector<Rational> coords;
    coords.reserve(q);
    for (unsigned i = 0; i < q; ++i) coords.emplace_back(i, q);
    auto space = circle_space(coords);
    std::vector<PointId> table(q);
    for (unsigned i = 0; i < q; ++i) table[i] = (i + p) % q;
    return NamedSystem{"rotation(" + std::to_string(p) + "," + std::to_string(q) + ")", space,
                       DynMap(space, std::move(table)), std::move(coords)};
}

// Identity map on n points with the uniform metric.
inline NamedSystem identity_system(std::size_t n) {
    auto space = uniform_space(n);
    std::vector<PointId> table(n);
    std::iota(table.begin(), table.end(), 0U);
    return NamedSystem{"identity(" + std::to_string(n) + ")", space, DynMap(space, std::move(table)), {}};
}

inline NamedSystem explicit_system(std::vector<std::vector<Rational>> matrix, std::vector<PointId> table,
                                   std::vector<std::string> labels = {}) {
    auto space = build_space(std::move(matrix), std::move(labels));
    return NamedSystem{"explicit(" + std::to_string(space->size()) + ")", space, DynMap(space, std::move(table)), {}};
}

inline DynMap identity_map(const SpaceHandle& space) {
    std::vector<PointId> table(space->size());
    std::iota(table.begin(), table.end(), 0U);
    return DynMap(space, std::move(table));
}

}  // namespace fuzzdyn
