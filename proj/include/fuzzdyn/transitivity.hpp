#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fuzzdyn/audit.hpp"
#include "fuzzdyn/fuzzifier.hpp"
#include "fuzzdyn/sensitivity.hpp"
#include "fuzzdyn/time_window.hpp"

namespace fuzzdyn {

// ---------------------------------------------------------------------------
// Return-time windows N(U, V) = {n <= N : f^n(U) meets V} at the three levels
// ---------------------------------------------------------------------------

inline TimeWindowSet return_set_base(const DynMap& f, Mask u, Mask v, std::size_t horizon) {
    if (u == 0 || v == 0) throw BallNotEnumerable("empty basis set");
    TimeWindowSet w(horizon);
    Mask cur = u;
    for (std::size_t n = 0; n <= horizon; ++n) {
        if ((cur & v) != 0) w.add(n);
        cur = image_mask(f.table(), cur);
    }
    return w;
}

struct HyperBall {
    Mask center = 0;
    Rational radius;
};

inline TimeWindowSet return_set_hyper(const DynMap& f, const HyperBall& u, const HyperBall& v,
                                      std::size_t horizon, std::size_t cap = default_hyperspace_cap()) {
    const auto& space = f.space();
    auto members = hyper_ball(space, u.center, u.radius, cap);
    if (members.empty()) throw BallNotEnumerable("hyperspace ball is empty");
    TimeWindowSet w(horizon);
    for (std::size_t n = 0; n <= horizon; ++n) {
        bool hit = false;
        for (const Mask m : members)
            if (hausdorff_lt(space, m, v.center, v.radius)) {
                hit = true;
                break;
            }
        if (hit) w.add(n);
        for (auto& m : members) m = image_mask(f.table(), m);
    }
    return w;
}

struct FuzzyBall {
    FuzzySet center;
    Rational radius;
};

inline TimeWindowSet return_set_fuzzy(const FuzzifiedSystem& sys, const std::vector<FuzzySet>& grid,
                                      const FuzzyBall& u, const FuzzyBall& v, std::size_t horizon) {
    auto members = fuzzy_ball(grid, u.center, u.radius);
    if (members.empty()) throw BallNotEnumerable("fuzzy ball contains no grid member");
    TimeWindowSet w(horizon);
    for (std::size_t n = 0; n <= horizon; ++n) {
        bool hit = false;
        for (const auto& m : members)
            if (levelwise_lt(m, v.center, v.radius)) {
                hit = true;
                break;
            }
        if (hit) w.add(n);
        if (n < horizon)
            for (auto& m : members) m = sys.apply(m);
    }
    return w;
}

// ---------------------------------------------------------------------------
// Transitivity and weak mixing over a finite basis of opens
// ---------------------------------------------------------------------------

struct TransitivityVerdict {
    bool transitive = false;
    std::size_t pair_count = 0;
    std::optional<std::pair<std::string, std::string>> blocking;
    // window-level strengthening: every pair's window meets every block of
    // this length (the finite stand-in for "N(U,V) is infinite")
    std::size_t infinite_block = 0;
    bool all_windows_block_dense = false;
};

struct WeakMixingVerdict {
    bool weakly_mixing = false;
    std::size_t pair_count = 0;
    std::optional<std::array<std::string, 4>> witness;  // (U1,V1,U2,V2) with disjoint windows
};

namespace detail {

template <typename WindowFn>
TransitivityVerdict transitive_from_windows(std::size_t count, WindowFn&& window,
                                            const std::vector<std::string>& names,
                                            std::size_t infinite_block) {
    TransitivityVerdict v;
    v.pair_count = count * count;
    v.infinite_block = infinite_block;
    v.all_windows_block_dense = true;
    const FamilyPredicate dense = FamilyPredicate::infinite(infinite_block);
    for (std::size_t i = 0; i < count; ++i)
        for (std::size_t j = 0; j < count; ++j) {
            const TimeWindowSet& w = window(i, j);
            if (w.empty()) {
                v.transitive = false;
                v.blocking = std::make_pair(names[i], names[j]);
                return v;
            }
            if (!family_classify(w, dense)) v.all_windows_block_dense = false;
        }
    v.transitive = true;
    return v;
}

template <typename WindowFn>
WeakMixingVerdict weak_mixing_from_windows(std::size_t count, WindowFn&& window,
                                           const std::vector<std::string>& names) {
    WeakMixingVerdict v;
    v.pair_count = count * count;
    for (std::size_t i1 = 0; i1 < count; ++i1)
        for (std::size_t j1 = 0; j1 < count; ++j1) {
            const TimeWindowSet& w1 = window(i1, j1);
            for (std::size_t i2 = 0; i2 < count; ++i2)
                for (std::size_t j2 = 0; j2 < count; ++j2) {
                    if (w1.intersect(window(i2, j2)).empty()) {
                        v.weakly_mixing = false;
                        v.witness = std::array<std::string, 4>{names[i1], names[j1], names[i2], names[j2]};
                        return v;
                    }
                }
        }
    v.weakly_mixing = true;
    return v;
}

}  // namespace detail

inline TransitivityVerdict certify_transitive_base(const DynMap& f, const std::vector<Mask>& basis,
                                                   std::size_t horizon, std::size_t infinite_block = 5) {
    std::vector<std::string> names;
    std::vector<std::vector<TimeWindowSet>> win(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) {
        names.push_back(mask_to_string(f.space(), basis[i]));
        for (std::size_t j = 0; j < basis.size(); ++j)
            win[i].push_back(return_set_base(f, basis[i], basis[j], horizon));
    }
    return detail::transitive_from_windows(basis.size(), [&](std::size_t i, std::size_t j) -> const TimeWindowSet& {
        return win[i][j];
    }, names, infinite_block);
}

inline WeakMixingVerdict certify_weak_mixing_base(const DynMap& f, const std::vector<Mask>& basis,
                                                  std::size_t horizon) {
    std::vector<std::string> names;
    std::vector<std::vector<TimeWindowSet>> win(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) {
        names.push_back(mask_to_string(f.space(), basis[i]));
        for (std::size_t j = 0; j < basis.size(); ++j)
            win[i].push_back(return_set_base(f, basis[i], basis[j], horizon));
    }
    return detail::weak_mixing_from_windows(basis.size(), [&](std::size_t i, std::size_t j) -> const TimeWindowSet& {
        return win[i][j];
    }, names);
}

inline TransitivityVerdict certify_transitive_hyper(const DynMap& f, const std::vector<HyperBall>& basis,
                                                    std::size_t horizon, std::size_t infinite_block = 5,
                                                    std::size_t cap = default_hyperspace_cap()) {
    std::vector<std::string> names;
    std::vector<std::vector<TimeWindowSet>> win(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) {
        names.push_back("B(" + mask_to_string(f.space(), basis[i].center) + "," + to_string(basis[i].radius) + ")");
        for (std::size_t j = 0; j < basis.size(); ++j)
            win[i].push_back(return_set_hyper(f, basis[i], basis[j], horizon, cap));
    }
    return detail::transitive_from_windows(basis.size(), [&](std::size_t i, std::size_t j) -> const TimeWindowSet& {
        return win[i][j];
    }, names, infinite_block);
}

inline WeakMixingVerdict certify_weak_mixing_hyper(const DynMap& f, const std::vector<HyperBall>& basis,
                                                   std::size_t horizon,
                                                   std::size_t cap = default_hyperspace_cap()) {
    std::vector<std::string> names;
    std::vector<std::vector<TimeWindowSet>> win(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) {
        names.push_back("B(" + mask_to_string(f.space(), basis[i].center) + "," + to_string(basis[i].radius) + ")");
        for (std::size_t j = 0; j < basis.size(); ++j)
            win[i].push_back(return_set_hyper(f, basis[i], basis[j], horizon, cap));
    }
    return detail::weak_mixing_from_windows(basis.size(), [&](std::size_t i, std::size_t j) -> const TimeWindowSet& {
        return win[i][j];
    }, names);
}

// Aligned closed intervals [j*w, (j+1)*w] over a coordinate grid; the
// canonical width-w interval basis for the line and circle families.
inline std::vector<Mask> interval_basis(const NamedSystem& system, const Rational& width) {
    if (system.coords.empty()) throw Error("interval basis needs coordinate grid");
    if (width <= 0 || width > 1) throw Error("interval width must lie in (0,1]");
    Rational count = 1 / width;
    if (denominator(count) != 1) throw Error("interval width must divide 1");
    require_mask_capacity(*system.space);
    std::vector<Mask> basis;
    for (Rational lo = 0; lo < 1; lo += width) {
        Rational hi = lo + width;
        Mask m = 0;
        for (std::size_t i = 0; i < system.coords.size(); ++i)
            if (system.coords[i] >= lo && system.coords[i] <= hi) m |= Mask{1} << i;
        if (m != 0) basis.push_back(m);
    }
    return basis;
}

inline std::vector<Mask> singleton_basis(const FiniteMetricSpace& space) {
    require_mask_capacity(space);
    std::vector<Mask> basis;
    for (PointId x = 0; x < space.size(); ++x) basis.push_back(Mask{1} << x);
    return basis;
}

// ---------------------------------------------------------------------------
// The two-plateau separation construction. With z and m such that
// xi_g(z) != z and xi_g^{m+1}(z) = xi_g^m(z), the pair of fuzzy sets below
// generates disjoint balls U, V whose forward images never reconnect past
// time m, so the g-fuzzification cannot be transitive.
//
// E is 1 on the closed d(a,b)/8-ball around a and carries the secondary
// plateau on the ball around b; G swaps the plateaus. In the xi_g(z) > z
// case the secondary level is z itself. In the xi_g(z) < z case the written
// construction breaks down (both probe cuts collapse to the union), so the
// mirrored form keeps the plateau pair {1, xi_g(z)}: the cuts at z and at
// xi_g(z) then differ by exactly the far plateau, which is what the
// fixation argument needs.
// ---------------------------------------------------------------------------

struct SeparationConstruction {
    SpaceHandle space;
    std::string g_name;
    PointId a = 0, b = 0;
    Mask e1 = 0, e2 = 0;
    Rational z;
    std::size_t m = 0;
    int case_id = 1;      // 1: xi_g(z) > z, 2: xi_g(z) < z
    Rational secondary;   // membership of the low plateau
    FuzzySet set_u;       // E: top plateau on e1
    FuzzySet set_v;       // G: top plateau on e2
    Rational eta;
    Rational radius;      // eta/4
    LevelLattice lattice;
};

inline SeparationConstruction build_separation(const SpaceHandle& space, const MonotoneUnitFunction& g,
                                               const Rational& z, std::size_t m, PointId a, PointId b,
                                               const LevelLattice& lattice, std::size_t horizon = 0) {
    if (a == b) throw NotApplicable("separation construction needs two distinct points");
    if (!(z > 0 && z <= 1)) throw NotApplicable("z must lie in (0,1]");
    const Rational xi_z = g.xi(z);
    if (xi_z == z) throw NotApplicable("xi_g(z) = z; the construction has no level gap");
    auto it = g.xi_iter(z, m);
    if (!it.fixation || *it.fixation > m)
        throw NotApplicable("xi_g iterates of z do not stabilize within m steps");

    SeparationConstruction con{space, g.name(), a, b, 0, 0, z, m, xi_z > z ? 1 : 2,
                               xi_z > z ? z : xi_z,
                               FuzzySet::empty(space), FuzzySet::empty(space),
                               Rational(0), Rational(0), lattice};

    const Rational r = space->distance(a, b) / 8;
    con.e1 = closed_ball_mask(*space, a, r);
    con.e2 = closed_ball_mask(*space, b, r);
    if ((con.e1 & con.e2) != 0) throw Error("separation plateaus overlap");  // impossible by triangle

    con.eta = space->diameter();
    for_each_point(con.e1, [&](PointId x) {
        for_each_point(con.e2, [&](PointId y) {
            const Rational& d = space->distance(x, y);
            if (d < con.eta) con.eta = d;
        });
    });
    if (!(con.eta >= 3 * space->distance(a, b) / 4)) throw Error("eta fell below 3/4 d(a,b)");
    con.radius = con.eta / 4;

    con.set_u = FuzzySet::from_stack(space, {con.secondary, Rational(1)}, {con.e1 | con.e2, con.e1});
    con.set_v = FuzzySet::from_stack(space, {con.secondary, Rational(1)}, {con.e1 | con.e2, con.e2});
    if (!(levelwise_distance(con.set_u, con.set_v) >= con.eta))
        throw Error("d_inf(E, G) fell below eta");

    // every level the cut identity can touch while iterating must be in the
    // lattice, otherwise the grid scan below would be blind at that level
    std::vector<Rational> needed = {Rational(1), con.z, con.secondary};
    Rational v = con.z;
    for (std::size_t j = 0; j < std::max<std::size_t>(m, horizon); ++j) {
        Rational next = g.xi(v);
        if (next == v) break;
        needed.push_back(next);
        v = next;
    }
    for (const auto& level : needed)
        if (!lattice.contains(level))
            throw LatticeIncomplete("lattice is missing level " + to_string(level));
    return con;
}

struct SeparationVerdict {
    bool separated = false;
    std::size_t grid_size = 0;
    std::size_t members_checked = 0;
    std::size_t horizon = 0;
    std::string violation_member;
    std::size_t violation_time = 0;
};

// Exhaustively applies the fuzzification to every grid member of the ball U
// around E and checks that no iterate past time m lands in the ball V around
// G. A violation would contradict the separation argument and fails the
// suite. The verdict is decisive for grid members only; the lattice
// completeness enforced at construction makes the grid contain every
// cut-relevant level.
inline SeparationVerdict verify_separation(const SeparationConstruction& con, const FuzzifiedSystem& sys,
                                           std::size_t horizon, std::size_t grid_cap = default_grid_cap()) {
    if (sys.base().space_handle().get() != con.space.get()) throw SpaceMismatch();
    if (sys.g().name() != con.g_name)
        throw Error("construction was built for g=" + con.g_name + ", system uses " + sys.g().name());
    SeparationVerdict verdict;
    verdict.horizon = horizon;
    verdict.separated = true;
    for_each_fuzzy_grid(con.space, con.lattice, /*require_normal=*/true, [&](const FuzzySet& p) {
        ++verdict.grid_size;
        if (!verdict.separated || !levelwise_lt(p, con.set_u, con.radius)) return;
        ++verdict.members_checked;
        FuzzySet cur = p;
        for (std::size_t n = 1; n <= horizon; ++n) {
            cur = sys.apply(cur);
            if (n > con.m && levelwise_lt(cur, con.set_v, con.radius)) {
                verdict.separated = false;
                verdict.violation_member = p.to_string();
                verdict.violation_time = n;
                return;
            }
        }
    }, grid_cap);
    return verdict;
}

// ---------------------------------------------------------------------------
// Transitivity transfer audit: if the fuzzified system were transitive the
// induced set-valued system would be weakly mixing, so a failure of weak
// mixing at the hyper level must be reflected by a blocking fuzzy pair. The
// blocking pair is obtained by embedding a blocking hyperspace pair through
// characteristic functions and checking its return window exhaustively.
// ---------------------------------------------------------------------------

struct Theorem61Report {
    bool hyper_weakly_mixing = false;
    std::optional<std::array<std::string, 4>> wm_witness;
    std::optional<std::pair<std::string, std::string>> hyper_blocking;
    bool fuzzy_blocking_verified = false;
    std::string fuzzy_blocking_u, fuzzy_blocking_v;
    std::size_t fuzzy_members_checked = 0;
    bool vacuous = false;
    std::string note;
};

inline Theorem61Report audit_theorem61(const NamedSystem& system, const MonotoneUnitFunction& g,
                                       const Rational& ball_radius, std::size_t horizon,
                                       const LevelLattice& lattice,
                                       std::size_t cap = default_hyperspace_cap(),
                                       std::size_t grid_cap = default_grid_cap(),
                                       Engine engine = Engine::direct) {
    const DynMap& f = system.map;
    const auto& space = f.space();
    Theorem61Report rep;

    std::vector<HyperBall> basis;
    for_each_compact(space, [&](Mask m) { basis.push_back(HyperBall{m, ball_radius}); }, cap);

    std::vector<std::string> names;
    std::vector<std::vector<TimeWindowSet>> win(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) {
        names.push_back("B(" + mask_to_string(space, basis[i].center) + ")");
        for (std::size_t j = 0; j < basis.size(); ++j)
            win[i].push_back(return_set_hyper(f, basis[i], basis[j], horizon, cap));
    }
    auto wm = detail::weak_mixing_from_windows(basis.size(), [&](std::size_t i, std::size_t j) -> const TimeWindowSet& {
        return win[i][j];
    }, names);
    rep.hyper_weakly_mixing = wm.weakly_mixing;
    rep.wm_witness = wm.witness;
    if (wm.weakly_mixing) {
        rep.vacuous = true;
        rep.note = "hyper level weakly mixing at this horizon; nothing to embed";
        return rep;
    }

    std::optional<std::pair<std::size_t, std::size_t>> blocking;
    for (std::size_t i = 0; i < basis.size() && !blocking; ++i)
        for (std::size_t j = 0; j < basis.size() && !blocking; ++j)
            if (win[i][j].empty()) blocking = std::make_pair(i, j);
    if (!blocking) {
        rep.note = "hyper level pair-transitive though not weakly mixing; no pair to embed";
        return rep;
    }
    rep.hyper_blocking = std::make_pair(names[blocking->first], names[blocking->second]);

    FuzzifiedSystem sys(f, g, engine);
    auto grid = enumerate_fuzzy_grid(f.space_handle(), lattice, /*require_normal=*/true, grid_cap);
    FuzzyBall u{FuzzySet::characteristic(f.space_handle(), basis[blocking->first].center), ball_radius};
    FuzzyBall v{FuzzySet::characteristic(f.space_handle(), basis[blocking->second].center), ball_radius};
    rep.fuzzy_blocking_u = u.center.to_string();
    rep.fuzzy_blocking_v = v.center.to_string();
    auto members = fuzzy_ball(grid, u.center, u.radius);
    rep.fuzzy_members_checked = members.size();
    auto window = return_set_fuzzy(sys, grid, u, v, horizon);
    rep.fuzzy_blocking_verified = window.empty();
    if (!rep.fuzzy_blocking_verified) rep.note = "embedded pair has a nonempty return window";
    return rep;
}

}  // namespace fuzzdyn
