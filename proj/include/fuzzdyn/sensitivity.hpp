#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fuzzdyn/compact_set.hpp"
#include "fuzzdyn/dynamics.hpp"
#include "fuzzdyn/fuzzifier.hpp"
#include "fuzzdyn/fuzzy_set.hpp"
#include "fuzzdyn/hausdorff.hpp"
#include "fuzzdyn/time_window.hpp"

namespace fuzzdyn {

enum class LevelKind { base, hyper, fuzzy };

inline const char* level_name(LevelKind k) {
    switch (k) {
        case LevelKind::base: return "base";
        case LevelKind::hyper: return "hyper";
        default: return "fuzzy";
    }
}

// ---------------------------------------------------------------------------
// Balls. All balls are open, matching B_d(x, r) = {y : d(x, y) < r}.
// ---------------------------------------------------------------------------

inline std::vector<PointId> base_ball(const FiniteMetricSpace& space, PointId center,
                                      const Rational& radius) {
    std::vector<PointId> out;
    for (PointId y = 0; y < space.size(); ++y)
        if (space.distance(center, y) < radius) out.push_back(y);
    return out;
}

inline Mask base_ball_mask(const FiniteMetricSpace& space, PointId center, const Rational& radius) {
    require_mask_capacity(space);
    Mask m = 0;
    for (PointId y = 0; y < space.size(); ++y)
        if (space.distance(center, y) < radius) m |= Mask{1} << y;
    return m;
}

inline Mask closed_ball_mask(const FiniteMetricSpace& space, PointId center, const Rational& radius) {
    require_mask_capacity(space);
    Mask m = 0;
    for (PointId y = 0; y < space.size(); ++y)
        if (space.distance(center, y) <= radius) m |= Mask{1} << y;
    return m;
}

// All hyperspace members within d_H < radius of the center; needs the full
// enumeration, so it is gated by the hyperspace cap.
inline std::vector<Mask> hyper_ball(const FiniteMetricSpace& space, Mask center, const Rational& radius,
                                    std::size_t cap = default_hyperspace_cap()) {
    std::vector<Mask> out;
    for_each_compact(space, [&](Mask m) {
        if (hausdorff_lt(space, center, m, radius)) out.push_back(m);
    }, cap);
    return out;
}

inline std::vector<FuzzySet> fuzzy_ball(const std::vector<FuzzySet>& grid, const FuzzySet& center,
                                        const Rational& radius) {
    std::vector<FuzzySet> out;
    for (const auto& f : grid)
        if (levelwise_lt(center, f, radius)) out.push_back(f);
    return out;
}

// ---------------------------------------------------------------------------
// Separation-time windows: {n <= N : diam of the n-th image of U > epsilon}.
// Exact over the enumerated ball members.
// ---------------------------------------------------------------------------

inline TimeWindowSet separation_times_base(const DynMap& f, const std::vector<PointId>& members,
                                           const Rational& epsilon, std::size_t horizon) {
    if (members.empty()) throw BallNotEnumerable("empty ball");
    TimeWindowSet w(horizon);
    std::vector<PointId> cur = members;
    const auto& space = f.space();
    for (std::size_t n = 0; n <= horizon; ++n) {
        Rational diam = 0;
        for (std::size_t i = 0; i < cur.size(); ++i)
            for (std::size_t j = i + 1; j < cur.size(); ++j) {
                const Rational& d = space.distance(cur[i], cur[j]);
                if (d > diam) diam = d;
            }
        if (diam > epsilon) w.add(n);
        for (auto& x : cur) x = f.apply(x);
    }
    return w;
}

inline TimeWindowSet separation_times_hyper(const DynMap& f, const std::vector<Mask>& members,
                                            const Rational& epsilon, std::size_t horizon) {
    if (members.empty()) throw BallNotEnumerable("empty ball");
    TimeWindowSet w(horizon);
    std::vector<Mask> cur = members;
    const auto& space = f.space();
    for (std::size_t n = 0; n <= horizon; ++n) {
        bool wide = false;
        for (std::size_t i = 0; i < cur.size() && !wide; ++i)
            for (std::size_t j = i + 1; j < cur.size() && !wide; ++j)
                if (!hausdorff_le(space, cur[i], cur[j], epsilon)) wide = true;
        if (wide) w.add(n);
        for (auto& m : cur) m = image_mask(f.table(), m);
    }
    return w;
}

inline TimeWindowSet separation_times_fuzzy(const FuzzifiedSystem& sys, const std::vector<FuzzySet>& members,
                                            const Rational& epsilon, std::size_t horizon) {
    if (members.empty()) throw BallNotEnumerable("empty ball");
    TimeWindowSet w(horizon);
    std::vector<FuzzySet> cur = members;
    for (std::size_t n = 0; n <= horizon; ++n) {
        bool wide = false;
        for (std::size_t i = 0; i < cur.size() && !wide; ++i)
            for (std::size_t j = i + 1; j < cur.size() && !wide; ++j)
                if (levelwise_distance(cur[i], cur[j]) > epsilon) wide = true;
        if (wide) w.add(n);
        if (n < horizon)
            for (auto& f : cur) f = sys.apply(f);
    }
    return w;
}

// ---------------------------------------------------------------------------
// Sensitivity certificates
// ---------------------------------------------------------------------------

struct SensitivityWitness {
    std::string center;
    std::string perturbation;
    std::size_t time = 0;
    Rational separation;
};

struct SensitivityVerdict {
    LevelKind level = LevelKind::base;
    Rational epsilon;
    Rational delta;
    std::size_t horizon = 0;
    bool certified = false;
    // true when the probe set and every candidate search were exhaustive, so
    // a refutation cannot be an artifact of sampling
    bool exhaustive = false;
    std::string probe_policy;
    std::size_t probe_count = 0;
    std::vector<SensitivityWitness> witnesses;
    std::string failing_center;
    // structured (probe, perturbation) payload, filled at the fuzzy level
    std::vector<std::pair<FuzzySet, FuzzySet>> fuzzy_pairs;
};

// Base level: every point is a probe; the candidate perturbations are the
// other points of the open delta-ball.
inline SensitivityVerdict certify_sensitivity_base(const DynMap& f, const Rational& epsilon,
                                                   const Rational& delta, std::size_t horizon) {
    const auto& space = f.space();
    SensitivityVerdict v{LevelKind::base, epsilon, delta, horizon};
    v.probe_policy = "all-points";
    v.probe_count = space.size();
    v.exhaustive = true;
    const auto pow = f.power_tables(horizon);
    for (PointId x = 0; x < space.size(); ++x) {
        std::optional<SensitivityWitness> found;
        for (PointId y = 0; y < space.size() && !found; ++y) {
            if (y == x || !(space.distance(x, y) < delta)) continue;
            for (std::size_t n = 0; n <= horizon; ++n) {
                const Rational& d = space.distance(pow[n][x], pow[n][y]);
                if (d > epsilon) {
                    found = SensitivityWitness{space.label(x), space.label(y), n, d};
                    break;
                }
            }
        }
        if (!found) {
            v.certified = false;
            v.failing_center = space.label(x);
            return v;
        }
        v.witnesses.push_back(std::move(*found));
    }
    v.certified = true;
    return v;
}

// Structured candidate perturbations for one hyperspace probe when the
// hyperspace is too large to scan: single-point enlargements, and for every
// time n and image point u the subset of A whose n-th images stay more than
// epsilon away from u. A deletion candidate separates at its defining time
// by construction (u keeps distance > epsilon from the kept images), so the
// time is carried along as a hint and verified with one distance evaluation.
struct HyperCandidate {
    Mask mask = 0;
    std::optional<std::size_t> hint;  // separation time for deletion candidates
};

inline std::vector<HyperCandidate> hyper_candidates_structured(const DynMap& f, Mask probe,
                                                               const Rational& epsilon,
                                                               const Rational& delta,
                                                               std::size_t horizon) {
    const auto& space = f.space();
    std::vector<HyperCandidate> out;
    std::set<Mask> seen;
    auto push = [&](Mask m, std::optional<std::size_t> hint) {
        if (m != 0 && m != probe && seen.insert(m).second) out.push_back({m, hint});
    };
    for (PointId y = 0; y < space.size(); ++y) {
        if (mask_contains(probe, y)) continue;
        Rational d = distance_to_mask(space, y, probe);
        if (d > 0 && d < delta) push(probe | (Mask{1} << y), std::nullopt);
    }
    const auto pow = f.power_tables(horizon);
    Mask img = probe;
    for (std::size_t n = 0; n <= horizon; ++n) {
        for_each_point(img, [&](PointId u) {
            Mask keep = 0;
            for_each_point(probe, [&](PointId a) {
                if (space.distance(pow[n][a], u) > epsilon) keep |= Mask{1} << a;
            });
            if (keep != 0 && keep != probe && hausdorff_lt(space, probe, keep, delta)) push(keep, n);
        });
        img = image_mask(f.table(), img);
    }
    return out;
}

struct HyperWitness {
    Mask perturbation = 0;
    std::size_t time = 0;
    Rational separation;
};

inline std::optional<HyperWitness> hyper_witness_search(const DynMap& f, Mask probe,
                                                        const std::vector<HyperCandidate>& candidates,
                                                        const Rational& epsilon, const Rational& delta,
                                                        std::size_t horizon) {
    const auto& space = f.space();
    for (const auto& cand : candidates) {
        const Mask b = cand.mask;
        if (b == probe || !hausdorff_lt(space, probe, b, delta)) continue;
        if (cand.hint) {
            Mask an = image_mask_iter(f, probe, *cand.hint);
            Mask bn = image_mask_iter(f, b, *cand.hint);
            Rational d = hausdorff_ext(space, an, bn);
            if (d > epsilon) return HyperWitness{b, *cand.hint, std::move(d)};
            continue;
        }
        Mask an = probe, bn = b;
        for (std::size_t n = 0; n <= horizon; ++n) {
            if (!hausdorff_le(space, an, bn, epsilon))
                return HyperWitness{b, n, hausdorff_ext(space, an, bn)};
            an = image_mask(f.table(), an);
            bn = image_mask(f.table(), bn);
        }
    }
    return std::nullopt;
}

inline std::vector<HyperCandidate> enumerate_hyper_candidates(const FiniteMetricSpace& space) {
    std::vector<HyperCandidate> out;
    const Mask full = full_mask(space.size());
    out.reserve(static_cast<std::size_t>(full));
    for (Mask m = 1; m <= full; ++m) out.push_back({m, std::nullopt});
    return out;
}

// Default hyper probes when the hyperspace cannot be enumerated: singletons,
// two sizes of metric balls, and the whole space.
inline std::vector<Mask> sampled_hyper_probes(const FiniteMetricSpace& space, const Rational& delta) {
    std::vector<Mask> probes;
    std::set<Mask> seen;
    auto push = [&](Mask m) {
        if (m != 0 && seen.insert(m).second) probes.push_back(m);
    };
    for (PointId x = 0; x < space.size(); ++x) push(Mask{1} << x);
    for (PointId x = 0; x < space.size(); ++x) push(base_ball_mask(space, x, 2 * delta));
    for (PointId x = 0; x < space.size(); ++x) push(base_ball_mask(space, x, 4 * delta));
    push(full_mask(space.size()));
    return probes;
}

inline constexpr std::size_t kExhaustiveHyperPoints = 10;

inline SensitivityVerdict certify_sensitivity_hyper(const DynMap& f, const Rational& epsilon,
                                                    const Rational& delta, std::size_t horizon,
                                                    std::vector<Mask> probes = {}) {
    const auto& space = f.space();
    require_mask_capacity(space);
    SensitivityVerdict v{LevelKind::hyper, epsilon, delta, horizon};
    const bool small = space.size() <= kExhaustiveHyperPoints;
    std::vector<HyperCandidate> all;
    if (small) all = enumerate_hyper_candidates(space);
    std::vector<Mask> all_masks;
    if (small)
        for (const auto& c : all) all_masks.push_back(c.mask);
    if (probes.empty()) {
        probes = small ? all_masks : sampled_hyper_probes(space, delta);
        v.probe_policy = small ? "hyperspace" : "sampled";
    } else {
        v.probe_policy = "given";
    }
    v.exhaustive = small;
    v.probe_count = probes.size();
    for (Mask probe : probes) {
        auto found = small ? hyper_witness_search(f, probe, all, epsilon, delta, horizon)
                           : hyper_witness_search(f, probe,
                                                  hyper_candidates_structured(f, probe, epsilon, delta, horizon),
                                                  epsilon, delta, horizon);
        if (!found) {
            v.certified = false;
            v.failing_center = mask_to_string(space, probe);
            return v;
        }
        v.witnesses.push_back(SensitivityWitness{mask_to_string(space, probe),
                                                 mask_to_string(space, found->perturbation), found->time,
                                                 std::move(found->separation)});
    }
    v.certified = true;
    return v;
}

// ---------------------------------------------------------------------------
// Constructive fuzzy witnesses: the plateau decomposition and its fattening.
// ---------------------------------------------------------------------------

// Open-delta/4-neighborhood plateau peeling of a normal fuzzy set. Peels the
// set plateau by plateau: X_{i+1} removes the open neighborhood of the
// current top plateau D_i, and U_i accumulates the neighborhoods. The
// resulting piecewise-constant stack has [approx]_alpha = U_i on
// (a_{i+1}, a_i] and satisfies d_inf(A, approx) <= delta/4.
struct Decomposition {
    FuzzySet approx;
    std::vector<Rational> alphas;  // a_1 = 1 > a_2 > ... > a_k
    std::vector<Mask> hoods;       // U_1 <= U_2 <= ... <= U_k (cumulative)
};

inline Mask open_neighborhood(const FiniteMetricSpace& space, Mask seed, const Rational& radius) {
    Mask out = 0;
    for (PointId y = 0; y < space.size(); ++y)
        if (distance_to_mask(space, y, seed) < radius) out |= Mask{1} << y;
    return out;
}

inline Decomposition fuzzy_decompose(const FuzzySet& a, const Rational& delta) {
    if (delta <= 0) throw DegenerateDelta();
    if (!a.is_normal()) throw NotNormal();
    const auto& space = a.space();
    const Rational r = delta / 4;
    const auto values = a.membership_vector();

    Decomposition dec{FuzzySet::empty(a.space_handle()), {}, {}};
    Mask remaining = full_mask(space.size());
    Mask hood = 0;
    while (remaining != 0) {
        Rational top = 0;
        for_each_point(remaining, [&](PointId x) {
            if (values[x] > top) top = values[x];
        });
        if (top == 0) break;  // plateaus at level 0 contribute no cut
        Mask plateau = 0;
        for_each_point(remaining, [&](PointId x) {
            if (values[x] == top) plateau |= Mask{1} << x;
        });
        Mask nb = open_neighborhood(space, plateau, r);
        hood |= nb;
        dec.alphas.push_back(top);
        dec.hoods.push_back(hood);
        remaining &= ~nb;  // plateau itself is at distance 0, always removed
    }
    std::vector<Rational> levels(dec.alphas.rbegin(), dec.alphas.rend());
    std::vector<Mask> cuts(dec.hoods.rbegin(), dec.hoods.rend());
    dec.approx = FuzzySet::from_stack(a.space_handle(), std::move(levels), std::move(cuts));
    return dec;
}

// The fattened witness around a hyperspace perturbation C of [A]_1:
// Q = open xi-neighborhood of C sits on top, the decomposition hoods keep
// the rest of A's shape within delta. Requires d_H([A]_1, C) < delta/4 and
// 0 < xi < delta/4; then d_inf(A, E) < delta and [E]_1 = Q.
inline FuzzySet fuzzy_witness(const FuzzySet& a, Mask c, const Rational& delta, const Rational& xi) {
    if (!a.is_normal()) throw NotNormal();
    if (c == 0) throw PreconditionViolated("fuzzy_witness: perturbation set is empty");
    if (!(xi > 0 && xi < delta / 4))
        throw PreconditionViolated("fuzzy_witness: xi must lie in (0, delta/4)");
    const auto& space = a.space();
    if (!hausdorff_lt(space, a.cut_mask(Rational(1)), c, delta / 4))
        throw PreconditionViolated("fuzzy_witness: d_H([A]_1, C) >= delta/4");

    const auto dec = fuzzy_decompose(a, delta);
    const Mask q = open_neighborhood(space, c, xi);
    const std::size_t k = dec.alphas.size();
    const Rational a2 = k >= 2 ? dec.alphas[1] : Rational(0);
    const Rational mid = (Rational(1) + a2) / 2;

    std::vector<Rational> levels;
    std::vector<Mask> cuts;
    for (std::size_t i = k; i-- > 2;) {  // levels a_k < ... < a_3 carry U_{i} | Q
        levels.push_back(dec.alphas[i]);
        cuts.push_back(dec.hoods[i] | q);
    }
    if (k >= 2) {
        levels.push_back(a2);
        cuts.push_back(dec.hoods[1] | q);
    }
    levels.push_back(mid);
    cuts.push_back(dec.hoods[0] | q);
    levels.push_back(Rational(1));
    cuts.push_back(q);
    FuzzySet e = FuzzySet::from_stack(a.space_handle(), std::move(levels), std::move(cuts));

    if (e.cut_mask(Rational(1)) != q) throw Error("fuzzy_witness: top cut differs from Q");
    if (!(levelwise_distance(a, e) < delta)) throw Error("fuzzy_witness: d_inf(A, E) >= delta");
    return e;
}

// Largest fuzzy grid the certificates will scan probe-by-probe; beyond it
// the constructive witness machinery takes over.
inline constexpr std::size_t kExhaustiveFuzzyGrid = 4096;

inline bool fuzzy_grid_exhaustive(const FiniteMetricSpace& space, const LevelLattice& lattice,
                                  std::size_t grid_cap) {
    const std::size_t limit = std::min<std::size_t>(grid_cap, kExhaustiveFuzzyGrid);
    return fuzzy_grid_size(space.size(), lattice.size(), limit) <= limit &&
           space.size() <= kExhaustiveHyperPoints;
}

// Fuzzy-level certificate. When the fuzzy grid over the lattice is
// enumerable both probes and candidates scan it exhaustively. Otherwise the
// probes must be supplied and each witness is constructed from a hyperspace
// witness around the probe's top cut: for characteristic probes through the
// isometric embedding, otherwise through fuzzy_witness with Q = C (xi below
// the space resolution), with the separation recomputed exactly either way.
inline SensitivityVerdict certify_sensitivity_fuzzy(const FuzzifiedSystem& sys, const LevelLattice& lattice,
                                                    const Rational& epsilon, const Rational& delta,
                                                    std::size_t horizon,
                                                    std::vector<FuzzySet> probes = {},
                                                    std::size_t grid_cap = default_grid_cap()) {
    const auto& f = sys.base();
    const auto& space = f.space();
    SensitivityVerdict v{LevelKind::fuzzy, epsilon, delta, horizon};

    const bool small = fuzzy_grid_exhaustive(space, lattice, grid_cap);
    if (small) {
        auto grid = enumerate_fuzzy_grid(f.space_handle(), lattice, /*require_normal=*/true, grid_cap);
        if (probes.empty()) {
            probes = grid;
            v.probe_policy = "grid";
        } else {
            v.probe_policy = "given";
        }
        v.exhaustive = probes.size() == grid.size();
        v.probe_count = probes.size();
        for (const auto& probe : probes) {
            std::optional<SensitivityWitness> found;
            std::vector<FuzzySet> probe_orbit(1, probe);
            for (std::size_t n = 1; n <= horizon; ++n) probe_orbit.push_back(sys.apply(probe_orbit.back()));
            for (const auto& cand : grid) {
                if (cand == probe || !levelwise_lt(probe, cand, delta)) continue;
                FuzzySet cn = cand;
                for (std::size_t n = 0; n <= horizon; ++n) {
                    Rational d = levelwise_distance(probe_orbit[n], cn);
                    if (d > epsilon) {
                        found = SensitivityWitness{probe.to_string(), cand.to_string(), n, std::move(d)};
                        v.fuzzy_pairs.emplace_back(probe, cand);
                        break;
                    }
                    if (n < horizon) cn = sys.apply(cn);
                }
                if (found) break;
            }
            if (!found) {
                v.certified = false;
                v.failing_center = probe.to_string();
                return v;
            }
            v.witnesses.push_back(std::move(*found));
        }
        v.certified = true;
        return v;
    }

    if (probes.empty())
        throw ProbeSpaceTooLarge("fuzzy grid exceeds the cap; supply probe centers explicitly");
    v.probe_policy = "constructive";
    v.probe_count = probes.size();
    v.exhaustive = false;
    for (const auto& probe : probes) {
        if (!probe.is_normal()) throw NotNormal();
        std::optional<SensitivityWitness> found;
        const Mask top = probe.cut_mask(Rational(1));
        const bool is_char = probe.is_characteristic();
        const Rational search_radius = is_char ? delta : delta / 4;
        auto hyper_cands = hyper_candidates_structured(f, top, epsilon, search_radius, horizon);
        auto hyper_wit = hyper_witness_search(f, top, hyper_cands, epsilon, search_radius, horizon);
        if (hyper_wit) {
            FuzzySet e = FuzzySet::empty(f.space_handle());
            if (is_char) {
                e = FuzzySet::characteristic(f.space_handle(), hyper_wit->perturbation);
            } else {
                const Rational xi = rat_min(delta / 8, space.min_positive_distance() / 2);
                e = fuzzy_witness(probe, hyper_wit->perturbation, delta, xi);
            }
            if (levelwise_lt(probe, e, delta)) {
                FuzzySet an = probe, en = e;
                for (std::size_t n = 0; n <= horizon; ++n) {
                    Rational d = levelwise_distance(an, en);
                    if (d > epsilon) {
                        found = SensitivityWitness{probe.to_string(), e.to_string(), n, std::move(d)};
                        v.fuzzy_pairs.emplace_back(probe, e);
                        break;
                    }
                    if (n < horizon) {
                        an = sys.apply(an);
                        en = sys.apply(en);
                    }
                }
            }
        }
        if (!found) {
            v.certified = false;
            v.failing_center = probe.to_string();
            return v;
        }
        v.witnesses.push_back(std::move(*found));
    }
    v.certified = true;
    return v;
}

}  // namespace fuzzdyn
