#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fuzzdyn/sensitivity.hpp"

namespace fuzzdyn {

// One row of the cross-level sensitivity table.
struct AuditCell {
    LevelKind level = LevelKind::base;
    std::string check;  // "plain" | "cofinite:T" | "syndetic:G" | "infinite:L" | "multi:k"
    bool certified = false;
    bool exhaustive = false;
    Rational epsilon_used;
    Rational delta_used;
    std::string detail;
};

struct CrossLevelAuditReport {
    std::string system;
    std::string g_name;
    bool g_one_preimage_singleton = false;
    std::size_t horizon = 0;
    std::vector<AuditCell> cells;
    // verdict patterns or failed witness transfers that would contradict the
    // implication structure between the levels; any entry is a suite failure
    std::vector<std::string> violations;
    std::size_t transfers_verified = 0;

    const AuditCell* cell(LevelKind level, const std::string& check) const {
        for (const auto& c : cells)
            if (c.level == level && c.check == check) return &c;
        return nullptr;
    }
};

struct AuditOptions {
    std::size_t cofinite_tail = 2;
    std::size_t syndetic_gap = 3;
    std::size_t infinite_block = 5;
    std::size_t multi_k = 3;
    Engine engine = Engine::direct;
    std::size_t window_center_cap = 128;  // ball-family size for family/multi rows
};

// Multi-level fuzzy probes used when the grid is too large to enumerate:
// characteristics of the sampled hyper probes plus two-plateau sets around a
// few centers.
inline std::vector<FuzzySet> sampled_fuzzy_probes(const SpaceHandle& space, const LevelLattice& lattice,
                                                  const Rational& delta) {
    std::vector<FuzzySet> probes;
    for (PointId x = 0; x < space->size(); ++x)
        probes.push_back(FuzzySet::characteristic(space, Mask{1} << x));
    probes.push_back(FuzzySet::characteristic(space, full_mask(space->size())));
    std::optional<Rational> mid;
    for (const auto& v : lattice.values())
        if (v < 1) mid = v;  // the largest lattice level below 1
    if (mid) {
        const std::size_t n = space->size();
        for (PointId c : {PointId(0), PointId(n / 2), PointId(n - 1)}) {
            Mask top = closed_ball_mask(*space, c, delta);
            Mask low = closed_ball_mask(*space, c, 3 * delta);
            std::vector<Rational> values(n, Rational(0));
            for_each_point(low, [&](PointId y) { values[y] = *mid; });
            for_each_point(top, [&](PointId y) { values[y] = Rational(1); });
            FuzzySet probe = FuzzySet::from_membership(space, values);
            bool dup = false;
            for (const auto& p : probes) dup = dup || p == probe;
            if (!dup) probes.push_back(std::move(probe));
        }
    }
    return probes;
}

namespace detail {

struct BallWindows {
    std::vector<std::pair<std::string, TimeWindowSet>> windows;
    bool exact = false;  // pairwise-exhaustive diameters over fully enumerated balls
};

inline BallWindows base_windows(const DynMap& f, const Rational& epsilon, const Rational& delta,
                                std::size_t horizon) {
    BallWindows out;
    out.exact = true;
    const auto& space = f.space();
    for (PointId x = 0; x < space.size(); ++x) {
        auto members = base_ball(space, x, delta);
        out.windows.emplace_back("ball(" + space.label(x) + ")",
                                 separation_times_base(f, members, epsilon, horizon));
    }
    return out;
}

// Lower-bound window realized by the pair (a, b): times where the images
// separate beyond epsilon. Sound for any upward-hereditary family judgement
// because the true window only grows.
inline TimeWindowSet pair_window(const DynMap& f, Mask a, Mask b, const Rational& epsilon,
                                 std::size_t horizon) {
    TimeWindowSet w(horizon);
    Mask an = a, bn = b;
    const auto& space = f.space();
    for (std::size_t n = 0; n <= horizon; ++n) {
        if (!hausdorff_le(space, an, bn, epsilon)) w.add(n);
        an = image_mask(f.table(), an);
        bn = image_mask(f.table(), bn);
    }
    return w;
}

inline constexpr std::size_t kExactBallPairwise = 16;

inline BallWindows hyper_windows(const DynMap& f, std::vector<Mask> centers, const Rational& epsilon,
                                 const Rational& delta, std::size_t horizon, std::size_t center_cap) {
    BallWindows out;
    const auto& space = f.space();
    const bool small = space.size() <= kExhaustiveHyperPoints;
    bool capped = centers.size() > center_cap;
    if (capped) centers.erase(centers.begin() + static_cast<std::ptrdiff_t>(center_cap), centers.end());
    out.exact = small && !capped;
    for (Mask probe : centers) {
        if (small) {
            auto members = hyper_ball(space, probe, delta);
            if (members.size() <= kExactBallPairwise) {
                out.windows.emplace_back(mask_to_string(space, probe),
                                         separation_times_hyper(f, members, epsilon, horizon));
                continue;
            }
            out.exact = false;
            TimeWindowSet w(horizon);
            for (Mask b : members)
                if (b != probe) w = w.unite(pair_window(f, probe, b, epsilon, horizon));
            out.windows.emplace_back(mask_to_string(space, probe), std::move(w));
            continue;
        }
        out.exact = false;
        TimeWindowSet w(horizon);
        for (const auto& cand : hyper_candidates_structured(f, probe, epsilon, delta, horizon)) {
            if (!hausdorff_lt(space, probe, cand.mask, delta)) continue;
            if (cand.hint) {
                Mask an = image_mask_iter(f, probe, *cand.hint);
                Mask bn = image_mask_iter(f, cand.mask, *cand.hint);
                if (!hausdorff_le(space, an, bn, epsilon)) w.add(*cand.hint);
            } else {
                w = w.unite(pair_window(f, probe, cand.mask, epsilon, horizon));
            }
        }
        out.windows.emplace_back(mask_to_string(space, probe), std::move(w));
    }
    return out;
}

inline TimeWindowSet fuzzy_pair_window(const FuzzifiedSystem& sys, const FuzzySet& a, const FuzzySet& b,
                                       const Rational& epsilon, std::size_t horizon) {
    TimeWindowSet w(horizon);
    FuzzySet an = a, bn = b;
    for (std::size_t n = 0; n <= horizon; ++n) {
        if (levelwise_distance(an, bn) > epsilon) w.add(n);
        if (n < horizon) {
            an = sys.apply(an);
            bn = sys.apply(bn);
        }
    }
    return w;
}

inline BallWindows fuzzy_windows(const FuzzifiedSystem& sys, const LevelLattice& lattice,
                                 std::vector<FuzzySet> centers, const SensitivityVerdict& plain_verdict,
                                 const Rational& epsilon, const Rational& delta, std::size_t horizon,
                                 std::size_t grid_cap, std::size_t center_cap) {
    BallWindows out;
    const auto& space = sys.base().space();
    const bool small = fuzzy_grid_exhaustive(space, lattice, grid_cap);
    bool capped = centers.size() > center_cap;
    if (capped) centers.erase(centers.begin() + static_cast<std::ptrdiff_t>(center_cap), centers.end());
    out.exact = small && !capped;
    if (small) {
        auto grid = enumerate_fuzzy_grid(sys.base().space_handle(), lattice, true, grid_cap);
        for (const auto& probe : centers) {
            auto members = fuzzy_ball(grid, probe, delta);
            if (members.size() <= kExactBallPairwise) {
                out.windows.emplace_back(probe.to_string(),
                                         separation_times_fuzzy(sys, members, epsilon, horizon));
            } else {
                out.exact = false;
                TimeWindowSet w(horizon);
                for (const auto& b : members)
                    if (!(b == probe)) w = w.unite(fuzzy_pair_window(sys, probe, b, epsilon, horizon));
                out.windows.emplace_back(probe.to_string(), std::move(w));
            }
        }
        return out;
    }
    // witness pairs from the plain certificate give lower-bound windows
    for (std::size_t i = 0; i < centers.size(); ++i) {
        TimeWindowSet w(horizon);
        if (plain_verdict.certified && i < plain_verdict.fuzzy_pairs.size())
            w = fuzzy_pair_window(sys, plain_verdict.fuzzy_pairs[i].first,
                                  plain_verdict.fuzzy_pairs[i].second, epsilon, horizon);
        out.windows.emplace_back(centers[i].to_string(), std::move(w));
    }
    return out;
}

// family row: every ball's window must belong to the family
inline AuditCell family_cell(LevelKind level, const FamilyPredicate& fam, const BallWindows& bw,
                             bool probes_exhaustive, const Rational& eps, const Rational& delta) {
    AuditCell cell{level, fam.to_string(), true, bw.exact && probes_exhaustive, eps, delta, ""};
    for (const auto& [name, w] : bw.windows) {
        if (!family_classify(w, fam)) {
            cell.certified = false;
            cell.detail = "window of " + name + " fails " + fam.to_string();
            break;
        }
    }
    if (cell.certified) cell.detail = std::to_string(bw.windows.size()) + " ball windows in family";
    return cell;
}

// multi row: every pair and triple of ball windows shares a common time
inline AuditCell multi_cell(LevelKind level, std::size_t k, const BallWindows& bw,
                            bool probes_exhaustive, const Rational& eps, const Rational& delta) {
    AuditCell cell{level, "multi:" + std::to_string(k), true, bw.exact && probes_exhaustive, eps, delta, ""};
    const auto& ws = bw.windows;
    for (std::size_t i = 0; i < ws.size() && cell.certified; ++i) {
        if (ws[i].second.empty()) {
            cell.certified = false;
            cell.detail = "no separation time for " + ws[i].first;
        }
    }
    if (k >= 2)
        for (std::size_t i = 0; i < ws.size() && cell.certified; ++i)
            for (std::size_t j = i + 1; j < ws.size() && cell.certified; ++j) {
                if (ws[i].second.intersect(ws[j].second).empty()) {
                    cell.certified = false;
                    cell.detail = "no common time for {" + ws[i].first + ", " + ws[j].first + "}";
                }
            }
    if (k >= 3)
        for (std::size_t i = 0; i < ws.size() && cell.certified; ++i)
            for (std::size_t j = i + 1; j < ws.size() && cell.certified; ++j) {
                auto ij = ws[i].second.intersect(ws[j].second);
                for (std::size_t l = j + 1; l < ws.size() && cell.certified; ++l) {
                    if (ij.intersect(ws[l].second).empty()) {
                        cell.certified = false;
                        cell.detail = "no common time for a ball triple";
                    }
                }
            }
    if (cell.certified) cell.detail = "common separation times exist for all tuples";
    return cell;
}

// From a certified fuzzy witness pair (A, E, n), extract the hyperspace
// witness the cut transport promises: some level alpha where the iterated
// cuts separate beyond epsilon, pulled back through xi_g^n. Both the ball
// bound d_H < delta and the separation of the transported images are
// reverified from scratch; failure contradicts the transport identity.
inline std::optional<std::string> verify_witness_transfer(const FuzzifiedSystem& sys, const FuzzySet& a,
                                                          const FuzzySet& e, std::size_t time,
                                                          const Rational& epsilon, const Rational& delta) {
    const auto& space = sys.base().space();
    FuzzySet fa = sys.iterate(a, time);
    FuzzySet fe = sys.iterate(e, time);
    std::vector<Rational> merged = fa.levels();
    merged.insert(merged.end(), fe.levels().begin(), fe.levels().end());
    for (const auto& alpha : merged) {
        if (hausdorff_ext(space, fa.cut_mask(alpha), fe.cut_mask(alpha)) <= epsilon) continue;
        const Rational beta = sys.g().xi_iter(alpha, time).value;
        if (beta == 0) continue;
        Mask ca = a.cut_mask(beta), ce = e.cut_mask(beta);
        if (ca == 0 || ce == 0)
            return "transported cut at level " + to_string(beta) + " is empty";
        if (!hausdorff_lt(space, ca, ce, delta))
            return "transported hyper pair leaves the delta ball";
        Mask ia = image_mask_iter(sys.base(), ca, time);
        Mask ie = image_mask_iter(sys.base(), ce, time);
        if (hausdorff_ext(space, ia, ie) <= epsilon)
            return "transported hyper images do not separate";
        return std::nullopt;  // a valid hyper witness was extracted
    }
    return "no separating level found in the iterated stacks";
}

}  // namespace detail

// Certifies plain, family and multi sensitivity at all three levels. Lifted
// levels run at epsilon/2 and the fuzzy level at 4*delta, mirroring the
// constants the transfer arguments actually produce; every cell records the
// constants it used. Cross-level consistency is enforced two ways:
//   - every fuzzy plain witness must transport to a hyperspace witness
//     through its cuts (checked pair by pair), and
//   - verdict patterns are flagged when the refuted side was searched
//     exhaustively at constants the transfer direction covers.
inline CrossLevelAuditReport cross_level_audit(const NamedSystem& system, const MonotoneUnitFunction& g,
                                               const Rational& epsilon, const Rational& delta,
                                               std::size_t horizon, const LevelLattice& lattice,
                                               const AuditOptions& opt = {},
                                               std::size_t grid_cap = default_grid_cap()) {
    CrossLevelAuditReport rep;
    rep.system = system.name;
    rep.g_name = g.name();
    rep.g_one_preimage_singleton = g.one_preimage_is_singleton();
    rep.horizon = horizon;

    const DynMap& f = system.map;
    const auto& space = f.space();
    const Rational eps_lift = epsilon / 2;
    const Rational delta_fuzzy = 4 * delta;
    FuzzifiedSystem sys(f, g, opt.engine);

    // --- plain certificates ---
    auto base_v = certify_sensitivity_base(f, epsilon, delta, horizon);
    auto hyper_v = certify_sensitivity_hyper(f, eps_lift, delta, horizon);

    const bool fuzzy_small = fuzzy_grid_exhaustive(space, lattice, grid_cap);
    std::vector<FuzzySet> fuzzy_probes;
    if (!fuzzy_small) fuzzy_probes = sampled_fuzzy_probes(f.space_handle(), lattice, delta);
    auto fuzzy_v =
        certify_sensitivity_fuzzy(sys, lattice, eps_lift, delta_fuzzy, horizon, fuzzy_probes, grid_cap);

    auto plain_cell = [&](const SensitivityVerdict& v, const Rational& eps_used, const Rational& delta_used) {
        AuditCell c{v.level, "plain", v.certified, v.exhaustive, eps_used, delta_used, ""};
        if (v.certified) {
            Rational worst = v.witnesses.empty() ? Rational(0) : v.witnesses.front().separation;
            for (const auto& w : v.witnesses) worst = rat_min(worst, w.separation);
            c.detail = std::to_string(v.probe_count) + " probes (" + v.probe_policy +
                       "), least witnessed separation " + to_string(worst);
        } else {
            c.detail = "no witness for " + v.failing_center;
        }
        return c;
    };
    rep.cells.push_back(plain_cell(base_v, epsilon, delta));
    rep.cells.push_back(plain_cell(hyper_v, eps_lift, delta));
    rep.cells.push_back(plain_cell(fuzzy_v, eps_lift, delta_fuzzy));

    // --- witness transfer: each fuzzy witness must yield a hyper witness ---
    if (fuzzy_v.certified) {
        for (std::size_t i = 0; i < fuzzy_v.fuzzy_pairs.size(); ++i) {
            auto bad = detail::verify_witness_transfer(sys, fuzzy_v.fuzzy_pairs[i].first,
                                                       fuzzy_v.fuzzy_pairs[i].second,
                                                       fuzzy_v.witnesses[i].time, eps_lift, delta_fuzzy);
            if (bad)
                rep.violations.push_back("fuzzy witness " + std::to_string(i) +
                                         " fails hyper transfer: " + *bad);
            else
                ++rep.transfers_verified;
        }
    }

    // --- ball windows per level ---
    auto base_w = detail::base_windows(f, epsilon, delta, horizon);
    std::vector<Mask> hyper_centers;
    if (space.size() <= kExhaustiveHyperPoints)
        for (Mask m = 1; m <= full_mask(space.size()); ++m) hyper_centers.push_back(m);
    else
        hyper_centers = sampled_hyper_probes(space, delta);
    const bool hyper_centers_exhaustive =
        space.size() <= kExhaustiveHyperPoints && hyper_centers.size() <= opt.window_center_cap;
    auto hyper_w = detail::hyper_windows(f, hyper_centers, eps_lift, delta, horizon, opt.window_center_cap);
    if (fuzzy_small)
        fuzzy_probes = enumerate_fuzzy_grid(f.space_handle(), lattice, true, grid_cap);
    const bool fuzzy_centers_exhaustive = fuzzy_small && fuzzy_probes.size() <= opt.window_center_cap;
    auto fuzzy_w = detail::fuzzy_windows(sys, lattice, fuzzy_probes, fuzzy_v, eps_lift, delta_fuzzy,
                                         horizon, grid_cap, opt.window_center_cap);

    const std::vector<FamilyPredicate> fams = {FamilyPredicate::cofinite(opt.cofinite_tail),
                                               FamilyPredicate::syndetic(opt.syndetic_gap),
                                               FamilyPredicate::infinite(opt.infinite_block)};
    for (const auto& fam : fams) {
        rep.cells.push_back(detail::family_cell(LevelKind::base, fam, base_w, true, epsilon, delta));
        rep.cells.push_back(detail::family_cell(LevelKind::hyper, fam, hyper_w, hyper_centers_exhaustive,
                                                eps_lift, delta));
        rep.cells.push_back(detail::family_cell(LevelKind::fuzzy, fam, fuzzy_w, fuzzy_centers_exhaustive,
                                                eps_lift, delta_fuzzy));
    }
    rep.cells.push_back(detail::multi_cell(LevelKind::base, opt.multi_k, base_w, true, epsilon, delta));
    rep.cells.push_back(detail::multi_cell(LevelKind::hyper, opt.multi_k, hyper_w,
                                           hyper_centers_exhaustive, eps_lift, delta));
    rep.cells.push_back(detail::multi_cell(LevelKind::fuzzy, opt.multi_k, fuzzy_w,
                                           fuzzy_centers_exhaustive, eps_lift, delta_fuzzy));

    // --- verdict-pattern flags at transfer-covered constants ---
    const bool qualified = rep.g_one_preimage_singleton;
    // fuzzy certified at (eps/2, 4d) while the hyperspace refutes exhaustively
    // at the transferred radius 4d
    if (fuzzy_v.certified) {
        auto shadow = certify_sensitivity_hyper(f, eps_lift, delta_fuzzy, horizon);
        if (!shadow.certified && shadow.exhaustive)
            rep.violations.push_back("fuzzy-certified with exhaustive hyper refutation at the "
                                     "transferred radius (plain)");
    }
    // hyper certified at (eps/2, d) while the fuzzy level refutes exhaustively
    // at (eps/2, 4d); the construction would have produced a witness
    if (qualified && hyper_v.certified && !fuzzy_v.certified && fuzzy_v.exhaustive)
        rep.violations.push_back("hyper-certified with exhaustive fuzzy refutation (plain)");

    for (const auto& fam : fams) {
        const auto* h = rep.cell(LevelKind::hyper, fam.to_string());
        const auto* z = rep.cell(LevelKind::fuzzy, fam.to_string());
        if (qualified && h && z && h->certified && h->exhaustive && !z->certified && z->exhaustive)
            rep.violations.push_back("hyper-certified with exhaustive fuzzy refutation on " +
                                     fam.to_string());
    }
    return rep;
}

}  // namespace fuzzdyn
