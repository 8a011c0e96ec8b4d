#pragma once

#include <chrono>
#include <functional>
#include <future>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fuzzdyn/audit.hpp"
#include "fuzzdyn/random_models.hpp"
#include "fuzzdyn/report.hpp"
#include "fuzzdyn/scenario.hpp"
#include "fuzzdyn/transitivity.hpp"

namespace fuzzdyn {

struct SuiteOptions {
    std::optional<Engine> engine_override;
    bool parallel = false;
    bool with_timing = false;
};

namespace suites {

struct CheckOutcome {
    std::string status;  // pass | fail | refuted_at_horizon | skipped
    Json witness = Json::object();
};

struct Check {
    std::string name;
    std::string anchor;
    std::function<CheckOutcome()> run;
};

inline CheckOutcome pass(Json witness = Json::object()) { return {"pass", std::move(witness)}; }
inline CheckOutcome fail(Json witness) { return {"fail", std::move(witness)}; }
inline CheckOutcome refuted(Json witness) { return {"refuted_at_horizon", std::move(witness)}; }
inline CheckOutcome skipped(const std::string& reason) {
    return {"skipped", Json{{"reason", reason}}};
}

inline std::uint64_t check_seed(const Scenario& sc, const std::string& name) {
    std::uint64_t h = 1469598103934665603ULL;  // FNV offset
    for (char c : name) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ULL;
    return h ^ sc.seed;
}

// ---------------------------------------------------------------------------
// metric-axioms
// ---------------------------------------------------------------------------

inline std::vector<Check> metric_axioms_suite(const Scenario& sc) {
    std::vector<Check> checks;
    const auto space = sc.system.space;

    checks.push_back({"hausdorff-axioms", "hausdorff-metric-axioms", [space]() -> CheckOutcome {
        if (space->size() > 6) return skipped("exhaustive axiom sweep is limited to 6 points");
        std::vector<Mask> sets;
        for (Mask m = 1; m <= full_mask(space->size()); ++m) sets.push_back(m);
        const std::size_t n = sets.size();
        std::vector<Rational> d(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) d[i * n + j] = hausdorff_ext(*space, sets[i], sets[j]);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (d[i * n + j] < 0) return fail(Json{{"axiom", "nonnegativity"}});
                if ((d[i * n + j] == 0) != (i == j)) return fail(Json{{"axiom", "identity"}});
                if (d[i * n + j] != d[j * n + i]) return fail(Json{{"axiom", "symmetry"}});
            }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k)
                    if (d[i * n + k] > d[i * n + j] + d[j * n + k])
                        return fail(Json{{"axiom", "triangle"},
                                         {"sets", Json::array({mask_json(sets[i]), mask_json(sets[j]), mask_json(sets[k])})}});
        return pass(Json{{"sets", n}, {"triples", n * n * n}});
    }});

    checks.push_back({"hausdorff-empty-extension", "hausdorff-empty-extension", [space]() -> CheckOutcome {
        if (hausdorff_ext(*space, 0, 0) != 0) return fail(Json{{"case", "empty-empty"}});
        std::size_t count = 0;
        if (space->size() <= 10) {
            for (Mask m = 1; m <= full_mask(space->size()); ++m, ++count)
                if (hausdorff_ext(*space, 0, m) != space->diameter() ||
                    hausdorff_ext(*space, m, 0) != space->diameter())
                    return fail(Json{{"case", mask_to_string(*space, m)}});
        } else {
            for (PointId x = 0; x < space->size(); ++x, ++count)
                if (hausdorff_ext(*space, 0, Mask{1} << x) != space->diameter())
                    return fail(Json{{"case", space->label(x)}});
        }
        return pass(Json{{"sets", count}, {"diameter", to_string(space->diameter())}});
    }});

    checks.push_back({"levelwise-axioms", "levelwise-metric-axioms", [&sc, space]() -> CheckOutcome {
        std::vector<FuzzySet> grid;
        const bool exhaustive =
            fuzzy_grid_size(space->size(), sc.lattice.size(), 200) <= 200 && space->size() <= kMaxMaskPoints;
        Rng rng(check_seed(sc, "levelwise-axioms"));
        if (exhaustive) {
            grid = enumerate_fuzzy_grid(space, sc.lattice, false, 200);
        } else {
            if (space->size() > kMaxMaskPoints) return skipped("space too large for cut masks");
            for (int i = 0; i < 40; ++i) grid.push_back(random_fuzzy_set(rng, space, sc.lattice, rng.coin()));
            grid.push_back(FuzzySet::empty(space));
        }
        const std::size_t n = grid.size();
        std::vector<Rational> d(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) d[i * n + j] = levelwise_distance(grid[i], grid[j]);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if ((d[i * n + j] == 0) != (grid[i] == grid[j])) return fail(Json{{"axiom", "identity"}});
                if (d[i * n + j] != d[j * n + i]) return fail(Json{{"axiom", "symmetry"}});
            }
        std::size_t triples = 0;
        if (exhaustive) {
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    for (std::size_t k = 0; k < n; ++k, ++triples)
                        if (d[i * n + k] > d[i * n + j] + d[j * n + k])
                            return fail(Json{{"axiom", "triangle"}});
        } else {
            for (int t = 0; t < 10000; ++t, ++triples) {
                std::size_t i = rng.below(n), j = rng.below(n), k = rng.below(n);
                if (d[i * n + k] > d[i * n + j] + d[j * n + k]) return fail(Json{{"axiom", "triangle"}});
            }
        }
        return pass(Json{{"grid", n}, {"exhaustive", exhaustive}, {"triples", triples}});
    }});

    checks.push_back({"characteristic-embedding-isometry", "characteristic-embedding-isometry",
                      [space]() -> CheckOutcome {
        if (space->size() > 8) return skipped("exhaustive embedding sweep is limited to 8 points");
        std::size_t pairs = 0;
        for (Mask a = 1; a <= full_mask(space->size()); ++a)
            for (Mask b = 1; b <= full_mask(space->size()); ++b, ++pairs) {
                FuzzySet ca = FuzzySet::characteristic(space, a);
                FuzzySet cb = FuzzySet::characteristic(space, b);
                if (levelwise_distance(ca, cb) != hausdorff_ext(*space, a, b))
                    return fail(Json{{"a", mask_json(a)}, {"b", mask_json(b)}});
            }
        return pass(Json{{"pairs", pairs}});
    }});

    checks.push_back({"monotone-containment", "monotone-containment-formula", [space]() -> CheckOutcome {
        if (space->size() > 6) return skipped("exhaustive containment sweep is limited to 6 points");
        std::size_t pairs = 0;
        for (Mask a = 1; a <= full_mask(space->size()); ++a)
            for (Mask b = a; b <= full_mask(space->size()); ++b) {
                if (!mask_subset(a, b)) continue;
                ++pairs;
                if (hausdorff_ext(*space, a, b) != directed_hausdorff(*space, b, a))
                    return fail(Json{{"a", mask_json(a)}, {"b", mask_json(b)}});
            }
        return pass(Json{{"nested_pairs", pairs}});
    }});

    checks.push_back({"union-closeness-bound", "union-closeness-bound", [&sc]() -> CheckOutcome {
        const auto space = sc.system.space;
        if (space->size() > 16) return skipped("randomized union sweep is limited to 16 points");
        Rng rng(check_seed(sc, "union-closeness-bound"));
        for (int t = 0; t < 10000; ++t) {
            CompactSet a(space, random_nonempty_mask(rng, space->size()));
            std::vector<CompactSet> bs;
            const std::size_t count = 1 + rng.below(4);
            Rational worst(0);
            for (std::size_t i = 0; i < count; ++i) {
                bs.emplace_back(space, random_nonempty_mask(rng, space->size()));
                worst = rat_max(worst, hausdorff(a, bs.back()));
            }
            Rational xi = worst + Rational(1 + rng.range(0, 7), 8);
            if (!union_bound_check(a, bs, xi))
                return fail(Json{{"a", mask_json(a.bits())}, {"xi", to_string(xi)}, {"trial", t}});
        }
        return pass(Json{{"trials", 10000}});
    }});

    return checks;
}

// ---------------------------------------------------------------------------
// prop31-oracle: the two fuzzification engines must agree everywhere
// ---------------------------------------------------------------------------

inline std::vector<MonotoneUnitFunction> oracle_g_family(const Scenario& sc) {
    std::vector<MonotoneUnitFunction> gs = {MonotoneUnitFunction::identity(), MonotoneUnitFunction::cap2x(),
                                            MonotoneUnitFunction::dyadic_staircase()};
    Rng rng(check_seed(sc, "oracle-g-family"));
    for (int i = 0; i < 5; ++i) gs.push_back(random_step_g(rng));
    return gs;
}

inline bool engines_agree(const DynMap& f, const MonotoneUnitFunction& g, const FuzzySet& a,
                          std::size_t max_n, std::string* diag) {
    FuzzySet cur = a;
    for (std::size_t n = 1; n <= max_n; ++n) {
        cur = fuzzify_direct(f, g, cur);
        FuzzySet cut = fuzzify_cutwise(f, g, a, n);
        if (!(cur == cut)) {
            if (diag)
                *diag = "g=" + g.name() + " n=" + std::to_string(n) + " direct=" + cur.to_string() +
                        " cutwise=" + cut.to_string();
            return false;
        }
    }
    return true;
}

inline std::vector<Check> prop31_oracle_suite(const Scenario& sc) {
    std::vector<Check> checks;

    checks.push_back({"engine-agreement-exhaustive", "cutwise-direct-engine-agreement", [&sc]() -> CheckOutcome {
        const auto space = sc.system.space;
        if (space->size() > 6) return skipped("exhaustive oracle sweep is limited to 6 points");
        std::vector<Rational> lat = sc.lattice.values();
        while (lat.size() > 3) lat.erase(lat.begin());
        LevelLattice lattice(lat);
        auto gs = oracle_g_family(sc);
        Rng rng(check_seed(sc, "engine-agreement-exhaustive"));
        std::vector<DynMap> maps = {sc.system.map, identity_map(space), random_map(rng, space)};
        std::size_t compared = 0;
        std::string diag;
        CheckOutcome out = pass();
        bool ok = true;
        for_each_fuzzy_grid(space, lattice, false, [&](const FuzzySet& a) {
            if (!ok) return;
            for (const auto& f : maps)
                for (const auto& g : gs) {
                    ++compared;
                    if (!engines_agree(f, g, a, 8, &diag)) {
                        out = fail(Json{{"case", diag}, {"set", fuzzy_set_json(a)}});
                        ok = false;
                        return;
                    }
                }
        });
        if (!ok) return out;
        return pass(Json{{"stacks_compared", compared}, {"iterations_per_stack", 8}});
    }});

    checks.push_back({"engine-agreement-randomized", "cutwise-direct-engine-agreement", [&sc]() -> CheckOutcome {
        Rng rng(check_seed(sc, "engine-agreement-randomized"));
        auto gs = oracle_g_family(sc);
        std::string diag;
        for (int t = 0; t < 10000; ++t) {
            const std::size_t n = 2 + rng.below(11);  // up to 12 points
            auto space = random_space(rng, n);
            DynMap f = random_map(rng, space);
            LevelLattice lattice = random_lattice(rng);
            FuzzySet a = random_fuzzy_set(rng, space, lattice, rng.coin());
            const auto& g = gs[rng.below(gs.size())];
            if (!engines_agree(f, g, a, 1 + rng.below(8), &diag))
                return fail(Json{{"case", diag}, {"trial", t}});
        }
        return pass(Json{{"trials", 10000}});
    }});

    checks.push_back({"characteristic-transport", "characteristic-transport", [&sc]() -> CheckOutcome {
        const auto space = sc.system.space;
        if (space->size() > 10) return skipped("exhaustive transport sweep is limited to 10 points");
        const DynMap& f = sc.system.map;
        std::size_t count = 0;
        for (Mask b = 1; b <= full_mask(space->size()); ++b) {
            FuzzySet cur = FuzzySet::characteristic(space, b);
            Mask img = b;
            for (std::size_t n = 1; n <= 10; ++n, ++count) {
                cur = fuzzify_direct(f, sc.g, cur);
                img = image_mask(f.table(), img);
                if (!(cur == FuzzySet::characteristic(space, img)))
                    return fail(Json{{"set", mask_json(b)}, {"n", n}});
                if (!(fuzzify_cutwise(f, sc.g, FuzzySet::characteristic(space, b), n) ==
                      FuzzySet::characteristic(space, img)))
                    return fail(Json{{"set", mask_json(b)}, {"n", n}, {"engine", "cutwise"}});
            }
        }
        return pass(Json{{"cases", count}, {"g", sc.g.name()}});
    }});

    checks.push_back({"gcut-xi-reduction", "gcut-xi-reduction", [&sc]() -> CheckOutcome {
        const auto space = sc.system.space;
        if (space->size() > 4) return skipped("exhaustive g-cut sweep is limited to 4 points");
        std::vector<Rational> lat = sc.lattice.values();
        while (lat.size() > 3) lat.erase(lat.begin());
        LevelLattice lattice(lat);
        auto gs = oracle_g_family(sc);
        std::size_t count = 0;
        CheckOutcome out = pass();
        bool ok = true;
        for_each_fuzzy_grid(space, lattice, false, [&](const FuzzySet& a) {
            if (!ok) return;
            for (const auto& g : gs)
                for (const auto& alpha : lattice.values()) {
                    ++count;
                    // pointwise oracle: {x in supp(A) : g(A(x)) >= alpha}
                    Mask direct = 0;
                    for_each_point(a.support(), [&](PointId x) {
                        if (g.eval(a.membership(x)) >= alpha) direct |= Mask{1} << x;
                    });
                    if (g_cut_mask(a, g, alpha) != direct) {
                        out = fail(Json{{"set", fuzzy_set_json(a)}, {"g", g.name()}, {"alpha", to_string(alpha)}});
                        ok = false;
                        return;
                    }
                }
        });
        if (!ok) return out;
        return pass(Json{{"cuts_compared", count}});
    }});

    return checks;
}

// ---------------------------------------------------------------------------
// example31: the exact counterexample where the top cut strictly grows
// ---------------------------------------------------------------------------

inline std::vector<Check> example31_suite(const Scenario& sc) {
    std::vector<Check> checks;

    checks.push_back({"top-cut-counterexample", "top-cut-counterexample", [&sc]() -> CheckOutcome {
        NamedSystem grid = !sc.system.coords.empty() && sc.system.name.rfind("tent_grid", 0) == 0
                               ? sc.system
                               : tent_grid(4);
        const auto space = grid.space;
        DynMap f = identity_map(space);
        auto g = MonotoneUnitFunction::cap2x();
        FuzzySet a = FuzzySet::from_membership(space, grid.coords);  // A(x) = x

        Mask expected_top = 0;
        for (std::size_t i = 0; i < grid.coords.size(); ++i)
            if (grid.coords[i] >= Rational(1, 2)) expected_top |= Mask{1} << i;
        Mask one_point = 0;
        for (std::size_t i = 0; i < grid.coords.size(); ++i)
            if (grid.coords[i] == 1) one_point |= Mask{1} << i;

        const Rational g1 = g.eval(Rational(1));
        if (g1 != 1) return fail(Json{{"err", "g(1) != 1"}});
        Mask top_direct = fuzzify_direct(f, g, a).cut_mask(g1);
        Mask top_cutwise = fuzzify_cutwise(f, g, a, 1).cut_mask(g1);
        Mask f_image = image_mask(f.table(), a.cut_mask(Rational(1)));
        Mask gcut = g_cut_mask(a, g, Rational(1));

        Json witness{{"top_cut", mask_to_string(*space, top_direct)},
                     {"f_image", mask_to_string(*space, f_image)}};
        if (top_direct != expected_top || top_cutwise != expected_top)
            return fail(Json{{"err", "top cut is not the upper half grid"}, {"witness", witness}});
        if (f_image != one_point) return fail(Json{{"err", "f([A]_1) is not the top point"}, {"witness", witness}});
        if (top_direct == f_image) return fail(Json{{"err", "counterexample collapsed"}, {"witness", witness}});
        if (gcut != expected_top) return fail(Json{{"err", "g-cut disagrees with the upper half grid"}});
        return pass(witness);
    }});

    checks.push_back({"cap2x-xi-values", "xi-adjunction", []() -> CheckOutcome {
        auto g = MonotoneUnitFunction::cap2x();
        if (g.eval(Rational(1, 4)) != Rational(1, 2)) return fail(Json{{"case", "g(1/4)"}});
        if (g.xi(Rational(1)) != Rational(1, 2)) return fail(Json{{"case", "xi(1)"}});
        if (g.one_preimage_is_singleton()) return fail(Json{{"case", "g^{-1}(1) should not be {1}"}});
        auto rep = probe_unit_function(g);
        if (!rep.ok()) return fail(Json{{"case", "probe report"}});
        return pass(Json{{"probes", rep.probes}});
    }});

    return checks;
}

// ---------------------------------------------------------------------------
// lemma34: top-cut preservation and the one-sided cut inclusion
// ---------------------------------------------------------------------------

inline std::vector<Check> lemma34_suite(const Scenario& sc) {
    std::vector<Check> checks;

    checks.push_back({"top-cut-preservation", "top-cut-preservation", [&sc]() -> CheckOutcome {
        const auto space = sc.system.space;
        if (space->size() > 6) return skipped("exhaustive sweep is limited to 6 points");
        Rng rng(check_seed(sc, "top-cut-preservation"));
        std::vector<MonotoneUnitFunction> gs = {MonotoneUnitFunction::identity(),
                                                MonotoneUnitFunction::dyadic_staircase(),
                                                random_step_g(rng, /*cap_below_one=*/true)};
        for (const auto& g : gs)
            if (!g.one_preimage_is_singleton()) return fail(Json{{"err", "test g not singleton-1"}});
        std::vector<Rational> lat = sc.lattice.values();
        while (lat.size() > 3) lat.erase(lat.begin());
        LevelLattice lattice(lat);
        std::vector<DynMap> maps = {sc.system.map, random_map(rng, space)};
        std::size_t count = 0;
        CheckOutcome out = pass();
        bool ok = true;
        for_each_fuzzy_grid(space, lattice, true, [&](const FuzzySet& a) {
            if (!ok) return;
            for (const auto& f : maps)
                for (const auto& g : gs) {
                    FuzzySet cur = a;
                    Mask img = a.cut_mask(Rational(1));
                    for (std::size_t n = 1; n <= 10; ++n, ++count) {
                        cur = fuzzify_direct(f, g, cur);
                        img = image_mask(f.table(), img);
                        if (cur.cut_mask(Rational(1)) != img) {
                            out = fail(Json{{"set", fuzzy_set_json(a)}, {"g", g.name()}, {"n", n}});
                            ok = false;
                            return;
                        }
                    }
                }
        });
        if (!ok) return out;
        return pass(Json{{"cases", count}});
    }});

    checks.push_back({"image-cut-inclusion", "image-cut-inclusion", [&sc]() -> CheckOutcome {
        Rng rng(check_seed(sc, "image-cut-inclusion"));
        std::vector<MonotoneUnitFunction> gs = {MonotoneUnitFunction::identity(), MonotoneUnitFunction::cap2x(),
                                                MonotoneUnitFunction::dyadic_staircase()};
        for (int t = 0; t < 10000; ++t) {
            const std::size_t n = 2 + rng.below(7);
            auto space = random_space(rng, n);
            DynMap f = random_map(rng, space);
            LevelLattice lattice = random_lattice(rng);
            FuzzySet a = random_fuzzy_set(rng, space, lattice, rng.coin());
            const MonotoneUnitFunction& g = rng.below(4) == 0 ? random_step_g(rng) : gs[rng.below(gs.size())];
            Rational alpha;
            switch (rng.below(4)) {
                case 0: alpha = Rational(0); break;
                case 1: alpha = Rational(1); break;
                default: alpha = Rational(rng.range(1, 8), 8); break;
            }
            if (!check_subset_inclusion(f, g, a, alpha))
                return fail(Json{{"trial", t}, {"alpha", to_string(alpha)}, {"g", g.name()},
                                 {"set", fuzzy_set_json(a)}});
        }
        return pass(Json{{"trials", 10000}});
    }});

    checks.push_back({"cap2x-proper-superset", "top-cut-counterexample", [&sc]() -> CheckOutcome {
        NamedSystem grid = !sc.system.coords.empty() && sc.system.name.rfind("tent_grid", 0) == 0
                               ? sc.system
                               : tent_grid(4);
        FuzzifiedSystem sys(identity_map(grid.space), MonotoneUnitFunction::cap2x(), Engine::both);
        FuzzySet a = FuzzySet::from_membership(grid.space, grid.coords);
        auto verdict = check_top_cut_equality(sys, a, 1);
        if (verdict.equal) return fail(Json{{"err", "expected a proper superset"}});
        if (!mask_subset(verdict.expected, verdict.actual))
            return fail(Json{{"err", "cut is not even a superset"}});
        return pass(Json{{"witness_point", grid.space->label(*verdict.witness)},
                         {"expected", mask_to_string(*grid.space, verdict.expected)},
                         {"actual", mask_to_string(*grid.space, verdict.actual)}});
    }});

    return checks;
}

// ---------------------------------------------------------------------------
// prop43-transport: plateau decomposition and witness fattening
// ---------------------------------------------------------------------------

inline std::vector<Check> prop43_transport_suite(const Scenario& sc) {
    std::vector<Check> checks;

    checks.push_back({"decomposition-approximation", "decomposition-approximation", [&sc]() -> CheckOutcome {
        const auto space = sc.system.space;
        if (space->size() > kMaxMaskPoints) return skipped("space too large for cut masks");
        Rng rng(check_seed(sc, "decomposition-approximation"));
        for (int t = 0; t < 300; ++t) {
            FuzzySet a = random_fuzzy_set(rng, space, sc.lattice, true);
            Rational delta(1 + rng.range(0, 7), 8);
            auto dec = fuzzy_decompose(a, delta);
            if (!(levelwise_distance(a, dec.approx) <= delta / 4))
                return fail(Json{{"trial", t}, {"delta", to_string(delta)}, {"set", fuzzy_set_json(a)}});
            if (!dec.approx.is_normal()) return fail(Json{{"trial", t}, {"err", "approximation lost normality"}});
            if (!mask_subset(a.cut_mask(Rational(1)), dec.approx.cut_mask(Rational(1))))
                return fail(Json{{"trial", t}, {"err", "top cut not contained in top hood"}});
            for (std::size_t i = 1; i < dec.hoods.size(); ++i)
                if (!mask_subset(dec.hoods[i - 1], dec.hoods[i]))
                    return fail(Json{{"trial", t}, {"err", "hoods not cumulative"}});
        }
        // characteristic case: one plateau, one hood
        CompactSet b(space, Mask{1});
        auto dec = fuzzy_decompose(FuzzySet::characteristic(b), Rational(1, 2));
        if (dec.alphas.size() != 1) return fail(Json{{"err", "characteristic case has extra plateaus"}});
        if (dec.approx.cut_mask(Rational(1)) != open_neighborhood(*space, Mask{1}, Rational(1, 8)))
            return fail(Json{{"err", "characteristic hood is not the open delta/4 neighborhood"}});
        return pass(Json{{"trials", 300}});
    }});

    checks.push_back({"witness-fattening", "witness-fattening", [&sc]() -> CheckOutcome {
        const auto space = sc.system.space;
        if (space->size() > kMaxMaskPoints) return skipped("space too large for cut masks");
        Rng rng(check_seed(sc, "witness-fattening"));
        const Rational minpos = space->min_positive_distance();
        std::size_t built = 0;
        for (int t = 0; t < 300; ++t) {
            FuzzySet a = random_fuzzy_set(rng, space, sc.lattice, true);
            Rational delta = 8 * minpos + Rational(rng.range(0, 3));  // keep delta/4 above resolution
            Mask top = a.cut_mask(Rational(1));
            Mask c = top;
            for (PointId y = 0; y < space->size(); ++y)
                if (distance_to_mask(*space, y, top) < delta / 8) c |= Mask{1} << y;
            if (rng.coin() && mask_size(c) > 1) c &= c - 1;  // drop the lowest point, stay within delta/8
            if (!hausdorff_lt(*space, top, c, delta / 4)) continue;
            Rational xi = rat_min(delta / 8, minpos / 2);
            FuzzySet e = fuzzy_witness(a, c, delta, xi);
            ++built;
            if (!(levelwise_distance(a, e) < delta)) return fail(Json{{"trial", t}, {"err", "d_inf bound"}});
            if (e.cut_mask(Rational(1)) != open_neighborhood(*space, c, xi))
                return fail(Json{{"trial", t}, {"err", "top cut is not Q"}});
        }
        // guard: a far-away perturbation must be rejected
        FuzzySet chi = FuzzySet::characteristic(space, Mask{1});
        bool rejected = false;
        try {
            fuzzy_witness(chi, full_mask(space->size()), 4 * minpos, minpos / 2);
        } catch (const PreconditionViolated&) {
            rejected = true;
        }
        if (space->size() > 2 && !rejected) return fail(Json{{"err", "distant C was accepted"}});
        return pass(Json{{"constructed", built}});
    }});

    return checks;
}

// ---------------------------------------------------------------------------
// sensitivity-audit
// ---------------------------------------------------------------------------

inline std::vector<Check> sensitivity_audit_suite(const Scenario& sc, Engine engine) {
    std::vector<Check> checks;

    checks.push_back({"separation-window-sample", "separation-time-window", [&sc]() -> CheckOutcome {
        const auto& space = *sc.system.space;
        const PointId center = static_cast<PointId>(space.size() / 2);
        auto members = base_ball(space, center, sc.delta);
        auto window = separation_times_base(sc.system.map, members, sc.epsilon, sc.horizon);
        Json times = Json::array();
        for (auto n : window.members()) times.push_back(n);
        return pass(Json{{"center", space.label(center)}, {"ball_size", members.size()}, {"times", times}});
    }});

    checks.push_back({"cross-level-table", "cross-level-implications", [&sc, engine]() -> CheckOutcome {
        AuditOptions opt;
        opt.cofinite_tail = sc.families.cofinite_tail;
        opt.syndetic_gap = sc.families.syndetic_gap;
        opt.infinite_block = sc.families.infinite_block;
        opt.multi_k = sc.families.multi_k;
        opt.engine = engine;
        auto rep = cross_level_audit(sc.system, sc.g, sc.epsilon, sc.delta, sc.horizon, sc.lattice, opt,
                                     sc.caps.grid);
        Json cells = Json::array();
        for (const auto& c : rep.cells)
            cells.push_back(Json{{"level", level_name(c.level)},
                                 {"check", c.check},
                                 {"status", c.certified ? "certified" : "refuted_at_horizon"},
                                 {"exhaustive", c.exhaustive},
                                 {"epsilon", to_string(c.epsilon_used)},
                                 {"delta", to_string(c.delta_used)},
                                 {"detail", c.detail}});
        Json witness{{"system", rep.system}, {"g", rep.g_name}, {"table", cells}};
        if (!rep.violations.empty()) {
            witness["violations"] = rep.violations;
            return fail(witness);
        }
        return pass(witness);
    }});

    return checks;
}

// ---------------------------------------------------------------------------
// family: window-level Furstenberg machinery
// ---------------------------------------------------------------------------

inline std::vector<Check> family_suite(const Scenario& sc) {
    std::vector<Check> checks;

    checks.push_back({"family-window-semantics", "family-window-semantics", []() -> CheckOutcome {
        const std::size_t N = 100;
        auto evens = TimeWindowSet(N);
        for (std::size_t n = 0; n <= N; n += 2) evens.add(n);
        const TimeWindowSet full = TimeWindowSet::all(N);
        const TimeWindowSet empty(N);
        struct Case {
            const TimeWindowSet& w;
            FamilyPredicate fam;
            bool expected;
        };
        const std::vector<Case> cases = {
            {full, FamilyPredicate::infinite(1), true},
            {full, FamilyPredicate::cofinite(5), true},
            {full, FamilyPredicate::syndetic(1), true},
            {full, FamilyPredicate::full(), true},
            {evens, FamilyPredicate::syndetic(2), true},
            {evens, FamilyPredicate::cofinite(1), false},
            {evens, FamilyPredicate::infinite(2), true},
            {evens, FamilyPredicate::full(), false},
            {empty, FamilyPredicate::infinite(5), false},
            {empty, FamilyPredicate::cofinite(5), false},
            {empty, FamilyPredicate::syndetic(5), false},
            {empty, FamilyPredicate::full(), false},
        };
        for (std::size_t i = 0; i < cases.size(); ++i)
            if (family_classify(cases[i].w, cases[i].fam) != cases[i].expected)
                return fail(Json{{"case", i}, {"family", cases[i].fam.to_string()}});
        return pass(Json{{"cases", cases.size()}});
    }});

    checks.push_back({"upward-heredity", "family-window-semantics", [&sc]() -> CheckOutcome {
        Rng rng(check_seed(sc, "upward-heredity"));
        for (int t = 0; t < 2000; ++t) {
            const std::size_t N = 20 + rng.below(40);
            TimeWindowSet w1(N);
            for (std::size_t n = 0; n <= N; ++n)
                if (rng.below(3) == 0) w1.add(n);
            TimeWindowSet w2 = w1;
            for (std::size_t n = 0; n <= N; ++n)
                if (rng.below(4) == 0) w2.add(n);
            const std::vector<FamilyPredicate> fams = {
                FamilyPredicate::infinite(1 + rng.below(5)), FamilyPredicate::cofinite(1 + rng.below(5)),
                FamilyPredicate::syndetic(1 + rng.below(5))};
            for (const auto& fam : fams)
                if (family_classify(w1, fam) && !family_classify(w2, fam))
                    return fail(Json{{"trial", t}, {"family", fam.to_string()}});
        }
        return pass(Json{{"trials", 2000}});
    }});

    checks.push_back({"filter-intersection-stability", "filter-intersection-stability", [&sc]() -> CheckOutcome {
        Rng rng(check_seed(sc, "filter-intersection-stability"));
        for (int t = 0; t < 2000; ++t) {
            const std::size_t N = 20 + rng.below(40);
            const std::size_t t1 = 1 + rng.below(8), t2 = 1 + rng.below(8);
            TimeWindowSet w1(N), w2(N);
            for (std::size_t n = 0; n <= N; ++n) {
                if (rng.below(3) == 0) w1.add(n);
                if (rng.below(3) == 0) w2.add(n);
            }
            if (!family_classify(w1, FamilyPredicate::cofinite(t1)) ||
                !family_classify(w2, FamilyPredicate::cofinite(t2)))
                continue;
            if (!family_classify(w1.intersect(w2), FamilyPredicate::cofinite(std::max(t1, t2))))
                return fail(Json{{"trial", t}, {"t1", t1}, {"t2", t2}});
        }
        // and a constructive sweep where both tails are forced present
        for (int t = 0; t < 2000; ++t) {
            const std::size_t N = 20 + rng.below(40);
            const std::size_t t1 = 1 + rng.below(8), t2 = 1 + rng.below(8);
            TimeWindowSet w1(N), w2(N);
            for (std::size_t n = N >= t1 ? N - t1 : 0; n <= N; ++n) w1.add(n);
            for (std::size_t n = N >= t2 ? N - t2 : 0; n <= N; ++n) w2.add(n);
            for (std::size_t n = 0; n <= N; ++n) {
                if (rng.coin()) w1.add(n);
                if (rng.coin()) w2.add(n);
            }
            if (!family_classify(w1.intersect(w2), FamilyPredicate::cofinite(std::max(t1, t2))))
                return fail(Json{{"trial", t}, {"t1", t1}, {"t2", t2}, {"forced", true}});
        }
        return pass(Json{{"trials", 4000}});
    }});

    checks.push_back({"dual-family-window", "dual-family-window", []() -> CheckOutcome {
        const std::size_t N = 50;
        const TimeWindowSet full = TimeWindowSet::all(N);
        const TimeWindowSet empty(N);
        const std::vector<FamilyPredicate> fams = {FamilyPredicate::infinite(3), FamilyPredicate::cofinite(3),
                                                   FamilyPredicate::syndetic(3)};
        for (const auto& fam : fams) {
            if (!family_dual_classify(full, fam)) return fail(Json{{"case", "full"}, {"family", fam.to_string()}});
            if (family_dual_classify(empty, fam)) return fail(Json{{"case", "empty"}, {"family", fam.to_string()}});
        }
        return pass(Json{{"families", fams.size()}});
    }});

    return checks;
}

// ---------------------------------------------------------------------------
// theorem63: the applicability gate and the separation construction
// ---------------------------------------------------------------------------

inline std::vector<Check> theorem63_suite(const Scenario& sc, Engine engine) {
    std::vector<Check> checks;

    checks.push_back({"staircase-fixed-values", "xi-fixation-values", []() -> CheckOutcome {
        auto g = MonotoneUnitFunction::dyadic_staircase();
        if (g.eval(Rational(5, 8)) != Rational(1, 2)) return fail(Json{{"case", "g(5/8)"}});
        if (g.xi(Rational(1, 4)) != Rational(1, 2)) return fail(Json{{"case", "xi(1/4)"}});
        for (std::size_t n = 1; n <= 20; ++n)
            if (g.xi_iter(Rational(1, 4), n).value != Rational(1, 2))
                return fail(Json{{"case", "xi^n(1/4)"}, {"n", n}});
        auto it = g.xi_iter(Rational(1, 4), 20);
        if (!it.fixation || *it.fixation != 1) return fail(Json{{"case", "fixation index"}});
        if (!g.one_preimage_is_singleton()) return fail(Json{{"case", "g^{-1}(1)"}});
        auto cap = MonotoneUnitFunction::cap2x();
        if (cap.xi_iter(Rational(1), 50).fixation) return fail(Json{{"case", "cap2x should never fix"}});
        auto id = MonotoneUnitFunction::identity();
        auto idit = id.xi_iter(Rational(3, 7), 5);
        if (!idit.fixation || *idit.fixation != 0) return fail(Json{{"case", "identity fixation"}});
        return pass(Json{{"iterations", 20}});
    }});

    checks.push_back({"xi-fixation-classification", "xi-fixation-classification", [&sc]() -> CheckOutcome {
        std::vector<Rational> probe = sc.lattice.values();
        for (const auto& extra : {Rational(1, 4), Rational(1, 2), Rational(3, 4), Rational(1)})
            probe.push_back(extra);
        auto cls = classify_for_theorem63(sc.g, probe, 50);
        if (!cls.applicable) return pass(Json{{"verdict", "not_found"}, {"g", sc.g.name()}});
        if (sc.g.xi(cls.z) == cls.z) return fail(Json{{"err", "classified z is a xi fixed point"}});
        auto it = sc.g.xi_iter(cls.z, cls.m);
        if (!it.fixation || *it.fixation != cls.m) return fail(Json{{"err", "m is not the least fixation index"}});
        return pass(Json{{"verdict", "applicable"}, {"z", to_string(cls.z)}, {"m", cls.m}});
    }});

    checks.push_back({"separation-construction", "separation-construction", [&sc]() -> CheckOutcome {
        std::vector<Rational> probe = sc.lattice.values();
        probe.push_back(Rational(1, 4));
        auto cls = classify_for_theorem63(sc.g, probe, 50);
        if (!cls.applicable) return skipped("g is not applicable: no z with xi_g(z) != z and fixation");
        const auto space = sc.system.space;
        if (space->size() < 2) return skipped("construction needs at least two points");
        PointId a = 0, b = 1;
        for (PointId i = 0; i < space->size(); ++i)
            for (PointId j = i + 1; j < space->size(); ++j)
                if (space->distance(i, j) > space->distance(a, b)) a = i, b = j;
        std::vector<Rational> extra = {cls.z};
        Rational v = cls.z;
        for (std::size_t j = 0; j <= cls.m + 1; ++j) {
            v = sc.g.xi(v);
            extra.push_back(v);
        }
        auto lattice = sc.lattice.merged_with(extra);
        auto con = build_separation(space, sc.g, cls.z, cls.m, a, b, lattice, sc.horizon);
        if (!(con.eta >= 3 * space->distance(a, b) / 4)) return fail(Json{{"err", "eta bound"}});
        if (!(levelwise_distance(con.set_u, con.set_v) >= con.eta)) return fail(Json{{"err", "d_inf(E,G)"}});
        return pass(Json{{"a", space->label(con.a)}, {"b", space->label(con.b)},
                         {"E1", mask_to_string(*space, con.e1)}, {"E2", mask_to_string(*space, con.e2)},
                         {"eta", to_string(con.eta)}, {"case", con.case_id},
                         {"z", to_string(con.z)}, {"m", con.m}});
    }});

    checks.push_back({"separation-persistence", "separation-persistence", [&sc, engine]() -> CheckOutcome {
        std::vector<Rational> probe = sc.lattice.values();
        probe.push_back(Rational(1, 4));
        auto cls = classify_for_theorem63(sc.g, probe, 50);
        if (!cls.applicable) return skipped("g is not applicable: no z with xi_g(z) != z and fixation");
        const auto space = sc.system.space;
        if (space->size() < 2) return skipped("construction needs at least two points");
        PointId a = 0, b = 1;
        for (PointId i = 0; i < space->size(); ++i)
            for (PointId j = i + 1; j < space->size(); ++j)
                if (space->distance(i, j) > space->distance(a, b)) a = i, b = j;
        std::vector<Rational> extra = {cls.z};
        Rational v = cls.z;
        for (std::size_t j = 0; j <= cls.m + 1; ++j) {
            v = sc.g.xi(v);
            extra.push_back(v);
        }
        auto lattice = sc.lattice.merged_with(extra);
        auto con = build_separation(space, sc.g, cls.z, cls.m, a, b, lattice, sc.horizon);
        FuzzifiedSystem sys(sc.system.map, sc.g, engine);
        auto verdict = verify_separation(con, sys, sc.horizon, sc.caps.grid);
        Json witness{{"grid", verdict.grid_size}, {"ball_members", verdict.members_checked},
                     {"horizon", verdict.horizon}};
        if (!verdict.separated) {
            witness["violation_member"] = verdict.violation_member;
            witness["violation_time"] = verdict.violation_time;
            return fail(witness);
        }
        return pass(witness);
    }});

    return checks;
}

// ---------------------------------------------------------------------------
// theorem61: weak-mixing windows and the blocking-pair embedding
// ---------------------------------------------------------------------------

inline std::vector<Check> theorem61_suite(const Scenario& sc, Engine engine) {
    std::vector<Check> checks;

    checks.push_back({"return-window-reduction", "return-window-computation", [&sc]() -> CheckOutcome {
        const auto space = sc.system.space;
        if (space->size() > kMaxMaskPoints) return skipped("space too large for cut masks");
        const DynMap& f = sc.system.map;
        std::size_t cases = 0;
        for (PointId x = 0; x < space->size(); ++x) {
            Mask u = Mask{1} << x;
            for (PointId y = 0; y < space->size(); ++y, ++cases) {
                Mask v = Mask{1} << y;
                auto window = return_set_base(f, u, v, sc.horizon);
                for (std::size_t n = 0; n <= sc.horizon; ++n)
                    if (window.contains(n) != (f.iterate(x, n) == y))
                        return fail(Json{{"x", space->label(x)}, {"y", space->label(y)}, {"n", n}});
            }
        }
        return pass(Json{{"cases", cases}});
    }});

    checks.push_back({"transitivity-window", "transitivity-window", [&sc]() -> CheckOutcome {
        const auto& sys = sc.system;
        std::vector<Mask> basis = sys.coords.empty() ? singleton_basis(*sys.space)
                                                     : interval_basis(sys, sc.basis_width);
        auto verdict = certify_transitive_base(sys.map, basis, sc.horizon, sc.families.infinite_block);
        Json witness{{"basis", basis.size()}, {"pairs", verdict.pair_count},
                     {"block_dense", verdict.all_windows_block_dense},
                     {"block_len", verdict.infinite_block}};
        if (!verdict.transitive) {
            witness["blocking"] = Json::array({verdict.blocking->first, verdict.blocking->second});
            return refuted(witness);
        }
        return pass(witness);
    }});

    checks.push_back({"weak-mixing-window", "weak-mixing-window", [&sc]() -> CheckOutcome {
        const auto& sys = sc.system;
        std::vector<Mask> basis = sys.coords.empty() ? singleton_basis(*sys.space)
                                                     : interval_basis(sys, sc.basis_width);
        auto verdict = certify_weak_mixing_base(sys.map, basis, sc.horizon);
        Json witness{{"basis", basis.size()}, {"pairs", verdict.pair_count}};
        if (!verdict.weakly_mixing) {
            witness["witness_tuple"] = Json::array({(*verdict.witness)[0], (*verdict.witness)[1],
                                                    (*verdict.witness)[2], (*verdict.witness)[3]});
            return refuted(witness);
        }
        return pass(witness);
    }});

    checks.push_back({"fuzzy-transitivity-blocking-pair", "fuzzy-transitivity-blocking-pair",
                      [&sc, engine]() -> CheckOutcome {
        const auto& sys = sc.system;
        const Rational radius = sys.space->min_positive_distance() / 2;
        Theorem61Report rep;
        try {
            rep = audit_theorem61(sys, sc.g, radius, sc.horizon, sc.lattice, sc.caps.hyper_points,
                                  sc.caps.grid, engine);
        } catch (const SpaceTooLarge& e) {
            return skipped(std::string("hyperspace not enumerable: ") + e.what());
        } catch (const GridTooLarge& e) {
            return skipped(std::string("fuzzy grid not enumerable: ") + e.what());
        }
        if (rep.vacuous) return pass(Json{{"hyper_weakly_mixing", true}, {"note", rep.note}});
        Json witness{{"hyper_weakly_mixing", false}};
        if (rep.wm_witness)
            witness["wm_witness_tuple"] = Json::array({(*rep.wm_witness)[0], (*rep.wm_witness)[1],
                                                       (*rep.wm_witness)[2], (*rep.wm_witness)[3]});
        if (!rep.hyper_blocking) return skipped(rep.note);
        witness["hyper_blocking_pair"] = Json::array({rep.hyper_blocking->first, rep.hyper_blocking->second});
        witness["fuzzy_u"] = rep.fuzzy_blocking_u;
        witness["fuzzy_v"] = rep.fuzzy_blocking_v;
        witness["members_checked"] = rep.fuzzy_members_checked;
        if (!rep.fuzzy_blocking_verified) {
            witness["note"] = rep.note;
            return fail(witness);
        }
        return pass(witness);
    }});

    return checks;
}

}  // namespace suites

inline std::vector<std::string> suite_names() {
    return {"metric-axioms", "prop31-oracle", "example31",         "lemma34",  "prop43-transport",
            "sensitivity-audit", "family",    "theorem63",         "theorem61"};
}

inline Report run_suite(const Scenario& scenario, const std::string& suite, const SuiteOptions& opt = {}) {
    const Engine engine = opt.engine_override.value_or(scenario.engine);
    std::vector<suites::Check> checks;
    if (suite == "metric-axioms") checks = suites::metric_axioms_suite(scenario);
    else if (suite == "prop31-oracle") checks = suites::prop31_oracle_suite(scenario);
    else if (suite == "example31") checks = suites::example31_suite(scenario);
    else if (suite == "lemma34") checks = suites::lemma34_suite(scenario);
    else if (suite == "prop43-transport") checks = suites::prop43_transport_suite(scenario);
    else if (suite == "sensitivity-audit") checks = suites::sensitivity_audit_suite(scenario, engine);
    else if (suite == "family") checks = suites::family_suite(scenario);
    else if (suite == "theorem63") checks = suites::theorem63_suite(scenario, engine);
    else if (suite == "theorem61") checks = suites::theorem61_suite(scenario, engine);
    else throw ScenarioInvalid("suite", "unknown suite '" + suite + "'");

    Report rep;
    rep.suite = suite;
    rep.scenario_echo = scenario.echo();

    auto execute = [](const suites::Check& c) -> CheckRecord {
        const auto start = std::chrono::steady_clock::now();
        suites::CheckOutcome outcome;
        try {
            outcome = c.run();
        } catch (const Error& e) {
            outcome = {"fail", Json{{"exception", e.what()}}};
        }
        const auto stop = std::chrono::steady_clock::now();
        CheckRecord rec{c.name, c.anchor, outcome.status, std::move(outcome.witness), std::nullopt};
        rec.timing_ms = std::chrono::duration<double, std::milli>(stop - start).count();
        return rec;
    };

    if (opt.parallel) {
        std::vector<std::future<CheckRecord>> futures;
        futures.reserve(checks.size());
        for (const auto& c : checks)
            futures.push_back(std::async(std::launch::async, [&c, &execute]() { return execute(c); }));
        for (auto& f : futures) rep.add(f.get());  // merged in declaration order
    } else {
        for (const auto& c : checks) rep.add(execute(c));
    }
    return rep;
}

inline Report run_all_suites(const Scenario& scenario, const SuiteOptions& opt = {}) {
    Report all;
    all.suite = "all";
    all.scenario_echo = scenario.echo();
    for (const auto& name : suite_names()) {
        Report r = run_suite(scenario, name, opt);
        for (auto& c : r.checks) {
            c.name = name + "/" + c.name;
            all.add(std::move(c));
        }
    }
    return all;
}

}  // namespace fuzzdyn
