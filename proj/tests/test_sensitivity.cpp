#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "fuzzdyn/audit.hpp"
#include "fuzzdyn/dynamics.hpp"
#include "fuzzdyn/random_models.hpp"
#include "fuzzdyn/sensitivity.hpp"

using namespace fuzzdyn;

namespace {

PointId point_at(const NamedSystem& sys, const Rational& coord) {
    for (std::size_t i = 0; i < sys.coords.size(); ++i)
        if (sys.coords[i] == coord) return static_cast<PointId>(i);
    FAIL("coordinate not on grid");
    return 0;
}

}  // namespace

TEST_CASE("separation time windows") {
    SECTION("identity map never separates") {
        auto sys = identity_system(5);
        auto members = base_ball(*sys.space, 0, Rational(2));  // whole space
        auto w = separation_times_base(sys.map, members, Rational(1), 10);
        CHECK(w.empty());
    }
    SECTION("rotations preserve diameters") {
        auto sys = rotation(1, 8);
        auto members = base_ball(*sys.space, 0, Rational(3, 16));  // two points, diam 1/8
        auto w = separation_times_base(sys.map, members, Rational(1, 8), 100);
        CHECK(w.empty());
        // but the constant diameter does exceed any smaller threshold at every time
        auto w2 = separation_times_base(sys.map, members, Rational(1, 16), 20);
        CHECK(w2.count() == 21);
    }
    SECTION("the dyadic tent ball separates exactly once before collapsing") {
        auto sys = tent_grid(6);
        const PointId center = point_at(sys, Rational(1, 2));
        auto members = base_ball(*sys.space, center, Rational(1, 32));
        REQUIRE(members.size() == 3);  // 31/64, 1/2, 33/64
        auto w = separation_times_base(sys.map, members, Rational(1, 2), 15);
        // the grid image collapses to {0} after the blowup, so the window is
        // the single time 6, not a tail
        CHECK(w.members() == std::vector<std::size_t>{6});

        auto singleton = base_ball(*sys.space, center, Rational(1, 64));
        REQUIRE(singleton.size() == 1);
        CHECK(separation_times_base(sys.map, singleton, Rational(1, 2), 15).empty());
    }
    SECTION("empty ball is rejected") {
        auto sys = identity_system(3);
        CHECK_THROWS_AS(separation_times_base(sys.map, {}, Rational(1), 5), BallNotEnumerable);
    }
}

TEST_CASE("base sensitivity certificates") {
    SECTION("tent grid is certified with adjacent witnesses") {
        auto sys = tent_grid(6);
        auto v = certify_sensitivity_base(sys.map, Rational(1, 2), Rational(1, 32), 12);
        REQUIRE(v.certified);
        CHECK(v.exhaustive);
        CHECK(v.witnesses.size() == sys.space->size());
        for (const auto& w : v.witnesses) {
            CHECK(w.separation > Rational(1, 2));
            CHECK(w.time <= 12);
        }
    }
    SECTION("a rotation is refuted: balls are singletons below the resolution") {
        auto sys = rotation(1, 8);
        auto v = certify_sensitivity_base(sys.map, Rational(1, 2), Rational(1, 16), 100);
        REQUIRE_FALSE(v.certified);
        CHECK(v.exhaustive);
        CHECK_FALSE(v.failing_center.empty());
    }
    SECTION("certificates persist at longer horizons") {
        auto sys = tent_grid(4);
        for (std::size_t n = 6; n <= 12; n += 2)
            CHECK(certify_sensitivity_base(sys.map, Rational(1, 2), Rational(1, 8), n).certified);
    }
}

TEST_CASE("hyper sensitivity certificates") {
    SECTION("identity map is refuted at the hyper level") {
        auto sys = identity_system(4);
        auto v = certify_sensitivity_hyper(sys.map, Rational(1, 2), Rational(1, 4), 20);
        REQUIRE_FALSE(v.certified);
        CHECK(v.exhaustive);  // 15 sets, exhaustively scanned
    }
    SECTION("rotation is refuted exhaustively") {
        auto sys = rotation(1, 8);
        auto v = certify_sensitivity_hyper(sys.map, Rational(1, 4), Rational(1, 16), 30);
        REQUIRE_FALSE(v.certified);
        CHECK(v.exhaustive);
    }
    SECTION("small tent grid is certified exhaustively") {
        auto sys = tent_grid(3);  // 9 points, 511 sets
        auto v = certify_sensitivity_hyper(sys.map, Rational(1, 4), Rational(1, 4), 10);
        REQUIRE(v.certified);
        CHECK(v.exhaustive);
        CHECK(v.probe_count == 511);
    }
    SECTION("large tent grid is certified through structured candidates") {
        auto sys = tent_grid(5);  // 33 points: sampled probes, constructed witnesses
        auto v = certify_sensitivity_hyper(sys.map, Rational(1, 4), Rational(1, 16), 15);
        REQUIRE(v.certified);
        CHECK_FALSE(v.exhaustive);
        CHECK(v.probe_policy == "sampled");
        for (const auto& w : v.witnesses) CHECK(w.separation > Rational(1, 4));
    }
}

TEST_CASE("structured hyper candidates find deletion witnesses") {
    auto sys = tent_grid(5);
    const auto& space = *sys.space;
    // probe = the whole grid; the only witnesses drop every odd point
    const Mask probe = full_mask(space.size());
    auto candidates = hyper_candidates_structured(sys.map, probe, Rational(1, 4), Rational(1, 16), 15);
    auto wit = hyper_witness_search(sys.map, probe, candidates, Rational(1, 4), Rational(1, 16), 15);
    REQUIRE(wit.has_value());
    CHECK(wit->separation >= Rational(1, 2));
}

TEST_CASE("fuzzy sensitivity certificates") {
    SECTION("rotation refuted on the exhaustive grid") {
        auto sys = rotation(1, 4);
        FuzzifiedSystem fsys(sys.map, MonotoneUnitFunction::identity());
        LevelLattice lattice({Rational(1, 2), Rational(1)});
        auto v = certify_sensitivity_fuzzy(fsys, lattice, Rational(1, 4), Rational(1, 8), 20);
        REQUIRE_FALSE(v.certified);
        CHECK(v.exhaustive);
    }
    SECTION("small tent grid certified on the exhaustive grid") {
        auto sys = tent_grid(2);
        FuzzifiedSystem fsys(sys.map, MonotoneUnitFunction::identity());
        LevelLattice lattice({Rational(1, 2), Rational(1)});
        auto v = certify_sensitivity_fuzzy(fsys, lattice, Rational(1, 4), Rational(1, 2), 8);
        REQUIRE(v.certified);
        CHECK(v.exhaustive);
    }
    SECTION("large tent grid certified constructively for both qualifying g") {
        auto sys = tent_grid(5);
        LevelLattice lattice({Rational(1, 4), Rational(1, 2), Rational(1)});
        for (const auto& g : {MonotoneUnitFunction::identity(), MonotoneUnitFunction::dyadic_staircase()}) {
            FuzzifiedSystem fsys(sys.map, g);
            auto probes = sampled_fuzzy_probes(sys.space, lattice, Rational(1, 16));
            auto v = certify_sensitivity_fuzzy(fsys, lattice, Rational(1, 4), Rational(1, 4), 15, probes);
            INFO(g.name());
            REQUIRE(v.certified);
            CHECK(v.probe_policy == "constructive");
            for (const auto& w : v.witnesses) CHECK(w.separation > Rational(1, 4));
        }
    }
    SECTION("probes are required when the grid is too large") {
        auto sys = tent_grid(5);
        FuzzifiedSystem fsys(sys.map, MonotoneUnitFunction::identity());
        LevelLattice lattice({Rational(1, 2), Rational(1)});
        CHECK_THROWS_AS(certify_sensitivity_fuzzy(fsys, lattice, Rational(1, 4), Rational(1, 4), 10),
                        ProbeSpaceTooLarge);
    }
}

TEST_CASE("plateau decomposition") {
    auto sys = tent_grid(3);
    const auto space = sys.space;
    SECTION("characteristic sets peel in one step") {
        Mask b = (Mask{1} << point_at(sys, Rational(1, 4))) | (Mask{1} << point_at(sys, Rational(3, 8)));
        auto dec = fuzzy_decompose(FuzzySet::characteristic(space, b), Rational(1, 2));
        REQUIRE(dec.alphas.size() == 1);
        CHECK(dec.alphas[0] == 1);
        CHECK(dec.hoods[0] == open_neighborhood(*space, b, Rational(1, 8)));
        CHECK(levelwise_distance(FuzzySet::characteristic(space, b), dec.approx) <= Rational(1, 8));
    }
    SECTION("oversized delta swallows the space into one cut") {
        auto a = FuzzySet::from_stack(space, {Rational(1, 2), Rational(1)},
                                      {full_mask(space->size()), Mask{1}});
        auto dec = fuzzy_decompose(a, 4 * space->diameter());
        REQUIRE(dec.alphas.size() == 1);
        CHECK(dec.approx.cut_mask(Rational(1)) == full_mask(space->size()));
        CHECK(dec.approx.is_characteristic());
    }
    SECTION("well separated plateaus keep their level count") {
        // plateaus at 0 and 1 (distance 1), delta/2 below their separation
        auto a = FuzzySet::from_stack(space, {Rational(1, 2), Rational(1)},
                                      {(Mask{1} << point_at(sys, Rational(0))) |
                                           (Mask{1} << point_at(sys, Rational(1))),
                                       Mask{1} << point_at(sys, Rational(0))});
        auto dec = fuzzy_decompose(a, Rational(1, 2));
        CHECK(dec.alphas.size() == 2);
        CHECK(dec.approx.level_count() == 2);
    }
    SECTION("approximation bound holds on random draws") {
        Rng rng(83);
        LevelLattice lattice({Rational(1, 4), Rational(1, 2), Rational(3, 4), Rational(1)});
        for (int t = 0; t < 200; ++t) {
            FuzzySet a = random_fuzzy_set(rng, space, lattice, true);
            Rational delta(1 + rng.range(0, 7), 8);
            auto dec = fuzzy_decompose(a, delta);
            REQUIRE(levelwise_distance(a, dec.approx) <= delta / 4);
            REQUIRE(dec.approx.is_normal());
            REQUIRE(mask_subset(a.cut_mask(Rational(1)), dec.approx.cut_mask(Rational(1))));
        }
    }
    SECTION("guards") {
        CHECK_THROWS_AS(fuzzy_decompose(FuzzySet::characteristic(space, 1), Rational(0)), DegenerateDelta);
        CHECK_THROWS_AS(fuzzy_decompose(FuzzySet::from_stack(space, {Rational(1, 2)}, {0b1}), Rational(1)),
                        NotNormal);
    }
}

TEST_CASE("witness fattening") {
    auto sys = tent_grid(3);
    const auto space = sys.space;
    const Rational minpos = space->min_positive_distance();

    SECTION("characteristic probe gives a two-level stack") {
        Mask b = Mask{1} << point_at(sys, Rational(1, 2));
        FuzzySet a = FuzzySet::characteristic(space, b);
        Mask c = b | (Mask{1} << point_at(sys, Rational(5, 8)));  // d_H = 1/8 < delta/4
        const Rational delta(1);
        const Rational xi = rat_min(Rational(delta / 8), Rational(minpos / 2));
        FuzzySet e = fuzzy_witness(a, c, delta, xi);
        CHECK(e.cut_mask(Rational(1)) == c);  // xi below the resolution keeps Q = C
        CHECK(e.level_count() == 2);
        CHECK(levelwise_distance(a, e) < delta);
    }
    SECTION("perturbing the top cut of a layered set") {
        Rng rng(89);
        LevelLattice lattice({Rational(1, 2), Rational(1)});
        std::size_t built = 0;
        for (int t = 0; t < 200; ++t) {
            FuzzySet a = random_fuzzy_set(rng, space, lattice, true);
            Mask top = a.cut_mask(Rational(1));
            Mask c = top;
            for (PointId y = 0; y < space->size(); ++y)
                if (distance_to_mask(*space, y, top) <= Rational(1, 8)) c |= Mask{1} << y;
            const Rational delta(1);  // d_H(top, c) <= 1/8 < delta/4
            FuzzySet e = fuzzy_witness(a, c, delta, minpos / 2);
            ++built;
            REQUIRE(e.cut_mask(Rational(1)) == c);
            REQUIRE(levelwise_distance(a, e) < delta);
        }
        CHECK(built == 200);
    }
    SECTION("preconditions are enforced") {
        FuzzySet a = FuzzySet::characteristic(space, Mask{1});
        Mask far = Mask{1} << point_at(sys, Rational(1));
        CHECK_THROWS_AS(fuzzy_witness(a, far, Rational(1, 2), Rational(1, 32)), PreconditionViolated);
        CHECK_THROWS_AS(fuzzy_witness(a, Mask{1}, Rational(1, 2), Rational(1, 2)), PreconditionViolated);
        CHECK_THROWS_AS(fuzzy_witness(a, Mask{1}, Rational(1, 2), Rational(0)), PreconditionViolated);
        CHECK_THROWS_AS(fuzzy_witness(a, 0, Rational(1, 2), Rational(1, 32)), PreconditionViolated);
    }
}

TEST_CASE("cross level audit on the rotation refutes every row consistently") {
    auto sys = rotation(1, 8);
    LevelLattice lattice({Rational(1, 4), Rational(1, 2), Rational(1)});
    auto rep = cross_level_audit(sys, MonotoneUnitFunction::identity(), Rational(1, 2), Rational(1, 16),
                                 12, lattice);
    REQUIRE(rep.violations.empty());
    for (const auto& cell : rep.cells) {
        INFO(level_name(cell.level) << " " << cell.check);
        CHECK_FALSE(cell.certified);
    }
    // base, hyper and fuzzy plain rows are exhaustive refutations here
    CHECK(rep.cell(LevelKind::base, "plain")->exhaustive);
    CHECK(rep.cell(LevelKind::hyper, "plain")->exhaustive);
    CHECK(rep.cell(LevelKind::fuzzy, "plain")->exhaustive);
}

TEST_CASE("cross level audit on a small tent grid certifies the plain rows") {
    auto sys = tent_grid(3);
    LevelLattice lattice({Rational(1, 4), Rational(1, 2), Rational(1)});
    auto rep = cross_level_audit(sys, MonotoneUnitFunction::dyadic_staircase(), Rational(1, 2),
                                 Rational(1, 8), 12, lattice);
    REQUIRE(rep.violations.empty());
    CHECK(rep.cell(LevelKind::base, "plain")->certified);
    CHECK(rep.cell(LevelKind::hyper, "plain")->certified);
    CHECK(rep.cell(LevelKind::fuzzy, "plain")->certified);
    CHECK(rep.cell(LevelKind::base, "multi:3")->certified);
}

TEST_CASE("verdict monotonicity in the horizon on certified systems") {
    auto sys = tent_grid(4);
    auto v8 = certify_sensitivity_base(sys.map, Rational(1, 2), Rational(1, 8), 8);
    auto v16 = certify_sensitivity_base(sys.map, Rational(1, 2), Rational(1, 8), 16);
    REQUIRE(v8.certified);
    REQUIRE(v16.certified);  // witnesses carry over to any larger horizon
}
