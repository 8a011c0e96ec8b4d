#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "fuzzdyn/dynamics.hpp"
#include "fuzzdyn/fuzzifier.hpp"
#include "fuzzdyn/random_models.hpp"

using namespace fuzzdyn;

namespace {

PointId point_at(const NamedSystem& sys, const Rational& coord) {
    for (std::size_t i = 0; i < sys.coords.size(); ++i)
        if (sys.coords[i] == coord) return static_cast<PointId>(i);
    FAIL("coordinate not on grid");
    return 0;
}

FuzzySet identity_membership(const NamedSystem& sys) {
    return FuzzySet::from_membership(sys.space, sys.coords);  // A(x) = x
}

}  // namespace

TEST_CASE("identity map with identity g leaves fuzzy sets unchanged") {
    Rng rng(41);
    auto space = random_space(rng, 6);
    DynMap id = identity_map(space);
    auto g = MonotoneUnitFunction::identity();
    for (int t = 0; t < 50; ++t) {
        FuzzySet a = random_fuzzy_set(rng, space, random_lattice(rng), rng.coin());
        CHECK(fuzzify_direct(id, g, a) == a);
        CHECK(fuzzify_cutwise(id, g, a, 3) == a);
    }
}

TEST_CASE("the counterexample membership on the dyadic grid") {
    auto grid = tent_grid(4);  // step 1/16
    DynMap f = identity_map(grid.space);
    auto g = MonotoneUnitFunction::cap2x();
    FuzzySet a = identity_membership(grid);
    REQUIRE(a.is_normal());

    FuzzySet image = fuzzify_direct(f, g, a);
    // membership of the image is min(2x, 1) pointwise
    for (std::size_t i = 0; i < grid.coords.size(); ++i)
        CHECK(image.membership(static_cast<PointId>(i)) == rat_min(Rational(2 * grid.coords[i]), Rational(1)));

    Mask upper_half = 0;
    for (std::size_t i = 0; i < grid.coords.size(); ++i)
        if (grid.coords[i] >= Rational(1, 2)) upper_half |= Mask{1} << i;
    CHECK(image.cut_mask(Rational(1)) == upper_half);
    CHECK(image.cut_mask(g.eval(Rational(1))) == upper_half);

    Mask top_image = image_mask(f.table(), a.cut_mask(Rational(1)));
    CHECK(top_image == (Mask{1} << point_at(grid, Rational(1))));
    CHECK(top_image != image.cut_mask(Rational(1)));  // the quoted identity fails here
}

TEST_CASE("empty preimages get membership zero") {
    auto space = uniform_space(3);
    DynMap f(space, {1, 1, 1});  // nothing maps to 0 or 2
    auto a = FuzzySet::characteristic(space, 0b111);
    FuzzySet image = fuzzify_direct(f, MonotoneUnitFunction::identity(), a);
    CHECK(image.membership(0) == 0);
    CHECK(image.membership(1) == 1);
    CHECK(image.membership(2) == 0);
    CHECK(image == FuzzySet::characteristic(space, 0b010));
}

TEST_CASE("the empty fuzzy set is fixed by any fuzzification") {
    auto space = uniform_space(3);
    Rng rng(43);
    DynMap f = random_map(rng, space);
    for (const auto& g : {MonotoneUnitFunction::identity(), MonotoneUnitFunction::dyadic_staircase()}) {
        CHECK(fuzzify_direct(f, g, FuzzySet::empty(space)).is_empty());
        CHECK(fuzzify_cutwise(f, g, FuzzySet::empty(space), 2).is_empty());
    }
}

TEST_CASE("staircase memberships collapse to plateau heights") {
    auto space = uniform_space(2);
    DynMap id = identity_map(space);
    auto g = MonotoneUnitFunction::dyadic_staircase();
    auto a = FuzzySet::from_stack(space, {Rational(5, 8), Rational(1)}, {0b11, 0b01});
    FuzzySet image = fuzzify_direct(id, g, a);
    CHECK(image.membership(0) == 1);
    CHECK(image.membership(1) == Rational(1, 2));  // g(5/8) = 1/2
}

TEST_CASE("cutwise engine equals iterated direct engine") {
    SECTION("exhaustive over a small grid") {
        auto space = uniform_space(3);
        LevelLattice lattice({Rational(1, 4), Rational(1, 2), Rational(1)});
        Rng rng(47);
        std::vector<DynMap> maps = {identity_map(space), random_map(rng, space), random_map(rng, space)};
        std::vector<MonotoneUnitFunction> gs = {MonotoneUnitFunction::identity(),
                                                MonotoneUnitFunction::cap2x(),
                                                MonotoneUnitFunction::dyadic_staircase(),
                                                random_step_g(rng)};
        for_each_fuzzy_grid(space, lattice, false, [&](const FuzzySet& a) {
            for (const auto& f : maps)
                for (const auto& g : gs) {
                    FuzzySet cur = a;
                    for (std::size_t n = 1; n <= 6; ++n) {
                        cur = fuzzify_direct(f, g, cur);
                        REQUIRE(fuzzify_cutwise(f, g, a, n) == cur);
                    }
                }
        });
    }
    SECTION("randomized on larger spaces") {
        Rng rng(53);
        for (int t = 0; t < 800; ++t) {
            auto space = random_space(rng, 2 + rng.below(9));
            DynMap f = random_map(rng, space);
            FuzzySet a = random_fuzzy_set(rng, space, random_lattice(rng), rng.coin());
            MonotoneUnitFunction g = rng.coin() ? random_step_g(rng) : MonotoneUnitFunction::dyadic_staircase();
            const std::size_t n = 1 + rng.below(8);
            FuzzySet cur = a;
            for (std::size_t i = 0; i < n; ++i) cur = fuzzify_direct(f, g, cur);
            REQUIRE(fuzzify_cutwise(f, g, a, n) == cur);
        }
    }
}

TEST_CASE("characteristic transport through both engines") {
    for (const auto& sys : {tent_grid(3), rotation(2, 7)}) {
        for (const auto& g : {MonotoneUnitFunction::identity(), MonotoneUnitFunction::cap2x(),
                              MonotoneUnitFunction::dyadic_staircase()}) {
            for_each_compact(*sys.space, [&](Mask b) {
                FuzzySet cur = FuzzySet::characteristic(sys.space, b);
                Mask img = b;
                for (std::size_t n = 1; n <= 10; ++n) {
                    cur = fuzzify_direct(sys.map, g, cur);
                    img = image_mask(sys.map.table(), img);
                    REQUIRE(cur == FuzzySet::characteristic(sys.space, img));
                }
                REQUIRE(fuzzify_cutwise(sys.map, g, FuzzySet::characteristic(sys.space, b), 10) ==
                        FuzzySet::characteristic(sys.space, img));
            });
        }
    }
}

TEST_CASE("monotone transport preserves pointwise order") {
    Rng rng(59);
    for (int t = 0; t < 500; ++t) {
        auto space = random_space(rng, 2 + rng.below(5));
        DynMap f = random_map(rng, space);
        LevelLattice lattice = random_lattice(rng);
        FuzzySet a = random_fuzzy_set(rng, space, lattice, false);
        // b dominates a pointwise
        auto vals = a.membership_vector();
        for (auto& v : vals)
            if (rng.coin()) v = rat_min(Rational(v + Rational(1, 4)), Rational(1));
        FuzzySet b = FuzzySet::from_membership(space, vals);
        MonotoneUnitFunction g = rng.coin() ? MonotoneUnitFunction::cap2x() : random_step_g(rng);
        FuzzySet fa = fuzzify_direct(f, g, a);
        FuzzySet fb = fuzzify_direct(f, g, b);
        for (PointId x = 0; x < space->size(); ++x) REQUIRE(fa.membership(x) <= fb.membership(x));
    }
}

TEST_CASE("image cut inclusion") {
    SECTION("identity g gives equality, hence inclusion") {
        Rng rng(61);
        auto space = random_space(rng, 5);
        DynMap f = random_map(rng, space);
        auto g = MonotoneUnitFunction::identity();
        for (int t = 0; t < 50; ++t) {
            FuzzySet a = random_fuzzy_set(rng, space, random_lattice(rng), rng.coin());
            for (const auto& alpha : {Rational(0), Rational(1, 2), Rational(1)})
                CHECK(check_subset_inclusion(f, g, a, alpha));
        }
    }
    SECTION("the counterexample instance is a proper inclusion at alpha = 1") {
        auto grid = tent_grid(4);
        DynMap f = identity_map(grid.space);
        auto g = MonotoneUnitFunction::cap2x();
        FuzzySet a = identity_membership(grid);
        CHECK(check_subset_inclusion(f, g, a, Rational(1)));
        Mask left = image_mask(f.table(), a.cut_mask(Rational(1)));
        Mask right = fuzzify_direct(f, g, a).cut_mask(g.eval(Rational(1)));
        CHECK(mask_subset(left, right));
        CHECK(left != right);
    }
    SECTION("randomized inclusion sweep") {
        Rng rng(67);
        for (int t = 0; t < 2000; ++t) {
            auto space = random_space(rng, 2 + rng.below(6));
            DynMap f = random_map(rng, space);
            FuzzySet a = random_fuzzy_set(rng, space, random_lattice(rng), rng.coin());
            MonotoneUnitFunction g = rng.coin() ? random_step_g(rng) : MonotoneUnitFunction::cap2x();
            Rational alpha = rng.below(5) == 0 ? Rational(rng.range(0, 1)) : Rational(rng.range(1, 8), 8);
            REQUIRE(check_subset_inclusion(f, g, a, alpha));
        }
    }
}

TEST_CASE("top cut equality verdicts") {
    SECTION("identity g always preserves the top cut") {
        Rng rng(71);
        auto space = random_space(rng, 5);
        FuzzifiedSystem sys(random_map(rng, space), MonotoneUnitFunction::identity(), Engine::both);
        for (int t = 0; t < 30; ++t) {
            FuzzySet a = random_fuzzy_set(rng, space, random_lattice(rng), true);
            for (std::size_t n = 1; n <= 10; ++n) CHECK(check_top_cut_equality(sys, a, n).equal);
        }
    }
    SECTION("staircase g preserves the top cut") {
        Rng rng(73);
        auto space = random_space(rng, 5);
        FuzzifiedSystem sys(random_map(rng, space), MonotoneUnitFunction::dyadic_staircase(), Engine::both);
        for (int t = 0; t < 30; ++t) {
            FuzzySet a = random_fuzzy_set(rng, space, random_lattice(rng), true);
            for (std::size_t n = 1; n <= 10; ++n) CHECK(check_top_cut_equality(sys, a, n).equal);
        }
    }
    SECTION("cap2x on the counterexample yields a proper superset with a witness") {
        auto grid = tent_grid(4);
        FuzzifiedSystem sys(identity_map(grid.space), MonotoneUnitFunction::cap2x(), Engine::both);
        auto verdict = check_top_cut_equality(sys, identity_membership(grid), 1);
        REQUIRE_FALSE(verdict.equal);
        REQUIRE(verdict.witness.has_value());
        CHECK(mask_subset(verdict.expected, verdict.actual));
        CHECK(mask_contains(verdict.actual, *verdict.witness));
        CHECK_FALSE(mask_contains(verdict.expected, *verdict.witness));
    }
    SECTION("non-normal input is rejected") {
        auto space = uniform_space(2);
        FuzzifiedSystem sys(identity_map(space), MonotoneUnitFunction::identity());
        auto a = FuzzySet::from_stack(space, {Rational(1, 2)}, {0b11});
        CHECK_THROWS_AS(check_top_cut_equality(sys, a, 1), NotNormal);
    }
}

TEST_CASE("engine dispatch and the loud mismatch guard") {
    auto space = uniform_space(3);
    Rng rng(79);
    DynMap f = random_map(rng, space);
    FuzzySet a = random_fuzzy_set(rng, space, LevelLattice({Rational(1, 2), Rational(1)}), true);
    FuzzifiedSystem direct(f, MonotoneUnitFunction::dyadic_staircase(), Engine::direct);
    FuzzifiedSystem cutwise(f, MonotoneUnitFunction::dyadic_staircase(), Engine::cutwise);
    FuzzifiedSystem both(f, MonotoneUnitFunction::dyadic_staircase(), Engine::both);
    for (std::size_t n = 0; n <= 5; ++n) {
        FuzzySet d = direct.iterate(a, n);
        CHECK(d == cutwise.iterate(a, n));
        CHECK(d == both.iterate(a, n));  // would throw EngineMismatch on disagreement
    }
    CHECK_THROWS_AS(fuzzify_cutwise(f, MonotoneUnitFunction::identity(), a, 0), Error);
}
