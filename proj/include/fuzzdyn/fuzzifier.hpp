#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fuzzdyn/dynamics.hpp"
#include "fuzzdyn/fuzzy_set.hpp"
#include "fuzzdyn/unit_function.hpp"

namespace fuzzdyn {

// (f~_g A)(x) = max{g(A(y)) : f(y) = x}, with max over an empty preimage
// equal to 0. Zadeh's extension is the identity-g case.
inline FuzzySet fuzzify_direct(const DynMap& f, const MonotoneUnitFunction& g, const FuzzySet& a) {
    if (&f.space() != &a.space()) throw SpaceMismatch();
    const std::size_t n = f.space().size();
    std::vector<Rational> out(n, Rational(0));
    const auto values = a.membership_vector();
    for (PointId y = 0; y < n; ++y) {
        Rational gv = g.eval(values[y]);
        PointId x = f.apply(y);
        if (gv > out[x]) out[x] = gv;
    }
    return FuzzySet::from_membership(a.space_handle(), out);
}

// n-th iterate of the g-fuzzification built directly from the cut identity
//   [(f~_g)^n A]_alpha = f^n([A]_{xi_g^n(alpha)}).
// Via the adjunction g(t) >= x <=> t >= xi_g(x), the identity says the cut
// at alpha is f^n(C_j) for the smallest j with alpha <= g^n(a_j), so the
// result's stack is (g^n(a_j), f^n(C_j)) with zero levels dropped.
// Independent of fuzzify_direct; their agreement is the executable content
// of the cut-propagation identity, enforced by the test suite.
inline FuzzySet fuzzify_cutwise(const DynMap& f, const MonotoneUnitFunction& g, const FuzzySet& a,
                                std::size_t n) {
    if (&f.space() != &a.space()) throw SpaceMismatch();
    if (n == 0) throw Error("fuzzify_cutwise requires n >= 1");
    std::vector<Rational> levels;
    std::vector<Mask> cuts;
    for (std::size_t j = 0; j < a.level_count(); ++j) {
        Rational t = g.eval_iter(a.levels()[j], n);
        if (t == 0) continue;
        Mask image = a.cuts()[j];
        for (std::size_t i = 0; i < n; ++i) image = image_mask(f.table(), image);
        if (!levels.empty() && levels.back() == t) continue;  // tie: keep the larger cut
        levels.push_back(std::move(t));
        cuts.push_back(image);
    }
    return FuzzySet::from_stack(a.space_handle(), std::move(levels), std::move(cuts));
}

enum class Engine { direct, cutwise, both };

inline const char* engine_name(Engine e) {
    switch (e) {
        case Engine::direct: return "direct";
        case Engine::cutwise: return "cutwise";
        default: return "both";
    }
}

// A dynamical system together with a g-fuzzification engine choice.
// Engine::both evaluates the two routes and fails loudly on disagreement.
class FuzzifiedSystem {
public:
    FuzzifiedSystem(DynMap base, MonotoneUnitFunction g, Engine engine = Engine::direct)
        : base_(std::move(base)), g_(std::move(g)), engine_(engine) {}

    const DynMap& base() const { return base_; }
    const MonotoneUnitFunction& g() const { return g_; }
    Engine engine() const { return engine_; }

    FuzzySet apply(const FuzzySet& a) const { return iterate(a, 1); }

    FuzzySet iterate(const FuzzySet& a, std::size_t n) const {
        if (n == 0) return a;
        switch (engine_) {
            case Engine::direct: return direct_iter(a, n);
            case Engine::cutwise: return fuzzify_cutwise(base_, g_, a, n);
            default: {
                FuzzySet d = direct_iter(a, n);
                FuzzySet c = fuzzify_cutwise(base_, g_, a, n);
                if (!(d == c))
                    throw EngineMismatch("engines disagree at n=" + std::to_string(n) +
                                         ": direct=" + d.to_string() + " cutwise=" + c.to_string());
                return d;
            }
        }
    }

private:
    FuzzySet direct_iter(const FuzzySet& a, std::size_t n) const {
        FuzzySet cur = a;
        for (std::size_t i = 0; i < n; ++i) cur = fuzzify_direct(base_, g_, cur);
        return cur;
    }

    DynMap base_;
    MonotoneUnitFunction g_;
    Engine engine_;
};

// f([A]_alpha) subset of [f~_g(A)]_{g(alpha)}. At alpha = 0 the left cut is
// read as supp(A) and the right side, when g(alpha) = 0, as the whole space;
// with that convention the inclusion is trivially true there.
inline bool check_subset_inclusion(const DynMap& f, const MonotoneUnitFunction& g, const FuzzySet& a,
                                   const Rational& alpha) {
    if (!in_unit_interval(alpha)) throw AlphaOutOfRange("alpha must lie in [0,1]");
    const Mask left_cut = alpha == 0 ? a.support() : a.cut_mask(alpha);
    const Mask left = image_mask(f.table(), left_cut);
    const Rational g_alpha = g.eval(alpha);
    if (g_alpha == 0) return true;
    const Mask right = fuzzify_direct(f, g, a).cut_mask(g_alpha);
    return mask_subset(left, right);
}

struct TopCutVerdict {
    bool equal = false;
    Mask expected = 0;  // f^n([A]_1)
    Mask actual = 0;    // [(f~_g)^n(A)]_1
    std::optional<PointId> witness;  // a point of actual \ expected
};

// Compares f^n([A]_1) with the top cut of the n-th fuzzified iterate.
// Equality is guaranteed when g^{-1}(1) = {1}; otherwise the top cut may be
// a proper superset, and the witness records one extra point.
inline TopCutVerdict check_top_cut_equality(const FuzzifiedSystem& sys, const FuzzySet& a,
                                            std::size_t n) {
    if (!a.is_normal()) throw NotNormal();
    TopCutVerdict v;
    v.expected = image_mask_iter(sys.base(), a.cut_mask(Rational(1)), n);
    v.actual = sys.iterate(a, n).cut_mask(Rational(1));
    v.equal = v.expected == v.actual;
    if (!v.equal) {
        Mask extra = v.actual & ~v.expected;
        if (extra != 0) v.witness = static_cast<PointId>(std::countr_zero(extra));
    }
    return v;
}

}  // namespace fuzzdyn
