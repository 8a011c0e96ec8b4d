#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fuzzdyn/errors.hpp"
#include "fuzzdyn/rational.hpp"

namespace fuzzdyn {

// Nondecreasing right-continuous g: [0,1] -> [0,1] with g(0)=0, g(1)=1,
// together with exact evaluation of g and of xi_g(x) = min g^{-1}([x,1]).
//
// Built-in families:
//   identity          g(x) = x
//   cap2x             g(x) = 2x on [0,1/2], 1 on [1/2,1]
//   dyadic_staircase  g(0)=0, g(x) = 1-1/2^n on [1-1/2^n, 1-1/2^{n+1}), g(1)=1
// The staircase has infinitely many pieces; the piece index is located by
// exact rational comparison, so no truncation is ever involved.
class MonotoneUnitFunction {
public:
    struct Identity {};
    struct Cap2x {};
    struct DyadicStaircase {};
    // value values[j] on [breaks[j], breaks[j+1]), breaks[0]=0, breaks.back()=1, g(1)=1
    struct Step {
        std::vector<Rational> breaks;
        std::vector<Rational> values;
    };
    // continuous piecewise-linear through (x_i, y_i)
    struct Linear {
        std::vector<std::pair<Rational, Rational>> knots;
    };

    static MonotoneUnitFunction identity() { return MonotoneUnitFunction(Identity{}, "identity"); }
    static MonotoneUnitFunction cap2x() { return MonotoneUnitFunction(Cap2x{}, "cap2x"); }
    static MonotoneUnitFunction dyadic_staircase() {
        return MonotoneUnitFunction(DyadicStaircase{}, "dyadic_staircase");
    }

    static MonotoneUnitFunction step(std::vector<Rational> breaks, std::vector<Rational> values) {
        Step s{std::move(breaks), std::move(values)};
        if (s.breaks.size() < 2 || s.values.size() + 1 != s.breaks.size())
            throw InvalidUnitFunction("step: need m+1 breakpoints and m values");
        if (s.breaks.front() != 0 || s.breaks.back() != 1)
            throw InvalidUnitFunction("step: breakpoints must start at 0 and end at 1");
        for (std::size_t i = 0; i + 1 < s.breaks.size(); ++i)
            if (!(s.breaks[i] < s.breaks[i + 1]))
                throw InvalidUnitFunction("step: breakpoints must be strictly increasing");
        if (s.values.front() != 0) throw InvalidUnitFunction("step: g(0) must be 0");
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            if (!in_unit_interval(s.values[i])) throw InvalidUnitFunction("step: values must lie in [0,1]");
            if (i > 0 && s.values[i] < s.values[i - 1])
                throw InvalidUnitFunction("step: values must be nondecreasing");
        }
        return MonotoneUnitFunction(std::move(s), "step");
    }

    static MonotoneUnitFunction piecewise_linear(std::vector<std::pair<Rational, Rational>> knots) {
        Linear l{std::move(knots)};
        if (l.knots.size() < 2) throw InvalidUnitFunction("linear: need at least two knots");
        if (l.knots.front().first != 0 || l.knots.front().second != 0)
            throw InvalidUnitFunction("linear: first knot must be (0,0)");
        if (l.knots.back().first != 1 || l.knots.back().second != 1)
            throw InvalidUnitFunction("linear: last knot must be (1,1)");
        for (std::size_t i = 0; i + 1 < l.knots.size(); ++i) {
            if (!(l.knots[i].first < l.knots[i + 1].first))
                throw InvalidUnitFunction("linear: knot abscissae must be strictly increasing");
            if (l.knots[i + 1].second < l.knots[i].second)
                throw InvalidUnitFunction("linear: knot ordinates must be nondecreasing");
            if (!in_unit_interval(l.knots[i].second))
                throw InvalidUnitFunction("linear: knot ordinates must lie in [0,1]");
        }
        return MonotoneUnitFunction(std::move(l), "piecewise_linear");
    }

    const std::string& name() const { return name_; }

    Rational operator()(const Rational& x) const { return eval(x); }

    Rational eval(const Rational& x) const {
        if (!in_unit_interval(x)) throw DomainError("g is defined on [0,1], got " + to_string(x));
        return std::visit([&](const auto& s) { return eval_impl(s, x); }, spec_);
    }

    // xi_g(x) = min{t : g(t) >= x}; exists by right-continuity, positive for x > 0.
    Rational xi(const Rational& x) const {
        if (!in_unit_interval(x)) throw DomainError("xi_g is defined on [0,1], got " + to_string(x));
        return std::visit([&](const auto& s) { return xi_impl(s, x); }, spec_);
    }

    Rational eval_iter(const Rational& x, std::size_t n) const {
        Rational v = x;
        for (std::size_t i = 0; i < n; ++i) v = eval(v);
        return v;
    }

    struct XiIterResult {
        Rational value;                 // xi_g^n(x)
        std::optional<std::size_t> fixation;  // least m <= n with xi^{m+1}(x) = xi^m(x)
    };

    XiIterResult xi_iter(const Rational& x, std::size_t n) const {
        Rational v = x;
        std::optional<std::size_t> fix;
        for (std::size_t m = 0; m <= n; ++m) {
            Rational next = xi(v);
            if (next == v) {
                fix = m;
                break;
            }
            if (m < n) v = next;
        }
        if (fix) return {v, fix};  // once fixed the value never moves again
        return {v, std::nullopt};
    }

    // True iff g(t) = 1 only at t = 1. Decidable structurally for every
    // supported form; gates the top-cut preservation checks.
    bool one_preimage_is_singleton() const {
        return std::visit(
            [](const auto& s) -> bool {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, Identity> || std::is_same_v<T, DyadicStaircase>) {
                    return true;
                } else if constexpr (std::is_same_v<T, Cap2x>) {
                    return false;
                } else if constexpr (std::is_same_v<T, Step>) {
                    for (const auto& v : s.values)
                        if (v == 1) return false;
                    return true;
                } else {
                    for (std::size_t i = 0; i + 1 < s.knots.size(); ++i)
                        if (s.knots[i].second == 1) return false;
                    return true;
                }
            },
            spec_);
    }

private:
    using Spec = std::variant<Identity, Cap2x, DyadicStaircase, Step, Linear>;

    MonotoneUnitFunction(Spec spec, std::string name) : spec_(std::move(spec)), name_(std::move(name)) {}

    static Rational eval_impl(const Identity&, const Rational& x) { return x; }

    static Rational eval_impl(const Cap2x&, const Rational& x) {
        return x <= Rational(1, 2) ? Rational(2 * x) : Rational(1);
    }

    static Rational eval_impl(const DyadicStaircase&, const Rational& x) {
        if (x == 0) return 0;
        if (x == 1) return 1;
        // find n >= 0 with 1 - 1/2^n <= x < 1 - 1/2^{n+1}
        Rational half(1, 2);       // 1/2^{n+1}
        Rational lower = 0;        // 1 - 1/2^n
        while (!(x < 1 - half)) {  // terminates once 2^{n+1} > 1/(1-x)
            lower = 1 - half;
            half /= 2;
        }
        return lower;
    }

    static Rational eval_impl(const Step& s, const Rational& x) {
        if (x == 1) return 1;
        for (std::size_t j = 0; j + 1 < s.breaks.size(); ++j)
            if (s.breaks[j] <= x && x < s.breaks[j + 1]) return s.values[j];
        throw DomainError("step: no piece for " + to_string(x));
    }

    static Rational eval_impl(const Linear& l, const Rational& x) {
        for (std::size_t i = 0; i + 1 < l.knots.size(); ++i) {
            const auto& [x0, y0] = l.knots[i];
            const auto& [x1, y1] = l.knots[i + 1];
            if (x0 <= x && x <= x1) {
                if (x == x0) return y0;
                return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
            }
        }
        throw DomainError("linear: no segment for " + to_string(x));
    }

    static Rational xi_impl(const Identity&, const Rational& x) { return x; }

    static Rational xi_impl(const Cap2x&, const Rational& x) {
        return x == 0 ? Rational(0) : Rational(x / 2);
    }

    static Rational xi_impl(const DyadicStaircase&, const Rational& x) {
        if (x == 0) return 0;
        if (x == 1) return 1;
        // find n >= 0 with 1 - 1/2^n < x <= 1 - 1/2^{n+1}; xi = 1 - 1/2^{n+1}
        Rational half(1, 2);  // 1/2^{n+1}
        while (!(x <= 1 - half)) half /= 2;
        return 1 - half;
    }

    static Rational xi_impl(const Step& s, const Rational& x) {
        for (std::size_t j = 0; j < s.values.size(); ++j)
            if (s.values[j] >= x) return s.breaks[j];  // min attained at the left endpoint
        return 1;
    }

    static Rational xi_impl(const Linear& l, const Rational& x) {
        for (std::size_t i = 0; i + 1 < l.knots.size(); ++i) {
            const auto& [x0, y0] = l.knots[i];
            const auto& [x1, y1] = l.knots[i + 1];
            if (y1 >= x) {
                if (y0 >= x) return x0;
                return x0 + (x - y0) * (x1 - x0) / (y1 - y0);  // y1 > y0 here
            }
        }
        return 1;
    }

    Spec spec_;
    std::string name_;
};

inline Rational eval_g(const MonotoneUnitFunction& g, const Rational& x) { return g.eval(x); }
inline Rational xi_g(const MonotoneUnitFunction& g, const Rational& x) { return g.xi(x); }

// Probe-based validation of the D_m(I) axioms and the adjunction
// g(t) >= x  <=>  t >= xi_g(x). Structural constructors already enforce the
// axioms; this exists to double-check user-supplied specs and as a test oracle.
struct UnitFunctionProbeReport {
    std::size_t probes = 0;
    bool endpoints_ok = false;
    bool nondecreasing = false;
    bool adjunction_ok = false;
    bool ok() const { return endpoints_ok && nondecreasing && adjunction_ok; }
};

inline UnitFunctionProbeReport probe_unit_function(const MonotoneUnitFunction& g, std::size_t den = 256) {
    UnitFunctionProbeReport rep;
    rep.probes = den + 1;
    rep.endpoints_ok = g.eval(0) == 0 && g.eval(1) == 1;
    rep.nondecreasing = true;
    Rational prev = g.eval(0);
    for (std::size_t i = 1; i <= den; ++i) {
        Rational v = g.eval(Rational(static_cast<long long>(i), static_cast<long long>(den)));
        if (v < prev) rep.nondecreasing = false;
        prev = v;
    }
    rep.adjunction_ok = true;
    for (std::size_t i = 0; i <= den && rep.adjunction_ok; ++i) {
        Rational x(static_cast<long long>(i), static_cast<long long>(den));
        Rational xi = g.xi(x);
        for (std::size_t j = 0; j <= den; ++j) {
            Rational t(static_cast<long long>(j), static_cast<long long>(den));
            if ((g.eval(t) >= x) != (t >= xi)) {
                rep.adjunction_ok = false;
                break;
            }
        }
    }
    return rep;
}

struct Theorem63Classification {
    bool applicable = false;
    Rational z;
    std::size_t m = 0;  // least m with xi^{m+1}(z) = xi^m(z)
};

// First probe value z with xi_g(z) != z whose xi-iterates stabilize within
// max_m steps. Such a (z, m) is exactly what the non-transitivity
// construction requires.
inline Theorem63Classification classify_for_theorem63(const MonotoneUnitFunction& g,
                                                      const std::vector<Rational>& probe,
                                                      std::size_t max_m) {
    for (const auto& z : probe) {
        if (!in_unit_interval(z) || z == 0) continue;
        if (g.xi(z) == z) continue;
        auto it = g.xi_iter(z, max_m);
        if (it.fixation) return {true, z, *it.fixation};
    }
    return {};
}

}  // namespace fuzzdyn
