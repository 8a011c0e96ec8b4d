#pragma once

#include <string>
#include <vector>

#include "fuzzdyn/errors.hpp"

namespace fuzzdyn {

// Subset of the time window {0,...,N}. Stands in for the paper-side subsets
// of Z+; all family judgements below are horizon-truncated and say nothing
// about asymptotic membership.
class TimeWindowSet {
public:
    explicit TimeWindowSet(std::size_t horizon) : horizon_(horizon), member_(horizon + 1, false) {}

    static TimeWindowSet of(std::size_t horizon, const std::vector<std::size_t>& times) {
        TimeWindowSet w(horizon);
        for (auto t : times) w.add(t);
        return w;
    }

    static TimeWindowSet all(std::size_t horizon) {
        TimeWindowSet w(horizon);
        w.member_.assign(horizon + 1, true);
        return w;
    }

    std::size_t horizon() const { return horizon_; }

    void add(std::size_t n) {
        if (n > horizon_) throw Error("time " + std::to_string(n) + " beyond horizon");
        member_[n] = true;
    }

    bool contains(std::size_t n) const { return n <= horizon_ && member_[n]; }

    bool empty() const {
        for (bool b : member_)
            if (b) return false;
        return true;
    }

    std::size_t count() const {
        std::size_t c = 0;
        for (bool b : member_) c += b ? 1 : 0;
        return c;
    }

    std::vector<std::size_t> members() const {
        std::vector<std::size_t> out;
        for (std::size_t n = 0; n <= horizon_; ++n)
            if (member_[n]) out.push_back(n);
        return out;
    }

    TimeWindowSet intersect(const TimeWindowSet& other) const {
        if (horizon_ != other.horizon_) throw Error("window horizons differ");
        TimeWindowSet w(horizon_);
        for (std::size_t n = 0; n <= horizon_; ++n) w.member_[n] = member_[n] && other.member_[n];
        return w;
    }

    TimeWindowSet unite(const TimeWindowSet& other) const {
        if (horizon_ != other.horizon_) throw Error("window horizons differ");
        TimeWindowSet w(horizon_);
        for (std::size_t n = 0; n <= horizon_; ++n) w.member_[n] = member_[n] || other.member_[n];
        return w;
    }

    TimeWindowSet complement() const {
        TimeWindowSet w(horizon_);
        for (std::size_t n = 0; n <= horizon_; ++n) w.member_[n] = !member_[n];
        return w;
    }

    friend bool operator==(const TimeWindowSet& a, const TimeWindowSet& b) {
        return a.horizon_ == b.horizon_ && a.member_ == b.member_;
    }

private:
    std::size_t horizon_;
    std::vector<bool> member_;
};

// Window-decidable stand-ins for the four Furstenberg families the tool
// works with. Parameters make each judgement a finite check:
//   infinite(L)  - meets every length-L block inside [0,N]
//   cofinite(T)  - contains all of [max(0,N-T), N]
//   syndetic(G)  - no gap longer than G, counting the window edges
//   full         - equals [0,N]
struct FamilyPredicate {
    enum class Kind { infinite, cofinite, syndetic, full };
    Kind kind = Kind::infinite;
    std::size_t param = 1;  // L, T or G; >= 1; unused for full

    static FamilyPredicate infinite(std::size_t block_len) { return {Kind::infinite, block_len}; }
    static FamilyPredicate cofinite(std::size_t tail_len) { return {Kind::cofinite, tail_len}; }
    static FamilyPredicate syndetic(std::size_t gap) { return {Kind::syndetic, gap}; }
    static FamilyPredicate full() { return {Kind::full, 0}; }

    std::string to_string() const {
        switch (kind) {
            case Kind::infinite: return "infinite:" + std::to_string(param);
            case Kind::cofinite: return "cofinite:" + std::to_string(param);
            case Kind::syndetic: return "syndetic:" + std::to_string(param);
            default: return "full";
        }
    }
};

// The empty set belongs to no proper family, so it fails every kind.
inline bool family_classify(const TimeWindowSet& ts, const FamilyPredicate& fam) {
    if (ts.empty()) return false;
    const std::size_t N = ts.horizon();
    switch (fam.kind) {
        case FamilyPredicate::Kind::infinite: {
            if (fam.param == 0) throw Error("infinite family needs block length >= 1");
            if (fam.param > N + 1) return true;  // no full block fits; nothing to refute
            for (std::size_t s = 0; s + fam.param <= N + 1; ++s) {
                bool hit = false;
                for (std::size_t i = 0; i < fam.param && !hit; ++i) hit = ts.contains(s + i);
                if (!hit) return false;
            }
            return true;
        }
        case FamilyPredicate::Kind::cofinite: {
            if (fam.param == 0) throw Error("cofinite family needs tail length >= 1");
            const std::size_t start = fam.param > N ? 0 : N - fam.param;
            for (std::size_t n = start; n <= N; ++n)
                if (!ts.contains(n)) return false;
            return true;
        }
        case FamilyPredicate::Kind::syndetic: {
            if (fam.param == 0) throw Error("syndetic family needs gap bound >= 1");
            std::size_t prev = 0;
            bool seen = false;
            for (std::size_t n = 0; n <= N; ++n) {
                if (!ts.contains(n)) continue;
                const std::size_t gap = seen ? n - prev : n;  // leading gap counts
                if (gap > fam.param) return false;
                prev = n;
                seen = true;
            }
            return N - prev <= fam.param;  // trailing gap counts too
        }
        default:
            return ts.count() == N + 1;
    }
}

// Window realization of the dual family kF = {F : complement(F) not in F}.
inline bool family_dual_classify(const TimeWindowSet& ts, const FamilyPredicate& fam) {
    return !family_classify(ts.complement(), fam);
}

}  // namespace fuzzdyn
