#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fuzzdyn/scenario.hpp"
#include "fuzzdyn/version.hpp"

namespace fuzzdyn {

// Registry of claim anchors. Every check record cites exactly one entry, and
// emit-time validation rejects anything outside the manifest, so reports can
// be diffed and filtered by claim across versions.
inline const std::set<std::string>& anchor_registry() {
    static const std::set<std::string> anchors = {
        "metric-axioms-ground",
        "hausdorff-metric-axioms",
        "hausdorff-empty-extension",
        "levelwise-metric-axioms",
        "characteristic-embedding-isometry",
        "monotone-containment-formula",
        "union-closeness-bound",
        "cut-stack-semantics",
        "gcut-xi-reduction",
        "cutwise-direct-engine-agreement",
        "characteristic-transport",
        "image-cut-inclusion",
        "top-cut-preservation",
        "top-cut-counterexample",
        "unit-function-axioms",
        "xi-adjunction",
        "xi-fixation-values",
        "xi-fixation-classification",
        "orbit-iteration",
        "sensitivity-certificate",
        "separation-time-window",
        "family-window-semantics",
        "dual-family-window",
        "filter-intersection-stability",
        "multi-sensitivity-common-time",
        "cross-level-implications",
        "decomposition-approximation",
        "witness-fattening",
        "return-window-computation",
        "transitivity-window",
        "weak-mixing-window",
        "fuzzy-transitivity-blocking-pair",
        "separation-construction",
        "separation-persistence",
        "scenario-plumbing",
    };
    return anchors;
}

struct CheckRecord {
    std::string name;
    std::string anchor;
    std::string status;  // pass | fail | refuted_at_horizon | skipped
    Json witness = Json::object();
    std::optional<double> timing_ms;
};

struct Report {
    std::string suite;
    Json scenario_echo;
    std::vector<CheckRecord> checks;

    void add(CheckRecord rec) {
        if (anchor_registry().find(rec.anchor) == anchor_registry().end())
            throw Error("unknown anchor '" + rec.anchor + "' in check '" + rec.name + "'");
        if (rec.status != "pass" && rec.status != "fail" && rec.status != "refuted_at_horizon" &&
            rec.status != "skipped")
            throw Error("invalid status '" + rec.status + "' in check '" + rec.name + "'");
        checks.push_back(std::move(rec));
    }

    bool has_failure() const {
        for (const auto& c : checks)
            if (c.status == "fail") return true;
        return false;
    }

    // 0 unless a check genuinely failed; a horizon refutation or a skip is an
    // expected outcome, not a regression
    int exit_code() const { return has_failure() ? 1 : 0; }
};

inline Json report_to_json(const Report& rep, bool with_timing = false) {
    Json j;
    j["schema"] = kSchema;
    j["version"] = kVersion;
    j["suite"] = rep.suite;
    j["scenario"] = rep.scenario_echo;
    Json checks = Json::array();
    for (const auto& c : rep.checks) {
        Json cj;
        cj["name"] = c.name;
        cj["anchor"] = c.anchor;
        cj["status"] = c.status;
        cj["witness"] = c.witness;
        if (with_timing && c.timing_ms)
            cj["timing_ms"] = *c.timing_ms;
        else
            cj["timing_ms"] = nullptr;
        checks.push_back(std::move(cj));
    }
    j["checks"] = std::move(checks);
    return j;
}

inline std::string emit_report_json(const Report& rep, bool with_timing = false) {
    return report_to_json(rep, with_timing).dump(2) + "\n";
}

inline std::string emit_report_text(const Report& rep) {
    std::string out;
    out += "suite " + rep.suite + " (" + rep.scenario_echo.value("name", std::string("?")) + ")\n";
    std::size_t width = 4;
    for (const auto& c : rep.checks) width = std::max(width, c.name.size());
    for (const auto& c : rep.checks) {
        out += c.name;
        out.append(width - c.name.size() + 2, ' ');
        out += c.status;
        out.append(c.status.size() >= 19 ? 1 : 19 - c.status.size() + 1, ' ');
        out += c.anchor + "\n";
    }
    return out;
}

}  // namespace fuzzdyn
