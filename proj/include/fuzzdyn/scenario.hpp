#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fuzzdyn/dynamics.hpp"
#include "fuzzdyn/fuzzifier.hpp"
#include "fuzzdyn/fuzzy_set.hpp"
#include "fuzzdyn/unit_function.hpp"
#include "fuzzdyn/version.hpp"

namespace fuzzdyn {

using Json = nlohmann::ordered_json;

inline Json rational_json(const Rational& r) { return Json(to_string(r)); }

inline Rational rational_from_json(const Json& j, const std::string& field) {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_string()) {
        auto r = try_parse_rational(j.get<std::string>());
        if (r) return *r;
    }
    throw ScenarioInvalid(field, "expected a rational as \"p/q\" string");
}

inline Json mask_json(Mask m) {
    Json out = Json::array();
    for_each_point(m, [&](PointId i) { out.push_back(i); });
    return out;
}

inline Json fuzzy_set_json(const FuzzySet& f) {
    Json levels = Json::array();
    Json cuts = Json::array();
    for (std::size_t i = 0; i < f.level_count(); ++i) {
        levels.push_back(rational_json(f.levels()[i]));
        cuts.push_back(mask_json(f.cuts()[i]));
    }
    return Json{{"levels", levels}, {"cuts", cuts}};
}

struct FamilyParams {
    std::size_t infinite_block = 5;  // L
    std::size_t cofinite_tail = 2;   // T
    std::size_t syndetic_gap = 3;    // G
    std::size_t multi_k = 3;         // k
};

struct Caps {
    std::size_t hyper_points = default_hyperspace_cap();
    std::size_t grid = default_grid_cap();
};

struct Scenario {
    std::string name;
    NamedSystem system = identity_system(1);
    MonotoneUnitFunction g = MonotoneUnitFunction::identity();
    LevelLattice lattice{{Rational(1)}};
    std::size_t horizon = 15;
    Rational epsilon{1, 2};
    Rational delta{1, 16};
    Rational basis_width{1, 4};
    FamilyParams families;
    Engine engine = Engine::direct;
    Caps caps;
    std::uint64_t seed = 0x66757a7aULL;

    FuzzifiedSystem fuzzified() const { return FuzzifiedSystem(system.map, g, engine); }

    // canonical resolved form, echoed verbatim into reports
    Json echo() const {
        Json j;
        j["schema"] = kSchema;
        j["name"] = name;
        j["system"] = system.name;
        j["points"] = system.space->size();
        j["g"] = g.name();
        Json lat = Json::array();
        for (const auto& v : lattice.values()) lat.push_back(rational_json(v));
        j["lattice"] = lat;
        j["horizon"] = horizon;
        j["epsilon"] = rational_json(epsilon);
        j["delta"] = rational_json(delta);
        j["basis_width"] = rational_json(basis_width);
        j["families"] = Json{{"infinite", families.infinite_block},
                             {"cofinite", families.cofinite_tail},
                             {"syndetic", families.syndetic_gap},
                             {"multi", families.multi_k}};
        j["engine"] = engine_name(engine);
        j["seed"] = seed;
        return j;
    }
};

namespace detail {

inline NamedSystem parse_space(const Json& j) {
    if (!j.is_object()) throw ScenarioInvalid("space", "expected an object");
    if (j.contains("family")) {
        const std::string fam = j.at("family").get<std::string>();
        if (fam == "tent_grid") {
            if (!j.contains("k")) throw ScenarioInvalid("space.k", "tent_grid needs k");
            return tent_grid(j.at("k").get<unsigned>());
        }
        if (fam == "rotation") {
            if (!j.contains("p") || !j.contains("q")) throw ScenarioInvalid("space", "rotation needs p and q");
            return rotation(j.at("p").get<unsigned>(), j.at("q").get<unsigned>());
        }
        if (fam == "identity") {
            if (!j.contains("n")) throw ScenarioInvalid("space.n", "identity needs n");
            return identity_system(j.at("n").get<std::size_t>());
        }
        throw ScenarioInvalid("space.family", "unknown family '" + fam + "'");
    }
    if (j.contains("dist")) {
        std::vector<std::vector<Rational>> matrix;
        for (const auto& row : j.at("dist")) {
            std::vector<Rational> r;
            for (const auto& cell : row) r.push_back(rational_from_json(cell, "space.dist"));
            matrix.push_back(std::move(r));
        }
        std::vector<PointId> table;
        if (!j.contains("map")) throw ScenarioInvalid("space.map", "explicit space needs a map table");
        for (const auto& v : j.at("map")) table.push_back(v.get<PointId>());
        std::vector<std::string> labels;
        if (j.contains("labels"))
            for (const auto& l : j.at("labels")) labels.push_back(l.get<std::string>());
        return explicit_system(std::move(matrix), std::move(table), std::move(labels));
    }
    throw ScenarioInvalid("space", "need either a family or an explicit dist matrix");
}

inline void apply_map_override(NamedSystem& sys, const Json& j) {
    if (j.is_object() && j.contains("family")) {
        const std::string fam = j.at("family").get<std::string>();
        if (fam == "identity") {
            sys.map = identity_map(sys.space);
            sys.name += "+identity-map";
            return;
        }
        throw ScenarioInvalid("map.family", "unknown map family '" + fam + "'");
    }
    if (j.is_object() && j.contains("table")) {
        std::vector<PointId> table;
        for (const auto& v : j.at("table")) table.push_back(v.get<PointId>());
        sys.map = DynMap(sys.space, std::move(table));
        sys.name += "+table-map";
        return;
    }
    throw ScenarioInvalid("map", "expected {\"family\":...} or {\"table\":[...]}");
}

inline MonotoneUnitFunction parse_g(const Json& j) {
    if (j.is_string()) {
        const std::string name = j.get<std::string>();
        if (name == "identity") return MonotoneUnitFunction::identity();
        if (name == "cap2x") return MonotoneUnitFunction::cap2x();
        if (name == "dyadic_staircase") return MonotoneUnitFunction::dyadic_staircase();
        throw ScenarioInvalid("g", "unknown built-in '" + name + "'");
    }
    if (j.is_object() && j.contains("step")) {
        const auto& s = j.at("step");
        std::vector<Rational> breaks, values;
        for (const auto& b : s.at("breakpoints")) breaks.push_back(rational_from_json(b, "g.step.breakpoints"));
        for (const auto& v : s.at("values")) values.push_back(rational_from_json(v, "g.step.values"));
        return MonotoneUnitFunction::step(std::move(breaks), std::move(values));
    }
    if (j.is_object() && j.contains("linear")) {
        std::vector<std::pair<Rational, Rational>> knots;
        for (const auto& k : j.at("linear").at("knots")) {
            if (!k.is_array() || k.size() != 2) throw ScenarioInvalid("g.linear.knots", "knots are [x, y] pairs");
            knots.emplace_back(rational_from_json(k[0], "g.linear.knots"),
                               rational_from_json(k[1], "g.linear.knots"));
        }
        return MonotoneUnitFunction::piecewise_linear(std::move(knots));
    }
    throw ScenarioInvalid("g", "expected a built-in name or a step/linear spec");
}

}  // namespace detail

inline Scenario parse_scenario(const Json& j) {
    if (!j.is_object()) throw ScenarioInvalid("$", "scenario must be a JSON object");
    if (j.contains("schema") && j.at("schema").get<std::string>() != kSchema)
        throw ScenarioInvalid("schema", "expected \"" + std::string(kSchema) + "\"");
    if (!j.contains("space")) throw ScenarioInvalid("space", "missing");

    Scenario s;
    s.system = detail::parse_space(j.at("space"));
    if (j.contains("map")) detail::apply_map_override(s.system, j.at("map"));
    s.name = j.contains("name") ? j.at("name").get<std::string>() : s.system.name;
    if (j.contains("g")) s.g = detail::parse_g(j.at("g"));
    if (j.contains("lattice")) {
        std::vector<Rational> levels;
        for (const auto& v : j.at("lattice")) levels.push_back(rational_from_json(v, "lattice"));
        s.lattice = LevelLattice(std::move(levels));
    } else {
        s.lattice = LevelLattice({Rational(1, 4), Rational(1, 2), Rational(1)});
    }
    if (j.contains("horizon")) s.horizon = j.at("horizon").get<std::size_t>();
    if (j.contains("epsilon")) s.epsilon = rational_from_json(j.at("epsilon"), "epsilon");
    if (j.contains("delta")) s.delta = rational_from_json(j.at("delta"), "delta");
    if (s.epsilon <= 0) throw ScenarioInvalid("epsilon", "must be positive");
    if (s.delta <= 0) throw ScenarioInvalid("delta", "must be positive");
    if (j.contains("basis_width")) s.basis_width = rational_from_json(j.at("basis_width"), "basis_width");
    if (j.contains("families")) {
        const auto& f = j.at("families");
        if (f.contains("infinite")) s.families.infinite_block = f.at("infinite").get<std::size_t>();
        if (f.contains("cofinite")) s.families.cofinite_tail = f.at("cofinite").get<std::size_t>();
        if (f.contains("syndetic")) s.families.syndetic_gap = f.at("syndetic").get<std::size_t>();
        if (f.contains("multi")) s.families.multi_k = f.at("multi").get<std::size_t>();
    }
    if (j.contains("engine")) {
        const std::string e = j.at("engine").get<std::string>();
        if (e == "direct") s.engine = Engine::direct;
        else if (e == "cutwise") s.engine = Engine::cutwise;
        else if (e == "both") s.engine = Engine::both;
        else throw ScenarioInvalid("engine", "expected direct|cutwise|both");
    }
    if (j.contains("caps")) {
        const auto& c = j.at("caps");
        if (c.contains("hyper_points")) s.caps.hyper_points = c.at("hyper_points").get<std::size_t>();
        if (c.contains("grid")) s.caps.grid = c.at("grid").get<std::size_t>();
    }
    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
    return s;
}

inline Scenario parse_scenario_text(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const std::exception& e) {
        throw ScenarioInvalid("$", std::string("invalid JSON: ") + e.what());
    }
    return parse_scenario(j);
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str());
}

}  // namespace fuzzdyn
