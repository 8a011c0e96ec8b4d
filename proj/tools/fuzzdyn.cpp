// fuzzdyn: scenario-driven verification runner for exact fuzzified dynamics.
//
//   fuzzdyn verify       --scenario S.json [--suite NAME|all] [--out P] [--format json|text]
//   fuzzdyn sensitivity  --scenario S.json --level base|hyper|fuzzy [--family KIND] ...
//   fuzzdyn transitivity --scenario S.json --check transitive|weakmix|theorem63|theorem61 ...
//   fuzzdyn report       --in report.json [--format text|json]
//
// Exit code 0 unless a check record carries status "fail" (a refuted horizon
// certificate or a skip is an expected outcome, not a failure).

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fuzzdyn/fuzzdyn.hpp"

namespace {

using namespace fuzzdyn;

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw IoError("cannot open output file " + out_path);
    out << text;
}

std::optional<Engine> parse_engine_flag(const std::string& value) {
    if (value.empty()) return std::nullopt;
    if (value == "direct") return Engine::direct;
    if (value == "cutwise") return Engine::cutwise;
    if (value == "both") return Engine::both;
    throw CLI::ValidationError("--engine must be direct|cutwise|both");
}

FamilyPredicate parse_family_flag(const std::string& value, std::size_t* multi_k) {
    const auto colon = value.find(':');
    const std::string kind = value.substr(0, colon);
    const std::size_t param = colon == std::string::npos ? 0 : std::stoul(value.substr(colon + 1));
    if (kind == "cofinite") return FamilyPredicate::cofinite(param ? param : 2);
    if (kind == "syndetic") return FamilyPredicate::syndetic(param ? param : 3);
    if (kind == "infinite") return FamilyPredicate::infinite(param ? param : 5);
    if (kind == "multi") {
        *multi_k = param ? param : 3;
        return FamilyPredicate::full();  // unused marker
    }
    throw CLI::ValidationError("--family must be plain|cofinite:T|syndetic:G|infinite:L|multi:k");
}

Json verdict_json(const SensitivityVerdict& v) {
    Json j;
    j["schema"] = kSchema;
    j["level"] = level_name(v.level);
    j["epsilon"] = to_string(v.epsilon);
    j["delta"] = to_string(v.delta);
    j["horizon"] = v.horizon;
    j["status"] = v.certified ? "certified" : "refuted_at_horizon";
    j["exhaustive"] = v.exhaustive;
    j["probe_policy"] = v.probe_policy;
    j["probes"] = v.probe_count;
    Json ws = Json::array();
    for (std::size_t i = 0; i < v.witnesses.size(); ++i) {
        const auto& w = v.witnesses[i];
        Json wj{{"center", w.center},
                {"perturbation", w.perturbation},
                {"time", w.time},
                {"separation", to_string(w.separation)}};
        if (i < v.fuzzy_pairs.size()) {
            wj["center_set"] = fuzzy_set_json(v.fuzzy_pairs[i].first);
            wj["perturbation_set"] = fuzzy_set_json(v.fuzzy_pairs[i].second);
        }
        ws.push_back(std::move(wj));
    }
    j["witnesses"] = std::move(ws);
    if (!v.certified) j["failing_center"] = v.failing_center;
    return j;
}

Json window_table_json(const std::vector<std::pair<std::string, TimeWindowSet>>& windows) {
    Json arr = Json::array();
    for (const auto& [name, w] : windows) {
        Json times = Json::array();
        for (auto n : w.members()) times.push_back(n);
        arr.push_back(Json{{"ball", name}, {"times", times}});
    }
    return arr;
}

int cmd_verify(const std::string& scenario_path, const std::string& suite, const std::string& out_path,
               const std::string& format, const std::string& engine_flag, bool parallel, bool timings) {
    Scenario sc = load_scenario(scenario_path);
    SuiteOptions opt;
    opt.engine_override = parse_engine_flag(engine_flag);
    opt.parallel = parallel;
    opt.with_timing = timings;
    Report rep = suite == "all" ? run_all_suites(sc, opt) : run_suite(sc, suite, opt);
    write_output(format == "text" ? emit_report_text(rep) : emit_report_json(rep, timings), out_path);
    return rep.exit_code();
}

int cmd_sensitivity(const std::string& scenario_path, const std::string& level, const std::string& eps,
                    const std::string& delta, long horizon, const std::string& family,
                    const std::string& out_path, const std::string& format,
                    const std::string& engine_flag) {
    Scenario sc = load_scenario(scenario_path);
    if (!eps.empty()) sc.epsilon = parse_rational(eps);
    if (!delta.empty()) sc.delta = parse_rational(delta);
    if (horizon >= 0) sc.horizon = static_cast<std::size_t>(horizon);
    if (auto e = parse_engine_flag(engine_flag)) sc.engine = *e;

    Json out;
    if (family.empty() || family == "plain") {
        SensitivityVerdict v;
        if (level == "base") {
            v = certify_sensitivity_base(sc.system.map, sc.epsilon, sc.delta, sc.horizon);
        } else if (level == "hyper") {
            v = certify_sensitivity_hyper(sc.system.map, sc.epsilon, sc.delta, sc.horizon);
        } else if (level == "fuzzy") {
            std::vector<FuzzySet> probes;
            if (!fuzzy_grid_exhaustive(*sc.system.space, sc.lattice, sc.caps.grid))
                probes = sampled_fuzzy_probes(sc.system.space, sc.lattice, sc.delta / 4);
            v = certify_sensitivity_fuzzy(sc.fuzzified(), sc.lattice, sc.epsilon, sc.delta, sc.horizon,
                                          probes, sc.caps.grid);
        } else {
            throw CLI::ValidationError("--level must be base|hyper|fuzzy");
        }
        out = verdict_json(v);
    } else {
        std::size_t multi_k = 0;
        FamilyPredicate fam = parse_family_flag(family, &multi_k);
        const std::size_t center_cap = 128;
        detail::BallWindows bw;
        if (level == "base") {
            bw = detail::base_windows(sc.system.map, sc.epsilon, sc.delta, sc.horizon);
        } else if (level == "hyper") {
            std::vector<Mask> centers;
            if (sc.system.space->size() <= kExhaustiveHyperPoints)
                for (Mask m = 1; m <= full_mask(sc.system.space->size()); ++m) centers.push_back(m);
            else
                centers = sampled_hyper_probes(*sc.system.space, sc.delta);
            bw = detail::hyper_windows(sc.system.map, centers, sc.epsilon, sc.delta, sc.horizon,
                                       center_cap);
        } else if (level == "fuzzy") {
            FuzzifiedSystem sys = sc.fuzzified();
            std::vector<FuzzySet> centers;
            const bool small = fuzzy_grid_exhaustive(*sc.system.space, sc.lattice, sc.caps.grid);
            SensitivityVerdict plain;
            if (small) {
                centers = enumerate_fuzzy_grid(sc.system.space, sc.lattice, true, sc.caps.grid);
            } else {
                centers = sampled_fuzzy_probes(sc.system.space, sc.lattice, sc.delta / 4);
                plain = certify_sensitivity_fuzzy(sys, sc.lattice, sc.epsilon, sc.delta, sc.horizon,
                                                  centers, sc.caps.grid);
            }
            bw = detail::fuzzy_windows(sys, sc.lattice, centers, plain, sc.epsilon, sc.delta, sc.horizon,
                                       sc.caps.grid, center_cap);
        } else {
            throw CLI::ValidationError("--level must be base|hyper|fuzzy");
        }
        out["schema"] = kSchema;
        out["level"] = level;
        out["epsilon"] = to_string(sc.epsilon);
        out["delta"] = to_string(sc.delta);
        out["horizon"] = sc.horizon;
        out["exact_windows"] = bw.exact;
        if (multi_k > 0) {
            bool certified = true;
            std::string detail_msg = "common separation times exist for all tuples";
            for (std::size_t i = 0; i < bw.windows.size() && certified; ++i)
                for (std::size_t j = i; j < bw.windows.size() && certified; ++j) {
                    if (bw.windows[i].second.intersect(bw.windows[j].second).empty()) {
                        certified = false;
                        detail_msg = "no common time for {" + bw.windows[i].first + ", " +
                                     bw.windows[j].first + "}";
                    }
                }
            out["family"] = "multi:" + std::to_string(multi_k);
            out["status"] = certified ? "certified" : "refuted_at_horizon";
            out["detail"] = detail_msg;
        } else {
            bool certified = true;
            std::string failing;
            for (const auto& [name, w] : bw.windows)
                if (!family_classify(w, fam)) {
                    certified = false;
                    failing = name;
                    break;
                }
            out["family"] = fam.to_string();
            out["status"] = certified ? "certified" : "refuted_at_horizon";
            if (!certified) out["failing_ball"] = failing;
        }
        out["windows"] = window_table_json(bw.windows);
    }
    write_output(format == "text" ? out.dump(2) + "\n" : out.dump(2) + "\n", out_path);
    return 0;
}

int cmd_transitivity(const std::string& scenario_path, const std::string& check, long horizon,
                     const std::string& out_path, const std::string& engine_flag) {
    Scenario sc = load_scenario(scenario_path);
    if (horizon >= 0) sc.horizon = static_cast<std::size_t>(horizon);
    if (auto e = parse_engine_flag(engine_flag)) sc.engine = *e;

    Json out;
    out["schema"] = kSchema;
    out["check"] = check;
    out["horizon"] = sc.horizon;
    int exit_code = 0;
    if (check == "transitive" || check == "weakmix") {
        std::vector<Mask> basis = sc.system.coords.empty() ? singleton_basis(*sc.system.space)
                                                           : interval_basis(sc.system, sc.basis_width);
        if (check == "transitive") {
            auto v = certify_transitive_base(sc.system.map, basis, sc.horizon, sc.families.infinite_block);
            out["status"] = v.transitive ? "transitive_at_horizon" : "not_transitive_at_horizon";
            out["pairs"] = v.pair_count;
            out["windows_block_dense"] = v.all_windows_block_dense;
            out["block_len"] = v.infinite_block;
            if (v.blocking) out["blocking_pair"] = Json::array({v.blocking->first, v.blocking->second});
        } else {
            auto v = certify_weak_mixing_base(sc.system.map, basis, sc.horizon);
            out["status"] = v.weakly_mixing ? "weakly_mixing_at_horizon" : "not_weakly_mixing_at_horizon";
            out["pairs"] = v.pair_count;
            if (v.witness)
                out["witness_tuple"] = Json::array({(*v.witness)[0], (*v.witness)[1], (*v.witness)[2],
                                                    (*v.witness)[3]});
        }
    } else if (check == "theorem63") {
        std::vector<Rational> probe = sc.lattice.values();
        probe.push_back(Rational(1, 4));
        auto cls = classify_for_theorem63(sc.g, probe, 50);
        if (!cls.applicable) {
            out["status"] = "skipped";
            out["reason"] = "g admits no z with xi_g(z) != z and stabilizing iterates";
        } else {
            const auto space = sc.system.space;
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
            auto con = build_separation(space, sc.g, cls.z, cls.m, a, b, sc.lattice.merged_with(extra),
                                        sc.horizon);
            auto verdict = verify_separation(con, sc.fuzzified(), sc.horizon, sc.caps.grid);
            out["status"] = verdict.separated ? "separated" : "violation";
            out["construction"] = Json{
                {"a", space->label(con.a)},
                {"b", space->label(con.b)},
                {"E1", mask_json(con.e1)},
                {"E2", mask_json(con.e2)},
                {"z", to_string(con.z)},
                {"m", con.m},
                {"case", con.case_id},
                {"secondary_level", to_string(con.secondary)},
                {"E", fuzzy_set_json(con.set_u)},
                {"G", fuzzy_set_json(con.set_v)},
                {"eta", to_string(con.eta)},
                {"ball_radius", to_string(con.radius)}};
            out["grid"] = verdict.grid_size;
            out["ball_members"] = verdict.members_checked;
            if (!verdict.separated) {
                out["violation_member"] = verdict.violation_member;
                out["violation_time"] = verdict.violation_time;
                exit_code = 1;
            }
        }
    } else if (check == "theorem61") {
        auto rep = audit_theorem61(sc.system, sc.g, sc.system.space->min_positive_distance() / 2,
                                   sc.horizon, sc.lattice, sc.caps.hyper_points, sc.caps.grid, sc.engine);
        out["hyper_weakly_mixing"] = rep.hyper_weakly_mixing;
        if (rep.wm_witness)
            out["wm_witness_tuple"] = Json::array({(*rep.wm_witness)[0], (*rep.wm_witness)[1],
                                                   (*rep.wm_witness)[2], (*rep.wm_witness)[3]});
        if (rep.vacuous) {
            out["status"] = "vacuous";
            out["note"] = rep.note;
        } else if (!rep.hyper_blocking) {
            out["status"] = "skipped";
            out["note"] = rep.note;
        } else {
            out["hyper_blocking_pair"] = Json::array({rep.hyper_blocking->first, rep.hyper_blocking->second});
            out["fuzzy_u"] = rep.fuzzy_blocking_u;
            out["fuzzy_v"] = rep.fuzzy_blocking_v;
            out["members_checked"] = rep.fuzzy_members_checked;
            out["status"] = rep.fuzzy_blocking_verified ? "blocking_pair_verified" : "violation";
            if (!rep.fuzzy_blocking_verified) exit_code = 1;
        }
    } else {
        throw CLI::ValidationError("--check must be transitive|weakmix|theorem63|theorem61");
    }
    write_output(out.dump(2) + "\n", out_path);
    return exit_code;
}

int cmd_report(const std::string& in_path, const std::string& format) {
    std::ifstream in(in_path);
    if (!in) throw IoError("cannot open report file " + in_path);
    Json j = Json::parse(in);
    if (format == "json") {
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "suite " << j.value("suite", std::string("?")) << "\n";
    for (const auto& c : j.at("checks"))
        std::cout << "  " << c.value("name", std::string("?")) << "  " << c.value("status", std::string("?"))
                  << "  " << c.value("anchor", std::string("?")) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact verification lab for fuzzified dynamical systems"};
    app.require_subcommand(1);

    std::string scenario_path, out_path, format = "json", engine_flag, suite = "all";
    bool parallel = false, timings = false;

    auto* verify = app.add_subcommand("verify", "run a verification suite and emit a report");
    verify->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    verify->add_option("--suite", suite, "suite name or 'all'");
    verify->add_option("--out", out_path, "output path (default stdout)");
    verify->add_option("--format", format, "json|text")->check(CLI::IsMember({"json", "text"}));
    verify->add_option("--engine", engine_flag, "direct|cutwise|both");
    verify->add_flag("--parallel", parallel, "run checks concurrently (deterministic merge)");
    verify->add_flag("--timings", timings, "include wall-clock timings (breaks byte determinism)");

    std::string level = "base", family, eps_flag, delta_flag;
    long horizon_flag = -1;
    auto* sens = app.add_subcommand("sensitivity", "horizon sensitivity certificate");
    sens->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    sens->add_option("--level", level, "base|hyper|fuzzy")->required();
    sens->add_option("--epsilon", eps_flag, "separation threshold p/q");
    sens->add_option("--delta", delta_flag, "perturbation ball radius p/q");
    sens->add_option("--horizon", horizon_flag, "time horizon N");
    sens->add_option("--family", family, "plain|cofinite:T|syndetic:G|infinite:L|multi:k");
    sens->add_option("--out", out_path, "output path (default stdout)");
    sens->add_option("--format", format, "json|text");
    sens->add_option("--engine", engine_flag, "direct|cutwise|both");

    std::string check = "transitive";
    auto* trans = app.add_subcommand("transitivity", "return-time window certificates");
    trans->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    trans->add_option("--check", check, "transitive|weakmix|theorem63|theorem61")->required();
    trans->add_option("--horizon", horizon_flag, "time horizon N");
    trans->add_option("--out", out_path, "output path (default stdout)");
    trans->add_option("--engine", engine_flag, "direct|cutwise|both");

    std::string in_path;
    auto* report = app.add_subcommand("report", "re-render a report file");
    report->add_option("--in", in_path, "report JSON file")->required();
    report->add_option("--format", format, "json|text");

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed())
            return cmd_verify(scenario_path, suite, out_path, format, engine_flag, parallel, timings);
        if (sens->parsed())
            return cmd_sensitivity(scenario_path, level, eps_flag, delta_flag, horizon_flag, family,
                                   out_path, format, engine_flag);
        if (trans->parsed()) return cmd_transitivity(scenario_path, check, horizon_flag, out_path, engine_flag);
        if (report->parsed()) return cmd_report(in_path, format);
    } catch (const ScenarioInvalid& e) {
        std::cerr << "scenario error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
