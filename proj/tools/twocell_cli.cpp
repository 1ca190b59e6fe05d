// Command-line front end: reproduces the four figure presets (or an inline
// JSON scenario) as plot-ready CSV curves plus a summary report, and dumps
// protocol execution traces.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "twocell/experiment.hpp"

namespace {

using nlohmann::json;
using namespace twocell;

SchemeId scheme_from_string(const std::string& s) {
    if (s == "MARP") return SchemeId::marp;
    if (s == "DIS") return SchemeId::dis;
    if (s == "MIS") return SchemeId::mis;
    if (s == "MMSE-SIC") return SchemeId::mmse_sic;
    if (s == "AW+SIC") return SchemeId::aw_sic;
    if (s == "AW+DIS") return SchemeId::aw_dis;
    throw std::invalid_argument("unknown scheme: " + s);
}

UePlacement placement_from_json(const json& j) {
    if (j.is_array()) {
        if (j.size() != 2) throw std::invalid_argument("placement interval needs two endpoints");
        return UePlacement::uniform(j[0].get<double>(), j[1].get<double>());
    }
    return UePlacement::at(j.get<double>());
}

double power_from_json(const json& j, const char* db_key, const char* lin_key) {
    const bool has_db = j.contains(db_key), has_lin = j.contains(lin_key);
    if (has_db == has_lin)
        throw std::invalid_argument(std::string("specify exactly one of ") + db_key + " / " +
                                    lin_key);
    return has_db ? db_to_linear(j[db_key].get<double>()) : j[lin_key].get<double>();
}

ExperimentConfig config_from_json(const json& j) {
    const json& jg = j.at("geometry");
    ScenarioGeometry geom(jg.at("d").get<double>(), jg.at("alpha").get<double>(),
                          placement_from_json(jg.at("z")), placement_from_json(jg.at("t")));

    const json& jp = j.at("power");
    const std::string mode_s = jp.at("mode").get<std::string>();
    PowerMode pmode;
    if (mode_s == "fixed")
        pmode = PowerMode::fixed_transmit_power;
    else if (mode_s == "compensation")
        pmode = PowerMode::full_path_loss_compensation;
    else
        throw std::invalid_argument("power.mode must be fixed or compensation");
    const double p = power_from_json(jp, "p_db", "p_linear");

    double th1 = 1.0, th2 = 1.0;
    std::vector<double> grid;
    if (j.contains("thresholds")) {
        const json& jt = j.at("thresholds");
        if (jt.contains("theta1_db")) th1 = db_to_linear(jt.at("theta1_db").get<double>());
        if (jt.contains("theta2_db")) th2 = db_to_linear(jt.at("theta2_db").get<double>());
        if (jt.contains("grid_db")) {
            const json& gj = jt.at("grid_db");
            grid = make_theta_grid_db(gj.at("start").get<double>(), gj.at("stop").get<double>(),
                                      gj.at("step").get<double>());
        }
    }

    std::optional<PppModel> ppp;
    if (j.contains("ppp")) {
        const json& jq = j.at("ppp");
        double scale = 1.0;
        if (jq.value("max_power", false))
            scale = 1.0 + std::pow(geom.d, geom.alpha);
        else if (jq.contains("power_scale_linear"))
            scale = jq.at("power_scale_linear").get<double>();
        PppModel m(jq.at("intensity").get<double>(), geom.d, geom.alpha, scale);
        if (jq.contains("x_max")) m.sampling_truncation = jq.at("x_max").get<double>();
        ppp = m;
    }

    std::vector<SchemeId> schemes;
    for (const auto& s : j.at("schemes")) schemes.push_back(scheme_from_string(s.get<std::string>()));

    Scenario sc{geom,
                PowerConfig(pmode, p, th1, th2),
                grid,
                ppp,
                schemes,
                j.value("draws", std::uint64_t{1000000}),
                j.value("seed", std::uint64_t{1})};
    ExperimentConfig cfg(j.value("name", std::string("custom")), sc);
    cfg.include_no_interferer_baseline = j.value("include_no_interferer_baseline", false);
    return cfg;
}

ExperimentConfig load_config(const std::string& preset, const std::string& config_path,
                             std::uint64_t draws, std::uint64_t seed) {
    if (!preset.empty() && !config_path.empty())
        throw std::invalid_argument("give either --preset or --config, not both");
    if (!preset.empty()) return make_preset(preset, draws, seed);
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw std::invalid_argument("cannot read config " + config_path);
        json j;
        in >> j;
        ExperimentConfig cfg = config_from_json(j);
        if (draws != 0) cfg.scenario.n_draws = draws;
        if (seed != 0) cfg.scenario.seed = seed;
        return cfg;
    }
    throw std::invalid_argument("need --preset or --config");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-cell uplink interference management experiments"};
    app.require_subcommand(1);

    std::string preset, config_path, out_dir = "out", mode = "both", grid_spec;
    std::uint64_t draws = 0, seed = 0, n_traces = 20;
    double xmax_override = 0.0;

    CLI::App* run = app.add_subcommand("run", "produce outage curves and a report");
    run->add_option("--preset", preset, "fig3|fig4|fig5|fig6");
    run->add_option("--config", config_path, "inline scenario JSON");
    run->add_option("--mode", mode, "analytic|montecarlo|both")->default_str("both");
    run->add_option("--draws", draws, "Monte Carlo draw count");
    run->add_option("--seed", seed, "random seed");
    run->add_option("--out", out_dir, "output directory")->default_str("out");
    run->add_option("--grid", grid_spec, "theta grid start:stop:step in dB");
    run->add_option("--xmax", xmax_override, "interferer sampling truncation radius");

    CLI::App* trace = app.add_subcommand("trace", "dump protocol execution traces");
    trace->add_option("--preset", preset, "fig3|fig4|fig5|fig6");
    trace->add_option("--config", config_path, "inline scenario JSON");
    trace->add_option("--n", n_traces, "number of traces")->default_str("20");
    trace->add_option("--seed", seed, "random seed");
    trace->add_option("--out", out_dir, "output directory")->default_str("out");

    CLI11_PARSE(app, argc, argv);

    try {
        ExperimentConfig cfg = load_config(preset, config_path, draws == 0 ? 1000000 : draws,
                                           seed == 0 ? 1 : seed);
        cfg.out_dir = out_dir;
        if (!grid_spec.empty()) {
            double a, b, s;
            if (std::sscanf(grid_spec.c_str(), "%lf:%lf:%lf", &a, &b, &s) != 3)
                throw std::invalid_argument("grid spec must be start:stop:step");
            cfg.scenario.theta_grid_db = make_theta_grid_db(a, b, s);
        }
        if (xmax_override > 0.0 && cfg.scenario.ppp)
            cfg.scenario.ppp->sampling_truncation = xmax_override;

        if (run->parsed()) {
            if (mode == "analytic")
                cfg.mode = RunMode::analytic;
            else if (mode == "montecarlo")
                cfg.mode = RunMode::montecarlo;
            else if (mode == "both")
                cfg.mode = RunMode::both;
            else
                throw std::invalid_argument("mode must be analytic, montecarlo or both");
            const ExperimentResult res = run_experiment(cfg);
            for (const auto& f : res.csv_files) std::cout << "wrote " << f << "\n";
            std::cout << "wrote " << res.report_file << "\n";
            std::cout << res.report_text;
        } else {
            std::filesystem::create_directories(out_dir);
            const std::string path = out_dir + "/" + cfg.name + "_traces.txt";
            Scenario sc = cfg.scenario;
            if (!sc.geometry.is_fixed()) {
                // traces need one concrete placement; pin the interval midpoints
                sc.geometry.z = UePlacement::at(0.5 * (sc.geometry.z.lo + sc.geometry.z.hi));
                sc.geometry.t = UePlacement::at(0.5 * (sc.geometry.t.lo + sc.geometry.t.hi));
            }
            dump_protocol_trace(sc, n_traces, path);
            std::cout << "wrote " << path << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
