#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "twocell/montecarlo.hpp"
#include "twocell/outage.hpp"
#include "twocell/ppp_outage.hpp"
#include "twocell/protocol.hpp"

namespace twocell {

inline constexpr const char* kCsvSchemaTag = "outage-curve/1";

enum class RunMode { analytic, montecarlo, both };

// One experiment: a scenario family (optionally doubled into with/without
// interferer variants), a symmetric threshold grid, and output settings.
struct ExperimentConfig {
    std::string name;
    Scenario scenario;
    RunMode mode = RunMode::both;
    bool include_no_interferer_baseline = false;  // fig5/fig6 style pairing
    std::string out_dir = ".";

    ExperimentConfig(std::string name_, Scenario sc) : name(std::move(name_)), scenario(std::move(sc)) {}
};

// The four plotted scenarios. Figure 3: worst-case cell-edge UEs, fixed
// power. Figure 4: random outer-half placements under full path-loss
// compensation. Figures 5 and 6 add the external interferer field to the
// corresponding placements (max-power interferers under power control).
inline ExperimentConfig make_preset(const std::string& name, std::uint64_t n_draws = 1000000,
                                    std::uint64_t seed = 1) {
    const double d = 2.0, alpha = 4.0;
    const std::vector<double> grid = make_theta_grid_db(-30.0, 15.0, 0.5);
    const std::vector<SchemeId> all6 = {SchemeId::marp,     SchemeId::dis,    SchemeId::mis,
                                        SchemeId::mmse_sic, SchemeId::aw_sic, SchemeId::aw_dis};
    const std::vector<SchemeId> pair2 = {SchemeId::marp, SchemeId::aw_sic};

    if (name == "fig3") {
        return ExperimentConfig(
            name, Scenario{ScenarioGeometry::fixed(d, alpha, d, -d),
                           PowerConfig(PowerMode::fixed_transmit_power, db_to_linear(20.0), 1.0,
                                       1.0),
                           grid, std::nullopt, all6, n_draws, seed});
    }
    if (name == "fig4") {
        return ExperimentConfig(
            name, Scenario{ScenarioGeometry(d, alpha, UePlacement::uniform(d / 2, d),
                                            UePlacement::uniform(-d, -d / 2)),
                           PowerConfig(PowerMode::full_path_loss_compensation,
                                       db_to_linear(10.0), 1.0, 1.0),
                           grid, std::nullopt, all6, n_draws, seed});
    }
    if (name == "fig5") {
        ExperimentConfig cfg(
            name, Scenario{ScenarioGeometry::fixed(d, alpha, d, -d),
                           PowerConfig(PowerMode::fixed_transmit_power, db_to_linear(20.0), 1.0,
                                       1.0),
                           grid, PppModel(0.25, d, alpha, 1.0), pair2, n_draws, seed});
        cfg.include_no_interferer_baseline = true;
        return cfg;
    }
    if (name == "fig6") {
        ExperimentConfig cfg(
            name, Scenario{ScenarioGeometry(d, alpha, UePlacement::uniform(0.0, d),
                                            UePlacement::uniform(-d, 0.0)),
                           PowerConfig(PowerMode::full_path_loss_compensation,
                                       db_to_linear(10.0), 1.0, 1.0),
                           grid, PppModel(0.25, d, alpha, 1.0 + std::pow(d, alpha)), pair2,
                           n_draws, seed});
        cfg.include_no_interferer_baseline = true;
        return cfg;
    }
    throw std::invalid_argument("unknown preset: " + name);
}

namespace detail {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string scheme_slug(SchemeId s) {
    switch (s) {
        case SchemeId::marp: return "marp";
        case SchemeId::dis: return "dis";
        case SchemeId::mis: return "mis";
        case SchemeId::mmse_sic: return "mmse_sic";
        case SchemeId::aw_sic: return "aw_sic";
        case SchemeId::aw_dis: return "aw_dis";
    }
    return "unknown";
}

inline bool has_closed_form(SchemeId s, bool with_ppp) {
    if (with_ppp) return s == SchemeId::marp || s == SchemeId::aw_sic;
    return s == SchemeId::marp || s == SchemeId::dis || s == SchemeId::aw_sic ||
           s == SchemeId::aw_dis;
}

}  // namespace detail

// Analytic outage curve over the symmetric grid, location-averaged when the
// scenario has random placements; honors the scenario's interferer field.
inline std::vector<EstimateRow> analytic_curve(const Scenario& sc, SchemeId scheme,
                                               bool with_ppp) {
    std::vector<EstimateRow> rows;
    for (double th_db : sc.theta_grid_db) {
        const double th = db_to_linear(th_db);
        double p;
        if (sc.geometry.is_fixed()) {
            LinkAttenuations la = link_attenuations(sc.geometry);
            if (sc.power.mode == PowerMode::full_path_loss_compensation)
                la = apply_power_control(la);
            p = with_ppp ? analytic_outage_ppp(scheme, la, sc.power.p, th, th, *sc.ppp).p
                         : analytic_outage(scheme, la, sc.power.p, th, th).p;
        } else {
            p = location_average(sc.geometry, 1e-6, [&](double z, double t) {
                LinkAttenuations la = link_attenuations(sc.geometry.d, sc.geometry.alpha, z, t);
                if (sc.power.mode == PowerMode::full_path_loss_compensation)
                    la = apply_power_control(la);
                return with_ppp ? analytic_outage_ppp(scheme, la, sc.power.p, th, th, *sc.ppp).p
                                : analytic_outage(scheme, la, sc.power.p, th, th).p;
            });
        }
        rows.push_back({scheme, th_db, p, 0.0, 0, sc.seed});
    }
    return rows;
}

inline void write_curve_csv(const std::string& path, const std::vector<EstimateRow>& rows,
                            const std::string& mode) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "# schema=" << kCsvSchemaTag << "\n";
    out << "theta_db,outage,ci_half_width,mode,scheme,seed\n";
    for (const auto& r : rows) {
        out << detail::format_double(r.theta_db) << "," << detail::format_double(r.p_hat) << ",";
        if (r.n_draws > 0) out << detail::format_double(r.half_width);
        out << "," << mode << "," << scheme_name(r.scheme) << ","
            << (r.n_draws > 0 ? std::to_string(r.seed) : std::string()) << "\n";
    }
}

struct ExperimentResult {
    std::vector<std::string> csv_files;
    std::string report_file;
    std::string report_text;
};

// Runs one preset or inline config: per-scheme curve CSVs for the requested
// modes plus a summary report (reductions at 0 dB, low-threshold slopes,
// scheme gaps, and the interferer-induced horizontal shift when applicable).
inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    namespace fs = std::filesystem;
    ExperimentResult result;
    fs::create_directories(cfg.out_dir);
    std::ostringstream rep;
    rep << "experiment: " << cfg.name << "\n";
    rep << "seed: " << cfg.scenario.seed << "\n";
    rep << "draws: " << cfg.scenario.n_draws << "\n";

    struct Variant {
        std::string label;
        Scenario sc;
        bool with_ppp;
    };
    std::vector<Variant> variants;
    const bool has_field = cfg.scenario.ppp && cfg.scenario.ppp->intensity > 0.0;
    if (has_field && cfg.include_no_interferer_baseline) {
        Scenario no_ppp = cfg.scenario;
        no_ppp.ppp.reset();
        variants.push_back({"nofield", no_ppp, false});
        variants.push_back({"field", cfg.scenario, true});
    } else {
        variants.push_back({has_field ? "field" : "", cfg.scenario, has_field});
    }

    const bool want_analytic = cfg.mode != RunMode::montecarlo;
    const bool want_mc = cfg.mode != RunMode::analytic;

    std::map<std::string, std::vector<EstimateRow>> curves;  // key: variant|scheme|mode
    auto key = [](const std::string& variant, SchemeId s, const std::string& mode) {
        return variant + "|" + detail::scheme_slug(s) + "|" + mode;
    };

    for (const auto& var : variants) {
        const std::string stem =
            cfg.name + (var.label.empty() ? "" : "_" + var.label);
        if (want_analytic) {
            for (SchemeId s : var.sc.schemes) {
                if (!detail::has_closed_form(s, var.with_ppp)) continue;
                auto rows = analytic_curve(var.sc, s, var.with_ppp);
                const std::string path =
                    cfg.out_dir + "/" + stem + "_" + detail::scheme_slug(s) + "_analytic.csv";
                write_curve_csv(path, rows, "analytic");
                result.csv_files.push_back(path);
                curves[key(var.label, s, "analytic")] = std::move(rows);
            }
        }
        if (want_mc) {
            const auto rows = estimate_outage(var.sc);
            for (SchemeId s : var.sc.schemes) {
                std::vector<EstimateRow> mine;
                for (const auto& r : rows)
                    if (r.scheme == s) mine.push_back(r);
                const std::string path =
                    cfg.out_dir + "/" + stem + "_" + detail::scheme_slug(s) + "_montecarlo.csv";
                write_curve_csv(path, mine, "montecarlo");
                result.csv_files.push_back(path);
                curves[key(var.label, s, "montecarlo")] = std::move(mine);
            }
        }
    }

    // --- report ---
    bool grid_has_zero = false;
    for (double g : cfg.scenario.theta_grid_db)
        if (std::abs(g) < 1e-9) grid_has_zero = true;
    auto curve_at = [&](const std::vector<EstimateRow>& rows, double th_db) {
        for (const auto& r : rows)
            if (std::abs(r.theta_db - th_db) < 1e-9) return r.p_hat;
        throw std::domain_error("report: 0 dB not on the grid");
    };
    for (const auto& var : variants) {
        const std::string tag = var.label.empty() ? "" : " [" + var.label + "]";
        const std::string mode_for_report =
            want_analytic && detail::has_closed_form(SchemeId::marp, var.with_ppp) ? "analytic"
                                                                                   : "montecarlo";
        const auto it_marp = curves.find(key(var.label, SchemeId::marp, mode_for_report));
        if (it_marp == curves.end()) continue;
        if (grid_has_zero) {
            const double p_marp = curve_at(it_marp->second, 0.0);
            for (SchemeId s : var.sc.schemes) {
                if (s == SchemeId::marp) continue;
                const auto it = curves.find(key(var.label, s, mode_for_report));
                if (it == curves.end()) continue;
                const double p = curve_at(it->second, 0.0);
                rep << "reduction_at_0dB" << tag << " " << scheme_name(s) << "_vs_MARP: "
                    << detail::format_double((p_marp - p) / p_marp) << " (" << mode_for_report
                    << ")\n";
            }
        }
        // low-threshold log-log slope over the bottom decade of the grid
        for (SchemeId s : var.sc.schemes) {
            const auto it = curves.find(key(var.label, s, mode_for_report));
            if (it == curves.end()) continue;
            std::vector<double> x, y;
            for (const auto& r : it->second)
                if (r.theta_db <= -20.0 && r.p_hat > 0.0) {
                    x.push_back(std::log10(db_to_linear(r.theta_db)));
                    y.push_back(std::log10(r.p_hat));
                }
            if (x.size() >= 2)
                rep << "loglog_slope" << tag << " " << scheme_name(s) << ": "
                    << detail::format_double(fit_slope(x, y)) << " (" << mode_for_report << ")\n";
        }
    }

    // MMSE-SIC gap at outage 1e-3 from the Monte Carlo curves
    if (want_mc) {
        const auto a = curves.find(key(variants[0].label, SchemeId::aw_sic, "montecarlo"));
        const auto b = curves.find(key(variants[0].label, SchemeId::mmse_sic, "montecarlo"));
        if (a != curves.end() && b != curves.end()) {
            try {
                rep << "db_gap_at_1e-3 AW+SIC_to_MMSE-SIC: "
                    << detail::format_double(
                           db_gap_between_curves(a->second, b->second, 1e-3))
                    << " (montecarlo)\n";
            } catch (const std::domain_error&) {
                rep << "db_gap_at_1e-3 AW+SIC_to_MMSE-SIC: out-of-range\n";
            }
        }
    }

    // Horizontal shift of the field variant against the clean baseline
    if (variants.size() == 2 && want_analytic) {
        const PppModel& m = *cfg.scenario.ppp;
        const double predicted = horizontal_shift_db(cfg.scenario.power.p, m);
        const double ei1 = mean_i1(m);
        const double cross = cross_moment_integral(m);
        const double p = cfg.scenario.power.p;
        rep << "mean_interference_i1: " << detail::format_double(ei1) << "\n";
        // spatial correlation of the two aggregates: E[I1 I2] against the
        // uncorrelated product, and what it does to the slope-2 coefficient
        rep << "cross_moment_gap: " << detail::format_double(cross) << " (relative "
            << detail::format_double(cross / (ei1 * mean_i2(m))) << ")\n";
        const double exact = p * p * mean_i1i2(m) + p * (ei1 + mean_i2(m)) + 1.0;
        const double uncorr = (p * ei1 + 1.0) * (p * ei1 + 1.0);
        rep << "aw_asymptotic_factor exact: " << detail::format_double(exact)
            << " uncorrelated: " << detail::format_double(uncorr) << "\n";
        rep << "horizontal_shift_predicted_db: " << detail::format_double(predicted) << "\n";
        for (SchemeId s : cfg.scenario.schemes) {
            const auto clean = curves.find(key("nofield", s, "analytic"));
            const auto field = curves.find(key("field", s, "analytic"));
            if (clean == curves.end() || field == curves.end()) continue;
            try {
                const double shift =
                    db_gap_between_curves(field->second, clean->second, 1e-3);
                rep << "horizontal_shift_measured_db " << scheme_name(s) << ": "
                    << detail::format_double(shift) << "\n";
            } catch (const std::domain_error&) {
                rep << "horizontal_shift_measured_db " << scheme_name(s) << ": out-of-range\n";
            }
        }
    }

    result.report_text = rep.str();
    result.report_file = cfg.out_dir + "/" + cfg.name + "_report.txt";
    std::ofstream out(result.report_file, std::ios::binary);
    out << result.report_text;
    return result;
}

// Serializes n protocol traces (both controllers) with a (steps, backhaul
// bits) histogram and a closing equivalence line against the per-draw event
// predicates.
inline std::string dump_protocol_trace(const Scenario& sc, std::uint64_t n_traces,
                                       const std::string& path) {
    if (!sc.geometry.is_fixed())
        throw std::invalid_argument("protocol trace: fixed placements required");
    LinkAttenuations la = link_attenuations(sc.geometry);
    if (sc.power.mode == PowerMode::full_path_loss_compensation) la = apply_power_control(la);
    const EffectivePowers pw = EffectivePowers::uniform(sc.power.p);
    const SinrThresholds th{sc.power.theta1, sc.power.theta2};

    std::map<std::pair<int, int>, std::uint64_t> hist_sic, hist_dis;
    std::uint64_t mism_sic = 0, mism_dis = 0;
    std::ostringstream out;
    for (std::uint64_t k = 0; k < n_traces; ++k) {
        RngStream fs = draw_stream(sc.seed, k, StreamRole::fading);
        const FadingDraw d = sample_fading(la, fs);
        const ProtocolTrace sic = run_aw_sic_protocol(d, pw, th);
        const ProtocolTrace dis = run_aw_dis_protocol(d, pw, th);
        hist_sic[{static_cast<int>(sic.steps.size()), sic.backhaul_bits_total}] += 1;
        hist_dis[{static_cast<int>(dis.steps.size()), dis.backhaul_bits_total}] += 1;
        const DecodeOutcome o_sic = outcome_aw_sic(d, pw, th);
        const DecodeOutcome o_dis = outcome_aw_dis(d, pw, th);
        if (sic.ue_decoded[0] != o_sic.ue1_decoded || sic.ue_decoded[1] != o_sic.ue2_decoded)
            ++mism_sic;
        if (dis.ue_decoded[0] != o_dis.ue1_decoded || dis.ue_decoded[1] != o_dis.ue2_decoded)
            ++mism_dis;
        out << "--- draw " << k << " AW+SIC\n" << sic.serialize();
        out << "--- draw " << k << " AW+DIS\n" << dis.serialize();
    }
    out << "histogram AW+SIC (steps,bits,count):";
    for (const auto& [sb, c] : hist_sic) out << " " << sb.first << "," << sb.second << "," << c;
    out << "\nhistogram AW+DIS (steps,bits,count):";
    for (const auto& [sb, c] : hist_dis) out << " " << sb.first << "," << sb.second << "," << c;
    out << "\nequivalence: aw_sic_mismatches=" << mism_sic << " aw_dis_mismatches=" << mism_dis
        << " over " << n_traces << " draws\n";

    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << out.str();
    return out.str();
}

}  // namespace twocell
