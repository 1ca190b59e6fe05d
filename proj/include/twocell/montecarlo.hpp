#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "twocell/events.hpp"
#include "twocell/fading.hpp"
#include "twocell/geometry.hpp"
#include "twocell/ppp.hpp"
#include "twocell/ppp_outage.hpp"
#include "twocell/schemes.hpp"
#include "twocell/stats.hpp"

namespace twocell {

// A complete simulation description. The dB grid sweeps the symmetric
// threshold theta1 = theta2; an empty grid means a single (possibly
// asymmetric) operating point taken from the power config.
struct Scenario {
    ScenarioGeometry geometry;
    PowerConfig power;
    std::vector<double> theta_grid_db;
    std::optional<PppModel> ppp;
    std::vector<SchemeId> schemes;
    std::uint64_t n_draws = 100000;
    std::uint64_t seed = 1;
    int workers = 0;  // 0: pick from hardware_concurrency
};

struct EstimateRow {
    SchemeId scheme;
    double theta_db;
    double p_hat;
    double half_width;  // 95% CI half-width
    std::uint64_t n_draws;
    std::uint64_t seed;
};

inline std::vector<double> make_theta_grid_db(double start_db, double stop_db, double step_db) {
    if (!(step_db > 0.0) || !(stop_db >= start_db))
        throw std::invalid_argument("theta grid: malformed range");
    std::vector<double> g;
    const int n = static_cast<int>(std::floor((stop_db - start_db) / step_db + 0.5));
    for (int i = 0; i <= n; ++i) g.push_back(start_db + i * step_db);
    return g;
}

namespace detail {

inline void validate(const Scenario& sc) {
    if (sc.n_draws < 1) throw std::invalid_argument("scenario: n_draws must be >= 1");
    if (sc.schemes.empty()) throw std::invalid_argument("scenario: no schemes");
    for (std::size_t i = 1; i < sc.theta_grid_db.size(); ++i)
        if (!(sc.theta_grid_db[i] > sc.theta_grid_db[i - 1]))
            throw std::invalid_argument("scenario: theta grid must be strictly increasing");
    if (sc.ppp && sc.ppp->intensity > 0.0)
        for (SchemeId s : sc.schemes)
            if (s == SchemeId::mmse_sic)
                throw std::invalid_argument(
                    "scenario: MMSE-SIC is not defined with external interferers");
}

inline int pick_workers(const Scenario& sc) {
    if (sc.workers > 0) return sc.workers;
    const unsigned hc = std::thread::hardware_concurrency();
    const int cap = static_cast<int>(std::min<unsigned>(hc == 0 ? 1 : hc, 8));
    return sc.n_draws < 65536 ? 1 : cap;
}

// Per-draw SINR atoms; everything the scheme indicators need at symmetric
// thresholds, as critical-threshold values.
struct DrawAtoms {
    double lim[2][2];   // interference-limited SINR of ue at bs
    double snr[2][2];   // clean SNR of ue at bs
    // MMSE-SIC scalars (valid only when complex fading was drawn)
    double mmse_test = 0.0;   // P h2*(I+P h1 h1*)^{-1} h2
    double mmse_mrc = 0.0;    // P |h1|^2
    double mmse_mmse = 0.0;   // P h1*(I+P h2 h2*)^{-1} h1
};

inline void fill_atoms(const double hsq[2][2], const EffectivePowers& pw, DrawAtoms& a) {
    for (int bs = 0; bs < 2; ++bs) {
        const double p = pw.at_bs(bs);
        for (int ue = 0; ue < 2; ++ue) {
            a.snr[ue][bs] = p * hsq[ue][bs];
            a.lim[ue][bs] = a.snr[ue][bs] / (1.0 + p * hsq[1 - ue][bs]);
        }
    }
}

// Largest symmetric threshold at which A_{ue,bs} holds.
inline double theta_star_A(const DrawAtoms& a, int ue, int bs) {
    return std::max(a.lim[ue][bs], std::min(a.lim[1 - ue][bs], a.snr[ue][bs]));
}

struct SchemeThetaStars {
    double marp, dis, mis, aw_sic, aw_dis;
    double mmse;       // critical threshold for MMSE-SIC
    bool mmse_strict;  // success requires theta strictly below mmse
};

inline SchemeThetaStars theta_stars(const DrawAtoms& a, bool with_mmse) {
    SchemeThetaStars t{};
    const double a11 = theta_star_A(a, 0, 0);
    const double a12 = theta_star_A(a, 0, 1);
    const double a21 = theta_star_A(a, 1, 0);
    const double a22 = theta_star_A(a, 1, 1);
    t.marp = a11;
    t.dis = std::max(a11, std::min(a22, a.snr[0][0]));
    t.mis = a.lim[0][0] >= a.lim[0][1] ? a11 : a12;
    t.aw_sic = std::max(a11, a12);
    t.aw_dis = std::max({t.aw_sic, std::min(a22, a.snr[0][0]), std::min(a21, a.snr[0][1])});
    if (t.marp > t.dis || t.marp > t.aw_sic || t.aw_sic > t.aw_dis)
        throw std::logic_error("scheme ordering violated on a draw");
    if (with_mmse) {
        if (a.mmse_test <= a.mmse_mmse) {
            t.mmse = a.mmse_mmse;
            t.mmse_strict = false;
        } else if (a.mmse_test <= a.mmse_mrc) {
            t.mmse = a.mmse_test;
            t.mmse_strict = true;
        } else {
            t.mmse = a.mmse_mrc;
            t.mmse_strict = false;
        }
    }
    return t;
}

struct DrawInputs {
    EffectivePowers pw{{1.0, 1.0}};
    FadingDraw fading;  // g stays zero on the magnitude-only path
};

// Reconstructs one draw of the generative chain: locations, power control,
// interferer field, fading. Pure function of (scenario, index).
inline DrawInputs make_draw(const Scenario& sc, std::uint64_t index, bool want_complex) {
    DrawInputs in;
    double z, t;
    if (sc.geometry.is_fixed()) {
        z = sc.geometry.z.fixed_value();
        t = sc.geometry.t.fixed_value();
    } else {
        RngStream ls = draw_stream(sc.seed, index, StreamRole::locations);
        const double uz = ls.next_unit_open();
        const double ut = ls.next_unit_open();
        z = sc.geometry.z.lo + (sc.geometry.z.hi - sc.geometry.z.lo) * uz;
        t = sc.geometry.t.lo + (sc.geometry.t.hi - sc.geometry.t.lo) * ut;
    }
    LinkAttenuations la = link_attenuations(sc.geometry.d, sc.geometry.alpha, z, t);
    if (sc.power.mode == PowerMode::full_path_loss_compensation) la = apply_power_control(la);

    if (sc.ppp && sc.ppp->intensity > 0.0) {
        RngStream right = draw_stream(sc.seed, index, StreamRole::ppp_right);
        RngStream left = draw_stream(sc.seed, index, StreamRole::ppp_left);
        const InterferencePair ip =
            sample_ppp_interference(sc.ppp->d, sc.ppp->alpha, sc.ppp->intensity,
                                    sc.ppp->sampling_truncation, sc.ppp->power_scale, right, left);
        in.pw = EffectivePowers::with_interference(sc.power.p, ip.i1, ip.i2);
    } else {
        in.pw = EffectivePowers::uniform(sc.power.p);
    }

    RngStream fs = draw_stream(sc.seed, index, StreamRole::fading);
    if (want_complex) {
        in.fading = sample_fading(la, fs);
    } else {
        const FadingMagnitudes fm = sample_fading_magnitudes(la, fs);
        for (int ue = 0; ue < 2; ++ue)
            for (int bs = 0; bs < 2; ++bs) {
                in.fading.g[ue][bs] = {0.0, 0.0};  // poison: NaNs out if MMSE touches it
                in.fading.hsq[ue][bs] = fm.hsq[ue][bs];
            }
    }
    return in;
}

inline void fill_mmse_atoms(const DrawInputs& in, double p, DrawAtoms& a) {
    std::complex<double> h[2][2];
    for (int ue = 0; ue < 2; ++ue)
        for (int bs = 0; bs < 2; ++bs)
            h[ue][bs] = in.fading.g[ue][bs] *
                        std::sqrt(in.fading.hsq[ue][bs] / std::norm(in.fading.g[ue][bs]));
    const double n1 = in.fading.hsq[0][0] + in.fading.hsq[0][1];
    const double n2 = in.fading.hsq[1][0] + in.fading.hsq[1][1];
    const double ip2 =
        std::norm(std::conj(h[0][0]) * h[1][0] + std::conj(h[0][1]) * h[1][1]);
    a.mmse_test = p * (n2 - p * ip2 / (1.0 + p * n1));
    a.mmse_mrc = p * n1;
    a.mmse_mmse = p * (n1 - p * ip2 / (1.0 + p * n2));
}

}  // namespace detail

// Outage estimates for every (scheme, grid point), sharing one draw stream
// across schemes and across the whole grid (common random numbers), so the
// per-draw scheme ordering holds path-wise on the estimated curves.
inline std::vector<EstimateRow> estimate_outage(const Scenario& sc) {
    detail::validate(sc);
    const bool want_complex =
        std::find(sc.schemes.begin(), sc.schemes.end(), SchemeId::mmse_sic) != sc.schemes.end();
    const std::vector<double>& grid_db = sc.theta_grid_db;

    if (grid_db.empty()) {
        // single operating point, possibly asymmetric thresholds
        const SinrThresholds th{sc.power.theta1, sc.power.theta2};
        std::vector<std::uint64_t> outage(sc.schemes.size(), 0);
        for (std::uint64_t k = 0; k < sc.n_draws; ++k) {
            const detail::DrawInputs in = detail::make_draw(sc, k, want_complex);
            for (std::size_t s = 0; s < sc.schemes.size(); ++s) {
                const DecodeOutcome o = outcome_for(sc.schemes[s], in.fading, in.pw, th);
                if (!o.ue1_decoded) ++outage[s];
            }
        }
        std::vector<EstimateRow> rows;
        for (std::size_t s = 0; s < sc.schemes.size(); ++s) {
            const double p = static_cast<double>(outage[s]) / static_cast<double>(sc.n_draws);
            rows.push_back({sc.schemes[s], linear_to_db(sc.power.theta1), p,
                            binomial_ci95(outage[s], sc.n_draws).half_width, sc.n_draws, sc.seed});
        }
        return rows;
    }

    std::vector<double> grid(grid_db.size());
    for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = db_to_linear(grid_db[i]);
    const std::size_t ng = grid.size();
    const std::size_t nsch = sc.schemes.size();

    // hist[s][i]: draws whose first outage grid index is i (ng = never).
    const int workers = detail::pick_workers(sc);
    std::vector<std::vector<std::uint64_t>> hist(workers,
                                                 std::vector<std::uint64_t>(nsch * (ng + 1), 0));

    auto run_range = [&](int w, std::uint64_t begin, std::uint64_t end) {
        auto* h = hist[w].data();
        for (std::uint64_t k = begin; k < end; ++k) {
            const detail::DrawInputs in = detail::make_draw(sc, k, want_complex);
            detail::DrawAtoms atoms;
            detail::fill_atoms(in.fading.hsq, in.pw, atoms);
            if (want_complex) detail::fill_mmse_atoms(in, sc.power.p, atoms);
            const detail::SchemeThetaStars ts = detail::theta_stars(atoms, want_complex);
            for (std::size_t s = 0; s < nsch; ++s) {
                double star = 0.0;
                bool strict = false;
                switch (sc.schemes[s]) {
                    case SchemeId::marp: star = ts.marp; break;
                    case SchemeId::dis: star = ts.dis; break;
                    case SchemeId::mis: star = ts.mis; break;
                    case SchemeId::aw_sic: star = ts.aw_sic; break;
                    case SchemeId::aw_dis: star = ts.aw_dis; break;
                    case SchemeId::mmse_sic:
                        star = ts.mmse;
                        strict = ts.mmse_strict;
                        break;
                }
                // first grid index in outage: theta > star (or >= star when strict)
                const auto it = strict ? std::lower_bound(grid.begin(), grid.end(), star)
                                       : std::upper_bound(grid.begin(), grid.end(), star);
                h[s * (ng + 1) + static_cast<std::size_t>(it - grid.begin())] += 1;
            }
        }
    };

    if (workers == 1) {
        run_range(0, 0, sc.n_draws);
    } else {
        std::vector<std::thread> pool;
        const std::uint64_t chunk = (sc.n_draws + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const std::uint64_t b = std::min<std::uint64_t>(w * chunk, sc.n_draws);
            const std::uint64_t e = std::min<std::uint64_t>(b + chunk, sc.n_draws);
            pool.emplace_back(run_range, w, b, e);
        }
        for (auto& th : pool) th.join();
    }

    std::vector<EstimateRow> rows;
    rows.reserve(nsch * ng);
    for (std::size_t s = 0; s < nsch; ++s) {
        std::uint64_t outage = 0;
        std::vector<std::uint64_t> counts(ng, 0);
        for (std::size_t i = 0; i < ng; ++i) {
            for (int w = 0; w < workers; ++w) outage += hist[w][s * (ng + 1) + i];
            counts[i] = outage;
        }
        for (std::size_t i = 0; i < ng; ++i) {
            const double p = static_cast<double>(counts[i]) / static_cast<double>(sc.n_draws);
            rows.push_back({sc.schemes[s], grid_db[i], p,
                            binomial_ci95(counts[i], sc.n_draws).half_width, sc.n_draws, sc.seed});
        }
    }
    return rows;
}

struct ReductionEstimate {
    double value;       // (p_base - p_target) / p_base
    double half_width;  // 95% delta-method CI half-width
    double p_base;
    double p_target;
};

// Relative outage reduction of `target` against `baseline` at one symmetric
// threshold, with the covariance of the shared draws carried through the
// delta method.
inline ReductionEstimate estimate_reduction(const Scenario& sc, SchemeId baseline,
                                            SchemeId target, double theta_db) {
    detail::validate(sc);
    const double theta = db_to_linear(theta_db);
    const bool want_complex = baseline == SchemeId::mmse_sic || target == SchemeId::mmse_sic;
    const SinrThresholds th{theta, theta};
    std::uint64_t nb = 0, nt = 0, nbt = 0;
    for (std::uint64_t k = 0; k < sc.n_draws; ++k) {
        const detail::DrawInputs in = detail::make_draw(sc, k, want_complex);
        const bool ob = !outcome_for(baseline, in.fading, in.pw, th).ue1_decoded;
        const bool ot = !outcome_for(target, in.fading, in.pw, th).ue1_decoded;
        nb += ob;
        nt += ot;
        nbt += ob && ot;
    }
    const double n = static_cast<double>(sc.n_draws);
    const double pb = nb / n, pt = nt / n, pbt = nbt / n;
    if (pb == 0.0) throw std::domain_error("estimate_reduction: baseline outage is zero");
    const double r = pt / pb;
    const double vb = pb * (1.0 - pb), vt = pt * (1.0 - pt);
    const double cov = pbt - pb * pt;
    double var = 0.0;
    if (pt > 0.0)
        var = r * r / n * (vb / (pb * pb) + vt / (pt * pt) - 2.0 * cov / (pb * pt));
    return {1.0 - r, 1.959963984540054 * std::sqrt(std::max(var, 0.0)), pb, pt};
}

// Horizontal distance in dB between two monotone outage curves at a target
// outage level: positive when curve b reaches the level at a higher theta.
inline double db_gap_between_curves(const std::vector<EstimateRow>& rows_a,
                                    const std::vector<EstimateRow>& rows_b,
                                    double target_outage) {
    auto solve = [&](const std::vector<EstimateRow>& rows) {
        std::vector<double> x, y;
        for (const auto& r : rows)
            if (r.p_hat > 0.0) {
                x.push_back(r.theta_db);
                y.push_back(std::log10(r.p_hat));
            }
        if (x.size() < 2) throw std::domain_error("db gap: curve has too few positive points");
        return PchipInterpolator(std::move(x), std::move(y)).solve_first(std::log10(target_outage));
    };
    return solve(rows_b) - solve(rows_a);
}

inline double estimate_db_gap(const Scenario& sc, SchemeId scheme_a, SchemeId scheme_b,
                              double target_outage) {
    if (scheme_a == scheme_b) return 0.0;
    Scenario run = sc;
    run.schemes = {scheme_a, scheme_b};
    const std::vector<EstimateRow> rows = estimate_outage(run);
    std::vector<EstimateRow> ra, rb;
    for (const auto& r : rows) (r.scheme == scheme_a ? ra : rb).push_back(r);
    return db_gap_between_curves(ra, rb, target_outage);
}

}  // namespace twocell
