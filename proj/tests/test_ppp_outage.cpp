#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "twocell/events.hpp"
#include "twocell/fading.hpp"
#include "twocell/montecarlo.hpp"
#include "twocell/outage.hpp"
#include "twocell/ppp_outage.hpp"

using namespace twocell;

namespace {

struct PppMc {
    double marp, aw;
};

// Joint interferer-field + fading oracle for the averaged outage formulas.
PppMc mc_ppp_outage(const LinkAttenuations& la, double p, double th1, double th2,
                    const PppModel& m, std::uint64_t n, std::uint64_t seed) {
    const SinrThresholds th{th1, th2};
    std::uint64_t cm = 0, ca = 0;
    for (std::uint64_t k = 0; k < n; ++k) {
        RngStream right = draw_stream(seed, k, StreamRole::ppp_right);
        RngStream left = draw_stream(seed, k, StreamRole::ppp_left);
        const InterferencePair ip = sample_ppp_interference(
            m.d, m.alpha, m.intensity, m.sampling_truncation, m.power_scale, right, left);
        const EffectivePowers pw = EffectivePowers::with_interference(p, ip.i1, ip.i2);
        RngStream fs = draw_stream(seed, k, StreamRole::fading);
        const FadingDraw d = sample_fading(la, fs);
        cm += !event_A(0, 0, d, pw, th);
        ca += !(event_A(0, 0, d, pw, th) || event_A(0, 1, d, pw, th));
    }
    return {static_cast<double>(cm) / n, static_cast<double>(ca) / n};
}

double sigma3(double p, std::uint64_t n) {
    return 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

const PppModel kModel(0.25, 2.0, 4.0, 1.0);

}  // namespace

TEST_CASE("Laplace transform basics") {
    CHECK(laplace_i1(0.0, kModel) == 1.0);
    CHECK(laplace_i2(0.0, kModel) == 1.0);
    const PppModel empty(0.0, 2.0, 4.0, 1.0);
    for (double s : {0.1, 1.0, 100.0}) CHECK(laplace_i1(s, empty) == 1.0);
    CHECK_THROWS_AS(laplace_i1(-1.0, kModel), std::invalid_argument);
    CHECK_THROWS_AS(PppModel(0.25, 2.0, 0.9, 1.0), std::invalid_argument);
}

TEST_CASE("Laplace transform matches the sampled field") {
    const std::uint64_t n = 100000;
    double sum = 0.0, sum2 = 0.0;
    for (std::uint64_t k = 0; k < n; ++k) {
        RngStream r = draw_stream(501, k, StreamRole::ppp_right);
        RngStream l = draw_stream(501, k, StreamRole::ppp_left);
        const InterferencePair ip =
            sample_ppp_interference(2.0, 4.0, 0.25, kModel.sampling_truncation, 1.0, r, l);
        const double v = std::exp(-10.0 * ip.i1);
        sum += v;
        sum2 += v * v;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum2 / n - mean * mean) / n);
    CHECK(std::abs(laplace_i1(10.0, kModel) - mean) < 3.0 * se);
}

TEST_CASE("joint transform marginalizes and bounds") {
    for (double s : {0.3, 2.0, 25.0}) {
        CHECK(laplace_joint(s, 0.0, kModel) == Catch::Approx(laplace_i1(s, kModel)).epsilon(1e-9));
        CHECK(laplace_joint(0.0, s, kModel) == Catch::Approx(laplace_i2(s, kModel)).epsilon(1e-9));
    }
    CHECK(laplace_joint(5.0, 7.0, kModel) <=
          std::min(laplace_i1(5.0, kModel), laplace_i2(7.0, kModel)) + 1e-12);
}

TEST_CASE("laplace_i1 is completely monotone on a sampled grid") {
    std::vector<double> v;
    for (double x = 0.5; x <= 120.0; x += 2.5) v.push_back(laplace_i1(x, kModel));
    for (std::size_t i = 1; i < v.size(); ++i) REQUIRE(v[i] < v[i - 1]);
    // log-convexity on the arithmetic grid
    for (std::size_t i = 1; i + 1 < v.size(); ++i)
        REQUIRE(std::log(v[i]) <= 0.5 * (std::log(v[i - 1]) + std::log(v[i + 1])) + 1e-12);
}

TEST_CASE("threshold functionals") {
    CHECK(threshold_k(17.0, 5.0, 0.0, 0.7) == Catch::Approx(5.0 * 0.7));
    CHECK(threshold_w(17.0, 5.0, 0.0, 0.7) == Catch::Approx(5.0 * 0.7));
    CHECK(threshold_k(17.0, 5.0, 0.7, 0.0) == Catch::Approx(17.0 * 0.7));
    CHECK(threshold_w(17.0, 5.0, 0.7, 0.0) == Catch::Approx(17.0 * 0.7));
    CHECK(threshold_k(17.0, 17.0, 0.5, 0.5) == Catch::Approx(21.25));
    CHECK(threshold_w(17.0, 17.0, 0.5, 0.5) == Catch::Approx(34.0));
    CHECK_THROWS_AS(threshold_w(17.0, 17.0, 1.0, 1.0), std::domain_error);
    const ThresholdFunctionals tf = threshold_functionals(17.0, 17.0, 3.0, 4.0, 0.5, 0.5);
    CHECK(tf.k == Catch::Approx(21.25));
    CHECK(tf.l == Catch::Approx(3.0 * 0.5 + 4.0 * 0.5 * 1.5));
}

TEST_CASE("interference moments") {
    CHECK(mean_i1(kModel) == Catch::Approx(mean_i2(kModel)).epsilon(1e-10));
    CHECK(mean_i1(PppModel(0.0, 2.0, 4.0)) == 0.0);
    CHECK(mean_i1i2(kModel) >= mean_i1(kModel) * mean_i2(kModel));
    CHECK(mean_i1i2(kModel) - mean_i1(kModel) * mean_i2(kModel) ==
          Catch::Approx(cross_moment_integral(kModel)).epsilon(1e-12));

    // sample moments over realized fields
    const std::uint64_t n = 100000;
    double s1 = 0.0, s12 = 0.0, q12 = 0.0;
    for (std::uint64_t k = 0; k < n; ++k) {
        RngStream r = draw_stream(503, k, StreamRole::ppp_right);
        RngStream l = draw_stream(503, k, StreamRole::ppp_left);
        const InterferencePair ip =
            sample_ppp_interference(2.0, 4.0, 0.25, kModel.sampling_truncation, 1.0, r, l);
        s1 += ip.i1;
        s12 += ip.i1 * ip.i2;
        q12 += ip.i1 * ip.i2 * ip.i1 * ip.i2;
    }
    const double m12 = s12 / n;
    const double se12 = std::sqrt((q12 / n - m12 * m12) / n);
    CHECK(std::abs(mean_i1i2(kModel) - m12) < 3.0 * se12);
    CHECK(mean_i1(kModel) == Catch::Approx(s1 / n).margin(3e-4));

    // power boost scales the mean linearly and the transform argument
    const PppModel boosted(0.25, 2.0, 4.0, 17.0);
    CHECK(mean_i1(boosted) == Catch::Approx(17.0 * mean_i1(kModel)).epsilon(1e-9));
    CHECK(laplace_i1(1.0, boosted) == Catch::Approx(laplace_i1(17.0, kModel)).epsilon(1e-9));
}

TEST_CASE("averaged MARP outage under the interferer field") {
    const LinkAttenuations la = link_attenuations(2.0, 4.0, 2.0, -2.0);
    SECTION("empty field reduces to the clean closed form") {
        const PppModel empty(0.0, 2.0, 4.0);
        for (double th : {0.4, 1.0, 2.0})
            CHECK(outage_marp_ppp(la, 100.0, th, th, empty).p ==
                  Catch::Approx(outage_marp(la, 100.0, th, th).p).epsilon(1e-12));
    }
    SECTION("vanishing intensity converges to the clean curve") {
        const PppModel faint(1e-8, 2.0, 4.0);
        for (double th_db = -20.0; th_db <= 10.0; th_db += 5.0) {
            const double th = db_to_linear(th_db);
            CHECK(std::abs(outage_marp_ppp(la, 100.0, th, th, faint).p -
                           outage_marp(la, 100.0, th, th).p) < 1e-6);
        }
    }
    SECTION("matches the joint Monte Carlo oracle") {
        const std::uint64_t n = 200000;
        const PppMc mc = mc_ppp_outage(la, 100.0, 1.0, 1.0, kModel, n, 505);
        const double v = outage_marp_ppp(la, 100.0, 1.0, 1.0, kModel).p;
        CHECK(std::abs(v - mc.marp) < sigma3(v, n));
    }
}

TEST_CASE("averaged AW+SIC outage under the interferer field") {
    const LinkAttenuations la = link_attenuations(2.0, 4.0, 2.0, -2.0);
    SECTION("empty field reduces to the clean closed form") {
        const PppModel empty(0.0, 2.0, 4.0);
        for (double th : {0.4, 1.0, 2.0})
            CHECK(outage_aw_ppp(la, 100.0, th, th, empty).p ==
                  Catch::Approx(outage_aw_sic(la, 100.0, th, th).p).epsilon(1e-12));
    }
    SECTION("headline reduction at the cell edge") {
        const double m = outage_marp_ppp(la, 100.0, 1.0, 1.0, kModel).p;
        const double a = outage_aw_ppp(la, 100.0, 1.0, 1.0, kModel).p;
        CHECK((m - a) / m == Catch::Approx(0.59).margin(0.02));
        CHECK(a <= m);
    }
    SECTION("matches the joint oracle off the symmetric point, both regimes") {
        const LinkAttenuations lax = link_attenuations(2.0, 4.0, 1.0, -0.3);
        const std::uint64_t n = 200000;
        {
            const PppMc mc = mc_ppp_outage(lax, 60.0, 1.2, 1.1, kModel, n, 506);
            const double v = outage_aw_ppp(lax, 60.0, 1.2, 1.1, kModel).p;
            CHECK(std::abs(v - mc.aw) < sigma3(v, n));
            const double vm = outage_marp_ppp(lax, 60.0, 1.2, 1.1, kModel).p;
            CHECK(std::abs(vm - mc.marp) < sigma3(vm, n));
        }
        {
            const PppMc mc = mc_ppp_outage(lax, 60.0, 0.4, 0.8, kModel, n, 507);
            const double v = outage_aw_ppp(lax, 60.0, 0.4, 0.8, kModel).p;
            CHECK(std::abs(v - mc.aw) < sigma3(v, n));
        }
    }
    SECTION("max-power interferers, power-controlled cells") {
        const PppModel boosted(0.25, 2.0, 4.0, 17.0);
        const LinkAttenuations lap = apply_power_control(link_attenuations(2.0, 4.0, 1.0, -1.0));
        const std::uint64_t n = 200000;
        const PppMc mc = mc_ppp_outage(lap, 10.0, 1.0, 1.0, boosted, n, 508);
        const double v = outage_aw_ppp(lap, 10.0, 1.0, 1.0, boosted).p;
        CHECK(std::abs(v - mc.aw) < sigma3(v, n));
    }
}

TEST_CASE("location-averaged outage under the field matches a joint oracle") {
    // power-controlled cells, max-power interferers, uniform placements
    const PppModel boosted(0.25, 2.0, 4.0, 17.0);
    const ScenarioGeometry g(2.0, 4.0, UePlacement::uniform(0.0, 2.0),
                             UePlacement::uniform(-2.0, 0.0));
    const double quad = location_average(g, 1e-5, [&](double z, double t) {
        const LinkAttenuations la = apply_power_control(link_attenuations(2.0, 4.0, z, t));
        return outage_aw_ppp(la, 10.0, 1.0, 1.0, boosted).p;
    });
    const std::uint64_t n = 100000;
    std::uint64_t cnt = 0;
    const SinrThresholds th{1.0, 1.0};
    for (std::uint64_t k = 0; k < n; ++k) {
        RngStream ls = draw_stream(511, k, StreamRole::locations);
        const double z = 2.0 * ls.next_unit_open();
        const double t = -2.0 + 2.0 * ls.next_unit_open();
        const LinkAttenuations la = apply_power_control(link_attenuations(2.0, 4.0, z, t));
        RngStream right = draw_stream(511, k, StreamRole::ppp_right);
        RngStream left = draw_stream(511, k, StreamRole::ppp_left);
        const InterferencePair ip =
            sample_ppp_interference(2.0, 4.0, 0.25, boosted.sampling_truncation, 17.0, right,
                                    left);
        const EffectivePowers pw = EffectivePowers::with_interference(10.0, ip.i1, ip.i2);
        RngStream fs = draw_stream(511, k, StreamRole::fading);
        const FadingDraw d = sample_fading(la, fs);
        cnt += !(event_A(0, 0, d, pw, th) || event_A(0, 1, d, pw, th));
    }
    const double mc = static_cast<double>(cnt) / static_cast<double>(n);
    CHECK(std::abs(quad - mc) < sigma3(quad, n));
}

TEST_CASE("probabilities stay in range over randomized sweeps") {
    RngStream r(509);
    for (int i = 0; i < 300; ++i) {
        const double z = -2.0 + 4.0 * r.next_unit_open();
        const double t = -2.0 + 4.0 * r.next_unit_open();
        const double p = 1.0 + 300.0 * r.next_unit_open();
        const double th1 = 0.02 + 3.0 * r.next_unit_open();
        const double th2 = 0.02 + 3.0 * r.next_unit_open();
        const LinkAttenuations la = link_attenuations(2.0, 4.0, z, t);
        const double pm = outage_marp_ppp(la, p, th1, th2, kModel).p;
        const double pa = outage_aw_ppp(la, p, th1, th2, kModel).p;
        REQUIRE(pm >= 0.0);
        REQUIRE(pm <= 1.0);
        REQUIRE(pa >= 0.0);
        REQUIRE(pa <= 1.0 + 1e-12);
        REQUIRE(pa <= pm + 1e-12);
    }
}

TEST_CASE("asymptotics and the horizontal shift") {
    const LinkAttenuations la = link_attenuations(2.0, 4.0, 2.0, -2.0);
    SECTION("slope-one asymptote under the field") {
        const double th = 1e-4;
        const double exact = outage_marp_ppp(la, 100.0, th, th, kModel).p;
        CHECK(exact / asymptotic_marp_ppp(la, 100.0, th, kModel) ==
              Catch::Approx(1.0).epsilon(0.01));
    }
    SECTION("slope-two asymptote keeps the correlation term") {
        const double th = 1e-4;
        const double exact = outage_aw_ppp(la, 100.0, th, th, kModel).p;
        CHECK(exact / asymptotic_aw_ppp(la, 100.0, th, kModel) ==
              Catch::Approx(1.0).epsilon(0.01));
        // exact and simplified coefficients differ by the cross integral
        const double diff = asymptotic_aw_ppp(la, 100.0, th, kModel) -
                            asymptotic_aw_ppp_uncorrelated(la, 100.0, th, kModel);
        const double expect = la.l11() * la.l12() * cross_moment_integral(kModel) * th * th;
        CHECK(diff == Catch::Approx(expect).epsilon(1e-9));
    }
    SECTION("empty field has no shift") {
        CHECK(horizontal_shift_db(100.0, PppModel(0.0, 2.0, 4.0)) == 0.0);
    }
    SECTION("measured curve offset equals the predicted shift") {
        const double predicted = horizontal_shift_db(100.0, kModel);
        auto solve_theta_db = [&](bool with_field, double target) {
            double lo = -45.0, hi = 0.0;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double th = db_to_linear(mid);
                const double p = with_field ? outage_marp_ppp(la, 100.0, th, th, kModel).p
                                            : outage_marp(la, 100.0, th, th).p;
                (p < target ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
        };
        const double measured = solve_theta_db(false, 1e-3) - solve_theta_db(true, 1e-3);
        CHECK(std::abs(measured - predicted) < 0.2);
    }
}
