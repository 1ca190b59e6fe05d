#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "twocell/ppp.hpp"
#include "twocell/ppp_outage.hpp"

using namespace twocell;

namespace {
const ScenarioGeometry kGeom = ScenarioGeometry::fixed(2.0, 4.0, 2.0, -2.0);
}

TEST_CASE("empty process yields zero interference") {
    RngStream r(1, 0, 0), l(1, 0, 1);
    const PppRealization ppp = sample_ppp(kGeom, 0.0, 50.0, 1.0, r, l);
    CHECK(ppp.points.empty());
    CHECK(ppp.i1 == 0.0);
    CHECK(ppp.i2 == 0.0);
}

TEST_CASE("argument validation") {
    RngStream r(1), l(2);
    CHECK_THROWS_AS(sample_ppp(kGeom, 0.25, 3.9, 1.0, r, l), std::invalid_argument);
    CHECK_THROWS_AS(sample_ppp(kGeom, 0.25, 50.0, 0.5, r, l), std::invalid_argument);
    CHECK_THROWS_AS(sample_ppp(kGeom, -0.1, 50.0, 1.0, r, l), std::invalid_argument);
}

TEST_CASE("points live outside the cooperating cells and carry positive marks") {
    RngStream r(9, 0, 0), l(9, 0, 1);
    const PppRealization ppp = sample_ppp(kGeom, 0.5, 40.0, 1.0, r, l);
    REQUIRE(!ppp.points.empty());
    for (std::size_t i = 0; i < ppp.points.size(); ++i) {
        CHECK(std::abs(ppp.points[i]) >= 4.0);
        CHECK(std::abs(ppp.points[i]) <= 40.0);
        CHECK(ppp.mark1[i] > 0.0);
        CHECK(ppp.mark2[i] > 0.0);
    }
}

TEST_CASE("point count matches the Poisson mean and variance") {
    const double lam = 0.25, xmax = 50.0;
    const double window = 2.0 * (xmax - 4.0);
    const std::size_t n = 20000;
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        RngStream r = draw_stream(21, k, StreamRole::ppp_right);
        RngStream l = draw_stream(21, k, StreamRole::ppp_left);
        const PppRealization ppp = sample_ppp(kGeom, lam, xmax, 1.0, r, l);
        const double c = static_cast<double>(ppp.points.size());
        sum += c;
        sum2 += c * c;
    }
    const double mean = sum / n;
    const double target = lam * window;
    const double se = std::sqrt(target / n);
    CHECK(std::abs(mean - target) < 3.0 * se);
    const double var = sum2 / n - mean * mean;
    CHECK(var == Catch::Approx(target).epsilon(0.05));
}

TEST_CASE("aggregate interference matches the Campbell-theorem mean") {
    const PppModel model(0.25, 2.0, 4.0, 1.0);
    const double target = mean_i1(model);
    const std::size_t n = 100000;
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        RngStream r = draw_stream(33, k, StreamRole::ppp_right);
        RngStream l = draw_stream(33, k, StreamRole::ppp_left);
        const InterferencePair ip =
            sample_ppp_interference(2.0, 4.0, 0.25, model.sampling_truncation, 1.0, r, l);
        sum += ip.i1;
        sum2 += ip.i1 * ip.i1;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum2 / n - mean * mean) / n);
    CHECK(std::abs(mean - target) < 3.0 * se);
}

TEST_CASE("interference is monotone in the truncation radius and the tail is negligible") {
    const std::size_t n = 20000;
    double sum50 = 0.0, sum100 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        RngStream r1 = draw_stream(55, k, StreamRole::ppp_right);
        RngStream l1 = draw_stream(55, k, StreamRole::ppp_left);
        RngStream r2 = draw_stream(55, k, StreamRole::ppp_right);
        RngStream l2 = draw_stream(55, k, StreamRole::ppp_left);
        const InterferencePair a = sample_ppp_interference(2.0, 4.0, 0.25, 50.0, 1.0, r1, l1);
        const InterferencePair b = sample_ppp_interference(2.0, 4.0, 0.25, 100.0, 1.0, r2, l2);
        REQUIRE(b.i1 >= a.i1);  // gap construction only appends points
        sum50 += a.i1;
        sum100 += b.i1;
    }
    CHECK((sum100 - sum50) / sum100 < 1e-3);
}

TEST_CASE("power scale boosts every contribution uniformly") {
    RngStream r1(77, 0, 0), l1(77, 0, 1), r2(77, 0, 0), l2(77, 0, 1);
    const InterferencePair base = sample_ppp_interference(2.0, 4.0, 0.25, 60.0, 1.0, r1, l1);
    const InterferencePair boosted = sample_ppp_interference(2.0, 4.0, 0.25, 60.0, 17.0, r2, l2);
    CHECK(boosted.i1 == Catch::Approx(17.0 * base.i1).epsilon(1e-12));
    CHECK(boosted.i2 == Catch::Approx(17.0 * base.i2).epsilon(1e-12));
}

TEST_CASE("interferer marks average to one") {
    double sum = 0.0;
    std::size_t cnt = 0;
    for (std::uint64_t k = 0; k < 5000; ++k) {
        RngStream r = draw_stream(88, k, StreamRole::ppp_right);
        RngStream l = draw_stream(88, k, StreamRole::ppp_left);
        const PppRealization ppp = sample_ppp(kGeom, 0.25, 50.0, 1.0, r, l);
        for (double g : ppp.mark1) sum += g, ++cnt;
    }
    CHECK(sum / static_cast<double>(cnt) == Catch::Approx(1.0).margin(0.03));
}
