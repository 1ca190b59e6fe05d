#include <catch2/catch_amalgamated.hpp>

#include "twocell/geometry.hpp"

using namespace twocell;

TEST_CASE("link attenuations from displacements") {
    SECTION("both UEs at the common cell edge") {
        const LinkAttenuations la = link_attenuations(2.0, 4.0, 2.0, -2.0);
        CHECK(la.l11() == 17.0);
        CHECK(la.l22() == 17.0);
        CHECK(la.l12() == 17.0);
        CHECK(la.l21() == 17.0);
    }
    SECTION("cell-center UEs") {
        const LinkAttenuations la = link_attenuations(2.0, 4.0, 0.0, 0.0);
        CHECK(la.l11() == 1.0);
        CHECK(la.l22() == 1.0);
        CHECK(la.l12() == 257.0);
        CHECK(la.l21() == 257.0);
    }
    SECTION("midway UEs") {
        const LinkAttenuations la = link_attenuations(2.0, 4.0, 1.0, -1.0);
        CHECK(la.l11() == 2.0);
        CHECK(la.l22() == 2.0);
        CHECK(la.l12() == 82.0);
        CHECK(la.l21() == 82.0);
    }
    SECTION("displacements outside the cell are rejected") {
        CHECK_THROWS_AS(link_attenuations(2.0, 4.0, 2.5, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(link_attenuations(2.0, 4.0, 0.0, -2.1), std::invalid_argument);
    }
    SECTION("every attenuation is at least one") {
        for (double z : {-2.0, -0.7, 0.0, 1.3, 2.0})
            for (double t : {-2.0, -1.1, 0.0, 0.4, 2.0}) {
                const LinkAttenuations la = link_attenuations(2.0, 4.0, z, t);
                for (int ue = 0; ue < 2; ++ue)
                    for (int bs = 0; bs < 2; ++bs) CHECK(la(ue, bs) >= 1.0);
            }
    }
    SECTION("symmetric worst case has equal attenuations") {
        const LinkAttenuations la = link_attenuations(3.0, 3.5, 3.0, -3.0);
        CHECK(la.l11() == Catch::Approx(la.l12()));
        CHECK(la.l11() == Catch::Approx(la.l21()));
        CHECK(la.l11() == Catch::Approx(la.l22()));
    }
}

TEST_CASE("power-control transform") {
    SECTION("symmetric edge case collapses to unit attenuations") {
        const LinkAttenuations la = link_attenuations(2.0, 4.0, 2.0, -2.0);
        const LinkAttenuations pc = apply_power_control(la);
        CHECK(pc.l11() == 1.0);
        CHECK(pc.l22() == 1.0);
        CHECK(pc.l12() == 1.0);
        CHECK(pc.l21() == 1.0);
    }
    SECTION("midway case scales the cross links") {
        const LinkAttenuations pc =
            apply_power_control(link_attenuations(2.0, 4.0, 1.0, -1.0));
        CHECK(pc.l12() == 41.0);
        CHECK(pc.l21() == 41.0);
    }
    SECTION("identity at the cell centers") {
        const LinkAttenuations la = link_attenuations(2.0, 4.0, 0.0, 0.0);
        const LinkAttenuations pc = apply_power_control(la);
        CHECK(pc.l11() == la.l11());
        CHECK(pc.l12() == la.l12());
        CHECK(pc.l21() == la.l21());
        CHECK(pc.l22() == la.l22());
    }
    SECTION("own links pin to one and cross links stay above one") {
        for (double z : {-1.9, -0.3, 0.8, 2.0})
            for (double t : {-2.0, -0.6, 0.1, 1.7}) {
                const LinkAttenuations pc =
                    apply_power_control(link_attenuations(2.0, 4.0, z, t));
                CHECK(pc.l11() == 1.0);
                CHECK(pc.l22() == 1.0);
                CHECK(pc.l12() >= 1.0);
                CHECK(pc.l21() >= 1.0);
                // with the own links at one, the transform is idempotent
                const LinkAttenuations pc2 = apply_power_control(pc);
                CHECK(pc2.l12() == pc.l12());
                CHECK(pc2.l21() == pc.l21());
            }
    }
}

TEST_CASE("scenario geometry validation") {
    CHECK_THROWS_AS(ScenarioGeometry(2.0, 4.0, UePlacement::uniform(1.0, 0.5),
                                     UePlacement::at(0.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(ScenarioGeometry(2.0, 4.0, UePlacement::at(0.0),
                                     UePlacement::uniform(-3.0, 0.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(ScenarioGeometry(-1.0, 4.0, UePlacement::at(0.0), UePlacement::at(0.0)),
                    std::invalid_argument);
    const ScenarioGeometry g(2.0, 4.0, UePlacement::uniform(1.0, 2.0), UePlacement::at(-1.0));
    CHECK_FALSE(g.is_fixed());
    CHECK_THROWS_AS(link_attenuations(g), std::invalid_argument);
}

TEST_CASE("dB conversions") {
    CHECK(db_to_linear(20.0) == Catch::Approx(100.0));
    CHECK(linear_to_db(100.0) == Catch::Approx(20.0));
}
