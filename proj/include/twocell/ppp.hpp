#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "twocell/geometry.hpp"
#include "twocell/rng.hpp"

namespace twocell {

// One realization of the external interferer field: a 1-D PPP on
// R \ (-2d, 2d), truncated at |x| <= x_max, with an independent Exp(1)
// fading mark per point toward each BS. BS 1 sits at -d, BS 2 at +d.
struct PppRealization {
    std::vector<double> points;
    std::vector<double> mark1;  // G_{x,1}
    std::vector<double> mark2;  // G_{x,2}
    double i1 = 0.0;            // sum of power_scale * G_{x,1} / (1 + |x+d|^alpha)
    double i2 = 0.0;
};

struct InterferencePair {
    double i1 = 0.0;
    double i2 = 0.0;
};

namespace detail {

// Points on one half-line are generated outward from 2d via exponential
// gaps, so enlarging x_max only appends points: I_k is nondecreasing in
// x_max for a common stream.
template <class Sink>
inline void sample_ppp_halfline(double sign, double d, double alpha, double intensity,
                                double x_max, double power_scale, RngStream& rng, Sink&& sink) {
    double r = 2.0 * d;
    for (;;) {
        r += rng.next_exp(intensity);
        if (r > x_max) break;
        const double x = sign * r;
        const double g1 = -std::log(rng.next_unit_open());
        const double g2 = -std::log(rng.next_unit_open());
        const double a1 = 1.0 + std::pow(std::abs(x + d), alpha);
        const double a2 = 1.0 + std::pow(std::abs(x - d), alpha);
        sink(x, g1, g2, power_scale * g1 / a1, power_scale * g2 / a2);
    }
}

}  // namespace detail

inline void check_ppp_args(double d, double intensity, double x_max, double power_scale) {
    if (!(intensity >= 0.0)) throw std::invalid_argument("ppp: intensity must be >= 0");
    if (!(x_max > 2.0 * d)) throw std::invalid_argument("ppp: x_max must exceed 2d");
    if (!(power_scale >= 1.0)) throw std::invalid_argument("ppp: power_scale must be >= 1");
}

// Aggregate interference only; consumes the two streams exactly like
// sample_ppp does.
inline InterferencePair sample_ppp_interference(double d, double alpha, double intensity,
                                                double x_max, double power_scale,
                                                RngStream& right, RngStream& left) {
    check_ppp_args(d, intensity, x_max, power_scale);
    InterferencePair out;
    if (intensity == 0.0) return out;
    auto add = [&](double, double, double, double c1, double c2) {
        out.i1 += c1;
        out.i2 += c2;
    };
    detail::sample_ppp_halfline(+1.0, d, alpha, intensity, x_max, power_scale, right, add);
    detail::sample_ppp_halfline(-1.0, d, alpha, intensity, x_max, power_scale, left, add);
    return out;
}

inline PppRealization sample_ppp(const ScenarioGeometry& geom, double intensity, double x_max,
                                 double power_scale, RngStream& right, RngStream& left) {
    check_ppp_args(geom.d, intensity, x_max, power_scale);
    PppRealization out;
    if (intensity == 0.0) return out;
    auto add = [&](double x, double g1, double g2, double c1, double c2) {
        out.points.push_back(x);
        out.mark1.push_back(g1);
        out.mark2.push_back(g2);
        out.i1 += c1;
        out.i2 += c2;
    };
    detail::sample_ppp_halfline(+1.0, geom.d, geom.alpha, intensity, x_max, power_scale, right, add);
    detail::sample_ppp_halfline(-1.0, geom.d, geom.alpha, intensity, x_max, power_scale, left, add);
    return out;
}

// Truncation radius at which the neglected tail of the interference
// integrals is below ~1e-4 of the total for alpha >= 2.
inline double default_ppp_truncation(double d, double alpha) {
    return 2.0 * d + std::pow(1e6, 1.0 / alpha) * (2.0 * d);
}

}  // namespace twocell
