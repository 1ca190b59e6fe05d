#pragma once

#include <cmath>
#include <stdexcept>

#include "twocell/geometry.hpp"
#include "twocell/quadrature.hpp"
#include "twocell/schemes.hpp"

namespace twocell {

enum class ThresholdRegime {
    high,  // x >= 1/c: the two decode events at one BS are mutually exclusive
    low,
};

struct OutageValue {
    double p;
    ThresholdRegime regime;
};

// Base function family. Arguments: a desired-link attenuation, b interferer
// attenuation, c interferer threshold, x desired threshold, P transmit power.
// f(a,b,c;x) is P(A^c) for x >= 1/c.
inline double f_base(double a, double b, double c, double x, double P) {
    const double t1 = b / (a * x + b) * std::exp(-a * x / P);
    const double t2 = a / (a + b * c) * std::exp(-(a * x + b * c * (x + 1.0)) / P);
    return 1.0 - t1 - t2;
}

// Completion of f for the overlapping-events regime; valid only for cx < 1.
inline double g_base(double a, double b, double c, double x, double P) {
    if (c * x >= 1.0) throw std::domain_error("g_base: requires c*x < 1");
    const double expo = (b * c * (1.0 + x) + a * x * (1.0 + c)) / (P * (c * x - 1.0));
    const double add = std::exp(expo) * a * b * (1.0 - c * x) / ((a + b * c) * (a * x + b));
    return f_base(a, b, c, x, P) + add;
}

inline ThresholdRegime regime_of(double x, double c) {
    return x >= 1.0 / c ? ThresholdRegime::high : ThresholdRegime::low;
}

// P(A^c) with the regime dispatch of the f/g pair.
inline double prob_A_complement(double a, double b, double c, double x, double P) {
    return x >= 1.0 / c ? f_base(a, b, c, x, P) : g_base(a, b, c, x, P);
}

// P(E_other ∩ {clean snr below x}) at one BS: the interferer decodable while
// the desired UE cannot even be decoded interference-free. This is the
// correction mass the backhaul-forwarding schemes recover.
inline double e_func(double a, double b, double theta2, double theta1, double P) {
    const double s = a + b * theta2;
    return a / s * std::exp(-b * theta2 / P) * (1.0 - std::exp(-s * theta1 / P));
}

inline OutageValue outage_marp(const LinkAttenuations& la, double P, double th1, double th2) {
    return {prob_A_complement(la.l11(), la.l21(), th2, th1, P), regime_of(th1, th2)};
}

// Low-threshold slope of the MARP outage: coefficient(theta2) * lambda11 * theta1.
inline double outage_marp_asymptotic(const LinkAttenuations& la, double P, double th1,
                                     double th2) {
    const double b = la.l21();
    const double e = std::exp(-b * th2 / P);
    const double bracket = (1.0 - e) / b + (1.0 - th2 * e) / P;
    return bracket * la.l11() * th1;
}

inline double outage_marp_asymptotic_symmetric(const LinkAttenuations& la, double P,
                                               double theta) {
    return la.l11() / P * theta;
}

inline OutageValue outage_dis(const LinkAttenuations& la, double P, double th1, double th2) {
    const double f1 = prob_A_complement(la.l11(), la.l21(), th2, th1, P);
    // A22: desired UE2 (threshold theta2) against interferer UE1 (threshold theta1)
    const double f2 = prob_A_complement(la.l22(), la.l12(), th1, th2, P);
    const double q1 = 1.0 - std::exp(-la.l11() * th1 / P);
    return {f1 * f2 + q1 * (1.0 - f2), regime_of(th1, th2)};
}

inline OutageValue outage_aw_sic(const LinkAttenuations& la, double P, double th1, double th2) {
    const double f1 = prob_A_complement(la.l11(), la.l21(), th2, th1, P);
    const double f2 = prob_A_complement(la.l12(), la.l22(), th2, th1, P);
    return {f1 * f2, regime_of(th1, th2)};
}

inline double outage_aw_sic_asymptotic(const LinkAttenuations& la, double P, double th1,
                                       double th2) {
    auto bracket = [&](double b) {
        const double e = std::exp(-b * th2 / P);
        return (1.0 - e) / b + (1.0 - th2 * e) / P;
    };
    return bracket(la.l21()) * bracket(la.l22()) * la.l11() * la.l12() * th1 * th1;
}

inline double outage_aw_sic_asymptotic_symmetric(const LinkAttenuations& la, double P,
                                                 double theta) {
    return la.l11() * la.l12() / (P * P) * theta * theta;
}

// Anywhere decoding with distributed interference subtraction. Success is
// A11 ∪ A12 ∪ (A22 ∩ C11) ∪ (A21 ∩ C12): direct decode at either BS, or a
// decoded UE 2 forwarded across the backhaul with UE 1 clean at the other BS.
// Both forwarding directions carry mass; each contributes one e-term.
inline OutageValue outage_aw_dis(const LinkAttenuations& la, double P, double th1, double th2) {
    const double f1 = prob_A_complement(la.l11(), la.l21(), th2, th1, P);
    const double f2 = prob_A_complement(la.l12(), la.l22(), th2, th1, P);
    const double q1 = 1.0 - std::exp(-la.l11() * th1 / P);
    const double q2 = 1.0 - std::exp(-la.l12() * th1 / P);
    const double e2 = e_func(la.l12(), la.l22(), th2, th1, P);  // P(A12^c ∩ A22)
    const double e1 = e_func(la.l11(), la.l21(), th2, th1, P);  // P(A11^c ∩ A21)
    return {f1 * f2 - (f1 - q1) * e2 - e1 * (f2 - q2), regime_of(th1, th2)};
}

inline OutageValue analytic_outage(SchemeId s, const LinkAttenuations& la, double P, double th1,
                                   double th2) {
    switch (s) {
        case SchemeId::marp: return outage_marp(la, P, th1, th2);
        case SchemeId::dis: return outage_dis(la, P, th1, th2);
        case SchemeId::aw_sic: return outage_aw_sic(la, P, th1, th2);
        case SchemeId::aw_dis: return outage_aw_dis(la, P, th1, th2);
        default:
            throw std::invalid_argument("analytic_outage: no closed form for this scheme");
    }
}

// Averages fn(z, t) over the placement rectangle with the uniform location
// law; degenerate intervals collapse to point evaluations.
template <class F>
inline double location_average(const ScenarioGeometry& geom, double rel_tol, F&& fn) {
    const UePlacement& pz = geom.z;
    const UePlacement& pt = geom.t;
    const bool zf = pz.is_fixed(), tf = pt.is_fixed();
    if (zf && tf) return fn(pz.fixed_value(), pt.fixed_value());
    if (zf) {
        const double v =
            integrate([&](double t) { return fn(pz.fixed_value(), t); }, pt.lo, pt.hi, rel_tol)
                .value;
        return v / (pt.hi - pt.lo);
    }
    if (tf) {
        const double v =
            integrate([&](double z) { return fn(z, pt.fixed_value()); }, pz.lo, pz.hi, rel_tol)
                .value;
        return v / (pz.hi - pz.lo);
    }
    const auto inner = [&](double t) {
        return integrate([&](double z) { return fn(z, t); }, pz.lo, pz.hi, rel_tol * 0.1).value;
    };
    const double v = integrate(inner, pt.lo, pt.hi, rel_tol).value;
    return v / ((pz.hi - pz.lo) * (pt.hi - pt.lo));
}

// Location-averaged outage under full path-loss compensation to received
// power p_r; the compensation is folded into the attenuations inside the
// integrand.
inline double outage_location_averaged(SchemeId s, const ScenarioGeometry& geom, double p_r,
                                       double th1, double th2, double rel_tol = 1e-6) {
    return location_average(geom, rel_tol, [&](double z, double t) {
        const LinkAttenuations la =
            apply_power_control(link_attenuations(geom.d, geom.alpha, z, t));
        return analytic_outage(s, la, p_r, th1, th2).p;
    });
}

}  // namespace twocell
