#pragma once

#include <cmath>
#include <stdexcept>

#include "twocell/outage.hpp"
#include "twocell/ppp.hpp"
#include "twocell/quadrature.hpp"

namespace twocell {

// External interferer field: 1-D PPP outside (-2d, 2d). power_scale folds a
// uniform interferer transmit-power boost into the path loss (max-power
// interferers under in-cell power control use 1 + d^alpha).
struct PppModel {
    double intensity;
    double d;
    double alpha;
    double power_scale = 1.0;
    double quad_rel_tol = 1e-8;
    double sampling_truncation;  // x_max for the sampling oracle

    PppModel(double intensity_, double d_, double alpha_, double power_scale_ = 1.0,
             double quad_rel_tol_ = 1e-8)
        : intensity(intensity_),
          d(d_),
          alpha(alpha_),
          power_scale(power_scale_),
          quad_rel_tol(quad_rel_tol_),
          sampling_truncation(default_ppp_truncation(d_, alpha_)) {
        if (!(intensity >= 0.0)) throw std::invalid_argument("ppp model: intensity < 0");
        if (!(alpha > 1.0))
            throw std::invalid_argument("ppp model: alpha must exceed 1 for finite interference");
        if (!(power_scale >= 1.0)) throw std::invalid_argument("ppp model: power_scale < 1");
    }

    // Attenuation toward BS1 (at -d) / BS2 (at +d), with the power boost folded in.
    double atten1(double x) const { return (1.0 + std::pow(std::abs(x + d), alpha)) / power_scale; }
    double atten2(double x) const { return (1.0 + std::pow(std::abs(x - d), alpha)) / power_scale; }
};

namespace detail {

// lambda * integral of (1 - atten/(s+atten)) over the window complement:
// the exponent of the Laplace transform, kept unexponentiated so callers can
// compose survival products as exp-of-sums.
inline double laplace_exponent(double s, const PppModel& m, bool toward_bs1) {
    if (m.intensity == 0.0 || s == 0.0) return 0.0;
    const auto f = [&](double x) {
        const double a = toward_bs1 ? m.atten1(x) : m.atten2(x);
        return s / (s + a);
    };
    return m.intensity * integrate_outside_window(f, 2.0 * m.d, m.quad_rel_tol).value;
}

inline double laplace_exponent_joint(double s1, double s2, const PppModel& m) {
    if (m.intensity == 0.0 || (s1 == 0.0 && s2 == 0.0)) return 0.0;
    const auto f = [&](double x) {
        const double a1 = m.atten1(x);
        const double a2 = m.atten2(x);
        // 1 - a1 a2 / ((s1+a1)(s2+a2)), expanded to avoid cancellation at small s
        return (s1 * s2 + s1 * a2 + s2 * a1) / ((s1 + a1) * (s2 + a2));
    };
    return m.intensity * integrate_outside_window(f, 2.0 * m.d, m.quad_rel_tol).value;
}

}  // namespace detail

inline double laplace_i1(double s, const PppModel& m) {
    if (s < 0.0) throw std::invalid_argument("laplace_i1: s must be >= 0");
    return std::exp(-detail::laplace_exponent(s, m, true));
}

inline double laplace_i2(double s, const PppModel& m) {
    if (s < 0.0) throw std::invalid_argument("laplace_i2: s must be >= 0");
    return std::exp(-detail::laplace_exponent(s, m, false));
}

inline double laplace_joint(double s1, double s2, const PppModel& m) {
    if (s1 < 0.0 || s2 < 0.0) throw std::invalid_argument("laplace_joint: s must be >= 0");
    return std::exp(-detail::laplace_exponent_joint(s1, s2, m));
}

// Campbell moments of the aggregate interference.
inline double mean_i1(const PppModel& m) {
    if (m.intensity == 0.0) return 0.0;
    return m.intensity *
           integrate_outside_window([&](double x) { return 1.0 / m.atten1(x); }, 2.0 * m.d,
                                    m.quad_rel_tol)
               .value;
}

inline double mean_i2(const PppModel& m) {
    if (m.intensity == 0.0) return 0.0;
    return m.intensity *
           integrate_outside_window([&](double x) { return 1.0 / m.atten2(x); }, 2.0 * m.d,
                                    m.quad_rel_tol)
               .value;
}

// lambda * integral of 1/(atten1*atten2): the excess of E[I1 I2] over
// E[I1]E[I2] contributed by common points.
inline double cross_moment_integral(const PppModel& m) {
    if (m.intensity == 0.0) return 0.0;
    return m.intensity *
           integrate_outside_window([&](double x) { return 1.0 / (m.atten1(x) * m.atten2(x)); },
                                    2.0 * m.d, m.quad_rel_tol)
               .value;
}

inline double mean_i1i2(const PppModel& m) {
    return cross_moment_integral(m) + mean_i1(m) * mean_i2(m);
}

// K(a,b,th1,th2) = a th1 + b th2 (1 + th1); L is the same functional on (c,d).
inline double threshold_k(double a, double b, double th1, double th2) {
    return a * th1 + b * th2 * (1.0 + th1);
}

// W(a,b,th1,th2); V is the same functional on (c,d). Finite only for th1*th2 < 1.
inline double threshold_w(double a, double b, double th1, double th2) {
    if (th1 * th2 >= 1.0) throw std::domain_error("threshold_w: requires theta1*theta2 < 1");
    return (b * th2 * (1.0 + th1) + a * th1 * (1.0 + th2)) / (1.0 - th1 * th2);
}

struct ThresholdFunctionals {
    double k, w, l, v;
};

inline ThresholdFunctionals threshold_functionals(double a, double b, double c, double d,
                                                  double th1, double th2) {
    return {threshold_k(a, b, th1, th2), threshold_w(a, b, th1, th2),
            threshold_k(c, d, th1, th2), threshold_w(c, d, th1, th2)};
}

// MARP outage averaged over the interferer field: each survival term picks up
// the Laplace transform of I1 at its exponential argument.
inline OutageValue outage_marp_ppp(const LinkAttenuations& la, double P, double th1, double th2,
                                   const PppModel& m) {
    const double a = la.l11(), b = la.l21();
    const double k = threshold_k(a, b, th1, th2);
    auto term1 = [&](double s, double coef) {
        // coef * e^{-s/P} * L1(s), composed in log space
        return coef * std::exp(-s / P - detail::laplace_exponent(s, m, true));
    };
    double p = 1.0 - term1(a * th1, b / (a * th1 + b)) - term1(k, a / (a + b * th2));
    if (th1 < 1.0 / th2) {
        const double w = threshold_w(a, b, th1, th2);
        p += term1(w, a * b * (1.0 - th1 * th2) / ((a + b * th2) * (a * th1 + b)));
    }
    return {p, regime_of(th1, th2)};
}

// AW+SIC outage under the interferer field, with the joint transform carrying
// the I1-I2 correlation across every cross term.
inline OutageValue outage_aw_ppp(const LinkAttenuations& la, double P, double th1, double th2,
                                 const PppModel& m) {
    const double a = la.l11(), b = la.l21();
    const double c = la.l12(), d = la.l22();
    const double k = threshold_k(a, b, th1, th2);
    const double l = threshold_k(c, d, th1, th2);

    const double ca1 = b / (a * th1 + b);        // coefficient of the E11-type term
    const double ca2 = a / (a + b * th2);        // coefficient of the K-type term
    const double cc1 = d / (c * th1 + d);
    const double cc2 = c / (c + d * th2);

    auto e1 = [&](double s) { return std::exp(-s / P - detail::laplace_exponent(s, m, true)); };
    auto e2 = [&](double s) { return std::exp(-s / P - detail::laplace_exponent(s, m, false)); };
    auto ej = [&](double s1, double s2) {
        return std::exp(-(s1 + s2) / P - detail::laplace_exponent_joint(s1, s2, m));
    };

    double p = 1.0;
    p -= ca1 * e1(a * th1) + ca2 * e1(k);
    p -= cc1 * e2(c * th1) + cc2 * e2(l);
    p += ca1 * cc1 * ej(a * th1, c * th1);
    p += ca1 * cc2 * ej(a * th1, l);
    p += ca2 * cc1 * ej(k, c * th1);
    p += ca2 * cc2 * ej(k, l);

    if (th1 < 1.0 / th2) {
        const double w = threshold_w(a, b, th1, th2);
        const double v = threshold_w(c, d, th1, th2);
        const double cw = a * b * (1.0 - th1 * th2) / ((a + b * th2) * (a * th1 + b));
        const double cv = c * d * (1.0 - th1 * th2) / ((c + d * th2) * (c * th1 + d));
        p += cv * (e2(v) - ca1 * ej(a * th1, v) - ca2 * ej(k, v));
        p += cw * (e1(w) - cc1 * ej(w, c * th1) - cc2 * ej(w, l));
        p += cw * cv * ej(w, v);
    }
    return {p, regime_of(th1, th2)};
}

inline OutageValue analytic_outage_ppp(SchemeId s, const LinkAttenuations& la, double P,
                                       double th1, double th2, const PppModel& m) {
    switch (s) {
        case SchemeId::marp: return outage_marp_ppp(la, P, th1, th2, m);
        case SchemeId::aw_sic: return outage_aw_ppp(la, P, th1, th2, m);
        default:
            throw std::invalid_argument(
                "analytic_outage_ppp: interferer-field closed forms cover MARP and AW+SIC only");
    }
}

// Low-threshold behavior and the dB offset it implies between the curves
// with and without the interferer field.
inline double asymptotic_marp_ppp(const LinkAttenuations& la, double P, double theta,
                                  const PppModel& m) {
    return la.l11() / P * (P * mean_i1(m) + 1.0) * theta;
}

// Exact second-order coefficient (keeps the I1-I2 correlation).
inline double asymptotic_aw_ppp(const LinkAttenuations& la, double P, double theta,
                                const PppModel& m) {
    const double ei1 = mean_i1(m), ei2 = mean_i2(m);
    const double ei12 = cross_moment_integral(m) + ei1 * ei2;
    return la.l11() * la.l12() / (P * P) *
           (P * P * ei12 + P * (ei1 + ei2) + 1.0) * theta * theta;
}

// Low-spatial-correlation simplification (P E[I1] + 1)^2.
inline double asymptotic_aw_ppp_uncorrelated(const LinkAttenuations& la, double P, double theta,
                                             const PppModel& m) {
    const double f = P * mean_i1(m) + 1.0;
    return la.l11() * la.l12() / (P * P) * f * f * theta * theta;
}

inline double horizontal_shift_db(double P, const PppModel& m) {
    return 10.0 * std::log10(P * mean_i1(m) + 1.0);
}

}  // namespace twocell
