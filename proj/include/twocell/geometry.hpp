#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace twocell {

// Placement of a UE along the cell axis, relative to its own BS: either a
// fixed displacement or uniform on [lo, hi].
struct UePlacement {
    double lo = 0.0;
    double hi = 0.0;

    static UePlacement at(double v) { return {v, v}; }
    static UePlacement uniform(double lo, double hi) { return {lo, hi}; }

    bool is_fixed() const { return lo == hi; }
    double fixed_value() const { return lo; }
};

// Two facing cells of half-length d on a line. UE 1 sits at displacement z
// from BS 1, UE 2 at displacement t from BS 2; the common cell edge is at
// z = d (equivalently t = -d).
struct ScenarioGeometry {
    double d;
    double alpha;
    UePlacement z;
    UePlacement t;

    ScenarioGeometry(double d_, double alpha_, UePlacement z_, UePlacement t_)
        : d(d_), alpha(alpha_), z(z_), t(t_) {
        if (!(d > 0.0)) throw std::invalid_argument("geometry: d must be > 0");
        if (!(alpha > 0.0)) throw std::invalid_argument("geometry: alpha must be > 0");
        check_placement(z, "z");
        check_placement(t, "t");
    }

    static ScenarioGeometry fixed(double d, double alpha, double z, double t) {
        return {d, alpha, UePlacement::at(z), UePlacement::at(t)};
    }

    bool is_fixed() const { return z.is_fixed() && t.is_fixed(); }

  private:
    void check_placement(const UePlacement& p, const char* name) const {
        if (!(p.lo <= p.hi))
            throw std::invalid_argument(std::string("geometry: ") + name + " interval reversed");
        if (p.lo < -d || p.hi > d)
            throw std::invalid_argument(std::string("geometry: ") + name + " outside [-d, d]");
    }
};

// The four link attenuations lambda_ij = 1 + d_ij^alpha; |h_ij|^2 ~ Exp(lambda_ij).
// Index convention: ue and bs are 0-based (UE i+1, BS j+1 in 1-based terms).
struct LinkAttenuations {
    double lam[2][2];

    double operator()(int ue, int bs) const { return lam[ue][bs]; }

    double l11() const { return lam[0][0]; }
    double l12() const { return lam[0][1]; }
    double l21() const { return lam[1][0]; }
    double l22() const { return lam[1][1]; }
};

inline LinkAttenuations link_attenuations(double d, double alpha, double z, double t) {
    if (z < -d || z > d) throw std::invalid_argument("link_attenuations: z outside [-d, d]");
    if (t < -d || t > d) throw std::invalid_argument("link_attenuations: t outside [-d, d]");
    LinkAttenuations la;
    la.lam[0][0] = 1.0 + std::pow(std::abs(z), alpha);       // d11 = |z|
    la.lam[0][1] = 1.0 + std::pow(2.0 * d - z, alpha);       // d12 = 2d - z
    la.lam[1][0] = 1.0 + std::pow(2.0 * d + t, alpha);       // d21 = 2d + t
    la.lam[1][1] = 1.0 + std::pow(std::abs(t), alpha);       // d22 = |t|
    return la;
}

inline LinkAttenuations link_attenuations(const ScenarioGeometry& g) {
    if (!g.is_fixed())
        throw std::invalid_argument("link_attenuations: geometry has random placements");
    return link_attenuations(g.d, g.alpha, g.z.fixed_value(), g.t.fixed_value());
}

// Full path-loss compensation folded into the attenuations: each UE's own
// link is normalized to 1 and its cross link scaled by the same factor.
inline LinkAttenuations apply_power_control(const LinkAttenuations& la) {
    LinkAttenuations out;
    out.lam[0][0] = 1.0;
    out.lam[0][1] = la.lam[0][1] / la.lam[0][0];
    out.lam[1][0] = la.lam[1][0] / la.lam[1][1];
    out.lam[1][1] = 1.0;
    return out;
}

enum class PowerMode {
    fixed_transmit_power,
    full_path_loss_compensation,
};

// Transmit (or target received) power plus the two SINR decoding thresholds,
// all linear; noise power is normalized to 1.
struct PowerConfig {
    PowerMode mode = PowerMode::fixed_transmit_power;
    double p = 1.0;       // transmit power, or target received power under compensation
    double theta1 = 1.0;  // theta_i = 2^R_i - 1
    double theta2 = 1.0;

    PowerConfig() = default;
    PowerConfig(PowerMode m, double p_, double th1, double th2)
        : mode(m), p(p_), theta1(th1), theta2(th2) {
        if (!(p > 0.0)) throw std::invalid_argument("power: P must be > 0");
        if (!(th1 > 0.0) || !(th2 > 0.0))
            throw std::invalid_argument("power: thresholds must be > 0");
    }
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

}  // namespace twocell
