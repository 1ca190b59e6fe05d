#pragma once

#include <stdexcept>

#include "twocell/fading.hpp"

namespace twocell {

// SINR decoding thresholds, linear.
struct SinrThresholds {
    double theta1;
    double theta2;

    double for_ue(int ue) const { return ue == 0 ? theta1 : theta2; }
};

// Per-BS effective power P / (1 + P I_j). Conditioning on the external
// interference turns the SINR at BS j into the no-interferer SINR with this
// substituted power, shared by both in-model UEs at that BS.
struct EffectivePowers {
    double p[2];

    static EffectivePowers uniform(double power) { return {{power, power}}; }

    static EffectivePowers with_interference(double power, double i1, double i2) {
        return {{power / (1.0 + power * i1), power / (1.0 + power * i2)}};
    }

    double at_bs(int bs) const { return p[bs]; }
    bool is_uniform(double power) const { return p[0] == power && p[1] == power; }
};

// E_ij: UE ue decoded at BS bs treating the other UE as noise.
inline bool event_E(int ue, int bs, const FadingDraw& d, const EffectivePowers& pw,
                    const SinrThresholds& th) {
    const int other = 1 - ue;
    const double p = pw.at_bs(bs);
    return p * d.hsq[ue][bs] >= th.for_ue(ue) * (1.0 + p * d.hsq[other][bs]);
}

// Interference-free decode of UE ue at BS bs (the post-SIC check).
inline bool event_clean(int ue, int bs, const FadingDraw& d, const EffectivePowers& pw,
                        const SinrThresholds& th) {
    return pw.at_bs(bs) * d.hsq[ue][bs] >= th.for_ue(ue);
}

// A_ij: E_ij, or SIC — the other UE decodable first and UE ue clean after
// cancellation.
inline bool event_A(int ue, int bs, const FadingDraw& d, const EffectivePowers& pw,
                    const SinrThresholds& th) {
    if (event_E(ue, bs, d, pw, th)) return true;
    return event_E(1 - ue, bs, d, pw, th) && event_clean(ue, bs, d, pw, th);
}

}  // namespace twocell
