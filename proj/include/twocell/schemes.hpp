#pragma once

#include <algorithm>
#include <complex>
#include <stdexcept>

#include "twocell/events.hpp"

namespace twocell {

enum class SchemeId {
    marp,
    dis,
    mis,
    mmse_sic,
    aw_sic,
    aw_dis,
};

inline const char* scheme_name(SchemeId s) {
    switch (s) {
        case SchemeId::marp: return "MARP";
        case SchemeId::dis: return "DIS";
        case SchemeId::mis: return "MIS";
        case SchemeId::mmse_sic: return "MMSE-SIC";
        case SchemeId::aw_sic: return "AW+SIC";
        case SchemeId::aw_dis: return "AW+DIS";
    }
    return "?";
}

enum class DecodingSite {
    bs1,
    bs2,
    none,
};

struct DecodeOutcome {
    bool ue1_decoded = false;
    bool ue2_decoded = false;
    double sinr1 = 0.0;
    DecodingSite decoding_site1 = DecodingSite::none;
};

namespace detail {

inline double limited_sinr(int ue, int bs, const FadingDraw& d, const EffectivePowers& pw) {
    const double p = pw.at_bs(bs);
    return p * d.hsq[ue][bs] / (1.0 + p * d.hsq[1 - ue][bs]);
}

inline double clean_snr(int ue, int bs, const FadingDraw& d, const EffectivePowers& pw) {
    return pw.at_bs(bs) * d.hsq[ue][bs];
}

// DIS backhaul rescue for UE ue: the other UE decoded at its own BS, message
// forwarded, UE ue then clean at its own BS.
inline bool dis_rescue(int ue, const FadingDraw& d, const EffectivePowers& pw,
                       const SinrThresholds& th) {
    const int other = 1 - ue;
    return event_A(other, other, d, pw, th) && event_clean(ue, ue, d, pw, th);
}

}  // namespace detail

// MARP: static nearest-BS association with SIC at the own BS.
inline DecodeOutcome outcome_marp(const FadingDraw& d, const EffectivePowers& pw,
                                  const SinrThresholds& th) {
    DecodeOutcome out;
    out.sinr1 = event_E(1, 0, d, pw, th) ? detail::clean_snr(0, 0, d, pw)
                                         : detail::limited_sinr(0, 0, d, pw);
    out.ue1_decoded = event_A(0, 0, d, pw, th);
    out.ue2_decoded = event_A(1, 1, d, pw, th);
    out.decoding_site1 = DecodingSite::bs1;
    return out;
}

// DIS: MARP association plus forwarding of decoded messages over backhaul.
inline DecodeOutcome outcome_dis(const FadingDraw& d, const EffectivePowers& pw,
                                 const SinrThresholds& th) {
    DecodeOutcome out;
    out.sinr1 = (event_E(1, 0, d, pw, th) || event_E(1, 1, d, pw, th))
                    ? detail::clean_snr(0, 0, d, pw)
                    : detail::limited_sinr(0, 0, d, pw);
    // Outage event: A11^c ∩ (A22^c ∪ {clean snr below theta1}). The event is
    // the authoritative decodability indicator; the SINR expression above
    // does not see the A22-side SIC chain through |h_12|^2.
    out.ue1_decoded = event_A(0, 0, d, pw, th) || detail::dis_rescue(0, d, pw, th);
    out.ue2_decoded = event_A(1, 1, d, pw, th) || detail::dis_rescue(1, d, pw, th);
    out.decoding_site1 = DecodingSite::bs1;
    return out;
}

// MIS: per-realization association to the BS with the larger instantaneous
// uplink SINR (ties toward BS 1), SIC at the chosen BS.
inline DecodeOutcome outcome_mis(const FadingDraw& d, const EffectivePowers& pw,
                                 const SinrThresholds& th) {
    DecodeOutcome out;
    const double s1 = detail::limited_sinr(0, 0, d, pw);
    const double s2 = detail::limited_sinr(0, 1, d, pw);
    const int bs = s1 >= s2 ? 0 : 1;
    out.sinr1 = event_E(1, bs, d, pw, th) ? detail::clean_snr(0, bs, d, pw)
                                          : detail::limited_sinr(0, bs, d, pw);
    out.ue1_decoded = event_A(0, bs, d, pw, th);
    out.decoding_site1 = bs == 0 ? DecodingSite::bs1 : DecodingSite::bs2;

    const double u1 = detail::limited_sinr(1, 0, d, pw);
    const double u2 = detail::limited_sinr(1, 1, d, pw);
    const int bs2 = u2 >= u1 ? 1 : 0;  // mirrored tie rule: UE 2's own BS
    out.ue2_decoded = event_A(1, bs2, d, pw, th);
    return out;
}

// MMSE-SIC: the two BSs act as one two-antenna receiver over infinite
// backhaul. Closed-form 2x2 inverse via Sherman-Morrison:
//   P h2^* (I + P h1 h1^*)^{-1} h2 = P (|h2|^2 - P |h1^* h2|^2 / (1 + P |h1|^2)).
inline DecodeOutcome outcome_mmse_sic(const FadingDraw& d, const EffectivePowers& pw,
                                      const SinrThresholds& th) {
    if (pw.p[0] != pw.p[1])
        throw std::invalid_argument("mmse_sic: external interference not supported");
    const double p = pw.p[0];

    // h_ij = g_ij / sqrt(lambda_ij), recovered from |h|^2 = hsq.
    std::complex<double> h[2][2];
    for (int ue = 0; ue < 2; ++ue)
        for (int bs = 0; bs < 2; ++bs)
            h[ue][bs] = d.hsq[ue][bs] > 0.0
                            ? d.g[ue][bs] * std::sqrt(d.hsq[ue][bs] / std::norm(d.g[ue][bs]))
                            : std::complex<double>{0.0, 0.0};

    const double n1 = d.hsq[0][0] + d.hsq[0][1];
    const double n2 = d.hsq[1][0] + d.hsq[1][1];
    const std::complex<double> ip = std::conj(h[0][0]) * h[1][0] + std::conj(h[0][1]) * h[1][1];
    const double ip2 = std::norm(ip);

    const double t2 = p * (n2 - p * ip2 / (1.0 + p * n1));  // UE2 first, UE1 as noise
    const double s_mrc = p * n1;                            // UE1 clean after SIC
    const double s_mmse = p * (n1 - p * ip2 / (1.0 + p * n2));

    DecodeOutcome out;
    if (t2 > th.theta2) {
        out.sinr1 = s_mrc;
        out.ue2_decoded = true;
    } else {
        out.sinr1 = s_mmse;
        out.ue2_decoded = s_mmse >= th.theta1 && p * n2 >= th.theta2;
    }
    out.ue1_decoded = out.sinr1 >= th.theta1;
    out.decoding_site1 = DecodingSite::none;
    return out;
}

// AW+SIC: either BS may decode either UE; the controller realizes the best of
// the four per-BS possibilities.
inline DecodeOutcome outcome_aw_sic(const FadingDraw& d, const EffectivePowers& pw,
                                    const SinrThresholds& th) {
    DecodeOutcome out;
    const double v1 = event_E(1, 0, d, pw, th) ? detail::clean_snr(0, 0, d, pw)
                                               : detail::limited_sinr(0, 0, d, pw);
    const double v2 = event_E(1, 1, d, pw, th) ? detail::clean_snr(0, 1, d, pw)
                                               : detail::limited_sinr(0, 1, d, pw);
    out.sinr1 = std::max(v1, v2);
    out.decoding_site1 = v1 >= v2 ? DecodingSite::bs1 : DecodingSite::bs2;
    out.ue1_decoded = event_A(0, 0, d, pw, th) || event_A(0, 1, d, pw, th);
    out.ue2_decoded = event_A(1, 0, d, pw, th) || event_A(1, 1, d, pw, th);
    return out;
}

// AW+DIS: anywhere decoding plus message forwarding. Once either BS decodes
// UE 2 it is canceled at both, so UE 1 sees clean channels everywhere.
// Decodability: anywhere-decoding success, or a decoded UE 2 forwarded across
// the backhaul with UE 1 clean at the receiving BS. This matches the
// three-step controller of the protocol tables row for row, and equals
// {SINR_1 >= theta_1} under the SINR definition below.
inline DecodeOutcome outcome_aw_dis(const FadingDraw& d, const EffectivePowers& pw,
                                    const SinrThresholds& th) {
    DecodeOutcome out;
    const bool ue2_somewhere = event_E(1, 0, d, pw, th) || event_E(1, 1, d, pw, th);
    const double v1 = ue2_somewhere ? detail::clean_snr(0, 0, d, pw)
                                    : detail::limited_sinr(0, 0, d, pw);
    const double v2 = ue2_somewhere ? detail::clean_snr(0, 1, d, pw)
                                    : detail::limited_sinr(0, 1, d, pw);
    out.sinr1 = std::max(v1, v2);
    out.decoding_site1 = v1 >= v2 ? DecodingSite::bs1 : DecodingSite::bs2;

    auto decoded = [&](int ue) {
        const int other = 1 - ue;
        if (event_A(ue, 0, d, pw, th) || event_A(ue, 1, d, pw, th)) return true;
        // forwarded cancellation: other UE decoded at BS b, ue clean at 1-b
        for (int b = 0; b < 2; ++b)
            if (event_A(other, b, d, pw, th) && event_clean(ue, 1 - b, d, pw, th)) return true;
        return false;
    };
    out.ue1_decoded = decoded(0);
    out.ue2_decoded = decoded(1);
    return out;
}

inline DecodeOutcome outcome_for(SchemeId s, const FadingDraw& d, const EffectivePowers& pw,
                                 const SinrThresholds& th) {
    switch (s) {
        case SchemeId::marp: return outcome_marp(d, pw, th);
        case SchemeId::dis: return outcome_dis(d, pw, th);
        case SchemeId::mis: return outcome_mis(d, pw, th);
        case SchemeId::mmse_sic: return outcome_mmse_sic(d, pw, th);
        case SchemeId::aw_sic: return outcome_aw_sic(d, pw, th);
        case SchemeId::aw_dis: return outcome_aw_dis(d, pw, th);
    }
    throw std::logic_error("unknown scheme");
}

}  // namespace twocell
