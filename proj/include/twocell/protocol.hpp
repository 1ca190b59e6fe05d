#pragma once

#include <array>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "twocell/events.hpp"
#include "twocell/schemes.hpp"

namespace twocell {

// One base station's task within a decoding assignment.
struct BsTask {
    enum Kind : std::uint8_t {
        idle,
        treat_as_noise,  // decode target treating the other UE as noise
        clean,           // decode target after cancelling the other UE
    };
    Kind kind = idle;
    int target_ue = -1;

    static BsTask noise(int ue) { return {treat_as_noise, ue}; }
    static BsTask sic(int ue) { return {clean, ue}; }
    static BsTask none() { return {}; }
};

// Evaluates the SINR condition a task implies at one BS.
inline bool decode_attempt(int bs, const BsTask& task, const FadingDraw& d,
                           const EffectivePowers& pw, const SinrThresholds& th) {
    switch (task.kind) {
        case BsTask::idle: return false;
        case BsTask::treat_as_noise: return event_E(task.target_ue, bs, d, pw, th);
        case BsTask::clean: return event_clean(task.target_ue, bs, d, pw, th);
    }
    return false;
}

struct ForwardedMessage {
    int ue;
    int from_bs;
    int to_bs;
};

struct ProtocolStep {
    std::array<BsTask, 2> assignment;  // indexed by absolute BS id
    int reported_bits;                 // backhaul result bits this step (2, or 1 in step 3)
    bool result[2];                    // per-BS attempt outcome (second unused if single-site)
    std::string decision;
    std::string annotation;            // bookkeeping reconstructed from the table rows
};

struct ProtocolTrace {
    std::vector<ProtocolStep> steps;
    std::vector<ForwardedMessage> forwarded;
    int backhaul_bits_total = 0;
    bool ue_decoded[2] = {false, false};

    std::string serialize() const;
};

namespace detail {

inline std::string render_task(int bs, const BsTask& t) {
    std::ostringstream os;
    os << "BS" << bs + 1 << ":";
    if (t.kind == BsTask::idle) {
        os << "-";
    } else {
        os << "UE" << t.target_ue + 1;
        if (t.kind == BsTask::treat_as_noise)
            os << "/UE" << (1 - t.target_ue) + 1;
        else
            os << "*";  // clean decode after cancellation
    }
    return os.str();
}

struct ProtocolRunner {
    const FadingDraw& d;
    const EffectivePowers& pw;
    const SinrThresholds& th;
    ProtocolTrace trace;

    bool attempt(int bs, const BsTask& t) { return decode_attempt(bs, t, d, pw, th); }

    // Runs one two-site step; returns (result_i, result_j) for pair order (i, j).
    std::pair<bool, bool> step_pair(int i, const BsTask& task_i, const BsTask& task_j) {
        ProtocolStep s;
        s.assignment[i] = task_i;
        s.assignment[1 - i] = task_j;
        s.result[i] = attempt(i, task_i);
        s.result[1 - i] = attempt(1 - i, task_j);
        s.reported_bits = 2;
        trace.backhaul_bits_total += 2;
        trace.steps.push_back(s);
        return {s.result[i], s.result[1 - i]};
    }

    // Single-site step 3: one result bit on the backhaul.
    bool step_single(int bs, const BsTask& task) {
        ProtocolStep s;
        s.assignment[bs] = task;
        s.assignment[1 - bs] = BsTask::none();
        s.result[bs] = attempt(bs, task);
        s.result[1 - bs] = false;
        s.reported_bits = 1;
        trace.backhaul_bits_total += 1;
        trace.steps.push_back(s);
        return s.result[bs];
    }

    // Dual-site step 3 (AW+DIS only): both BSs attempt the same pending UE;
    // a single result indication (the OR) crosses the backhaul, the per-site
    // outcomes are kept as an annotation.
    bool step_dual_clean(int pending_ue, bool& at0, bool& at1) {
        ProtocolStep s;
        s.assignment[0] = BsTask::sic(pending_ue);
        s.assignment[1] = BsTask::sic(pending_ue);
        at0 = attempt(0, s.assignment[0]);
        at1 = attempt(1, s.assignment[1]);
        s.result[0] = at0;
        s.result[1] = at1;
        s.reported_bits = 1;
        trace.backhaul_bits_total += 1;
        std::ostringstream os;
        os << "site results " << (at0 ? 1 : 0) << (at1 ? 1 : 0);
        s.annotation = os.str();
        trace.steps.push_back(s);
        return at0 || at1;
    }

    void decide(const std::string& text) { trace.steps.back().decision = text; }
    void annotate(const std::string& text) {
        auto& a = trace.steps.back().annotation;
        if (!a.empty()) a += "; ";
        a += text;
    }
    void forward(int ue, int from, int to) {
        trace.forwarded.push_back({ue, from, to});
        annotate("forward UE" + std::to_string(ue + 1) + " BS" + std::to_string(from + 1) +
                 ">BS" + std::to_string(to + 1));
    }
    void mark(int ue) { trace.ue_decoded[ue] = true; }
};

}  // namespace detail

// Three-step anywhere-decoding controller (SIC only, no message forwarding).
// `first` selects which cell plays the table's role of cell i.
inline ProtocolTrace run_aw_sic_protocol(const FadingDraw& d, const EffectivePowers& pw,
                                         const SinrThresholds& th, int first = 0) {
    const int i = first, j = 1 - first;
    detail::ProtocolRunner r{d, pw, th, {}};

    auto [b1, b2] = r.step_pair(i, BsTask::noise(i), BsTask::noise(j));
    if (b1 && b2) {
        r.decide("finish: both UEs decoded");
        r.mark(i), r.mark(j);
        return r.trace;
    }
    if (b1 && !b2) {
        r.decide("next");
        r.mark(i);
        auto [c1, c2] = r.step_pair(i, BsTask::sic(j), BsTask::noise(i));
        if (c1) {
            r.decide("finish: both UEs decoded");
            if (c2) r.annotate("UE" + std::to_string(i + 1) + " also decoded at BS" +
                               std::to_string(j + 1));
            r.mark(j);
        } else if (c2) {
            r.decide("next");
            r.annotate("UE" + std::to_string(i + 1) + " decoded at BS" + std::to_string(j + 1) +
                       "; UE" + std::to_string(j + 1) + " pending");
            if (r.step_single(j, BsTask::sic(j))) {
                r.decide("finish: both UEs decoded");
                r.mark(j);
            } else {
                r.decide("stop: UE" + std::to_string(j + 1) + " not decodable");
            }
        } else {
            r.decide("stop: UE" + std::to_string(j + 1) + " not decodable");
        }
        return r.trace;
    }
    if (!b1 && b2) {
        r.decide("next");
        r.mark(j);
        auto [c1, c2] = r.step_pair(i, BsTask::noise(j), BsTask::sic(i));
        if (c2) {
            r.decide("finish: both UEs decoded");
            r.mark(i);
            if (c1) r.annotate("UE" + std::to_string(j + 1) + " also decoded at BS" +
                               std::to_string(i + 1));
        } else if (c1) {
            r.decide("next");
            if (r.step_single(i, BsTask::sic(i))) {
                r.decide("finish: both UEs decoded");
                r.mark(i);
            } else {
                r.decide("stop: UE" + std::to_string(i + 1) + " not decodable");
            }
        } else {
            r.decide("stop: UE" + std::to_string(i + 1) + " not decodable");
        }
        return r.trace;
    }
    // 00
    r.decide("next");
    auto [c1, c2] = r.step_pair(i, BsTask::noise(j), BsTask::noise(i));
    if (c1 && c2) {
        r.decide("finish: both UEs decoded");
        r.mark(i), r.mark(j);
    } else if (c1 && !c2) {
        r.decide("next");
        r.mark(j);
        if (r.step_single(i, BsTask::sic(i))) {
            r.decide("finish: both UEs decoded");
            r.mark(i);
        } else {
            r.decide("stop: UE" + std::to_string(i + 1) + " not decodable");
        }
    } else if (!c1 && c2) {
        r.decide("next");
        r.mark(i);
        if (r.step_single(j, BsTask::sic(j))) {
            r.decide("finish: both UEs decoded");
            r.mark(j);
        } else {
            r.decide("stop: UE" + std::to_string(j + 1) + " not decodable");
        }
    } else {
        r.decide("stop: both UEs not decodable");
    }
    return r.trace;
}

// Three-step controller with distributed interference subtraction: decoded
// messages cross the backhaul so the other BS can cancel them.
inline ProtocolTrace run_aw_dis_protocol(const FadingDraw& d, const EffectivePowers& pw,
                                         const SinrThresholds& th, int first = 0) {
    const int i = first, j = 1 - first;
    detail::ProtocolRunner r{d, pw, th, {}};

    auto [b1, b2] = r.step_pair(i, BsTask::noise(i), BsTask::noise(j));
    if (b1 && b2) {
        r.decide("finish: both UEs decoded");
        r.mark(i), r.mark(j);
        return r.trace;
    }
    if (b1 != b2) {
        // one UE decoded at its own BS; relabel so cell a holds the decoded UE
        const int a = b1 ? i : j;
        const int b = 1 - a;
        r.decide("next");
        r.mark(a);
        auto [ca, cb] = r.step_pair(a, BsTask::sic(b), BsTask::noise(a));
        // ca: BS a decodes UE b clean (UE a cancelled); cb: BS b decodes UE a
        if (ca) {
            r.decide("finish: both UEs decoded");
            r.mark(b);
        } else if (cb) {
            r.decide("next");
            r.annotate("UE" + std::to_string(a + 1) + " decoded at BS" + std::to_string(b + 1) +
                       "; UE" + std::to_string(b + 1) + " pending");
            if (r.step_single(b, BsTask::sic(b))) {
                r.decide("finish: both UEs decoded");
                r.mark(b);
            } else {
                r.decide("stop: UE" + std::to_string(b + 1) + " not decodable");
            }
        } else {
            // 00: forward UE a's message so BS b can cancel it
            r.decide("next");
            r.forward(a, a, b);
            if (r.step_single(b, BsTask::sic(b))) {
                r.decide("finish: both UEs decoded");
                r.mark(b);
            } else {
                r.decide("stop: UE" + std::to_string(b + 1) + " not decodable");
            }
        }
        return r.trace;
    }
    // 00: swap targets
    r.decide("next");
    auto [c1, c2] = r.step_pair(i, BsTask::noise(j), BsTask::noise(i));
    if (c1 && c2) {
        r.decide("finish: both UEs decoded");
        r.mark(i), r.mark(j);
    } else if (c1 != c2) {
        // exactly one cross decode: UE w decoded at BS (1-w); forward it, then
        // both BSs attempt the pending UE p = 1-w clean.
        const int w = c1 ? j : i;  // decoded UE (c1: BS i decoded UE j)
        const int p = 1 - w;
        r.decide("next");
        r.forward(w, 1 - w, w);
        r.mark(w);
        bool at0 = false, at1 = false;
        if (r.step_dual_clean(p, at0, at1)) {
            r.decide("finish: both UEs decoded");
            r.mark(p);
        } else {
            r.decide("stop: UE" + std::to_string(p + 1) + " not decodable");
        }
    } else {
        r.decide("stop: both UEs not decodable");
    }
    return r.trace;
}

inline std::string ProtocolTrace::serialize() const {
    std::ostringstream os;
    for (std::size_t k = 0; k < steps.size(); ++k) {
        const auto& s = steps[k];
        os << (k + 1) << " " << detail::render_task(0, s.assignment[0]) << " "
           << detail::render_task(1, s.assignment[1]) << " -> ";
        if (s.reported_bits == 2)
            os << (s.result[0] ? 1 : 0) << (s.result[1] ? 1 : 0);
        else
            os << ((s.result[0] || s.result[1]) ? 1 : 0);
        os << " " << s.decision;
        if (!s.annotation.empty()) os << " [" << s.annotation << "]";
        os << "\n";
    }
    os << "= ue1:" << (ue_decoded[0] ? 1 : 0) << " ue2:" << (ue_decoded[1] ? 1 : 0)
       << " bits:" << backhaul_bits_total << "\n";
    return os.str();
}

// Per-draw cross-check of the table execution against the closed event
// algebra of the decoding-events module.
struct ProtocolEquivalenceReport {
    std::uint64_t n_draws = 0;
    std::uint64_t aw_sic_mismatches = 0;
    std::uint64_t aw_dis_mismatches = 0;
    int max_steps = 0;
    int max_backhaul_bits = 0;
    std::uint64_t dis_superset_violations = 0;  // AW+DIS decoded set must contain AW+SIC's
};

inline ProtocolEquivalenceReport verify_protocol_equivalence(const LinkAttenuations& la,
                                                             double power,
                                                             const SinrThresholds& th,
                                                             std::uint64_t n_draws,
                                                             std::uint64_t seed) {
    ProtocolEquivalenceReport rep;
    rep.n_draws = n_draws;
    const EffectivePowers pw = EffectivePowers::uniform(power);
    for (std::uint64_t k = 0; k < n_draws; ++k) {
        RngStream rs = draw_stream(seed, k, StreamRole::fading);
        const FadingDraw d = sample_fading(la, rs);
        const ProtocolTrace sic = run_aw_sic_protocol(d, pw, th);
        const ProtocolTrace dis = run_aw_dis_protocol(d, pw, th);

        const DecodeOutcome o_sic = outcome_aw_sic(d, pw, th);
        const DecodeOutcome o_dis = outcome_aw_dis(d, pw, th);
        if (sic.ue_decoded[0] != o_sic.ue1_decoded || sic.ue_decoded[1] != o_sic.ue2_decoded)
            ++rep.aw_sic_mismatches;
        if (dis.ue_decoded[0] != o_dis.ue1_decoded || dis.ue_decoded[1] != o_dis.ue2_decoded)
            ++rep.aw_dis_mismatches;
        if ((sic.ue_decoded[0] && !dis.ue_decoded[0]) || (sic.ue_decoded[1] && !dis.ue_decoded[1]))
            ++rep.dis_superset_violations;

        rep.max_steps = std::max<int>(rep.max_steps,
                                      std::max<int>(static_cast<int>(sic.steps.size()),
                                                    static_cast<int>(dis.steps.size())));
        rep.max_backhaul_bits = std::max(rep.max_backhaul_bits,
                                         std::max(sic.backhaul_bits_total, dis.backhaul_bits_total));
    }
    return rep;
}

}  // namespace twocell
