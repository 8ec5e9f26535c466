// SINR-based call admission control: threshold computation, interference-
// aware SINR update, rtPS delay-guarantee check, adaptive degradation on
// admission, restoration on departure, and the combined decision.
//
// Gate order follows the admission flow chart: SINR first, delay second,
// bandwidth (with degradation) last. The reject reason reports the first
// failed gate.
#pragma once

#include "bwqos/model.hpp"

#include <optional>

namespace bwqos {

enum class RequestKind { New, Handoff };

struct AdmissionRequest {
    ServiceClass cls = ServiceClass::Ugs;
    RequestKind kind = RequestKind::New;
};

enum class Decision { Admit, AdmitWithDegradation, Reject };
enum class RejectReason { None, Outage, DelayViolation, NoBandwidth };

struct AdmissionVerdict {
    Decision decision = Decision::Reject;
    RejectReason reason = RejectReason::None;
    SystemState next;  // meaningful iff admitted

    bool admitted() const { return decision != Decision::Reject; }
};

// SINR_th,i = linear(E_b/N_0)_i * MRTR_i / W, with MRTR in bits/s.
inline double sinr_threshold(const ServiceClassParams& cls, double channel_hz) {
    if (!(channel_hz > 0)) throw ConfigError("channel bandwidth must be positive");
    return cls.ebn0_linear() * (cls.mrtr_kbps * 1000.0) / channel_hz;
}

// Normalized interference of the existing connections: each class
// contributes n * linear(E_b/N_0) * r/W with r its current allocation.
inline double interference_sum(const SystemState& s, const CellConfig& cfg) {
    double sum = 0;
    sum += s.n_ugs * cfg.ugs.ebn0_linear() * (cfg.bu() * 1000.0) / cfg.channel_hz;
    sum += s.n_rtps * cfg.rtps.ebn0_linear() * (d_rtps(s, cfg) * 1000.0) / cfg.channel_hz;
    sum += s.n_nrtps * cfg.nrtps.ebn0_linear() * (d_nrtps(s, cfg) * 1000.0) / cfg.channel_hz;
    return sum;
}

// Measured SINR of a candidate of class `cls` against the current state,
// thermal noise normalized away: [lin_i * r_i/W] / [Σ + 1].
inline double measured_sinr(ServiceClass cls, const SystemState& s, const CellConfig& cfg) {
    const double r_bps = current_allocation(s, cls, cfg) * 1000.0;
    const double numerator = cfg.params(cls).ebn0_linear() * r_bps / cfg.channel_hz;
    return numerator / (interference_sum(s, cfg) + 1.0);
}

// Token-bucket delay bound for the real-time class: arriving bits of one
// frame must be schedulable within the next (m-1) frames,
//   b_i <= [(m-1) * (1 + C_NRT/C_rtPS) - 1] * r_i * f,
// with m = L/f, C_rtPS = n_r * d_r and C_NRT = B - n_u*B_U - C_rtPS.
// Vacuously true when no rtPS connection is present.
inline bool delay_guarantee_ok(const SystemState& after, const CellConfig& cfg) {
    if (after.n_rtps == 0) return true;
    const auto& rt = cfg.rtps;
    const double m = rt.max_latency_ms / cfg.frame_ms;
    const double c_rtps = after.n_rtps * d_rtps(after, cfg);
    const double c_nrt = cfg.total_bandwidth_kbps - after.n_ugs * cfg.bu() - c_rtps;
    // kbps * ms = bits, so r_i*f needs no unit factor.
    const double rhs = ((m - 1.0) * (1.0 + c_nrt / c_rtps) - 1.0) * rt.token_rate() * cfg.frame_ms;
    return rt.bucket_bits <= rhs;
}

namespace detail {

inline SystemState bump_count(SystemState s, ServiceClass c) {
    switch (c) {
        case ServiceClass::Ugs: s.n_ugs++; break;
        case ServiceClass::Rtps: s.n_rtps++; break;
        case ServiceClass::Nrtps: s.n_nrtps++; break;
    }
    return s;
}

// Post-admission occupancy for a handoff: candidate included in the counts
// and charged at its class's common (possibly lowered) rate.
inline double handoff_occupancy(const SystemState& post, const CellConfig& cfg, int rl, int nl) {
    return post.n_ugs * cfg.bu() + post.n_rtps * level_rate(cfg, ServiceClass::Rtps, rl) +
           post.n_nrtps * level_rate(cfg, ServiceClass::Nrtps, nl);
}

}  // namespace detail

// Minimum-degradation admission, used when plain admission at full rates
// fails on bandwidth. Degradation follows the class priority rule:
//  - New requests (any class) may lower d_n only; the candidate is charged
//    its mstr on top of the current occupancy.
//  - Handoff requests lower d_n first, then d_r, and are evaluated directly
//    on the post-admission budget (the candidate pays its class's common
//    rate, floors at mrtr).
// Returns the admitted state, or nullopt when even full degradation does
// not fit. The returned state always satisfies the bandwidth budget.
inline std::optional<SystemState> degrade_to_fit(const SystemState& s, const AdmissionRequest& req,
                                                 const CellConfig& cfg) {
    const double bw = cfg.total_bandwidth_kbps;
    const double step = cfg.degradation_step_kbps;

    if (req.kind == RequestKind::New) {
        const double demand = cfg.params(req.cls).mstr_kbps;
        const int max_down = s.n_nrtps > 0 ? s.nrtps_level : 0;
        for (int b = 0; b <= max_down; ++b) {
            const double occ = s.n_ugs * cfg.bu() + s.n_rtps * d_rtps(s, cfg) +
                               s.n_nrtps * (d_nrtps(s, cfg) - b * step);
            if (occ + demand <= bw) {
                SystemState next = detail::bump_count(s, req.cls);
                next.nrtps_level = s.nrtps_level - b;
                // A new connection joins at its class's current common rate
                // (<= the mstr it was charged), so the budget still holds.
                canonicalize(next, cfg);
                return next;
            }
        }
        return std::nullopt;
    }

    // Handoff: search (d_n steps, then d_r steps) for the first pair whose
    // post-admission occupancy fits. Lowering is permitted only on classes
    // that will be present in the post state.
    SystemState post = detail::bump_count(s, req.cls);
    const int nl0 = post.nrtps_level;
    const int rl0 = post.rtps_level;
    const int max_n = post.n_nrtps > 0 ? nl0 : 0;
    const int max_r = post.n_rtps > 0 ? rl0 : 0;
    for (int b = 0; b <= max_n; ++b) {
        if (detail::handoff_occupancy(post, cfg, rl0, nl0 - b) <= bw) {
            post.nrtps_level = nl0 - b;
            canonicalize(post, cfg);
            return post;
        }
    }
    for (int a = 1; a <= max_r; ++a) {
        if (detail::handoff_occupancy(post, cfg, rl0 - a, nl0 - max_n) <= bw) {
            post.rtps_level = rl0 - a;
            post.nrtps_level = nl0 - max_n;
            canonicalize(post, cfg);
            return post;
        }
    }
    return std::nullopt;
}

// Redistributes bandwidth freed by a departure: the count drops, then d_r
// is raised toward mstr first (rtPS priority), then d_n, in grid steps,
// without exceeding the budget.
inline SystemState restore_on_departure(const SystemState& s, ServiceClass departed,
                                        const CellConfig& cfg) {
    if (s.count(departed) == 0)
        throw ConfigError(std::string("departure from empty class ") + class_name(departed));
    SystemState next = s;
    switch (departed) {
        case ServiceClass::Ugs: next.n_ugs--; break;
        case ServiceClass::Rtps: next.n_rtps--; break;
        case ServiceClass::Nrtps: next.n_nrtps--; break;
    }
    canonicalize(next, cfg);
    const double bw = cfg.total_bandwidth_kbps;
    while (next.n_rtps > 0 && next.rtps_level < cfg.levels(ServiceClass::Rtps)) {
        next.rtps_level++;
        if (occupied_kbps(next, cfg) > bw) {
            next.rtps_level--;
            break;
        }
    }
    while (next.n_nrtps > 0 && next.nrtps_level < cfg.levels(ServiceClass::Nrtps)) {
        next.nrtps_level++;
        if (occupied_kbps(next, cfg) > bw) {
            next.nrtps_level--;
            break;
        }
    }
    return next;
}

// Full admission decision. Checks, in order:
//  1. outage     — measured SINR of the candidate against its threshold;
//  2. delay      — Eq-12 bound on the tentative post-admission state at
//                  current allocations (degradation only loosens the bound,
//                  so this is the conservative point to check);
//  3. bandwidth  — plain fit (new: charged mstr, handoff: charged mrtr via
//                  the post-state budget), then minimal degradation.
inline AdmissionVerdict decide(const SystemState& s, const AdmissionRequest& req,
                               const CellConfig& cfg) {
    AdmissionVerdict verdict;

    if (measured_sinr(req.cls, s, cfg) < sinr_threshold(cfg.params(req.cls), cfg.channel_hz)) {
        verdict.decision = Decision::Reject;
        verdict.reason = RejectReason::Outage;
        return verdict;
    }

    SystemState tentative = detail::bump_count(s, req.cls);
    if (!delay_guarantee_ok(tentative, cfg)) {
        verdict.decision = Decision::Reject;
        verdict.reason = RejectReason::DelayViolation;
        return verdict;
    }

    auto fitted = degrade_to_fit(s, req, cfg);
    if (!fitted) {
        verdict.decision = Decision::Reject;
        verdict.reason = RejectReason::NoBandwidth;
        return verdict;
    }
    const bool degraded = fitted->rtps_level < s.rtps_level || fitted->nrtps_level < s.nrtps_level;
    verdict.decision = degraded ? Decision::AdmitWithDegradation : Decision::Admit;
    verdict.reason = RejectReason::None;
    verdict.next = *fitted;
    return verdict;
}

}  // namespace bwqos
