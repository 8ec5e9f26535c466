// Subscriber-station queue-based rescheduler: splits the post-UGS uplink
// bandwidth between real-time and non-real-time flows and computes Jain's
// fairness index.
#pragma once

#include "bwqos/model.hpp"

#include <algorithm>
#include <vector>

namespace bwqos {

struct ScheduleInput {
    double total_bandwidth_kbps = 0;  // B
    int n_ugs = 0;
    double bu_kbps = 0;  // per-connection UGS rate B_U
    int n_rt = 0;
    int n_nrt = 0;
    double alpha = 0.5;
};

struct ScheduleResult {
    double b_poll = 0;      // B - n_U * B_U
    double alpha = 0;
    double b_rt_total = 0;  // B_tot^r
    double b_nrt_total = 0; // B_tot^n = b_poll - b_rt_total
};

// alpha = max MPDU wait / rtPS maximum latency, in (0, 1].
inline double compute_alpha(double max_mpdu_delay_ms, double rtps_latency_ms) {
    if (!(max_mpdu_delay_ms > 0) || !(rtps_latency_ms > 0))
        throw ConfigError("delays must be positive");
    return max_mpdu_delay_ms / rtps_latency_ms;
}

// B_poll = B - n_U*B_U; the rt share is b_poll * n_r*alpha / (n_r*alpha + n_n)
// and the nrt share is the exact complement. With no polling flows both
// shares are zero and b_poll is reported unallocated.
inline ScheduleResult allocate(const ScheduleInput& in) {
    if (in.n_ugs * in.bu_kbps > in.total_bandwidth_kbps)
        throw ConfigError("UGS demand exceeds total bandwidth");
    ScheduleResult out;
    out.alpha = in.alpha;
    out.b_poll = in.total_bandwidth_kbps - in.n_ugs * in.bu_kbps;
    const double weight = in.n_rt * in.alpha + in.n_nrt;
    if (weight <= 0) {
        out.b_rt_total = 0;
        out.b_nrt_total = 0;
        return out;
    }
    out.b_rt_total = out.b_poll * (in.n_rt * in.alpha) / weight;
    out.b_nrt_total = out.b_poll - out.b_rt_total;
    return out;
}

// Jain's fairness index (Σr)^2 / (n·Σr^2), in [1/n, 1].
inline double jain_fairness(const std::vector<double>& rates) {
    if (rates.empty()) throw ConfigError("fairness index of an empty allocation");
    double sum = 0, sum_sq = 0;
    for (double r : rates) {
        if (r < 0) throw ConfigError("negative rate in fairness index");
        sum += r;
        sum_sq += r * r;
    }
    if (sum_sq == 0) throw ConfigError("fairness index of an all-zero allocation");
    return (sum * sum) / (rates.size() * sum_sq);
}

struct ScheduleMetrics {
    double utilization = 0;
    double jfi = 1.0;  // vacuously fair when no connection is present
};

struct RescheduleReport {
    ScheduleMetrics before, after;
};

namespace detail {

inline void append_rates(std::vector<double>& v, int n, double rate) {
    for (int i = 0; i < n; ++i) v.push_back(rate);
}

}  // namespace detail

// Before: utilization and JFI of the CAC-granted rates (B_U, d_r, d_n).
// After: b_rt/b_nrt shares divided equally inside each class, capped at the
// class mstr; residue from capping spills to the other pool. UGS rates are
// untouched. Leftover that neither pool can absorb stays unallocated.
inline RescheduleReport reschedule_report(const SystemState& s, const CellConfig& cfg,
                                          double alpha) {
    RescheduleReport rep;
    const double bw = cfg.total_bandwidth_kbps;
    const double dr = d_rtps(s, cfg);
    const double dn = d_nrtps(s, cfg);

    std::vector<double> before_rates;
    detail::append_rates(before_rates, s.n_ugs, cfg.bu());
    detail::append_rates(before_rates, s.n_rtps, dr);
    detail::append_rates(before_rates, s.n_nrtps, dn);
    rep.before.utilization = occupied_kbps(s, cfg) / bw;
    rep.before.jfi = before_rates.empty() ? 1.0 : jain_fairness(before_rates);

    ScheduleInput in;
    in.total_bandwidth_kbps = bw;
    in.n_ugs = s.n_ugs;
    in.bu_kbps = cfg.bu();
    in.n_rt = s.n_rtps;
    in.n_nrt = s.n_nrtps;
    in.alpha = alpha;
    const ScheduleResult shares = allocate(in);

    const double rt_cap = s.n_rtps * cfg.rtps.mstr_kbps;
    const double nrt_cap = s.n_nrtps * cfg.nrtps.mstr_kbps;
    double rt_alloc = std::min(shares.b_rt_total, rt_cap);
    double nrt_alloc = std::min(shares.b_nrt_total + (shares.b_rt_total - rt_alloc), nrt_cap);
    const double leftover = shares.b_poll - rt_alloc - nrt_alloc;
    if (leftover > 0) rt_alloc = std::min(rt_alloc + leftover, rt_cap);

    std::vector<double> after_rates;
    detail::append_rates(after_rates, s.n_ugs, cfg.bu());
    detail::append_rates(after_rates, s.n_rtps, s.n_rtps > 0 ? rt_alloc / s.n_rtps : 0.0);
    detail::append_rates(after_rates, s.n_nrtps, s.n_nrtps > 0 ? nrt_alloc / s.n_nrtps : 0.0);
    rep.after.utilization = (s.n_ugs * cfg.bu() + rt_alloc + nrt_alloc) / bw;
    rep.after.jfi = after_rates.empty() ? 1.0 : jain_fairness(after_rates);
    return rep;
}

}  // namespace bwqos
