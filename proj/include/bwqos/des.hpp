// Seeded discrete-event simulator executing the same admission policy as
// the Markov model on sampled arrival/departure streams. Serves as an
// independent oracle for the analytical solution.
//
// Next-event time advance over six independent Poisson arrival streams
// (new/handoff per class) plus per-connection exponential departures.
// Sampling is inverse-transform from SplitMix64, a 64-bit counter-based
// generator, so a seed reproduces the same run on any platform.
#pragma once

#include "bwqos/ctmc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

namespace bwqos {

class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    // Uniform in (0, 1]; never returns 0 so log() is safe.
    double uniform01() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }
    double exponential(double rate) { return -std::log(uniform01()) / rate; }

  private:
    std::uint64_t state_;
};

struct SimConfig {
    std::uint64_t seed = 1;
    std::size_t horizon_events = 1'000'000;
    std::size_t warmup_events = 0;  // 0 = default 10% of the horizon
    TrafficModel traffic;
    CellConfig cell;
    double alpha = 0.5;
    int batches = 20;

    std::size_t warmup() const {
        return warmup_events > 0 ? warmup_events : horizon_events / 10;
    }
};

struct MetricEstimate {
    double value = 0;
    double ci_halfwidth = 0;

    bool contains(double x) const { return std::abs(x - value) <= ci_halfwidth; }
};

struct SimReport {
    QosReport point;                         // empirical point estimates
    std::array<MetricEstimate, 3> ncbp, hcdp, cop;
    MetricEstimate bu;
    MetricEstimate jfi_before, jfi_after, bu_before, bu_after;
    std::size_t events_processed = 0;
    std::uint64_t seed = 0;

    MetricEstimate estimate(int i) const {
        if (i < 3) return ncbp[i];
        if (i < 6) return hcdp[i - 3];
        if (i < 9) return cop[i - 6];
        return bu;
    }
};

namespace detail {

// Batch-means tally for a ratio (successes/trials per batch).
struct RatioTally {
    std::vector<double> batch_values;
    double num = 0, den = 0, total_num = 0, total_den = 0;

    void observe(bool hit) {
        num += hit;
        den += 1;
        total_num += hit;
        total_den += 1;
    }
    void close_batch() {
        if (den > 0) batch_values.push_back(num / den);
        num = den = 0;
    }
};

// Batch-means tally for a time-weighted or sample-weighted average.
struct MeanTally {
    std::vector<double> batch_values;
    double sum = 0, weight = 0, total_sum = 0, total_weight = 0;

    void observe(double value, double w) {
        sum += value * w;
        weight += w;
        total_sum += value * w;
        total_weight += w;
    }
    void close_batch() {
        if (weight > 0) batch_values.push_back(sum / weight);
        sum = weight = 0;
    }
};

// 97.5% Student-t quantiles for small degrees of freedom; 1.96 beyond.
inline double t_quantile_975(int df) {
    static const double table[] = {0,     12.706, 4.303, 3.182, 2.776, 2.571, 2.447,
                                   2.365, 2.306,  2.262, 2.228, 2.201, 2.179, 2.160,
                                   2.145, 2.131,  2.120, 2.110, 2.101, 2.093, 2.086,
                                   2.080, 2.074,  2.069, 2.064, 2.060, 2.056, 2.052,
                                   2.048, 2.045,  2.042};
    if (df <= 0) return 0;
    if (df <= 30) return table[df];
    return 1.96;
}

inline MetricEstimate summarize(const std::vector<double>& batches, double point) {
    MetricEstimate e;
    e.value = point;
    const int n = static_cast<int>(batches.size());
    if (n < 2) return e;
    double mean = 0;
    for (double b : batches) mean += b;
    mean /= n;
    double var = 0;
    for (double b : batches) var += (b - mean) * (b - mean);
    var /= (n - 1);
    e.ci_halfwidth = t_quantile_975(n - 1) * std::sqrt(var / n);
    return e;
}

}  // namespace detail

// Runs the simulation. Deterministic for a given config: the same seed
// yields a bit-identical report.
inline SimReport run(const SimConfig& sim) {
    require_valid(sim.cell);
    if (sim.horizon_events <= sim.warmup())
        throw ConfigError("horizon must exceed the warmup");

    SplitMix64 rng(sim.seed);
    const CellConfig& cfg = sim.cell;
    const TrafficModel& tr = sim.traffic;

    // Event streams: 0..2 new arrivals, 3..5 handoff arrivals per class.
    std::array<double, 6> stream_rate{};
    for (int c = 0; c < 3; ++c) {
        stream_rate[c] = tr.lambda_new[c];
        stream_rate[c + 3] = tr.lambda_handoff[c];
    }
    std::array<double, 6> next_arrival{};
    for (int k = 0; k < 6; ++k)
        next_arrival[k] =
            stream_rate[k] > 0 ? rng.exponential(stream_rate[k])
                               : std::numeric_limits<double>::infinity();

    struct Departure {
        double time;
        int cls;
        std::uint64_t order;
        bool operator>(const Departure& o) const {
            return time != o.time ? time > o.time : order > o.order;
        }
    };
    std::priority_queue<Departure, std::vector<Departure>, std::greater<>> departures;
    std::uint64_t departure_seq = 0;

    SystemState state = empty_state(cfg);
    double now = 0;
    const std::size_t warmup = sim.warmup();
    const std::size_t measured_events = sim.horizon_events - warmup;
    const std::size_t batch_len = std::max<std::size_t>(1, measured_events / sim.batches);

    std::array<detail::RatioTally, 3> ncbp, hcdp, cop_new;
    detail::MeanTally bu, jfi_before, jfi_after, bu_before, bu_after;

    std::size_t events = 0, measured = 0;

    auto sample_scheduler = [&]() {
        const auto rep = reschedule_report(state, cfg, sim.alpha);
        bu_before.observe(rep.before.utilization, 1.0);
        bu_after.observe(rep.after.utilization, 1.0);
        if (state.n_ugs + state.n_rtps + state.n_nrtps > 0) {
            jfi_before.observe(rep.before.jfi, 1.0);
            jfi_after.observe(rep.after.jfi, 1.0);
        }
    };

    while (events < sim.horizon_events) {
        // earliest of the six arrival streams and the next departure
        int best_stream = -1;
        double t_next = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 6; ++k)
            if (next_arrival[k] < t_next) {
                t_next = next_arrival[k];
                best_stream = k;
            }
        const bool take_departure = !departures.empty() && departures.top().time < t_next;
        if (take_departure) t_next = departures.top().time;
        if (best_stream < 0 && !take_departure) break;  // no traffic at all

        if (events >= warmup)
            bu.observe(occupied_kbps(state, cfg) / cfg.total_bandwidth_kbps, t_next - now);
        now = t_next;

        if (take_departure) {
            const int c = departures.top().cls;
            departures.pop();
            state = restore_on_departure(state, static_cast<ServiceClass>(c), cfg);
        } else {
            const int cls_idx = best_stream % 3;
            const ServiceClass cls = static_cast<ServiceClass>(cls_idx);
            const RequestKind kind =
                best_stream < 3 ? RequestKind::New : RequestKind::Handoff;
            const bool in_measure = events >= warmup;
            if (in_measure) sample_scheduler();

            const auto verdict = decide(state, {cls, kind}, cfg);
            if (in_measure) {
                if (kind == RequestKind::New) {
                    ncbp[cls_idx].observe(!verdict.admitted());
                    cop_new[cls_idx].observe(verdict.reason == RejectReason::Outage);
                } else {
                    hcdp[cls_idx].observe(!verdict.admitted());
                }
            }
            if (verdict.admitted()) {
                state = verdict.next;
                departures.push(
                    {now + rng.exponential(tr.service_rate(cls)), cls_idx, departure_seq++});
            }
            next_arrival[best_stream] = now + rng.exponential(stream_rate[best_stream]);
        }

        ++events;
        if (events > warmup) {
            ++measured;
            if (measured % batch_len == 0) {
                for (int c = 0; c < 3; ++c) {
                    ncbp[c].close_batch();
                    hcdp[c].close_batch();
                    cop_new[c].close_batch();
                }
                bu.close_batch();
                jfi_before.close_batch();
                jfi_after.close_batch();
                bu_before.close_batch();
                bu_after.close_batch();
            }
        }
    }

    SimReport rep;
    rep.seed = sim.seed;
    rep.events_processed = events;
    for (int c = 0; c < 3; ++c) {
        const auto point = [&](const detail::RatioTally& t) {
            return t.total_den > 0 ? t.total_num / t.total_den : 0.0;
        };
        rep.point.ncbp[c] = point(ncbp[c]);
        rep.point.hcdp[c] = point(hcdp[c]);
        rep.point.cop[c] = point(cop_new[c]);
        rep.ncbp[c] = detail::summarize(ncbp[c].batch_values, rep.point.ncbp[c]);
        rep.hcdp[c] = detail::summarize(hcdp[c].batch_values, rep.point.hcdp[c]);
        rep.cop[c] = detail::summarize(cop_new[c].batch_values, rep.point.cop[c]);
    }
    rep.point.bu = bu.total_weight > 0 ? bu.total_sum / bu.total_weight : 0.0;
    rep.bu = detail::summarize(bu.batch_values, rep.point.bu);
    const auto mean_point = [](const detail::MeanTally& t, double fallback) {
        return t.total_weight > 0 ? t.total_sum / t.total_weight : fallback;
    };
    rep.jfi_before = detail::summarize(jfi_before.batch_values, mean_point(jfi_before, 1.0));
    rep.jfi_after = detail::summarize(jfi_after.batch_values, mean_point(jfi_after, 1.0));
    rep.bu_before = detail::summarize(bu_before.batch_values, mean_point(bu_before, 0.0));
    rep.bu_after = detail::summarize(bu_after.batch_values, mean_point(bu_after, 0.0));
    return rep;
}

struct MetricComparison {
    std::string name;
    double analytic = 0;
    double empirical = 0;
    double ci_halfwidth = 0;
    double difference = 0;
    bool within_ci = false;
};

// Per-metric |empirical - analytic| and CI membership for the ten QoS
// metrics plus the two fairness aggregates.
inline std::vector<MetricComparison> compare_with_ctmc(const SimReport& sim,
                                                       const QosReport& analytic,
                                                       const SchedSummary& sched) {
    static const char* names[] = {"ncbp_ugs", "ncbp_rtps", "ncbp_nrtps", "hcdp_ugs",
                                  "hcdp_rtps", "hcdp_nrtps", "cop_ugs",  "cop_rtps",
                                  "cop_nrtps", "bu"};
    std::vector<MetricComparison> rows;
    for (int i = 0; i < 10; ++i) {
        MetricComparison row;
        row.name = names[i];
        row.analytic = analytic.metric(i);
        const MetricEstimate est = sim.estimate(i);
        row.empirical = est.value;
        row.ci_halfwidth = est.ci_halfwidth;
        row.difference = std::abs(row.empirical - row.analytic);
        row.within_ci = est.contains(row.analytic);
        rows.push_back(row);
    }
    const auto push_mean = [&rows](const char* name, double analytic_v,
                                   const MetricEstimate& est) {
        MetricComparison row;
        row.name = name;
        row.analytic = analytic_v;
        row.empirical = est.value;
        row.ci_halfwidth = est.ci_halfwidth;
        row.difference = std::abs(row.empirical - row.analytic);
        row.within_ci = est.contains(row.analytic);
        rows.push_back(row);
    };
    push_mean("jfi_before", sched.jfi_before, sim.jfi_before);
    push_mean("jfi_after", sched.jfi_after, sim.jfi_after);
    return rows;
}

inline void write_sim_csv(std::ostream& out, const std::string& axis_value,
                          const std::string& mcs_name, const SimReport& rep) {
    out << "lambda,mcs,ncbp_ugs,ncbp_rtps,ncbp_nrtps,hcdp_ugs,hcdp_rtps,hcdp_nrtps,"
           "cop_ugs,cop_rtps,cop_nrtps,bu,"
           "ci_ncbp_ugs,ci_ncbp_rtps,ci_ncbp_nrtps,ci_hcdp_ugs,ci_hcdp_rtps,ci_hcdp_nrtps,"
           "ci_cop_ugs,ci_cop_rtps,ci_cop_nrtps,ci_bu,seed\n";
    out << axis_value << ',' << mcs_name;
    for (int i = 0; i < 10; ++i) out << ',' << format_probability(rep.estimate(i).value);
    for (int i = 0; i < 10; ++i) out << ',' << format_probability(rep.estimate(i).ci_halfwidth);
    out << ',' << rep.seed << '\n';
}

}  // namespace bwqos
