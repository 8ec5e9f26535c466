// Adaptive modulation and coding support: sweeps E_b/N_0 across the MCS
// set to map QoS-feasible operating ranges, and selects an MCS from the
// current E_b/N_0 and target QoS ceilings.
#pragma once

#include "bwqos/ctmc.hpp"
#include "bwqos/des.hpp"

#include <cmath>
#include <map>
#include <optional>
#include <ostream>
#include <vector>

namespace bwqos {

struct SweepSpec {
    std::vector<double> ebn0_grid_db;      // sorted, non-empty (default 1..20 step 1)
    std::vector<McsProfile> mcs_set;       // default: the seven of the rate table
    PhyConfig phy;                         // fixes W, FFT, sampling factor, G
    CellConfig base;                       // class params at their baseline E_b/N_0
    TrafficModel traffic;
    double epsilon = 1e-6;                 // operational "zero" probability

    static std::vector<double> default_grid() {
        std::vector<double> g;
        for (int db = 1; db <= 20; ++db) g.push_back(db);
        return g;
    }
};

struct SweepPoint {
    McsProfile mcs;
    double ebn0_db = 0;  // grid value: the UGS E_b/N_0; other classes keep
                         // their baseline offsets relative to UGS
    QosReport report;
};

struct SweepResult {
    SweepSpec spec;
    std::vector<SweepPoint> points;  // grid-major per MCS, deterministic order

    const QosReport* find(const McsProfile& mcs, double ebn0_db) const {
        for (const auto& p : points)
            if (p.mcs == mcs && p.ebn0_db == ebn0_db) return &p.report;
        return nullptr;
    }
};

// Cell config for one sweep point: B derived from the MCS raw rate, all
// class E_b/N_0 values shifted jointly so the UGS value equals the grid
// value and the baseline offsets between classes are preserved.
inline CellConfig sweep_cell(const SweepSpec& spec, const McsProfile& mcs, double ebn0_db) {
    CellConfig cfg = spec.base;
    cfg.channel_hz = spec.phy.channel_bandwidth_hz;
    cfg.total_bandwidth_kbps = raw_data_rate_bps(mcs, spec.phy) / 1000.0;
    const double shift = ebn0_db - spec.base.ugs.ebn0_db;
    cfg.ugs.ebn0_db += shift;
    cfg.rtps.ebn0_db += shift;
    cfg.nrtps.ebn0_db += shift;
    return cfg;
}

inline SweepResult sweep(const SweepSpec& spec) {
    if (spec.ebn0_grid_db.empty()) throw ConfigError("empty E_b/N_0 grid");
    if (!std::is_sorted(spec.ebn0_grid_db.begin(), spec.ebn0_grid_db.end()))
        throw ConfigError("E_b/N_0 grid must be sorted");
    if (!(spec.epsilon > 0 && spec.epsilon < 1)) throw ConfigError("epsilon must be in (0,1)");

    SweepResult result;
    result.spec = spec;
    for (const auto& mcs : spec.mcs_set) {
        for (double db : spec.ebn0_grid_db) {
            const CellConfig cfg = sweep_cell(spec, mcs, db);
            const StateSpace space = enumerate_states(cfg, spec.traffic);
            const auto gen = build_generator(space, spec.traffic, cfg);
            const auto dist = solve_stationary(gen, cfg);
            result.points.push_back({mcs, db, qos_report(space, dist, cfg)});
        }
    }
    return result;
}

struct OperatingRange {
    McsProfile mcs;
    std::optional<double> min_ebn0_zero_blocking_db;
    std::optional<double> min_ebn0_zero_dropping_db;
    std::optional<double> max_ebn0_zero_outage_db;
};

namespace detail {

inline double worst(const std::array<double, 3>& v) {
    return std::max({v[0], v[1], v[2]});
}

}  // namespace detail

// Per MCS: the lowest grid point where every class's NCBP (resp. HCDP) is
// at most epsilon, and the highest grid point where every class's COP is.
inline std::vector<OperatingRange> operating_range(const SweepResult& result, double epsilon) {
    std::vector<OperatingRange> ranges;
    for (const auto& mcs : result.spec.mcs_set) {
        OperatingRange r;
        r.mcs = mcs;
        for (double db : result.spec.ebn0_grid_db) {
            const QosReport* rep = result.find(mcs, db);
            if (!rep) continue;
            if (!r.min_ebn0_zero_blocking_db && detail::worst(rep->ncbp) <= epsilon)
                r.min_ebn0_zero_blocking_db = db;
            if (!r.min_ebn0_zero_dropping_db && detail::worst(rep->hcdp) <= epsilon)
                r.min_ebn0_zero_dropping_db = db;
            if (detail::worst(rep->cop) <= epsilon) r.max_ebn0_zero_outage_db = db;
        }
        ranges.push_back(r);
    }
    return ranges;
}

struct QosTargets {
    std::array<double, 3> max_ncbp = {1, 1, 1};
    std::array<double, 3> max_hcdp = {1, 1, 1};
    std::array<double, 3> max_cop = {1, 1, 1};
};

inline bool meets_targets(const QosReport& rep, const QosTargets& t) {
    for (int c = 0; c < 3; ++c) {
        if (rep.ncbp[c] > t.max_ncbp[c]) return false;
        if (rep.hcdp[c] > t.max_hcdp[c]) return false;
        if (rep.cop[c] > t.max_cop[c]) return false;
    }
    return true;
}

// Highest-raw-rate MCS whose sweep report at the nearest grid point meets
// every ceiling; QPSK-1/2 is the robustness floor when none qualifies.
// Rate ties break toward fewer bits per symbol; distance ties toward the
// lower grid value.
inline McsProfile select_mcs(double current_ebn0_db, const SweepResult& result,
                             const QosTargets& targets) {
    double grid_db = result.spec.ebn0_grid_db.front();
    for (double db : result.spec.ebn0_grid_db)
        if (std::abs(db - current_ebn0_db) < std::abs(grid_db - current_ebn0_db)) grid_db = db;

    std::optional<McsProfile> best;
    double best_rate = -1;
    for (const auto& mcs : result.spec.mcs_set) {
        const QosReport* rep = result.find(mcs, grid_db);
        if (!rep || !meets_targets(*rep, targets)) continue;
        const double rate = raw_data_rate_bps(mcs, result.spec.phy);
        if (rate > best_rate || (rate == best_rate && best && mcs.bits() < best->bits())) {
            best = mcs;
            best_rate = rate;
        }
    }
    if (best) return *best;
    return {Modulation::Qpsk, {1, 2}};
}

inline void write_range_csv(std::ostream& out, const std::vector<OperatingRange>& ranges) {
    out << "mcs,min_ebn0_blocking_db,min_ebn0_dropping_db,max_ebn0_outage_db\n";
    const auto cell = [](const std::optional<double>& v) {
        return v ? format_probability(*v) : std::string();
    };
    for (const auto& r : ranges) {
        out << r.mcs.name() << ',' << cell(r.min_ebn0_zero_blocking_db) << ','
            << cell(r.min_ebn0_zero_dropping_db) << ',' << cell(r.max_ebn0_zero_outage_db)
            << '\n';
    }
}

}  // namespace bwqos
