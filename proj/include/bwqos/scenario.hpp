// Flat key/value scenario files: one `key = value` per line, `#` comments.
// A scenario covers the PHY configuration, the active MCS, every cell and
// traffic field, the scheduler alpha, and the sweep controls.
#pragma once

#include "bwqos/amc.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace bwqos {

struct Scenario {
    PhyConfig phy;
    McsProfile mcs{Modulation::Qpsk, {1, 2}};
    double total_bandwidth_kbps = 0;  // 0 = derive from mcs + phy
    double frame_ms = 1;
    double degradation_step_kbps = 64;
    ServiceClassParams ugs{ServiceClass::Ugs, 256, 256, 64, 0, 3.6, 0};
    ServiceClassParams rtps{ServiceClass::Rtps, 1024, 512, 10240, 21, 6.3, 0};
    ServiceClassParams nrtps{ServiceClass::Nrtps, 1024, 256, 10240, 0, 8.1, 0};
    TrafficModel traffic;
    double alpha = 0.5;

    std::vector<double> sweep_lambdas = {0.25, 0.5, 1, 2, 4};
    std::vector<McsProfile> sweep_mcs;  // empty = all seven
    std::vector<double> ebn0_grid_db = SweepSpec::default_grid();
    double epsilon = 1e-6;

    std::size_t state_cap = 2'000'000;
    std::size_t direct_solve_limit = 50'000;
    double power_tolerance = 1e-10;
    std::size_t power_max_iters = 1'000'000;

    // Resolves the cell configuration for the active MCS (or an explicit
    // bandwidth override).
    CellConfig cell() const { return cell_for(mcs); }

    CellConfig cell_for(const McsProfile& m) const {
        CellConfig cfg;
        cfg.total_bandwidth_kbps = total_bandwidth_kbps > 0
                                       ? total_bandwidth_kbps
                                       : raw_data_rate_bps(m, phy) / 1000.0;
        cfg.frame_ms = frame_ms;
        cfg.channel_hz = phy.channel_bandwidth_hz;
        cfg.ugs = ugs;
        cfg.rtps = rtps;
        cfg.nrtps = nrtps;
        cfg.degradation_step_kbps = degradation_step_kbps;
        cfg.state_cap = state_cap;
        cfg.direct_solve_limit = direct_solve_limit;
        cfg.power_tolerance = power_tolerance;
        cfg.power_max_iters = power_max_iters;
        return cfg;
    }

    std::vector<McsProfile> sweep_mcs_or_all() const {
        if (!sweep_mcs.empty()) return sweep_mcs;
        return {mcs_table().begin(), mcs_table().end()};
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline double parse_number(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("scenario key '" + key + "': not a number: '" + value + "'");
    }
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) parts.push_back(trim(item));
    return parts;
}

// "a:b:step" expands to an inclusive range, otherwise a comma list.
inline std::vector<double> parse_grid(const std::string& key, const std::string& value) {
    std::vector<double> grid;
    if (value.find(':') != std::string::npos) {
        const auto parts = split(value, ':');
        if (parts.size() != 3) throw ConfigError("scenario key '" + key + "': want start:stop:step");
        const double start = parse_number(key, parts[0]);
        const double stop = parse_number(key, parts[1]);
        const double step = parse_number(key, parts[2]);
        if (!(step > 0) || stop < start) throw ConfigError("scenario key '" + key + "': bad range");
        for (double v = start; v <= stop + 1e-12; v += step) grid.push_back(v);
        return grid;
    }
    for (const auto& part : split(value, ','))
        if (!part.empty()) grid.push_back(parse_number(key, part));
    return grid;
}

}  // namespace detail

// Applies one key/value pair; throws ConfigError on unknown keys or
// malformed values.
inline void apply_scenario_key(Scenario& sc, const std::string& key, const std::string& value) {
    using detail::parse_grid;
    using detail::parse_number;
    const auto num = [&] { return parse_number(key, value); };

    if (key == "mcs") { sc.mcs = parse_mcs(value); return; }
    if (key == "channel_bandwidth_hz") { sc.phy.channel_bandwidth_hz = num(); return; }
    if (key == "fft_size") { sc.phy.fft_size = static_cast<int>(num()); return; }
    if (key == "sampling_factor") { sc.phy.sampling_factor = parse_rational(value); return; }
    if (key == "cyclic_prefix") { sc.phy.cyclic_prefix = parse_rational(value); return; }
    if (key == "total_bandwidth_kbps") { sc.total_bandwidth_kbps = num(); return; }
    if (key == "frame_ms") { sc.frame_ms = num(); return; }
    if (key == "degradation_step_kbps") { sc.degradation_step_kbps = num(); return; }
    if (key == "alpha") { sc.alpha = num(); return; }
    if (key == "epsilon") { sc.epsilon = num(); return; }

    for (auto* cls : {&sc.ugs, &sc.rtps, &sc.nrtps}) {
        const std::string prefix = class_name(cls->cls);
        if (key == prefix + "_mstr_kbps") { cls->mstr_kbps = num(); return; }
        if (key == prefix + "_mrtr_kbps") { cls->mrtr_kbps = num(); return; }
        if (key == prefix + "_bucket_bits") { cls->bucket_bits = num(); return; }
        if (key == prefix + "_ebn0_db") { cls->ebn0_db = num(); return; }
        if (key == prefix + "_token_rate_kbps") { cls->token_rate_kbps = num(); return; }
    }
    if (key == "rtps_latency_ms") { sc.rtps.max_latency_ms = num(); return; }

    for (ServiceClass c : kClasses) {
        const int i = static_cast<int>(c);
        const std::string suffix = class_name(c);
        if (key == "lambda_new_" + suffix) { sc.traffic.lambda_new[i] = num(); return; }
        if (key == "lambda_handoff_" + suffix) { sc.traffic.lambda_handoff[i] = num(); return; }
        if (key == "mu_" + suffix) { sc.traffic.mu[i] = num(); return; }
    }

    if (key == "sweep_lambdas") { sc.sweep_lambdas = parse_grid(key, value); return; }
    if (key == "ebn0_grid_db") { sc.ebn0_grid_db = parse_grid(key, value); return; }
    if (key == "sweep_mcs") {
        sc.sweep_mcs.clear();
        for (const auto& name : detail::split(value, ','))
            if (!name.empty()) sc.sweep_mcs.push_back(parse_mcs(name));
        return;
    }
    if (key == "state_cap") { sc.state_cap = static_cast<std::size_t>(num()); return; }
    if (key == "direct_solve_limit") { sc.direct_solve_limit = static_cast<std::size_t>(num()); return; }
    if (key == "power_tolerance") { sc.power_tolerance = num(); return; }
    if (key == "power_max_iters") { sc.power_max_iters = static_cast<std::size_t>(num()); return; }

    throw ConfigError("unknown scenario key '" + key + "'");
}

inline Scenario parse_scenario(std::istream& in) {
    Scenario sc;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("scenario line " + std::to_string(line_no) + ": expected key = value");
        apply_scenario_key(sc, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
    }
    return sc;
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read scenario file '" + path + "'");
    return parse_scenario(in);
}

inline void apply_overrides(Scenario& sc, const std::vector<std::string>& overrides) {
    for (const auto& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw ConfigError("override '" + kv + "' is not key=value");
        apply_scenario_key(sc, detail::trim(kv.substr(0, eq)), detail::trim(kv.substr(eq + 1)));
    }
}

}  // namespace bwqos
