// Shared service-class, traffic and system-state vocabulary used by the
// admission controller, scheduler, Markov model and simulator.
//
// Rates are kept in kbps throughout this layer. Degraded per-connection
// allocations live on a grid of step `degradation_step_kbps` between mrtr
// and mstr, so states compare and hash exactly on five integers.
#pragma once

#include "bwqos/phy.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace bwqos {

enum class ServiceClass { Ugs = 0, Rtps = 1, Nrtps = 2 };

inline const char* class_name(ServiceClass c) {
    switch (c) {
        case ServiceClass::Ugs: return "ugs";
        case ServiceClass::Rtps: return "rtps";
        case ServiceClass::Nrtps: return "nrtps";
    }
    return "?";
}

constexpr std::array<ServiceClass, 3> kClasses = {ServiceClass::Ugs, ServiceClass::Rtps,
                                                  ServiceClass::Nrtps};

struct ServiceClassParams {
    ServiceClass cls = ServiceClass::Ugs;
    double mstr_kbps = 0;      // maximum sustained traffic rate (B_x^max; B_U for UGS)
    double mrtr_kbps = 0;      // minimum reserved traffic rate (B_x^min)
    double bucket_bits = 0;    // token bucket size b_i
    double max_latency_ms = 0; // L, rtPS only (0 = absent)
    double ebn0_db = 0;        // (E_b/N_0)_i
    double token_rate_kbps = 0;// r_i of the delay bound; 0 = default to mrtr

    double token_rate() const { return token_rate_kbps > 0 ? token_rate_kbps : mrtr_kbps; }
    double ebn0_linear() const { return std::pow(10.0, ebn0_db / 10.0); }
};

// Poisson arrival and exponential service rates, per class.
struct TrafficModel {
    std::array<double, 3> lambda_new = {0, 0, 0};      // λ_ou, λ_or, λ_on
    std::array<double, 3> lambda_handoff = {0, 0, 0};  // λ_hu, λ_hr, λ_hn
    std::array<double, 3> mu = {0.2, 0.2, 0.2};        // μ_u, μ_r, μ_n

    double lam_new(ServiceClass c) const { return lambda_new[static_cast<int>(c)]; }
    double lam_handoff(ServiceClass c) const { return lambda_handoff[static_cast<int>(c)]; }
    double service_rate(ServiceClass c) const { return mu[static_cast<int>(c)]; }
};

struct CellConfig {
    double total_bandwidth_kbps = 0;  // B
    double frame_ms = 1;              // f
    double channel_hz = 20e6;         // W
    ServiceClassParams ugs, rtps, nrtps;
    double degradation_step_kbps = 64;  // grid quantum Δ
    // ctmc solver knobs
    std::size_t state_cap = 2'000'000;
    std::size_t direct_solve_limit = 50'000;  // above this, uniformized power iteration
    double power_tolerance = 1e-10;
    std::size_t power_max_iters = 1'000'000;

    const ServiceClassParams& params(ServiceClass c) const {
        switch (c) {
            case ServiceClass::Ugs: return ugs;
            case ServiceClass::Rtps: return rtps;
            case ServiceClass::Nrtps: return nrtps;
        }
        throw ConfigError("bad class");
    }
    double bu() const { return ugs.mrtr_kbps; }  // per-connection UGS rate B_U

    // Number of grid steps between mrtr and mstr for a degradable class.
    int levels(ServiceClass c) const {
        const auto& p = params(c);
        return static_cast<int>(std::llround((p.mstr_kbps - p.mrtr_kbps) / degradation_step_kbps));
    }
};

// CTMC state tuple (n_u, n_r, d_r, n_n, d_n). Degraded allocations are held
// as grid levels: d = mrtr + level*Δ. A class with zero connections carries
// the canonical placeholder level (mstr), so logically identical states
// collapse to one tuple.
struct SystemState {
    int n_ugs = 0, n_rtps = 0, n_nrtps = 0;
    int rtps_level = 0, nrtps_level = 0;

    int count(ServiceClass c) const {
        switch (c) {
            case ServiceClass::Ugs: return n_ugs;
            case ServiceClass::Rtps: return n_rtps;
            case ServiceClass::Nrtps: return n_nrtps;
        }
        return 0;
    }
    bool operator==(const SystemState& o) const {
        return n_ugs == o.n_ugs && n_rtps == o.n_rtps && n_nrtps == o.n_nrtps &&
               rtps_level == o.rtps_level && nrtps_level == o.nrtps_level;
    }
};

struct SystemStateHash {
    std::size_t operator()(const SystemState& s) const {
        std::uint64_t h = 1469598103934665603ull;
        for (std::uint64_t v : {static_cast<std::uint64_t>(s.n_ugs), static_cast<std::uint64_t>(s.n_rtps),
                                static_cast<std::uint64_t>(s.n_nrtps), static_cast<std::uint64_t>(s.rtps_level),
                                static_cast<std::uint64_t>(s.nrtps_level)}) {
            h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

inline double level_rate(const CellConfig& cfg, ServiceClass c, int level) {
    return cfg.params(c).mrtr_kbps + level * cfg.degradation_step_kbps;
}

inline double d_rtps(const SystemState& s, const CellConfig& cfg) {
    return level_rate(cfg, ServiceClass::Rtps, s.rtps_level);
}

inline double d_nrtps(const SystemState& s, const CellConfig& cfg) {
    return level_rate(cfg, ServiceClass::Nrtps, s.nrtps_level);
}

// Current per-connection allocation of a class (B_U, d_r or d_n); the
// canonical placeholder (mstr) when the class is empty.
inline double current_allocation(const SystemState& s, ServiceClass c, const CellConfig& cfg) {
    switch (c) {
        case ServiceClass::Ugs: return cfg.bu();
        case ServiceClass::Rtps: return d_rtps(s, cfg);
        case ServiceClass::Nrtps: return d_nrtps(s, cfg);
    }
    return 0;
}

inline double occupied_kbps(const SystemState& s, const CellConfig& cfg) {
    return s.n_ugs * cfg.bu() + s.n_rtps * d_rtps(s, cfg) + s.n_nrtps * d_nrtps(s, cfg);
}

inline SystemState empty_state(const CellConfig& cfg) {
    SystemState s;
    s.rtps_level = cfg.levels(ServiceClass::Rtps);
    s.nrtps_level = cfg.levels(ServiceClass::Nrtps);
    return s;
}

// Reset placeholder levels on empty classes so the tuple stays canonical.
inline void canonicalize(SystemState& s, const CellConfig& cfg) {
    if (s.n_rtps == 0) s.rtps_level = cfg.levels(ServiceClass::Rtps);
    if (s.n_nrtps == 0) s.nrtps_level = cfg.levels(ServiceClass::Nrtps);
}

inline bool state_valid(const SystemState& s, const CellConfig& cfg) {
    if (s.n_ugs < 0 || s.n_rtps < 0 || s.n_nrtps < 0) return false;
    if (s.rtps_level < 0 || s.rtps_level > cfg.levels(ServiceClass::Rtps)) return false;
    if (s.nrtps_level < 0 || s.nrtps_level > cfg.levels(ServiceClass::Nrtps)) return false;
    if (s.n_rtps == 0 && s.rtps_level != cfg.levels(ServiceClass::Rtps)) return false;
    if (s.n_nrtps == 0 && s.nrtps_level != cfg.levels(ServiceClass::Nrtps)) return false;
    return occupied_kbps(s, cfg) <= cfg.total_bandwidth_kbps;
}

// Returns every invariant violation as human-readable text; empty means ok.
inline std::vector<std::string> validate(const CellConfig& cfg) {
    std::vector<std::string> v;
    if (!(cfg.total_bandwidth_kbps > 0)) v.push_back("total bandwidth B must be positive");
    if (!(cfg.frame_ms > 0)) v.push_back("frame duration f must be positive");
    if (!(cfg.channel_hz > 0)) v.push_back("channel bandwidth W must be positive");
    if (!(cfg.degradation_step_kbps > 0)) v.push_back("degradation step must be positive");

    for (ServiceClass c : kClasses) {
        const auto& p = cfg.params(c);
        const std::string n = class_name(c);
        if (!(p.mrtr_kbps > 0)) v.push_back(n + ": mrtr must be positive");
        if (p.mrtr_kbps > p.mstr_kbps) v.push_back(n + ": mrtr exceeds mstr");
        if (p.bucket_bits < 0) v.push_back(n + ": bucket size must be non-negative");
    }
    if (cfg.ugs.mstr_kbps != cfg.ugs.mrtr_kbps)
        v.push_back("ugs: fixed-rate service requires mstr = mrtr");
    if (cfg.rtps.max_latency_ms <= 0) {
        v.push_back("rtps: max latency L is required");
    } else {
        if (cfg.rtps.max_latency_ms <= cfg.frame_ms)
            v.push_back("rtps: max latency must exceed the frame duration");
        const double m = cfg.rtps.max_latency_ms / cfg.frame_ms;
        if (std::abs(m - std::llround(m)) > 1e-9)
            v.push_back("rtps: L/f must be an integer number of frames");
    }
    if (cfg.ugs.max_latency_ms != 0) v.push_back("ugs: max latency only applies to rtps");
    if (cfg.nrtps.max_latency_ms != 0) v.push_back("nrtps: max latency only applies to rtps");

    if (cfg.degradation_step_kbps > 0) {
        for (ServiceClass c : {ServiceClass::Rtps, ServiceClass::Nrtps}) {
            const auto& p = cfg.params(c);
            const double span = p.mstr_kbps - p.mrtr_kbps;
            const double steps = span / cfg.degradation_step_kbps;
            if (std::abs(steps - std::llround(steps)) > 1e-9)
                v.push_back(std::string(class_name(c)) +
                            ": degradation step does not divide mstr - mrtr");
        }
    }
    return v;
}

inline void require_valid(const CellConfig& cfg) {
    const auto v = validate(cfg);
    if (!v.empty()) {
        std::string msg = "invalid cell config:";
        for (const auto& s : v) msg += "\n  - " + s;
        throw ConfigError(msg);
    }
}

}  // namespace bwqos
