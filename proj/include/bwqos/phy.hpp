// OFDMA PHY rate calculator: symbol duration, raw data rate and spectrum
// efficiency per modulation-and-coding scheme (MCS) and PHY configuration.
#pragma once

#include "bwqos/rational.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace bwqos {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Modulation { Qpsk, Qam16, Qam64 };

inline int bits_per_symbol(Modulation m) {
    switch (m) {
        case Modulation::Qpsk: return 2;
        case Modulation::Qam16: return 4;
        case Modulation::Qam64: return 6;
    }
    throw ConfigError("unknown modulation");
}

inline const char* modulation_name(Modulation m) {
    switch (m) {
        case Modulation::Qpsk: return "QPSK";
        case Modulation::Qam16: return "16QAM";
        case Modulation::Qam64: return "64QAM";
    }
    throw ConfigError("unknown modulation");
}

// One of the seven modulation / coding-rate pairings supported by the link.
struct McsProfile {
    Modulation modulation = Modulation::Qpsk;
    Rational coding_rate{1, 2};

    int bits() const { return bits_per_symbol(modulation); }
    std::string name() const {
        return std::string(modulation_name(modulation)) + "-" + to_string(coding_rate);
    }
    bool operator==(const McsProfile& o) const {
        return modulation == o.modulation && coding_rate == o.coding_rate;
    }
};

// The seven combinations of Table II, in increasing raw-rate order.
inline const std::array<McsProfile, 7>& mcs_table() {
    static const std::array<McsProfile, 7> table = {{
        {Modulation::Qpsk, {1, 2}},
        {Modulation::Qpsk, {3, 4}},
        {Modulation::Qam16, {1, 2}},
        {Modulation::Qam16, {3, 4}},
        {Modulation::Qam64, {1, 2}},
        {Modulation::Qam64, {2, 3}},
        {Modulation::Qam64, {3, 4}},
    }};
    return table;
}

inline McsProfile parse_mcs(const std::string& name) {
    for (const auto& m : mcs_table())
        if (m.name() == name) return m;
    throw ConfigError("unknown MCS '" + name + "' (expected e.g. QPSK-1/2, 16QAM-3/4, 64QAM-2/3)");
}

inline void validate_mcs(const McsProfile& mcs) {
    for (const auto& m : mcs_table())
        if (m == mcs) return;
    throw ConfigError("unsupported (modulation, coding rate) pair " + mcs.name());
}

struct PhyConfig {
    double channel_bandwidth_hz = 20e6;  // W
    int fft_size = 2048;
    Rational sampling_factor{8, 7};
    Rational cyclic_prefix{1, 32};  // G
};

// Used-subcarrier count N as a function of FFT size. Sizes outside the
// table are rejected rather than interpolated.
inline int used_subcarriers(int fft_size) {
    switch (fft_size) {
        case 2048: return 1440;
        case 1024: return 720;
        case 512: return 360;
        case 128: return 72;
    }
    throw ConfigError("FFT size " + std::to_string(fft_size) + " has no defined subcarrier count");
}

inline void validate_phy(const PhyConfig& cfg) {
    if (!(cfg.channel_bandwidth_hz > 0))
        throw ConfigError("channel bandwidth must be positive");
    used_subcarriers(cfg.fft_size);
    if (cfg.sampling_factor <= Rational(0))
        throw ConfigError("sampling factor must be positive");
    static const Rational allowed[] = {{1, 32}, {1, 16}, {1, 8}, {1, 4}};
    bool ok = false;
    for (const auto& g : allowed) ok = ok || cfg.cyclic_prefix == g;
    if (!ok) throw ConfigError("cyclic prefix must be one of 1/32, 1/16, 1/8, 1/4");
}

// OFDM symbol duration T = T_b + T_g in seconds, with
// F_s = sf*W, T_b = fft/F_s, T_g = G*T_b. The integer factors are folded
// exactly; the single division happens in double precision.
inline double symbol_duration_s(const PhyConfig& cfg) {
    validate_phy(cfg);
    const auto& sf = cfg.sampling_factor;
    const auto& g = cfg.cyclic_prefix;
    // T = fft*q*(Gn+Gd) / (p*W*Gd)  for sf = p/q, G = Gn/Gd
    std::int64_t num = static_cast<std::int64_t>(cfg.fft_size) * sf.denominator() *
                       (g.numerator() + g.denominator());
    std::int64_t den = sf.numerator() * g.denominator();
    const std::int64_t common = std::gcd(num, den);
    num /= common;
    den /= common;
    return static_cast<double>(num) / (static_cast<double>(den) * cfg.channel_bandwidth_hz);
}

// Raw data rate R = N*b*c/T in bits/s.
inline double raw_data_rate_bps(const McsProfile& mcs, const PhyConfig& cfg) {
    validate_mcs(mcs);
    validate_phy(cfg);
    const auto& sf = cfg.sampling_factor;
    const auto& g = cfg.cyclic_prefix;
    const auto& c = mcs.coding_rate;
    // R = N*b*c*p*Gd*W / (fft*q*(Gn+Gd))
    std::int64_t num = static_cast<std::int64_t>(used_subcarriers(cfg.fft_size)) * mcs.bits() *
                       c.numerator() * sf.numerator() * g.denominator();
    std::int64_t den = c.denominator() * cfg.fft_size * sf.denominator() *
                       (g.numerator() + g.denominator());
    const std::int64_t common = std::gcd(num, den);
    num /= common;
    den /= common;
    return static_cast<double>(num) * cfg.channel_bandwidth_hz / static_cast<double>(den);
}

// Ratio of raw data rate to channel bandwidth, in b/s/Hz.
inline double spectrum_efficiency(const McsProfile& mcs, const PhyConfig& cfg) {
    return raw_data_rate_bps(mcs, cfg) / cfg.channel_bandwidth_hz;
}

struct RateRow {
    McsProfile mcs;
    Rational cyclic_prefix;
    double rate_mbps = 0;
    double efficiency = 0;
};

// All 7 MCS x 4 cyclic prefixes for the base W/FFT/sampling factor.
inline std::vector<RateRow> rate_table(const PhyConfig& cfg_base) {
    validate_phy(cfg_base);
    static const Rational prefixes[] = {{1, 32}, {1, 16}, {1, 8}, {1, 4}};
    std::vector<RateRow> rows;
    rows.reserve(28);
    for (const auto& mcs : mcs_table()) {
        for (const auto& g : prefixes) {
            PhyConfig cfg = cfg_base;
            cfg.cyclic_prefix = g;
            const double r = raw_data_rate_bps(mcs, cfg);
            rows.push_back({mcs, g, r / 1e6, r / cfg.channel_bandwidth_hz});
        }
    }
    return rows;
}

// Half-up rounding to 4 decimals, used only when formatting rates.
inline double round4(double x) {
    return std::floor(x * 1e4 + 0.5) / 1e4;
}

inline std::string format4(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", round4(x));
    return buf;
}

inline void write_rate_csv(std::ostream& out, const std::vector<RateRow>& rows) {
    out << "modulation,coding_rate,cyclic_prefix,rate_mbps,efficiency\n";
    for (const auto& row : rows) {
        out << modulation_name(row.mcs.modulation) << ',' << to_string(row.mcs.coding_rate)
            << ',' << to_string(row.cyclic_prefix) << ',' << format4(row.rate_mbps) << ','
            << format4(row.efficiency) << '\n';
    }
}

}  // namespace bwqos
