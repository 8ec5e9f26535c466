#include "bwqos/phy.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace bwqos;

namespace {

PhyConfig base_cfg() {
    return PhyConfig{20e6, 2048, {8, 7}, {1, 32}};
}

// Published rate/efficiency table for 20 MHz, FFT 2048, sampling factor 8/7.
// Rows are MCS-major, cyclic prefix 1/32, 1/16, 1/8, 1/4 within each MCS.
// The 64QAM-2/3 @ 1/16 rate is pinned to the equation-consistent value
// (its efficiency column times 20 MHz), not the misprinted one.
struct GoldenRow {
    const char* mcs;
    const char* prefix;
    double rate_mbps;
    double efficiency;
};

const GoldenRow kGolden[] = {
    {"QPSK-1/2", "1/32", 15.5844, 0.7792},  {"QPSK-1/2", "1/16", 15.1261, 0.7563},
    {"QPSK-1/2", "1/8", 14.2857, 0.7143},   {"QPSK-1/2", "1/4", 12.8571, 0.6429},
    {"QPSK-3/4", "1/32", 23.3766, 1.1688},  {"QPSK-3/4", "1/16", 22.6891, 1.1345},
    {"QPSK-3/4", "1/8", 21.4286, 1.0714},   {"QPSK-3/4", "1/4", 19.2857, 0.9643},
    {"16QAM-1/2", "1/32", 31.1688, 1.5584}, {"16QAM-1/2", "1/16", 30.2521, 1.5126},
    {"16QAM-1/2", "1/8", 28.5714, 1.4286},  {"16QAM-1/2", "1/4", 25.7143, 1.2857},
    {"16QAM-3/4", "1/32", 46.7532, 2.3377}, {"16QAM-3/4", "1/16", 45.3782, 2.2689},
    {"16QAM-3/4", "1/8", 42.8571, 2.1429},  {"16QAM-3/4", "1/4", 38.5714, 1.9286},
    {"64QAM-1/2", "1/32", 46.7532, 2.3377}, {"64QAM-1/2", "1/16", 45.3782, 2.2689},
    {"64QAM-1/2", "1/8", 42.8571, 2.1429},  {"64QAM-1/2", "1/4", 38.5714, 1.9286},
    {"64QAM-2/3", "1/32", 62.3377, 3.1169}, {"64QAM-2/3", "1/16", 60.5042, 3.0252},
    {"64QAM-2/3", "1/8", 57.1429, 2.8571},  {"64QAM-2/3", "1/4", 51.4286, 2.5714},
    {"64QAM-3/4", "1/32", 70.1299, 3.5065}, {"64QAM-3/4", "1/16", 68.0672, 3.4034},
    {"64QAM-3/4", "1/8", 64.2857, 3.2143},  {"64QAM-3/4", "1/4", 57.8571, 2.8929},
};

TEST(SymbolDuration, HandEvaluatedExamples) {
    // F_s = (8/7)*20 MHz, T_b = 2048/F_s = 89.6 us, T_g = G*T_b.
    PhyConfig cfg = base_cfg();
    EXPECT_NEAR(symbol_duration_s(cfg), 92.4e-6, 92.4e-6 * 1e-12);
    cfg.cyclic_prefix = {1, 4};
    EXPECT_NEAR(symbol_duration_s(cfg), 112.0e-6, 112.0e-6 * 1e-12);
}

TEST(SymbolDuration, GuardRatioIsDefinitional) {
    // T/T_b = 1 + G for any config, since T_g = G*T_b.
    for (const Rational g : {Rational{1, 32}, {1, 16}, {1, 8}, {1, 4}}) {
        PhyConfig cfg = base_cfg();
        cfg.cyclic_prefix = g;
        const double t = symbol_duration_s(cfg);
        const double tb = 2048.0 / ((8.0 / 7.0) * cfg.channel_bandwidth_hz);
        EXPECT_NEAR(t / tb, 1.0 + to_double(g), 1e-12);
    }
}

TEST(RawDataRate, PublishedAnchors) {
    PhyConfig cfg = base_cfg();
    EXPECT_NEAR(raw_data_rate_bps({Modulation::Qpsk, {1, 2}}, cfg) / 1e6, 15.5844, 5e-5);
    EXPECT_NEAR(raw_data_rate_bps({Modulation::Qam64, {3, 4}}, cfg) / 1e6, 70.1299, 5e-5);
    cfg.cyclic_prefix = {1, 4};
    EXPECT_NEAR(raw_data_rate_bps({Modulation::Qam16, {1, 2}}, cfg) / 1e6, 25.7143, 5e-5);
}

TEST(RateTable, MatchesGoldenTable) {
    const auto rows = rate_table(base_cfg());
    ASSERT_EQ(rows.size(), 28u);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i].mcs.name(), kGolden[i].mcs) << "row " << i;
        EXPECT_EQ(to_string(rows[i].cyclic_prefix), kGolden[i].prefix) << "row " << i;
        EXPECT_NEAR(rows[i].rate_mbps, kGolden[i].rate_mbps, 5e-5) << "row " << i;
        EXPECT_NEAR(rows[i].efficiency, kGolden[i].efficiency, 5e-5) << "row " << i;
    }
}

TEST(RateTable, EqualProductRowsAreBitIdentical) {
    for (const Rational g : {Rational{1, 32}, {1, 16}, {1, 8}, {1, 4}}) {
        PhyConfig cfg = base_cfg();
        cfg.cyclic_prefix = g;
        const double a = raw_data_rate_bps({Modulation::Qam16, {3, 4}}, cfg);
        const double b = raw_data_rate_bps({Modulation::Qam64, {1, 2}}, cfg);
        EXPECT_EQ(a, b);  // b*c = 3 in both
    }
}

TEST(RateTable, MonotoneInCodeLoadAndGuard) {
    const auto rows = rate_table(base_cfg());
    // within an MCS, rate strictly decreases as G grows
    for (int m = 0; m < 7; ++m)
        for (int g = 1; g < 4; ++g)
            EXPECT_LT(rows[m * 4 + g].rate_mbps, rows[m * 4 + g - 1].rate_mbps);
    // at fixed config, rate strictly increases in b*c
    const PhyConfig cfg = base_cfg();
    for (std::size_t i = 0; i < mcs_table().size(); ++i) {
        for (std::size_t j = 0; j < mcs_table().size(); ++j) {
            const auto& a = mcs_table()[i];
            const auto& b = mcs_table()[j];
            const double bc_a = a.bits() * to_double(a.coding_rate);
            const double bc_b = b.bits() * to_double(b.coding_rate);
            if (bc_a < bc_b)
                EXPECT_LT(raw_data_rate_bps(a, cfg), raw_data_rate_bps(b, cfg));
        }
    }
}

TEST(SpectrumEfficiency, InvariantUnderBandwidthScaling) {
    for (const auto& mcs : mcs_table()) {
        PhyConfig cfg = base_cfg();
        const double e1 = spectrum_efficiency(mcs, cfg);
        cfg.channel_bandwidth_hz *= 2;
        const double e2 = spectrum_efficiency(mcs, cfg);
        EXPECT_NEAR(e1, e2, 1e-12 * e1);
    }
}

TEST(PhyValidation, RejectsOutOfTableConfigs) {
    PhyConfig cfg = base_cfg();
    cfg.fft_size = 256;
    EXPECT_THROW(symbol_duration_s(cfg), ConfigError);
    cfg = base_cfg();
    cfg.cyclic_prefix = {1, 2};
    EXPECT_THROW(symbol_duration_s(cfg), ConfigError);
    cfg = base_cfg();
    cfg.channel_bandwidth_hz = 0;
    EXPECT_THROW(symbol_duration_s(cfg), ConfigError);
    EXPECT_THROW(raw_data_rate_bps({Modulation::Qpsk, {2, 3}}, base_cfg()), ConfigError);
}

TEST(RateCsv, FourDecimalFormat) {
    std::ostringstream out;
    write_rate_csv(out, rate_table(base_cfg()));
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "modulation,coding_rate,cyclic_prefix,rate_mbps,efficiency");
    std::getline(in, line);
    EXPECT_EQ(line, "QPSK,1/2,1/32,15.5844,0.7792");
    int rows = 1;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    EXPECT_EQ(rows, 28);
}

TEST(Rational, ParseAndFormat) {
    EXPECT_EQ(parse_rational("8/7"), Rational(8, 7));
    EXPECT_EQ(parse_rational("2"), Rational(2));
    EXPECT_EQ(to_string(Rational(2, 4)), "1/2");
    EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
    EXPECT_THROW(parse_rational("x"), std::invalid_argument);
}

}  // namespace
