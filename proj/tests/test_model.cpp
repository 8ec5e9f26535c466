#include "bwqos/model.hpp"

#include <gtest/gtest.h>

using namespace bwqos;

namespace {

// Published QoS parameter set: UGS 256/256, rtPS 1024/512 (L = 21 ms),
// nrtPS 1024/256, E_b/N_0 = 3.6 / 6.3 / 8.1 dB.
CellConfig table_v_cell(double bandwidth_kbps) {
    CellConfig cfg;
    cfg.total_bandwidth_kbps = bandwidth_kbps;
    cfg.frame_ms = 1;
    cfg.channel_hz = 20e6;
    cfg.ugs = {ServiceClass::Ugs, 256, 256, 64, 0, 3.6, 0};
    cfg.rtps = {ServiceClass::Rtps, 1024, 512, 10240, 21, 6.3, 0};
    cfg.nrtps = {ServiceClass::Nrtps, 1024, 256, 10240, 0, 8.1, 0};
    cfg.degradation_step_kbps = 64;
    return cfg;
}

TEST(Validate, TableVDefaultsAreOk) {
    for (double b : {15584.4155844156, 2048.0, 70129.87012987}) {
        const auto violations = validate(table_v_cell(b));
        EXPECT_TRUE(violations.empty()) << violations.size() << " violations at B=" << b;
    }
}

TEST(Validate, ReportsMrtrAboveMstr) {
    auto cfg = table_v_cell(2048);
    cfg.rtps.mrtr_kbps = 2048;  // above mstr
    const auto v = validate(cfg);
    ASSERT_FALSE(v.empty());
    bool found = false;
    for (const auto& msg : v) found = found || msg.find("mrtr exceeds mstr") != std::string::npos;
    EXPECT_TRUE(found);
}

TEST(Validate, ReportsNonDividingGrid) {
    auto cfg = table_v_cell(2048);
    cfg.degradation_step_kbps = 100;  // rtPS span 512 is not a multiple
    const auto v = validate(cfg);
    ASSERT_FALSE(v.empty());
    bool found = false;
    for (const auto& msg : v)
        found = found || msg.find("does not divide") != std::string::npos;
    EXPECT_TRUE(found);
}

TEST(Validate, RequiresIntegerFrameCount) {
    auto cfg = table_v_cell(2048);
    cfg.rtps.max_latency_ms = 21.5;  // L/f must be an integer
    const auto v = validate(cfg);
    bool found = false;
    for (const auto& msg : v) found = found || msg.find("integer") != std::string::npos;
    EXPECT_TRUE(found);
}

TEST(Validate, UgsMustBeFixedRate) {
    auto cfg = table_v_cell(2048);
    cfg.ugs.mstr_kbps = 512;
    const auto v = validate(cfg);
    bool found = false;
    for (const auto& msg : v) found = found || msg.find("mstr = mrtr") != std::string::npos;
    EXPECT_TRUE(found);
}

TEST(SystemState, PlaceholderCanonicalization) {
    const auto cfg = table_v_cell(4096);
    SystemState s = empty_state(cfg);
    EXPECT_EQ(s.rtps_level, cfg.levels(ServiceClass::Rtps));
    EXPECT_EQ(s.nrtps_level, cfg.levels(ServiceClass::Nrtps));
    EXPECT_DOUBLE_EQ(d_rtps(s, cfg), 1024);
    EXPECT_DOUBLE_EQ(d_nrtps(s, cfg), 1024);
    EXPECT_DOUBLE_EQ(occupied_kbps(s, cfg), 0);
    EXPECT_TRUE(state_valid(s, cfg));

    // a degraded level on an empty class is non-canonical
    SystemState bad = s;
    bad.rtps_level = 0;
    EXPECT_FALSE(state_valid(bad, cfg));

    SystemState loaded = s;
    loaded.n_rtps = 2;
    loaded.rtps_level = 0;
    loaded.n_nrtps = 1;
    loaded.nrtps_level = 4;
    EXPECT_DOUBLE_EQ(d_rtps(loaded, cfg), 512);
    EXPECT_DOUBLE_EQ(d_nrtps(loaded, cfg), 512);
    EXPECT_DOUBLE_EQ(occupied_kbps(loaded, cfg), 2 * 512 + 512);
    EXPECT_TRUE(state_valid(loaded, cfg));

    loaded.n_rtps = 0;
    canonicalize(loaded, cfg);
    EXPECT_EQ(loaded.rtps_level, cfg.levels(ServiceClass::Rtps));
}

TEST(SystemState, BudgetBoundIsChecked) {
    const auto cfg = table_v_cell(1024);
    SystemState s = empty_state(cfg);
    s.n_ugs = 4;  // 4*256 = 1024 = B
    EXPECT_TRUE(state_valid(s, cfg));
    s.n_ugs = 5;
    EXPECT_FALSE(state_valid(s, cfg));
}

TEST(SystemState, HashAndEqualityOnTuples) {
    const auto cfg = table_v_cell(4096);
    SystemState a = empty_state(cfg), b = empty_state(cfg);
    EXPECT_TRUE(a == b);
    EXPECT_EQ(SystemStateHash{}(a), SystemStateHash{}(b));
    b.n_ugs = 1;
    EXPECT_FALSE(a == b);
}

TEST(ServiceClassParams, TokenRateDefaultsToMrtr) {
    const auto cfg = table_v_cell(2048);
    EXPECT_DOUBLE_EQ(cfg.rtps.token_rate(), 512);
    auto rt = cfg.rtps;
    rt.token_rate_kbps = 640;
    EXPECT_DOUBLE_EQ(rt.token_rate(), 640);
}

TEST(ServiceClassParams, DbToLinear) {
    ServiceClassParams p;
    p.ebn0_db = 3.6;
    EXPECT_NEAR(p.ebn0_linear(), 2.2908676527677724, 1e-12);
    p.ebn0_db = 0;
    EXPECT_DOUBLE_EQ(p.ebn0_linear(), 1.0);
}

}  // namespace
