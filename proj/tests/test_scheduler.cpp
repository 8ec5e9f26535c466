#include "bwqos/scheduler.hpp"

#include "bwqos/des.hpp"  // SplitMix64 for randomized properties

#include <gtest/gtest.h>

using namespace bwqos;

namespace {

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

TEST(ComputeAlpha, RatioSemantics) {
    EXPECT_DOUBLE_EQ(compute_alpha(10.5, 21), 0.5);
    EXPECT_DOUBLE_EQ(compute_alpha(21, 21), 1.0);
    for (double l : {1.0, 7.0, 33.0}) EXPECT_DOUBLE_EQ(compute_alpha(l, 2 * l), 0.5);
    EXPECT_THROW(compute_alpha(0, 21), ConfigError);
    EXPECT_THROW(compute_alpha(10, 0), ConfigError);
}

TEST(Allocate, HandEvaluatedSplit) {
    // B=10 Mbps, 4 UGS at 256 kbps, 2 rt and 3 nrt flows, alpha = 0.5:
    // b_poll = 8976, rt share = 8976/4 = 2244, nrt = 6732 (kbps).
    ScheduleInput in{10000, 4, 256, 2, 3, 0.5};
    const auto out = allocate(in);
    EXPECT_NEAR(out.b_poll, 8976, 1e-9);
    EXPECT_NEAR(out.b_rt_total, 2244, 1e-9);
    EXPECT_NEAR(out.b_nrt_total, 6732, 1e-9);
}

TEST(Allocate, DegenerateCounts) {
    ScheduleInput in{10000, 4, 256, 0, 3, 0.5};
    auto out = allocate(in);
    EXPECT_DOUBLE_EQ(out.b_rt_total, 0);
    EXPECT_DOUBLE_EQ(out.b_nrt_total, out.b_poll);

    in.n_rt = 2;
    in.n_nrt = 0;
    out = allocate(in);
    EXPECT_DOUBLE_EQ(out.b_rt_total, out.b_poll);
    EXPECT_DOUBLE_EQ(out.b_nrt_total, 0);

    in.n_rt = 0;
    out = allocate(in);
    EXPECT_DOUBLE_EQ(out.b_rt_total, 0);
    EXPECT_DOUBLE_EQ(out.b_nrt_total, 0);

    in.n_ugs = 100;
    EXPECT_THROW(allocate(in), ConfigError);
}

TEST(Allocate, ConservationIsExact) {
    SplitMix64 rng(99);
    for (int i = 0; i < 10000; ++i) {
        ScheduleInput in;
        in.total_bandwidth_kbps = 1 + static_cast<double>(rng.next() % 1000000);
        in.bu_kbps = 1 + static_cast<double>(rng.next() % 1024);
        in.n_ugs = static_cast<int>(rng.next() % 8);
        if (in.n_ugs * in.bu_kbps > in.total_bandwidth_kbps) in.n_ugs = 0;
        in.n_rt = static_cast<int>(rng.next() % 12);
        in.n_nrt = static_cast<int>(rng.next() % 12);
        in.alpha = (1 + static_cast<double>(rng.next() % 1000)) / 1000.0;
        const auto out = allocate(in);
        // Eq 16 defines the nrt share as the complement, so this is bit-exact.
        EXPECT_EQ(out.b_rt_total + out.b_nrt_total, out.b_poll);
        EXPECT_GE(out.b_rt_total, 0);
        EXPECT_GE(out.b_nrt_total, 0);
    }
}

TEST(Allocate, HomogeneousOfDegreeOneInBandwidth) {
    ScheduleInput in{5000, 3, 200, 4, 5, 0.4};
    const auto base = allocate(in);
    ScheduleInput scaled = in;
    scaled.total_bandwidth_kbps *= 3;
    scaled.bu_kbps *= 3;
    const auto big = allocate(scaled);
    EXPECT_NEAR(big.b_rt_total, 3 * base.b_rt_total, 1e-9 * big.b_rt_total);
    EXPECT_NEAR(big.b_nrt_total, 3 * base.b_nrt_total, 1e-9 * big.b_nrt_total);
}

TEST(JainFairness, KnownValues) {
    EXPECT_DOUBLE_EQ(jain_fairness({5, 5, 5, 5}), 1.0);
    EXPECT_DOUBLE_EQ(jain_fairness({7, 0, 0, 0}), 0.25);
    EXPECT_DOUBLE_EQ(jain_fairness({2, 4}), 0.9);
    EXPECT_THROW(jain_fairness({}), ConfigError);
    EXPECT_THROW(jain_fairness({0, 0}), ConfigError);
    EXPECT_THROW(jain_fairness({1, -1}), ConfigError);
}

TEST(JainFairness, BoundsAndScaleInvariance) {
    SplitMix64 rng(123);
    for (int i = 0; i < 2000; ++i) {
        const int n = 1 + static_cast<int>(rng.next() % 16);
        std::vector<double> rates(n);
        double sum = 0;
        for (double& r : rates) {
            r = static_cast<double>(rng.next() % 10000) / 10.0;
            sum += r;
        }
        if (sum == 0) rates[0] = 1;
        const double j = jain_fairness(rates);
        EXPECT_GE(j, 1.0 / n - 1e-12);
        EXPECT_LE(j, 1.0 + 1e-12);
        const double c = 0.001 + static_cast<double>(rng.next() % 1000);
        std::vector<double> scaled = rates;
        for (double& r : scaled) r *= c;
        EXPECT_NEAR(jain_fairness(scaled), j, 1e-12);
    }
}

TEST(Reschedule, EmptyPollingClassesAreFixedPoint) {
    const auto cfg = table_v_cell(4096);
    SystemState s = empty_state(cfg);
    s.n_ugs = 3;
    const auto rep = reschedule_report(s, cfg, 0.5);
    EXPECT_DOUBLE_EQ(rep.before.utilization, rep.after.utilization);
    EXPECT_DOUBLE_EQ(rep.before.jfi, rep.after.jfi);
}

TEST(Reschedule, UtilizationNeverDrops) {
    SplitMix64 rng(31337);
    const auto cfg = table_v_cell(8192);
    for (int i = 0; i < 3000; ++i) {
        SystemState s = empty_state(cfg);
        s.n_ugs = static_cast<int>(rng.next() % 4);
        s.n_rtps = static_cast<int>(rng.next() % 4);
        s.n_nrtps = static_cast<int>(rng.next() % 4);
        s.rtps_level = s.n_rtps ? static_cast<int>(rng.next() % 9) : s.rtps_level;
        s.nrtps_level = s.n_nrtps ? static_cast<int>(rng.next() % 13) : s.nrtps_level;
        if (!state_valid(s, cfg)) continue;
        const double alpha = (1 + static_cast<double>(rng.next() % 100)) / 100.0;
        const auto rep = reschedule_report(s, cfg, alpha);
        EXPECT_GE(rep.after.utilization, rep.before.utilization - 1e-12);
        EXPECT_LE(rep.after.utilization, 1.0 + 1e-12);
    }
}

TEST(Reschedule, FlowsStayWithinClassCaps) {
    const auto cfg = table_v_cell(65536);  // plenty of slack: caps must bind
    SystemState s = empty_state(cfg);
    s.n_ugs = 1;
    s.n_rtps = 2;
    s.rtps_level = 0;  // degraded to 512
    s.n_nrtps = 3;
    s.nrtps_level = 0;  // degraded to 256
    const auto rep = reschedule_report(s, cfg, 0.5);
    // everyone reaches mstr: utilization = (256 + 2*1024 + 3*1024)/B
    EXPECT_NEAR(rep.after.utilization, (256.0 + 5 * 1024.0) / 65536.0, 1e-12);
    EXPECT_GT(rep.after.jfi, rep.before.jfi);
}

TEST(Reschedule, DegradedStateWithSlackImprovesFairness) {
    // rtPS at the floor with free headroom: rescheduling must raise JFI.
    const auto cfg = table_v_cell(4096);
    SystemState s = empty_state(cfg);
    s.n_rtps = 1;
    s.rtps_level = 0;  // 512
    s.n_nrtps = 1;
    s.nrtps_level = 12;  // 1024
    ASSERT_TRUE(state_valid(s, cfg));
    const auto rep = reschedule_report(s, cfg, 0.5);
    EXPECT_GT(rep.after.jfi, rep.before.jfi);
    EXPECT_GE(rep.after.utilization, rep.before.utilization);
}

}  // namespace
