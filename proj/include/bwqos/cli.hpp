// Command dispatch for the bwqos tool. Kept in the library so tests can
// drive commands directly; tools/bwqos_main.cpp only parses argv.
#pragma once

#include "bwqos/scenario.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace bwqos {

struct Command {
    std::string verb;  // rates | solve | simulate | load-sweep | ebn0-sweep | amc-range | compare
    std::string scenario_path;
    std::string out_path;
    std::string sched_out_path;   // load-sweep companion CSV (default <out>.sched.csv)
    std::string dump_states_path; // optional state dump for solve
    std::vector<std::string> overrides;
    std::uint64_t seed = 1;
    std::size_t events = 1'000'000;
    double epsilon = 0;  // 0 = use the scenario's epsilon
};

namespace detail {

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write output file '" + path + "'");
    return out;
}

// Mean per-stream arrival rate; equals the common value for the symmetric
// default traffic.
inline double mean_lambda(const TrafficModel& t) {
    double sum = 0;
    for (int i = 0; i < 3; ++i) sum += t.lambda_new[i] + t.lambda_handoff[i];
    return sum / 6.0;
}

inline TrafficModel uniform_traffic(const TrafficModel& base, double lambda) {
    TrafficModel t = base;
    for (int i = 0; i < 3; ++i) {
        t.lambda_new[i] = lambda;
        t.lambda_handoff[i] = lambda;
    }
    return t;
}

inline SweepSpec sweep_spec_from(const Scenario& sc, double epsilon) {
    SweepSpec spec;
    spec.ebn0_grid_db = sc.ebn0_grid_db;
    spec.mcs_set = sc.sweep_mcs_or_all();
    spec.phy = sc.phy;
    spec.base = sc.cell();
    spec.traffic = sc.traffic;
    spec.epsilon = epsilon > 0 ? epsilon : sc.epsilon;
    return spec;
}

struct SolvedScenario {
    StateSpace space;
    GeneratorMatrix gen;
    StationaryDistribution dist;
    QosReport report;
};

inline SolvedScenario solve_cell(const CellConfig& cfg, const TrafficModel& traffic) {
    SolvedScenario s;
    s.space = enumerate_states(cfg, traffic);
    s.gen = build_generator(s.space, traffic, cfg);
    s.dist = solve_stationary(s.gen, cfg);
    s.report = qos_report(s.space, s.dist, cfg);
    return s;
}

}  // namespace detail

inline int run_rates(const Scenario& sc, const Command& cmd) {
    auto out = detail::open_out(cmd.out_path);
    write_rate_csv(out, rate_table(sc.phy));
    std::cout << "wrote 28 rate rows to " << cmd.out_path << "\n";
    return 0;
}

inline int run_solve(const Scenario& sc, const Command& cmd) {
    const CellConfig cfg = sc.cell();
    const auto solved = detail::solve_cell(cfg, sc.traffic);
    auto out = detail::open_out(cmd.out_path);
    out << qos_csv_header() << '\n';
    write_qos_row(out, format_probability(detail::mean_lambda(sc.traffic)), sc.mcs.name(),
                  solved.report);
    if (!cmd.dump_states_path.empty()) {
        auto dump = detail::open_out(cmd.dump_states_path);
        dump_states(dump, solved.space, solved.dist, cfg);
    }
    std::cout << "solved " << solved.space.size() << " states, wrote " << cmd.out_path << "\n";
    return 0;
}

inline int run_simulate(const Scenario& sc, const Command& cmd) {
    SimConfig sim;
    sim.seed = cmd.seed;
    sim.horizon_events = cmd.events;
    sim.traffic = sc.traffic;
    sim.cell = sc.cell();
    sim.alpha = sc.alpha;
    const SimReport rep = run(sim);
    auto out = detail::open_out(cmd.out_path);
    write_sim_csv(out, format_probability(detail::mean_lambda(sc.traffic)), sc.mcs.name(), rep);
    std::cout << "simulated " << rep.events_processed << " events, wrote " << cmd.out_path
              << "\n";
    return 0;
}

inline int run_load_sweep(const Scenario& sc, const Command& cmd) {
    auto out = detail::open_out(cmd.out_path);
    const std::string sched_path =
        cmd.sched_out_path.empty() ? cmd.out_path + ".sched.csv" : cmd.sched_out_path;
    auto sched_out = detail::open_out(sched_path);
    out << qos_csv_header() << '\n';
    sched_out << "arrival_rate,mcs,bu_before,bu_after,jfi_before,jfi_after\n";

    for (double lambda : sc.sweep_lambdas) {
        const TrafficModel traffic = detail::uniform_traffic(sc.traffic, lambda);
        for (const auto& mcs : sc.sweep_mcs_or_all()) {
            const CellConfig cfg = sc.cell_for(mcs);
            const auto solved = detail::solve_cell(cfg, traffic);
            write_qos_row(out, format_probability(lambda), mcs.name(), solved.report);
            const SchedSummary sched = sched_summary(solved.space, solved.dist, cfg, sc.alpha);
            sched_out << format_probability(lambda) << ',' << mcs.name() << ','
                      << format_probability(sched.bu_before) << ','
                      << format_probability(sched.bu_after) << ','
                      << format_probability(sched.jfi_before) << ','
                      << format_probability(sched.jfi_after) << '\n';
        }
    }
    std::cout << "wrote " << cmd.out_path << " and " << sched_path << "\n";
    return 0;
}

inline int run_ebn0_sweep(const Scenario& sc, const Command& cmd) {
    const SweepSpec spec = detail::sweep_spec_from(sc, cmd.epsilon);
    const SweepResult result = sweep(spec);
    auto out = detail::open_out(cmd.out_path);
    out << "ebn0_db,mcs,ncbp_ugs,ncbp_rtps,ncbp_nrtps,hcdp_ugs,hcdp_rtps,hcdp_nrtps,"
           "cop_ugs,cop_rtps,cop_nrtps,bu\n";
    for (const auto& p : result.points)
        write_qos_row(out, format_probability(p.ebn0_db), p.mcs.name(), p.report);
    std::cout << "wrote " << result.points.size() << " sweep points to " << cmd.out_path << "\n";
    return 0;
}

inline int run_amc_range(const Scenario& sc, const Command& cmd) {
    const SweepSpec spec = detail::sweep_spec_from(sc, cmd.epsilon);
    const SweepResult result = sweep(spec);
    const auto ranges = operating_range(result, spec.epsilon);
    auto out = detail::open_out(cmd.out_path);
    write_range_csv(out, ranges);
    std::cout << "wrote " << ranges.size() << " MCS ranges to " << cmd.out_path << "\n";
    return 0;
}

inline int run_compare(const Scenario& sc, const Command& cmd) {
    const CellConfig cfg = sc.cell();
    const auto solved = detail::solve_cell(cfg, sc.traffic);
    const SchedSummary sched = sched_summary(solved.space, solved.dist, cfg, sc.alpha);

    SimConfig sim;
    sim.seed = cmd.seed;
    sim.horizon_events = cmd.events;
    sim.traffic = sc.traffic;
    sim.cell = cfg;
    sim.alpha = sc.alpha;
    const SimReport rep = run(sim);

    const auto rows = compare_with_ctmc(rep, solved.report, sched);
    auto out = detail::open_out(cmd.out_path);
    out << "metric,analytic,empirical,ci_halfwidth,diff,within_ci\n";
    int outside = 0;
    for (const auto& r : rows) {
        out << r.name << ',' << format_probability(r.analytic) << ','
            << format_probability(r.empirical) << ',' << format_probability(r.ci_halfwidth)
            << ',' << format_probability(r.difference) << ',' << (r.within_ci ? 1 : 0) << '\n';
        outside += r.within_ci ? 0 : 1;
    }
    std::cout << "compared " << rows.size() << " metrics, " << outside
              << " outside the 95% interval, wrote " << cmd.out_path << "\n";
    return 0;
}

// Exit status: 0 success, 1 scenario/validation failure, 2 runtime error.
// Errors print a single machine-readable line on stderr.
inline int execute(const Command& cmd, std::ostream& err = std::cerr) {
    const auto fail = [&err](const char* category, const std::string& what) {
        std::string msg = what;
        for (char& ch : msg)
            if (ch == '\n') ch = ' ';
        err << "error: " << category << ": " << msg << "\n";
    };
    try {
        Scenario sc = load_scenario(cmd.scenario_path);
        apply_overrides(sc, cmd.overrides);
        if (cmd.verb == "rates") {
            validate_phy(sc.phy);
            return run_rates(sc, cmd);
        }
        // Every other verb needs a valid cell configuration up front.
        try {
            require_valid(sc.cell());
        } catch (const ConfigError& e) {
            fail("validation", e.what());
            return 1;
        }
        if (cmd.verb == "solve") return run_solve(sc, cmd);
        if (cmd.verb == "simulate") return run_simulate(sc, cmd);
        if (cmd.verb == "load-sweep") return run_load_sweep(sc, cmd);
        if (cmd.verb == "ebn0-sweep") return run_ebn0_sweep(sc, cmd);
        if (cmd.verb == "amc-range") return run_amc_range(sc, cmd);
        if (cmd.verb == "compare") return run_compare(sc, cmd);
        fail("usage", "unknown command '" + cmd.verb + "'");
        return 1;
    } catch (const SolveError& e) {
        fail("runtime", e.what());
        return 2;
    } catch (const ConfigError& e) {
        fail("validation", e.what());
        return 1;
    } catch (const std::exception& e) {
        fail("runtime", e.what());
        return 2;
    }
}

}  // namespace bwqos
