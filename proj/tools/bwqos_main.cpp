// bwqos: analytical-model and simulation front end.
//
//   bwqos <command> --scenario <file> --out <file> [--set key=value]...
//
// Commands: rates, solve, simulate, load-sweep, ebn0-sweep, amc-range,
// compare. See README.md for the scenario format and output schemas.
#include "bwqos/cli.hpp"

#include <CLI11.hpp>

int main(int argc, char** argv) {
    CLI::App app{"cross-layer QoS toolkit for OFDMA broadband wireless access"};
    app.require_subcommand(1);

    bwqos::Command cmd;
    const std::vector<std::pair<std::string, std::string>> verbs = {
        {"rates", "emit the raw data rate / spectrum efficiency table"},
        {"solve", "solve the Markov chain and report steady-state QoS"},
        {"simulate", "run the seeded discrete-event simulator"},
        {"load-sweep", "sweep arrival rates across the configured MCS set"},
        {"ebn0-sweep", "sweep E_b/N_0 across the configured MCS set"},
        {"amc-range", "derive per-MCS E_b/N_0 operating ranges"},
        {"compare", "cross-validate the analytical solve against the simulator"},
    };
    for (const auto& [name, help] : verbs) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--scenario", cmd.scenario_path, "scenario file")->required();
        sub->add_option("--out", cmd.out_path, "output CSV path")->required();
        sub->add_option("--set", cmd.overrides, "scenario override key=value (repeatable)");
        if (name == "simulate" || name == "compare") {
            sub->add_option("--seed", cmd.seed, "simulation seed");
            sub->add_option("--events", cmd.events, "event horizon");
        }
        if (name == "ebn0-sweep" || name == "amc-range")
            sub->add_option("--epsilon", cmd.epsilon, "zero-probability tolerance");
        if (name == "solve")
            sub->add_option("--dump-states", cmd.dump_states_path,
                            "also dump the state space with probabilities");
        if (name == "load-sweep")
            sub->add_option("--sched-out", cmd.sched_out_path,
                            "scheduler before/after CSV (default <out>.sched.csv)");
        sub->callback([&cmd, name = name] { cmd.verb = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    return bwqos::execute(cmd);
}
