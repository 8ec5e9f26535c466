// Continuous-time Markov chain induced by the admission policy: reachable
// state enumeration, generator assembly, stationary solve and steady-state
// QoS metrics (blocking, dropping, outage, utilization).
//
// The chain is built from the decision function itself, so the analytical
// model and the event simulator execute the same policy by construction.
#pragma once

#include "bwqos/cac.hpp"
#include "bwqos/scheduler.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <cmath>
#include <deque>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

namespace bwqos {

struct SolveError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StateSpace {
    std::vector<SystemState> states;
    std::unordered_map<SystemState, int, SystemStateHash> index;

    int ordinal(const SystemState& s) const {
        const auto it = index.find(s);
        return it == index.end() ? -1 : it->second;
    }
    std::size_t size() const { return states.size(); }
};

// Breadth-first closure from the empty state under admissions (for event
// streams with positive rate) and departures. Classes whose arrival rates
// are all zero contribute no transitions; without this the generator would
// contain unreachable strata and lose irreducibility.
inline StateSpace enumerate_states(const CellConfig& cfg, const TrafficModel& traffic) {
    require_valid(cfg);
    StateSpace space;
    std::deque<SystemState> frontier;
    const SystemState root = empty_state(cfg);
    space.states.push_back(root);
    space.index.emplace(root, 0);
    frontier.push_back(root);

    auto visit = [&](const SystemState& s) {
        if (space.index.count(s)) return;
        if (space.states.size() >= cfg.state_cap)
            throw SolveError("state space exceeds cap of " + std::to_string(cfg.state_cap));
        space.index.emplace(s, static_cast<int>(space.states.size()));
        space.states.push_back(s);
        frontier.push_back(s);
    };

    while (!frontier.empty()) {
        const SystemState s = frontier.front();
        frontier.pop_front();
        for (ServiceClass c : kClasses) {
            if (traffic.lam_new(c) > 0) {
                const auto v = decide(s, {c, RequestKind::New}, cfg);
                if (v.admitted()) visit(v.next);
            }
            if (traffic.lam_handoff(c) > 0) {
                const auto v = decide(s, {c, RequestKind::Handoff}, cfg);
                if (v.admitted()) visit(v.next);
            }
            if (s.count(c) > 0) visit(restore_on_departure(s, c, cfg));
        }
    }
    return space;
}

// Sparse generator Q: off-diagonal entries are transition rates, diagonal
// entries make every row sum to zero.
struct GeneratorMatrix {
    int dimension = 0;
    struct Entry {
        int from, to;
        double rate;
    };
    std::vector<Entry> off_diagonal;
    std::vector<double> diagonal;  // -(row sum of off-diagonals)
};

inline GeneratorMatrix build_generator(const StateSpace& space, const TrafficModel& traffic,
                                       const CellConfig& cfg) {
    GeneratorMatrix gen;
    gen.dimension = static_cast<int>(space.size());
    gen.diagonal.assign(space.size(), 0.0);
    std::unordered_map<std::int64_t, double> accum;

    auto add = [&](int from, int to, double rate) {
        if (rate <= 0 || from == to) return;
        accum[(static_cast<std::int64_t>(from) << 32) | static_cast<std::uint32_t>(to)] += rate;
    };

    for (int i = 0; i < gen.dimension; ++i) {
        const SystemState& s = space.states[i];
        for (ServiceClass c : kClasses) {
            if (traffic.lam_new(c) > 0) {
                const auto v = decide(s, {c, RequestKind::New}, cfg);
                if (v.admitted()) add(i, space.ordinal(v.next), traffic.lam_new(c));
            }
            if (traffic.lam_handoff(c) > 0) {
                const auto v = decide(s, {c, RequestKind::Handoff}, cfg);
                if (v.admitted()) add(i, space.ordinal(v.next), traffic.lam_handoff(c));
            }
            const int n = s.count(c);
            if (n > 0)
                add(i, space.ordinal(restore_on_departure(s, c, cfg)), n * traffic.service_rate(c));
        }
    }

    gen.off_diagonal.reserve(accum.size());
    for (const auto& [key, rate] : accum) {
        const int from = static_cast<int>(key >> 32);
        const int to = static_cast<int>(key & 0xffffffff);
        gen.off_diagonal.push_back({from, to, rate});
        gen.diagonal[from] -= rate;
    }
    return gen;
}

struct StationaryDistribution {
    std::vector<double> pi;
    double residual_inf = 0;  // ||pi Q||_inf of the returned vector
};

namespace detail {

inline double residual_inf_norm(const GeneratorMatrix& gen, const std::vector<double>& pi) {
    std::vector<double> r(gen.dimension, 0.0);
    for (int i = 0; i < gen.dimension; ++i) r[i] = pi[i] * gen.diagonal[i];
    for (const auto& e : gen.off_diagonal) r[e.to] += pi[e.from] * e.rate;
    double worst = 0;
    for (double v : r) worst = std::max(worst, std::abs(v));
    return worst;
}

inline std::vector<double> solve_direct(const GeneratorMatrix& gen) {
    const int n = gen.dimension;
    // pi Q = 0 with the balance equation of state 0 replaced by sum(pi) = 1:
    // rows of A are the columns of Q, row 0 is all ones.
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(gen.off_diagonal.size() + 2 * n);
    for (int i = 0; i < n; ++i) trips.emplace_back(0, i, 1.0);
    for (int i = 1; i < n; ++i) {
        // column i of Q gets the diagonal of state i
        trips.emplace_back(i, i, gen.diagonal[i]);
    }
    for (const auto& e : gen.off_diagonal)
        if (e.to != 0) trips.emplace_back(e.to, e.from, e.rate);

    Eigen::SparseMatrix<double> a(n, n);
    a.setFromTriplets(trips.begin(), trips.end());
    a.makeCompressed();

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.analyzePattern(a);
    lu.factorize(a);
    if (lu.info() != Eigen::Success)
        throw SolveError("sparse LU factorization failed (reducible or singular chain?)");
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b[0] = 1.0;
    const Eigen::VectorXd x = lu.solve(b);
    if (lu.info() != Eigen::Success) throw SolveError("sparse LU solve failed");
    return std::vector<double>(x.data(), x.data() + n);
}

// Power iteration on the uniformized chain P = I + Q/Lambda.
inline std::vector<double> solve_power(const GeneratorMatrix& gen, double tol,
                                       std::size_t max_iters) {
    const int n = gen.dimension;
    double lambda = 0;
    for (double d : gen.diagonal) lambda = std::max(lambda, -d);
    lambda *= 1.05;
    if (lambda <= 0) throw SolveError("degenerate generator");

    std::vector<double> pi(n, 1.0 / n), next(n, 0.0);
    for (std::size_t it = 0; it < max_iters; ++it) {
        for (int i = 0; i < n; ++i) next[i] = pi[i] * (1.0 + gen.diagonal[i] / lambda);
        for (const auto& e : gen.off_diagonal) next[e.to] += pi[e.from] * e.rate / lambda;
        double sum = 0, delta = 0;
        for (int i = 0; i < n; ++i) {
            delta = std::max(delta, std::abs(next[i] - pi[i]));
            sum += next[i];
        }
        for (int i = 0; i < n; ++i) pi[i] = next[i] / sum;
        if (delta <= tol) return pi;
    }
    throw SolveError("power iteration did not converge");
}

}  // namespace detail

// Solves pi Q = 0, sum(pi) = 1. Direct sparse LU by default; instances above
// cfg.direct_solve_limit fall back to power iteration on the uniformized
// chain. Entries within -1e-12 are clamped to zero as numerical dust.
inline StationaryDistribution solve_stationary(const GeneratorMatrix& gen,
                                               const CellConfig& cfg = {}) {
    if (gen.dimension <= 0) throw SolveError("empty generator");
    StationaryDistribution out;
    out.pi = (static_cast<std::size_t>(gen.dimension) <= cfg.direct_solve_limit)
                 ? detail::solve_direct(gen)
                 : detail::solve_power(gen, cfg.power_tolerance, cfg.power_max_iters);

    double sum = 0;
    for (double& p : out.pi) {
        if (p < 0) {
            if (p < -1e-9) throw SolveError("stationary solve produced a negative probability");
            p = 0;
        }
        sum += p;
    }
    if (!(sum > 0)) throw SolveError("stationary solve produced a zero vector");
    for (double& p : out.pi) p /= sum;
    out.residual_inf = detail::residual_inf_norm(gen, out.pi);
    if (out.residual_inf > 1e-9)
        throw SolveError("stationary residual " + std::to_string(out.residual_inf) +
                         " exceeds 1e-9");
    return out;
}

// Steady-state QoS metrics. NCBP/HCDP of a class sum pi over the states
// where the corresponding request is rejected for any reason; COP sums the
// subset whose rejection reason is Outage (the first gate, identical for
// both request kinds). BU is the pi-weighted occupied fraction.
struct QosReport {
    std::array<double, 3> ncbp = {0, 0, 0};
    std::array<double, 3> hcdp = {0, 0, 0};
    std::array<double, 3> cop = {0, 0, 0};
    double bu = 0;

    double metric(int i) const {
        if (i < 3) return ncbp[i];
        if (i < 6) return hcdp[i - 3];
        if (i < 9) return cop[i - 6];
        return bu;
    }
};

inline QosReport qos_report(const StateSpace& space, const StationaryDistribution& dist,
                            const CellConfig& cfg) {
    QosReport rep;
    for (std::size_t i = 0; i < space.size(); ++i) {
        const double p = dist.pi[i];
        const SystemState& s = space.states[i];
        rep.bu += p * occupied_kbps(s, cfg) / cfg.total_bandwidth_kbps;
        for (ServiceClass c : kClasses) {
            const int k = static_cast<int>(c);
            const auto nv = decide(s, {c, RequestKind::New}, cfg);
            if (!nv.admitted()) {
                rep.ncbp[k] += p;
                if (nv.reason == RejectReason::Outage) rep.cop[k] += p;
            }
            const auto hv = decide(s, {c, RequestKind::Handoff}, cfg);
            if (!hv.admitted()) rep.hcdp[k] += p;
        }
    }
    return rep;
}

// Pi-weighted scheduler metrics; the fairness averages condition on states
// with at least one connection (fairness of an empty system is undefined).
struct SchedSummary {
    double bu_before = 0, bu_after = 0;
    double jfi_before = 1.0, jfi_after = 1.0;
};

inline SchedSummary sched_summary(const StateSpace& space, const StationaryDistribution& dist,
                                  const CellConfig& cfg, double alpha) {
    SchedSummary sum;
    double occupied_mass = 0, jb = 0, ja = 0;
    for (std::size_t i = 0; i < space.size(); ++i) {
        const double p = dist.pi[i];
        const SystemState& s = space.states[i];
        const auto rep = reschedule_report(s, cfg, alpha);
        sum.bu_before += p * rep.before.utilization;
        sum.bu_after += p * rep.after.utilization;
        if (s.n_ugs + s.n_rtps + s.n_nrtps > 0) {
            occupied_mass += p;
            jb += p * rep.before.jfi;
            ja += p * rep.after.jfi;
        }
    }
    if (occupied_mass > 0) {
        sum.jfi_before = jb / occupied_mass;
        sum.jfi_after = ja / occupied_mass;
    }
    return sum;
}

inline const char* qos_csv_header() {
    return "lambda,mcs,ncbp_ugs,ncbp_rtps,ncbp_nrtps,hcdp_ugs,hcdp_rtps,hcdp_nrtps,"
           "cop_ugs,cop_rtps,cop_nrtps,bu";
}

inline std::string format_probability(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline void write_qos_row(std::ostream& out, const std::string& axis_value,
                          const std::string& mcs_name, const QosReport& rep) {
    out << axis_value << ',' << mcs_name;
    for (int i = 0; i < 10; ++i) out << ',' << format_probability(rep.metric(i));
    out << '\n';
}

inline void dump_states(std::ostream& out, const StateSpace& space,
                        const StationaryDistribution& dist, const CellConfig& cfg) {
    out << "n_ugs,n_rtps,d_rtps_kbps,n_nrtps,d_nrtps_kbps,pi\n";
    for (std::size_t i = 0; i < space.size(); ++i) {
        const SystemState& s = space.states[i];
        out << s.n_ugs << ',' << s.n_rtps << ',' << d_rtps(s, cfg) << ',' << s.n_nrtps << ','
            << d_nrtps(s, cfg) << ',' << format_probability(dist.pi[i]) << '\n';
    }
}

}  // namespace bwqos
