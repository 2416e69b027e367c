#pragma once

// Assembles the full evaluation record for a pulse or trajectory: realized
// gate and its Euler angles, per-channel infidelities and filter-function
// traces, the higher-order smallness diagnostic, phase decomposition, and
// zero-frequency robustness flags. Serializes to JSON for the CLI.

#include <json.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "pulseforge/filter_function.hpp"
#include "pulseforge/gate.hpp"
#include "pulseforge/geometric.hpp"
#include "pulseforge/infidelity.hpp"
#include "pulseforge/invariant_core.hpp"
#include "pulseforge/io.hpp"
#include "pulseforge/noise.hpp"
#include "pulseforge/trajectory.hpp"

namespace pulseforge {

/// Zero-frequency flatness threshold on F(0)/T^2 below which a channel
/// counts as robust (first-order-insensitive to static noise).
constexpr double kRobustFlatness = 1e-8;

struct ChannelReport {
    std::string channel;
    double infidelity = 0.0;
    double ff_at_zero = 0.0;
    bool robust = false;
    std::vector<double> omega;  // trace frequencies
    std::vector<double> ff;     // trace values
};

struct GateReport {
    Matrix2cd gate;
    ZxzDecomposition zxz;
    double total_time = 0.0;
    double total_infidelity = 0.0;
    double smallness = 0.0;  // xi^2
    bool first_order_valid = false;
    PhaseReport phases;
    std::vector<ChannelReport> channels;
};

/// Builds the report from a trajectory. Filter-function traces are sampled
/// on `trace_omegas` (empty = default log grid around the drive scale).
inline GateReport gate_report(const InvariantTrajectory& traj,
                              const std::vector<NoiseChannel>& channels,
                              std::vector<double> trace_omegas = {}) {
    GateReport rep;
    rep.gate = gate_from_invariants(traj);
    rep.zxz = zxz_decompose(rep.gate);
    rep.total_time = traj.grid.total_time();
    rep.phases = phase_decompose(traj);

    const InfidelityReport inf = infidelity_report(traj, channels);
    rep.total_infidelity = inf.total;
    rep.smallness = inf.smallness;
    rep.first_order_valid = inf.first_order_valid;

    if (trace_omegas.empty()) trace_omegas = default_omega_grid(1.0);
    const double t2 = rep.total_time * rep.total_time;
    for (std::size_t q = 0; q < channels.size(); ++q) {
        ChannelReport cr;
        cr.channel = channels[q].id;
        cr.infidelity = inf.entries[q].infidelity;
        cr.ff_at_zero = inf.entries[q].ff_at_zero;
        cr.robust = cr.ff_at_zero <= kRobustFlatness * t2;
        cr.omega = trace_omegas;
        cr.ff = filter_function(traj, channels[q].sensitivity, trace_omegas);
        rep.channels.push_back(std::move(cr));
    }
    return rep;
}

inline nlohmann::json to_json(const GateReport& rep, bool include_traces = true) {
    nlohmann::json j;
    j["gate"] = {
        {"re", {{rep.gate(0, 0).real(), rep.gate(0, 1).real()},
                {rep.gate(1, 0).real(), rep.gate(1, 1).real()}}},
        {"im", {{rep.gate(0, 0).imag(), rep.gate(0, 1).imag()},
                {rep.gate(1, 0).imag(), rep.gate(1, 1).imag()}}},
    };
    j["zxz"] = {{"theta", rep.zxz.theta}, {"psi1", rep.zxz.psi1}, {"psi2", rep.zxz.psi2}};
    j["total_time"] = rep.total_time;
    j["total_infidelity"] = rep.total_infidelity;
    j["xi_squared"] = rep.smallness;
    j["first_order_valid"] = rep.first_order_valid;
    j["phases"] = {{"total", rep.phases.alpha_total},
                   {"geometric", rep.phases.alpha_geometric},
                   {"dynamical", rep.phases.alpha_dynamical},
                   {"cyclic", rep.phases.cyclic}};
    j["channels"] = nlohmann::json::array();
    for (const ChannelReport& cr : rep.channels) {
        nlohmann::json c = {{"channel", cr.channel},
                            {"infidelity", cr.infidelity},
                            {"ff_at_zero", cr.ff_at_zero},
                            {"robust", cr.robust}};
        if (include_traces) {
            c["omega"] = cr.omega;
            c["F"] = cr.ff;
        }
        j["channels"].push_back(std::move(c));
    }
    return j;
}

}  // namespace pulseforge
