// pulseforge: command-line front end for the pulse toolkit.
//
// Subcommands: calibrate, pulse, evaluate, compare, synthesize, verify.
// Exit codes: 0 success, 2 constraint-infeasible result, 3 verification
// failure, 64 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pulseforge/pulseforge.hpp"

namespace pf = pulseforge;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitVerifyFailed = 3;
constexpr int kExitUsage = 64;

pf::PsdSpec parse_psd(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    const auto num = [&](std::size_t i) {
        try {
            return std::stod(parts.at(i));
        } catch (const std::exception&) {
            throw CLI::ValidationError("noise spec", "bad number in '" + text + "'");
        }
    };
    if (parts.empty()) throw CLI::ValidationError("noise spec", "empty");
    if (parts[0] == "delta" && parts.size() == 2) return pf::PsdSpec::delta(num(1));
    if (parts[0] == "band" && parts.size() == 4)
        return pf::PsdSpec::one_over_f_band(num(1), num(2), num(3));
    if (parts[0] == "tail" && parts.size() == 4)
        return pf::PsdSpec::one_over_f_with_tail(num(1), num(2), num(3));
    throw CLI::ValidationError(
        "noise spec", "expected delta:W or band:A:W0:WC or tail:A:W0:WC, got '" + text + "'");
}

std::vector<pf::NoiseChannel> resolve_channels(const std::string& case_name,
                                               const std::string& detuning_psd,
                                               const std::string& amplitude_psd) {
    std::vector<pf::NoiseChannel> channels;
    if (!case_name.empty()) {
        const pf::ExperimentCase c = pf::parse_experiment_case(case_name);
        channels = pf::case_channels(c, pf::calibrated_amplitude(c));
    }
    if (!detuning_psd.empty()) {
        const pf::NoiseChannel ch{"detuning", parse_psd(detuning_psd),
                                  pf::Sensitivity::AdditiveDetuning};
        bool replaced = false;
        for (pf::NoiseChannel& existing : channels)
            if (existing.sensitivity == ch.sensitivity) {
                existing = ch;
                replaced = true;
            }
        if (!replaced) channels.push_back(ch);
    }
    if (!amplitude_psd.empty()) {
        const pf::NoiseChannel ch{"amplitude", parse_psd(amplitude_psd),
                                  pf::Sensitivity::MultiplicativeAmplitude};
        bool replaced = false;
        for (pf::NoiseChannel& existing : channels)
            if (existing.sensitivity == ch.sensitivity) {
                existing = ch;
                replaced = true;
            }
        if (!replaced) channels.push_back(ch);
    }
    if (channels.empty())
        throw CLI::ValidationError("noise", "give --case or an explicit --detuning-psd/--amplitude-psd");
    return channels;
}

std::string flag_text(bool robust) { return robust ? "yes" : "no"; }

struct CompareRow {
    std::string name;
    double infidelity = 0.0;
    bool robust_detuning = false;
    bool robust_amplitude = false;
};

void print_compare_table(const std::vector<CompareRow>& rows, std::ostream& out) {
    out << "pulse         infidelity   robust_detuning  robust_amplitude\n";
    char buf[64];
    for (const CompareRow& r : rows) {
        std::snprintf(buf, sizeof(buf), "%-13s %-12.4e %-16s %s\n", r.name.c_str(), r.infidelity,
                      flag_text(r.robust_detuning).c_str(), flag_text(r.robust_amplitude).c_str());
        out << buf;
    }
}

json terms_to_json(const pf::CostTerms& t) {
    return json{{"infidelity_detuning", t.infidelity_detuning},
                {"infidelity_amplitude", t.infidelity_amplitude},
                {"gate_angle", t.gate_angle},
                {"start_amplitude", t.start_amplitude},
                {"end_amplitude", t.end_amplitude},
                {"amplitude_excess", t.amplitude_excess},
                {"slew_excess", t.slew_excess}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pulse synthesis and noise-robustness analysis toolkit"};
    app.set_config("--config", "", "read options from a config file (ini format)");
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads,
                   "worker thread cap (0 = PULSEFORGE_THREADS or hardware)");

    // calibrate -------------------------------------------------------------
    auto* cmd_cal = app.add_subcommand("calibrate", "noise strength for a reference infidelity");
    std::string cal_case = "A";
    double cal_target = 1e-1;
    cmd_cal->add_option("--case", cal_case, "benchmark case (A or B)");
    cmd_cal->add_option("--target", cal_target, "target square-pulse infidelity");

    // pulse -----------------------------------------------------------------
    auto* cmd_pulse = app.add_subcommand("pulse", "export a library pulse as CSV");
    std::string pl_kind = "naive";
    double pl_theta = 0.5 * M_PI;
    int pl_samples = 1024;
    std::string pl_out, pl_out_traj, pl_chart = "cyclic";
    cmd_pulse->add_option("--kind", pl_kind,
                          "naive|short_corpse|corpse|bb1|sk1|cinbb|cinsk");
    cmd_pulse->add_option("--theta", pl_theta, "target rotation angle (radians)");
    cmd_pulse->add_option("--samples", pl_samples, "grid samples");
    cmd_pulse->add_option("--out", pl_out, "pulse CSV path")->required();
    cmd_pulse->add_option("--out-trajectory", pl_out_traj, "also write the trajectory CSV");
    cmd_pulse->add_option("--chart", pl_chart,
                          "initial angles for the trajectory: cyclic or great-circle");

    // evaluate --------------------------------------------------------------
    auto* cmd_eval = app.add_subcommand("evaluate", "full noise report for a pulse or trajectory");
    std::string ev_pulse, ev_traj, ev_case, ev_det_psd, ev_amp_psd, ev_out, ev_ff_dir;
    double ev_gamma0 = 0.5 * M_PI, ev_beta0 = 0.0;
    int ev_substeps = 4;
    cmd_eval->add_option("--pulse", ev_pulse, "pulse CSV (t,omega,phi,delta)");
    cmd_eval->add_option("--trajectory", ev_traj, "trajectory CSV (t,gamma,beta,zeta)");
    cmd_eval->add_option("--case", ev_case, "benchmark case for the noise channels");
    cmd_eval->add_option("--detuning-psd", ev_det_psd, "delta:W | band:A:W0:WC | tail:A:W0:WC");
    cmd_eval->add_option("--amplitude-psd", ev_amp_psd, "same grammar as --detuning-psd");
    cmd_eval->add_option("--out", ev_out, "report JSON path (default stdout)");
    cmd_eval->add_option("--ff-dir", ev_ff_dir, "directory for per-channel filter-function CSVs");
    cmd_eval->add_option("--gamma0", ev_gamma0, "initial polar angle when solving from a pulse");
    cmd_eval->add_option("--beta0", ev_beta0, "initial azimuth when solving from a pulse");
    cmd_eval->add_option("--substeps", ev_substeps, "integrator substeps per grid cell");

    // compare ---------------------------------------------------------------
    auto* cmd_cmp = app.add_subcommand("compare", "benchmark table across library pulses");
    std::string cmp_case = "A", cmp_out_csv, cmp_dnn;
    cmd_cmp->add_option("--case", cmp_case, "benchmark case (A or B)");
    cmd_cmp->add_option("--out", cmp_out_csv, "also write the table as CSV");
    cmd_cmp->add_option("--dnn-trajectory", cmp_dnn, "trained trajectory CSV to include");

    // synthesize ------------------------------------------------------------
    auto* cmd_syn = app.add_subcommand("synthesize", "train a pulse for a benchmark case");
    std::string syn_case = "A", syn_out;
    std::uint64_t syn_seed = 1;
    int syn_restarts = 10, syn_iters = 4000;
    cmd_syn->add_option("--case", syn_case, "benchmark case (A or B)");
    cmd_syn->add_option("--seed", syn_seed, "base seed; restart r uses seed+r");
    cmd_syn->add_option("--restarts", syn_restarts, "independent restarts");
    cmd_syn->add_option("--iters", syn_iters, "ADAM steps per restart");
    cmd_syn->add_option("--out", syn_out, "output directory")->required();

    // verify ----------------------------------------------------------------
    auto* cmd_ver = app.add_subcommand("verify", "run the conformance suite");
    pf::VerifyOptions ver_opt;
    cmd_ver->add_option("--ff-tol", ver_opt.ff_tol, "filter-function equivalence tolerance");
    cmd_ver->add_option("--kernel-tol", ver_opt.kernel_tol, "kernel quadrature tolerance");
    cmd_ver->add_option("--gradient-tol", ver_opt.gradient_tol, "gradient check tolerance");
    cmd_ver->add_option("--seed", ver_opt.seed, "seed for the randomized checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) return app.exit(e);
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*cmd_cal) {
            const pf::ExperimentCase c = pf::parse_experiment_case(cal_case);
            const pf::CompositeSpec naive = pf::composite_spec(pf::CompositeKind::Naive, 0.5 * M_PI);
            const double reference = pf::composite_infidelity(naive, pf::case_channels(c, 1.0)).total;
            const double amplitude = pf::calibrate_amplitude(reference, cal_target);
            json j{{"case", pf::experiment_case_name(c)},
                   {"target_infidelity", cal_target},
                   {"reference_infidelity_at_unit_strength", reference},
                   {"amplitude", amplitude}};
            std::cout << j.dump(2) << "\n";
            return kExitOk;
        }

        if (*cmd_pulse) {
            const pf::CompositeKind kind = pf::parse_composite_kind(pl_kind);
            const pf::CompositeSpec spec = pf::composite_spec(kind, pl_theta);
            pf::write_pulse_csv(pl_out, pf::sample_pulse(spec, pl_samples));
            if (!pl_out_traj.empty()) {
                double gamma0 = 0.5 * M_PI, beta0 = 0.0;
                if (pl_chart == "great-circle") beta0 = -0.5 * M_PI;
                else if (pl_chart != "cyclic")
                    throw CLI::ValidationError("--chart", "expected cyclic or great-circle");
                pf::write_trajectory_csv(
                    pl_out_traj, pf::composite_to_invariants(spec, pl_samples, gamma0, beta0));
            }
            std::cout << "wrote " << pl_out << " (" << pl_kind << ", duration "
                      << pf::format_double(spec.duration()) << ")\n";
            return kExitOk;
        }

        if (*cmd_eval) {
            if (ev_pulse.empty() == ev_traj.empty())
                throw CLI::ValidationError("input", "give exactly one of --pulse or --trajectory");
            const std::vector<pf::NoiseChannel> channels =
                resolve_channels(ev_case, ev_det_psd, ev_amp_psd);
            pf::InvariantTrajectory traj;
            if (!ev_traj.empty()) {
                traj = pf::read_trajectory_csv(ev_traj);
            } else {
                const pf::ControlPulse pulse = pf::read_pulse_csv(ev_pulse);
                traj = pf::forward_solve(pulse, ev_gamma0, ev_beta0, ev_substeps);
            }
            const pf::GateReport rep = pf::gate_report(traj, channels);
            if (!ev_ff_dir.empty()) {
                std::filesystem::create_directories(ev_ff_dir);
                for (const pf::ChannelReport& cr : rep.channels)
                    pf::write_ff_csv(ev_ff_dir + "/ff_" + cr.channel + ".csv", cr.omega, cr.ff);
            }
            const json j = pf::to_json(rep, ev_ff_dir.empty());
            if (ev_out.empty()) {
                std::cout << j.dump(2) << "\n";
            } else {
                pf::write_text_file(ev_out, j.dump(2) + "\n");
                std::cout << "wrote " << ev_out << "\n";
            }
            return kExitOk;
        }

        if (*cmd_cmp) {
            const pf::ExperimentCase c = pf::parse_experiment_case(cmp_case);
            const std::vector<pf::NoiseChannel> channels =
                pf::case_channels(c, pf::calibrated_amplitude(c));
            std::vector<CompareRow> rows;
            for (const pf::CompositeKind kind :
                 {pf::CompositeKind::Naive, pf::CompositeKind::ShortCorpse, pf::CompositeKind::Bb1,
                  pf::CompositeKind::CinBb, pf::CompositeKind::CinSk}) {
                const pf::CompositeSpec spec = pf::composite_spec(kind, 0.5 * M_PI);
                const pf::InfidelityReport rep = pf::composite_infidelity(spec, channels);
                const double t2 = spec.duration() * spec.duration();
                CompareRow row;
                row.name = pf::composite_kind_name(kind);
                row.infidelity = rep.total;
                row.robust_detuning = rep.entries[0].ff_at_zero <= pf::kRobustFlatness * t2;
                row.robust_amplitude = rep.entries[1].ff_at_zero <= pf::kRobustFlatness * t2;
                rows.push_back(row);
            }
            if (!cmp_dnn.empty()) {
                if (std::filesystem::exists(cmp_dnn)) {
                    const pf::InvariantTrajectory traj = pf::read_trajectory_csv(cmp_dnn);
                    const pf::InfidelityReport rep = pf::infidelity_report(traj, channels);
                    const double t2 = std::pow(traj.grid.total_time(), 2);
                    rows.push_back({"dnn", rep.total,
                                    rep.entries[0].ff_at_zero <= pf::kRobustFlatness * t2,
                                    rep.entries[1].ff_at_zero <= pf::kRobustFlatness * t2});
                } else {
                    std::cerr << "warning: trained trajectory '" << cmp_dnn
                              << "' not found; table omits the dnn row\n";
                }
            }
            print_compare_table(rows, std::cout);
            if (!cmp_out_csv.empty()) {
                std::ostringstream csv;
                csv << "pulse,infidelity,robust_detuning,robust_amplitude\n";
                for (const CompareRow& r : rows)
                    csv << r.name << ',' << pf::format_double(r.infidelity) << ','
                        << flag_text(r.robust_detuning) << ',' << flag_text(r.robust_amplitude)
                        << '\n';
                pf::write_text_file(cmp_out_csv, csv.str());
            }
            return kExitOk;
        }

        if (*cmd_syn) {
            const pf::ExperimentCase c = pf::parse_experiment_case(syn_case);
            const pf::CostConfig cfg = pf::experiment_preset(c);
            pf::TrainOptions opt;
            opt.iterations = syn_iters;
            opt.threads = threads;
            const std::vector<pf::TrainResult> results =
                pf::train_restarts(cfg, syn_restarts, syn_seed, opt);
            const std::size_t best = pf::best_restart(results);
            const pf::TrainResult& win = results[best];

            std::filesystem::create_directories(syn_out);
            pf::write_pulse_csv(syn_out + "/pulse.csv", win.pulse);
            pf::write_trajectory_csv(syn_out + "/trajectory.csv", win.trajectory);
            const pf::GateReport gate_rep = pf::gate_report(win.trajectory, cfg.channels);
            for (const pf::ChannelReport& cr : gate_rep.channels)
                pf::write_ff_csv(syn_out + "/ff_" + cr.channel + ".csv", cr.omega, cr.ff);

            json j{{"case", pf::experiment_case_name(c)},
                   {"seed", win.seed},
                   {"restarts", syn_restarts},
                   {"iterations", syn_iters},
                   {"best_restart", best},
                   {"cost", win.cost},
                   {"eval_cost", win.eval_cost},
                   {"cost_drift", win.cost_drift},
                   {"feasible", win.feasible},
                   {"infidelity", win.infidelity()},
                   {"terms", terms_to_json(win.terms)},
                   {"eval_terms", terms_to_json(win.eval_terms)},
                   {"cost_history", win.cost_history},
                   {"report", pf::to_json(gate_rep, false)}};
            json all = json::array();
            for (const pf::TrainResult& r : results)
                all.push_back({{"seed", r.seed},
                               {"cost", r.cost},
                               {"infidelity", r.infidelity()},
                               {"feasible", r.feasible}});
            j["restart_summary"] = all;
            pf::write_text_file(syn_out + "/result.json", j.dump(2) + "\n");

            std::cout << "best restart " << best << ": infidelity "
                      << pf::format_double(win.infidelity()) << ", feasible "
                      << (win.feasible ? "yes" : "no") << ", wrote " << syn_out << "\n";
            return win.feasible ? kExitOk : kExitInfeasible;
        }

        if (*cmd_ver) {
            const std::vector<pf::CheckResult> checks = pf::run_conformance(ver_opt);
            for (const pf::CheckResult& c : checks)
                std::cout << (c.pass ? "PASS" : "FAIL") << "  " << c.name << ": " << c.detail
                          << "\n";
            if (pf::all_passed(checks)) {
                std::cout << "all " << checks.size() << " checks passed\n";
                return kExitOk;
            }
            return kExitVerifyFailed;
        }
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitUsage;
}
