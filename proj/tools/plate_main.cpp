#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "plate/experiments.hpp"

using namespace plate;

namespace {

struct CliOverrides {
    std::string config_path;
    std::string out_dir;
    std::string scheme;
    double csf = -1.0;
    int grid = 0;
    bool quiet = false;
};

void add_common(CLI::App* cmd, CliOverrides& o, bool config_required = true) {
    auto* copt = cmd->add_option("--config", o.config_path, "JSON experiment configuration");
    if (config_required) copt->required();
    cmd->add_option("--out", o.out_dir, "output directory (overrides config)");
    cmd->add_option("--scheme", o.scheme, "time integrator: pc22 or nb2")
        ->check(CLI::IsMember({"pc22", "nb2"}));
    cmd->add_option("--csf", o.csf, "stability factor override");
    cmd->add_option("--grid", o.grid, "grid level N (rebuilds the mesh as G_N)");
    cmd->add_flag("--quiet", o.quiet, "suppress progress output");
}

ExperimentConfig load_with_overrides(const CliOverrides& o, Experiment expected) {
    ExperimentConfig ec = load_config(o.config_path);
    ec.experiment = expected; // the subcommand selects the action
    if (!o.out_dir.empty()) ec.out_dir = o.out_dir;
    if (!o.scheme.empty()) ec.sim.scheme = o.scheme == "pc22" ? Scheme::PC22 : Scheme::NB2;
    if (o.csf > 0) ec.sim.csf = o.csf;
    if (o.grid > 0 && ec.sim.mesh) {
        ec.sim.mesh = detail::mesh_at_level(*ec.sim.mesh, o.grid);
        // boundary data presets bind to the mesh; rebuild them
        ec = [&] {
            json j = ec.resolved;
            if (j.contains("mesh")) {
                j["mesh"].erase("n1");
                j["mesh"].erase("n2");
                j["mesh"]["grid_n"] = o.grid;
            }
            ExperimentConfig e2 = parse_config(j);
            e2.experiment = ec.experiment;
            if (!o.out_dir.empty()) e2.out_dir = o.out_dir;
            if (!o.scheme.empty()) e2.sim.scheme = o.scheme == "pc22" ? Scheme::PC22 : Scheme::NB2;
            if (o.csf > 0) e2.sim.csf = o.csf;
            e2.quiet = e2.quiet || o.quiet;
            return e2;
        }();
    }
    ec.quiet = ec.quiet || o.quiet;
    return ec;
}

void print_run_summary(const ExperimentConfig& ec, const RunResult& res) {
    if (ec.quiet) return;
    std::printf("dt=%.6g steps=%ld lambda_max=%.6g%+.6gi regime=%s wall=%.2fs\n", res.dt,
                res.steps, res.symbols.lambda_max.real(), res.symbols.lambda_max.imag(),
                regime_name(res.symbols.regime), res.wall_seconds);
    std::printf("outputs in %s\n", ec.out_dir.c_str());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-difference solver for generalized Kirchhoff-Love plates"};
    app.require_subcommand(1);

    std::map<std::string, std::pair<Experiment, CliOverrides>> cmds;
    for (const char* name : {"run", "mms", "eigs", "dt", "spectrum", "resonance", "beat",
                             "chladni", "forced"}) {
        auto* sub = app.add_subcommand(name);
        cmds[name] = {experiment_from_name(name), CliOverrides{}};
        add_common(sub, cmds[name].second);
    }

    CLI11_PARSE(app, argc, argv);

    const std::string name = app.get_subcommands().front()->get_name();
    auto& [expected, o] = cmds[name];
    try {
        ExperimentConfig ec = load_with_overrides(o, expected);
        switch (ec.experiment) {
            case Experiment::Run: {
                RunResult res = cmd_run(ec);
                print_run_summary(ec, res);
                break;
            }
            case Experiment::Mms: {
                ConvergenceTable table = cmd_mms(ec);
                if (!ec.quiet) {
                    std::printf("%-8s %-12s %-14s %-14s\n", "grid", "h", "max_error", "l2_error");
                    for (const auto& r : table.rows)
                        std::printf("%-8s %-12.6g %-14.6g %-14.6g\n", r.grid_label.c_str(), r.h,
                                    r.max_error, r.l2_error);
                    if (table.order_defined)
                        std::printf("estimated order: %.3f\n", table.order);
                    else
                        std::printf("estimated order: n/a\n");
                }
                break;
            }
            case Experiment::Eigs: {
                auto modes = cmd_eigs(ec);
                if (!ec.quiet) {
                    std::printf("%-6s %-16s %-12s %-10s\n", "mode", "lambda", "f_hz", "residual");
                    for (size_t i = 0; i < modes.size(); ++i)
                        std::printf("%-6zu %-16.8g %-12.6g %-10.3g\n", i + 1, modes[i].lambda,
                                    modes[i].f, modes[i].residual);
                }
                break;
            }
            case Experiment::Dt: {
                DtReport r = cmd_dt(ec);
                std::printf("dt=%.8g (C_sf=%g)\nlambda_max=%.8g%+.8gi\nregime=%s\n"
                            "K_hat_max=%.8g\nB_hat_max=%.8g\n",
                            r.dt, r.csf, r.symbols.lambda_max.real(), r.symbols.lambda_max.imag(),
                            regime_name(r.symbols.regime), r.symbols.K_hat_max,
                            r.symbols.B_hat_max);
                break;
            }
            case Experiment::Spectrum: {
                Spectrum s = cmd_spectrum(ec);
                auto peaks = find_peaks(s, ec.spectrum.threshold);
                if (!ec.quiet) {
                    std::printf("bins=%zu df=%.6g Hz\n", s.freqs.size(), s.bin_width());
                    for (const auto& p : peaks)
                        std::printf("peak %.6g Hz power %.6g\n", p.frequency, p.power);
                }
                break;
            }
            case Experiment::Resonance: {
                ResonanceResult r = cmd_resonance(ec);
                if (!ec.quiet) {
                    if (!ec.resonance.drive_hz)
                        std::printf("identified f1=%.4f f2=%.4f Hz\n", r.id.f1, r.id.f2);
                    std::printf("driving at %.4f Hz\n", r.drive_hz);
                    print_run_summary(ec, r.run);
                }
                break;
            }
            case Experiment::Beat: {
                BeatResult r = cmd_beat(ec);
                if (!ec.quiet) {
                    std::printf("driving at %.4f Hz; envelope period %.3f s\n", r.drive_hz,
                                r.envelope_period);
                    for (const auto& p : r.peaks)
                        std::printf("peak %.6g Hz power %.6g\n", p.frequency, p.power);
                    print_run_summary(ec, r.run);
                }
                break;
            }
            case Experiment::Chladni: {
                ChladniResult r = cmd_chladni(ec);
                if (!ec.quiet) {
                    std::printf("mode %d: f=%.4f Hz, %zu nodal polylines\n", ec.chladni.mode_index,
                                r.f_drive, r.nodal.polylines.size());
                    print_run_summary(ec, r.run);
                }
                break;
            }
            case Experiment::Forced: {
                ForcedResult r = cmd_forced(ec);
                if (!ec.quiet) {
                    std::printf("relative max trajectory error vs %dx%d-mode series: %.4g\n",
                                ec.forced.modes, ec.forced.modes, r.rel_max_error);
                    print_run_summary(ec, r.run);
                }
                break;
            }
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const InstabilityError& e) {
        std::cerr << "instability: " << e.what() << " (t=" << e.time << ")\n";
        return 3;
    } catch (const SolverError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
