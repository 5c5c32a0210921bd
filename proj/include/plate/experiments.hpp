#ifndef PLATE_EXPERIMENTS_HPP
#define PLATE_EXPERIMENTS_HPP

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "plate/config.hpp"
#include "plate/io.hpp"
#include "plate/modal.hpp"
#include "plate/spectra.hpp"
#include "plate/stepper.hpp"

namespace plate {

namespace detail {

inline void apply_ic(SimulationConfig& sim, const IcSpec& ic) {
    switch (ic.type) {
        case IcSpec::Type::Zero:
            break;
        case IcSpec::Type::Mms:
            sim.w0 = [](double x, double y) { return mms_w(x, y, 0.0); };
            sim.v0 = [](double x, double y) { return mms_wt(x, y, 0.0); };
            break;
        case IcSpec::Type::StandingWave: {
            if (sim.mesh->kind != MeshKind::Rectangle)
                throw ConfigError("standing_wave initial data expects a rectangle mesh");
            const double L = sim.mesh->x1 - sim.mesh->x0, H = sim.mesh->y1 - sim.mesh->y0;
            const double x0 = sim.mesh->x0, y0 = sim.mesh->y0;
            const int m = ic.m, n = ic.n;
            sim.w0 = [=](double x, double y) {
                return std::sin(m * pi * (x - x0) / L) * std::sin(n * pi * (y - y0) / H);
            };
            break;
        }
        case IcSpec::Type::Mode: {
            auto modes = solve_modes(sim.params, sim.mesh, sim.bspec,
                                     std::max(ic.mode_index + 2, 6), 1e-8);
            if (ic.mode_index < 1 || ic.mode_index > static_cast<int>(modes.size()))
                throw ConfigError("mode index out of range");
            sim.w0_field = modes[ic.mode_index - 1].phi;
            break;
        }
    }
}

inline std::shared_ptr<const Mesh> mesh_at_level(const Mesh& proto, int N) {
    if (proto.kind == MeshKind::Rectangle)
        return build_rectangle(proto.x0, proto.x1, proto.y0, proto.y1, N + 1, N + 1);
    return build_annulus(proto.r_in, proto.r_out, N + 1, 4 * N);
}

} // namespace detail

// ---------------------------------------------------------------------------
// run: a single simulation with file outputs.
// ---------------------------------------------------------------------------

inline RunResult cmd_run(const ExperimentConfig& ec, bool write_files = true) {
    SimulationConfig sim = ec.sim;
    detail::apply_ic(sim, ec.ic);
    RunResult res = run(sim);
    if (write_files) {
        const auto dir = std::filesystem::path(ec.out_dir);
        write_probe_csv(dir / "probe.csv", ec.resolved_compact(), res.probes);
        for (size_t s = 0; s < res.snapshots.size(); ++s)
            write_vtk(dir / ("w_" + std::to_string(s) + ".vtk"), ec.resolved_compact(),
                      res.snapshots[s]);
        std::ofstream diag(dir / "diagnostics.txt");
        diag << "dt " << res.dt << "\nsteps " << res.steps << "\nlambda_max "
             << res.symbols.lambda_max.real() << " " << res.symbols.lambda_max.imag()
             << "\nregime " << regime_name(res.symbols.regime) << "\nK_hat_max "
             << res.symbols.K_hat_max << "\nB_hat_max " << res.symbols.B_hat_max
             << "\nwall_seconds " << res.wall_seconds << "\nenergy_initial "
             << res.energy_initial << "\nenergy_final " << res.energy_final << "\n";
    }
    return res;
}

// ---------------------------------------------------------------------------
// mms: refinement study on the manufactured solution.  Boundary kinds come
// from the config; data, forcing and initial conditions are the manufactured
// ones.  Levels run concurrently and merge by grid label.
// ---------------------------------------------------------------------------

inline ConvergenceTable cmd_mms(const ExperimentConfig& ec, bool write_files = true) {
    if (ec.mms.levels.empty()) throw ConfigError("mms study needs at least one grid level");
    for (size_t i = 1; i < ec.mms.levels.size(); ++i)
        if (ec.mms.levels[i] <= ec.mms.levels[i - 1])
            throw ConfigError("mms grid levels must be strictly refined");
    const ExperimentConfig& base = ec;
    auto level_error = [&base](int N) {
        SimulationConfig sim = base.sim;
        sim.mesh = detail::mesh_at_level(*base.sim.mesh, N);
        BoundarySpec b;
        b.nu = sim.params.nu;
        for (const auto& s : sim.mesh->sides)
            b.side[s.id] = mms_side(sim.mesh, s, base.sim.bspec.kind_of(s.id), sim.params.nu);
        b.corner_data = [](double x, double y, double t, int k) {
            return mms_trace_cross(x, y, t, k);
        };
        sim.bspec = std::move(b);
        const PlateParams p = sim.params;
        sim.forcing = ForcingSpec::analytic(
            [p](double x, double y, double t) { return mms_forcing(p, x, y, t); });
        sim.w0 = [](double x, double y) { return mms_w(x, y, 0.0); };
        sim.v0 = [](double x, double y) { return mms_wt(x, y, 0.0); };
        sim.probes.clear();
        sim.snapshot_every = 0;
        RunResult res = run(sim);
        return error_norms(res.snapshots.back(), mms_w, sim.t_end);
    };

    std::vector<std::future<ErrorReport>> futs;
    for (int N : ec.mms.levels)
        futs.push_back(std::async(std::launch::async, level_error, N));

    ConvergenceTable table;
    std::vector<double> errs, hs;
    for (size_t i = 0; i < futs.size(); ++i) {
        const ErrorReport r = futs[i].get();
        ConvergenceRow row;
        row.grid_label = "G_" + std::to_string(ec.mms.levels[i]);
        row.h = min_physical_spacing(*detail::mesh_at_level(*ec.sim.mesh, ec.mms.levels[i]));
        row.max_error = r.max_norm;
        row.l2_error = r.l2_norm;
        table.rows.push_back(row);
        errs.push_back(r.max_norm);
        hs.push_back(row.h);
    }
    if (errs.size() >= 3) {
        table.order = estimate_order(errs, hs);
        table.order_defined = true;
    }
    if (write_files)
        write_convergence_csv(std::filesystem::path(ec.out_dir) / "convergence.csv",
                              ec.resolved_compact(), table);
    return table;
}

// ---------------------------------------------------------------------------
// eigs: discrete eigenproblem, frequencies, nodal lines.
// ---------------------------------------------------------------------------

inline std::vector<Mode> cmd_eigs(const ExperimentConfig& ec, bool write_files = true) {
    auto modes = solve_modes(ec.sim.params, ec.sim.mesh, ec.sim.bspec, ec.eigs.k, ec.eigs.tol);
    if (write_files) {
        const auto dir = std::filesystem::path(ec.out_dir);
        write_modes_csv(dir / "modes.csv", ec.resolved_compact(), modes);
        for (int i = 0; i < std::min<int>(ec.eigs.write_modes, modes.size()); ++i) {
            write_vtk(dir / ("mode_" + std::to_string(i + 1) + ".vtk"), ec.resolved_compact(),
                      modes[i].phi);
            write_nodal_csv(dir / ("mode_" + std::to_string(i + 1) + "_nodal.csv"),
                            ec.resolved_compact(), nodal_lines(modes[i]));
        }
    }
    return modes;
}

// ---------------------------------------------------------------------------
// dt: stability report.
// ---------------------------------------------------------------------------

struct DtReport {
    double dt = 0.0;
    double csf = 0.0;
    SymbolBounds symbols;
};

inline DtReport cmd_dt(const ExperimentConfig& ec) {
    DtReport r;
    r.csf = ec.sim.effective_csf();
    r.symbols = fourier_symbol_max(ec.sim.params, *ec.sim.mesh);
    r.dt = stable_dt(ec.sim.params, *ec.sim.mesh, r.csf);
    return r;
}

// ---------------------------------------------------------------------------
// spectrum: FFT of a probe CSV column.
// ---------------------------------------------------------------------------

inline Spectrum cmd_spectrum(const ExperimentConfig& ec, bool write_files = true) {
    if (ec.spectrum.input.empty()) throw ConfigError("spectrum experiment needs spectrum.input");
    std::ifstream f(ec.spectrum.input);
    if (!f) throw ConfigError("cannot read " + ec.spectrum.input);
    std::string line;
    std::vector<double> t, w;
    const int col = 2 * ec.spectrum.column - 1; // w_p<k> column in the probe CSV
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 't') continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(std::stod(cell));
        if (static_cast<int>(cells.size()) <= col) throw ConfigError("probe column out of range");
        t.push_back(cells[0]);
        w.push_back(cells[col]);
    }
    if (t.size() < 2) throw ConfigError("series too short");
    Spectrum s = power_spectrum(w, t[1] - t[0]);
    if (write_files)
        write_spectrum_csv(std::filesystem::path(ec.out_dir) / "spectrum.csv",
                           ec.resolved_compact(), s);
    return s;
}

// ---------------------------------------------------------------------------
// Natural-frequency identification and the resonance/beat experiments
// (annulus with the moving inner clamp).
// ---------------------------------------------------------------------------

namespace detail {

// Amplitude-envelope period via sliding maxima and autocorrelation.
inline double envelope_period(const std::vector<double>& t, const std::vector<double>& w,
                              double carrier_hz) {
    if (t.size() < 16 || !(carrier_hz > 0)) return 0.0;
    const double dt = t[1] - t[0];
    const int win = std::max<int>(3, static_cast<int>(std::lround(1.0 / (carrier_hz * dt))));
    std::vector<double> env, te;
    for (size_t k = 0; k + win <= w.size(); k += std::max(1, win / 2)) {
        double mx = 0.0;
        for (int i = 0; i < win; ++i) mx = std::max(mx, std::abs(w[k + i]));
        env.push_back(mx);
        te.push_back(t[k + win / 2]);
    }
    if (env.size() < 8) return 0.0;
    double mean = 0.0;
    for (double e : env) mean += e;
    mean /= env.size();
    for (double& e : env) e -= mean;
    const size_t n = env.size();
    std::vector<double> ac(n / 2, 0.0);
    for (size_t lag = 0; lag < ac.size(); ++lag)
        for (size_t k = 0; k + lag < n; ++k) ac[lag] += env[k] * env[k + lag];
    // first maximum after the central peak decays through zero
    size_t lag0 = 1;
    while (lag0 < ac.size() && ac[lag0] > 0) ++lag0;
    size_t best = 0;
    for (size_t lag = lag0; lag < ac.size(); ++lag)
        if (best == 0 || ac[lag] > ac[best]) best = lag;
    if (best == 0) return 0.0;
    return best * (te[1] - te[0]);
}

inline SimulationConfig moving_clamp_sim(const ExperimentConfig& ec, double drive_hz, double W_in) {
    SimulationConfig sim = ec.sim;
    if (sim.mesh->kind != MeshKind::Annulus)
        throw ConfigError("moving-clamp experiments expect an annulus mesh");
    sim.bspec = moving_clamp_bc(W_in, 2.0 * pi * drive_hz, sim.params.nu);
    sim.scheme = Scheme::NB2;
    if (sim.probes.empty()) sim.probes.push_back({-0.2, 0.0});
    return sim;
}

} // namespace detail

struct IdentificationResult {
    Spectrum spectrum;
    std::vector<Peak> peaks;
    double f1 = 0.0; // natural frequencies bracketing the drive
    double f2 = 0.0;
    double f_drive = 0.0;
};

// Drive at an off-resonance frequency, FFT the probe response, and read the
// natural frequencies off the spectrum (drive peak excluded).
inline IdentificationResult identify_frequencies(const ExperimentConfig& ec, double drive_hz,
                                                 double t_end, double W_in = 1.0) {
    SimulationConfig sim = detail::moving_clamp_sim(ec, drive_hz, W_in);
    sim.t_end = t_end;
    RunResult res = run(sim);
    IdentificationResult out;
    out.f_drive = drive_hz;
    out.spectrum = power_spectrum(res.probes.w[0], res.probes.t[1] - res.probes.t[0]);
    out.peaks = find_peaks(out.spectrum, 1e-5);
    const double bw = out.spectrum.bin_width();
    double pmax = 0.0;
    for (const auto& p : out.peaks) pmax = std::max(pmax, p.power);
    // the two lowest-frequency natural peaks, drive line excluded
    std::vector<Peak> natural;
    for (const auto& p : out.peaks)
        if (std::abs(p.frequency - drive_hz) > 2.0 * bw && p.power >= 1e-4 * pmax)
            natural.push_back(p);
    if (natural.size() < 2) throw SolverError("frequency identification found fewer than 2 peaks");
    out.f1 = natural[0].frequency;
    out.f2 = natural[1].frequency;
    return out;
}

struct ResonanceResult {
    IdentificationResult id;
    double drive_hz = 0.0;
    RunResult run;
};

inline ResonanceResult cmd_resonance(const ExperimentConfig& ec, bool write_files = true) {
    ResonanceResult out;
    if (ec.resonance.drive_hz) {
        out.drive_hz = *ec.resonance.drive_hz;
    } else {
        out.id = identify_frequencies(ec, ec.resonance.id_drive_hz, ec.resonance.id_t_end,
                                      ec.resonance.W_in);
        out.drive_hz = out.id.f2;
    }
    SimulationConfig sim = detail::moving_clamp_sim(ec, out.drive_hz, ec.resonance.W_in);
    out.run = run(sim);
    if (write_files) {
        const auto dir = std::filesystem::path(ec.out_dir);
        write_probe_csv(dir / "probe.csv", ec.resolved_compact(), out.run.probes);
        write_vtk(dir / "w_final.vtk", ec.resolved_compact(), out.run.snapshots.back());
        if (!ec.resonance.drive_hz)
            write_spectrum_csv(dir / "identification_spectrum.csv", ec.resolved_compact(),
                               out.id.spectrum);
        Spectrum s = power_spectrum(out.run.probes.w[0],
                                    out.run.probes.t[1] - out.run.probes.t[0]);
        write_spectrum_csv(dir / "spectrum.csv", ec.resolved_compact(), s);
    }
    return out;
}

struct BeatResult {
    double drive_hz = 0.0;
    RunResult run;
    Spectrum spectrum;
    std::vector<Peak> peaks;
    double envelope_period = 0.0;
};

inline BeatResult cmd_beat(const ExperimentConfig& ec, bool write_files = true) {
    BeatResult out;
    out.drive_hz = ec.beat.drive_hz;
    SimulationConfig sim = detail::moving_clamp_sim(ec, out.drive_hz, ec.beat.W_in);
    out.run = run(sim);
    out.spectrum = power_spectrum(out.run.probes.w[0], out.run.probes.t[1] - out.run.probes.t[0]);
    out.peaks = find_peaks(out.spectrum, 0.02);
    out.envelope_period =
        detail::envelope_period(out.run.probes.t, out.run.probes.w[0], out.drive_hz);
    if (write_files) {
        const auto dir = std::filesystem::path(ec.out_dir);
        write_probe_csv(dir / "probe.csv", ec.resolved_compact(), out.run.probes);
        write_vtk(dir / "w_final.vtk", ec.resolved_compact(), out.run.snapshots.back());
        write_spectrum_csv(dir / "spectrum.csv", ec.resolved_compact(), out.spectrum);
    }
    return out;
}

// ---------------------------------------------------------------------------
// chladni: free square plate, pinned center, driven at a resonant frequency
// by a localized oscillator; nodal lines of the steady pattern.
// ---------------------------------------------------------------------------

struct ChladniResult {
    std::vector<Mode> modes;       // nonzero-frequency modes, ascending
    double f_drive = 0.0;          // Hz
    RunResult run;
    NodalLineSet nodal;
};

inline ChladniResult cmd_chladni(const ExperimentConfig& ec, bool write_files = true) {
    SimulationConfig sim = ec.sim;
    if (sim.mesh->kind != MeshKind::Rectangle)
        throw ConfigError("chladni experiment expects a rectangle mesh");
    if (!sim.bspec.pin)
        sim.bspec.pin = {{0.5 * (sim.mesh->x0 + sim.mesh->x1), 0.5 * (sim.mesh->y0 + sim.mesh->y1)}};

    ChladniResult out;
    auto all = solve_modes(sim.params, sim.mesh, sim.bspec, ec.chladni.k + 4, 1e-8);
    for (const auto& md : all)
        if (md.f > 1e-6) out.modes.push_back(md); // drop rigid modes of the pinned free plate
    if (ec.chladni.mode_index < 1 || ec.chladni.mode_index > static_cast<int>(out.modes.size()))
        throw ConfigError("chladni mode_index out of range");
    const Mode& target = out.modes[ec.chladni.mode_index - 1];
    const double xi = std::sqrt(target.lambda / sim.params.rho_h);
    if (!(xi > 0)) throw ConfigError("selected mode has no dynamics (zero frequency)");
    out.f_drive = xi / (2.0 * pi);

    const double xc = 0.5 * (sim.mesh->x0 + sim.mesh->x1);
    const double yc = 0.5 * (sim.mesh->y0 + sim.mesh->y1);
    const double hw = ec.chladni.half_width;
    sim.forcing = ForcingSpec::localized(ec.chladni.F0, xi, {xc - hw, xc + hw, yc - hw, yc + hw});
    sim.scheme = Scheme::NB2;
    out.run = run(sim);
    out.nodal = nodal_lines(out.run.snapshots.back());

    if (write_files) {
        const auto dir = std::filesystem::path(ec.out_dir);
        write_modes_csv(dir / "modes.csv", ec.resolved_compact(), out.modes);
        write_vtk(dir / "w_final.vtk", ec.resolved_compact(), out.run.snapshots.back());
        write_nodal_csv(dir / "nodal.csv", ec.resolved_compact(), out.nodal);
    }
    return out;
}

// ---------------------------------------------------------------------------
// forced: supported rectangle under a uniform sinusoidal load, compared with
// the truncated eigenfunction series at the probe.
// ---------------------------------------------------------------------------

struct ForcedResult {
    RunResult run;
    std::vector<double> reference; // series at the probe, same time grid
    double rel_max_error = 0.0;
};

inline ForcedResult cmd_forced(const ExperimentConfig& ec, bool write_files = true) {
    SimulationConfig sim = ec.sim;
    if (sim.mesh->kind != MeshKind::Rectangle)
        throw ConfigError("forced experiment expects a rectangle mesh");
    const double F0 = ec.forced.F0, xi = ec.forced.xi;
    sim.forcing =
        ForcingSpec::analytic([F0, xi](double, double, double t) { return F0 * std::sin(xi * t); });
    if (sim.probes.empty()) sim.probes.push_back({0.2, 0.1});
    sim.scheme = Scheme::NB2;

    ForcedResult out;
    out.run = run(sim);
    const double L = sim.mesh->x1 - sim.mesh->x0, H = sim.mesh->y1 - sim.mesh->y0;
    SeriesTruncation trunc{ec.forced.modes, ec.forced.modes};
    double emax = 0.0, rmax = 0.0;
    out.reference.reserve(out.run.probes.t.size());
    for (size_t k = 0; k < out.run.probes.t.size(); ++k) {
        const double ref = forced_response(sim.probes[0][0] - sim.mesh->x0,
                                           sim.probes[0][1] - sim.mesh->y0, out.run.probes.t[k],
                                           F0, xi, trunc, L, H, sim.params);
        out.reference.push_back(ref);
        emax = std::max(emax, std::abs(out.run.probes.w[0][k] - ref));
        rmax = std::max(rmax, std::abs(ref));
    }
    out.rel_max_error = rmax > 0 ? emax / rmax : emax;

    if (write_files) {
        const auto dir = std::filesystem::path(ec.out_dir);
        write_probe_csv(dir / "probe.csv", ec.resolved_compact(), out.run.probes);
        auto f = detail::open_out(dir / "reference.csv");
        f << "# config: " << ec.resolved_compact() << "\n";
        f << "t,w_ref\n";
        for (size_t k = 0; k < out.run.probes.t.size(); ++k)
            f << detail::fmt_g17(out.run.probes.t[k]) << "," << detail::fmt_g17(out.reference[k])
              << "\n";
    }
    return out;
}

} // namespace plate

#endif
