#ifndef PLATE_CONFIG_HPP
#define PLATE_CONFIG_HPP

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>

#include "plate/analytic.hpp"
#include "plate/boundary.hpp"
#include "plate/stepper.hpp"

namespace plate {

using json = nlohmann::json;

enum class Experiment { Run, Mms, Eigs, Dt, Spectrum, Resonance, Beat, Chladni, Forced };

inline Experiment experiment_from_name(const std::string& s) {
    if (s == "run") return Experiment::Run;
    if (s == "mms") return Experiment::Mms;
    if (s == "eigs") return Experiment::Eigs;
    if (s == "dt") return Experiment::Dt;
    if (s == "spectrum") return Experiment::Spectrum;
    if (s == "resonance") return Experiment::Resonance;
    if (s == "beat") return Experiment::Beat;
    if (s == "chladni") return Experiment::Chladni;
    if (s == "forced") return Experiment::Forced;
    throw ConfigError("unknown experiment '" + s + "'");
}

struct MmsOptions {
    std::vector<int> levels{10, 20, 40, 80};
};

struct EigsOptions {
    int k = 25;
    double tol = 1e-8;
    int write_modes = 0; // per-mode field/nodal files for the first N modes
};

struct SpectrumOptions {
    std::string input;
    int column = 1; // w_p<column>
    double threshold = 0.05;
};

struct ResonanceOptions {
    std::optional<double> drive_hz; // absent: identify f2 by the FFT pipeline
    double id_drive_hz = 1.0;
    double id_t_end = 30.0;
    double W_in = 1.0;
};

struct BeatOptions {
    double drive_hz = 2.0;
    double W_in = 1.0;
};

struct ChladniOptions {
    int mode_index = 1; // 1-based, counted over nonzero natural frequencies
    int k = 12;
    double F0 = 1e10;
    double half_width = 0.01;
};

struct ForcedOptions {
    int modes = 7;
    double F0 = 1000.0;
    double xi = 40.0;
};

struct IcSpec {
    enum class Type { Zero, Mms, StandingWave, Mode } type = Type::Zero;
    int m = 1, n = 1; // standing wave indices
    int mode_index = 1;
};

// Parsed and validated experiment configuration; `sim` is ready to run except
// for experiment-specific pieces (mode ICs, identified frequencies).
struct ExperimentConfig {
    Experiment experiment = Experiment::Run;
    SimulationConfig sim;
    IcSpec ic;
    std::string out_dir = "out";
    bool quiet = false;
    MmsOptions mms;
    EigsOptions eigs;
    SpectrumOptions spectrum;
    ResonanceOptions resonance;
    BeatOptions beat;
    ChladniOptions chladni;
    ForcedOptions forced;
    json resolved; // full config as applied, for provenance headers

    std::string resolved_compact() const { return resolved.dump(); }
};

namespace detail {

inline void check_keys(const json& obj, const std::set<std::string>& allowed,
                       const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

template <typename T>
T get_or(const json& obj, const std::string& key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("bad value for '" + key + "'");
    }
}

template <typename T>
T require(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) throw ConfigError(where + " is missing required key '" + key + "'");
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("bad value for '" + key + "' in " + where);
    }
}

inline std::shared_ptr<const Mesh> parse_mesh(const json& j) {
    check_keys(j, {"kind", "x0", "x1", "y0", "y1", "r_in", "r_out", "n1", "n2", "grid_n"}, "mesh");
    const std::string kind = require<std::string>(j, "kind", "mesh");
    if (kind == "rectangle") {
        const double x0 = get_or(j, "x0", 0.0), x1 = get_or(j, "x1", 1.0);
        const double y0 = get_or(j, "y0", 0.0), y1 = get_or(j, "y1", 1.0);
        if (j.contains("grid_n")) {
            const int N = require<int>(j, "grid_n", "mesh");
            return build_rectangle(x0, x1, y0, y1, N + 1, N + 1);
        }
        return build_rectangle(x0, x1, y0, y1, require<int>(j, "n1", "mesh"),
                               require<int>(j, "n2", "mesh"));
    }
    if (kind == "annulus") {
        const double r0 = require<double>(j, "r_in", "mesh"), r1 = require<double>(j, "r_out", "mesh");
        if (j.contains("grid_n")) {
            const int N = require<int>(j, "grid_n", "mesh");
            return build_annulus(r0, r1, N + 1, 4 * N); // G_N: N+1 radial, 4N angular points
        }
        return build_annulus(r0, r1, require<int>(j, "n1", "mesh"),
                             require<int>(j, "n2", "mesh"));
    }
    throw ConfigError("mesh kind must be 'rectangle' or 'annulus'");
}

inline PlateParams parse_params(const json& j) {
    check_keys(j, {"rho_h", "K0", "T", "D", "K1", "T1", "nu", "E", "h_thick"}, "params");
    PlateParams p;
    p.rho_h = get_or(j, "rho_h", 1.0);
    p.K0 = get_or(j, "K0", 0.0);
    p.T = get_or(j, "T", 0.0);
    p.K1 = get_or(j, "K1", 0.0);
    p.T1 = get_or(j, "T1", 0.0);
    p.nu = get_or(j, "nu", 0.0);
    if (j.contains("D")) {
        p.D = require<double>(j, "D", "params");
    } else if (j.contains("E") && j.contains("h_thick")) {
        p.D = flexural_rigidity(require<double>(j, "E", "params"),
                                require<double>(j, "h_thick", "params"), p.nu);
    }
    p.validate();
    return p;
}

inline BcKind parse_bc_kind(const std::string& s) {
    if (s == "clamped") return BcKind::Clamped;
    if (s == "supported") return BcKind::SimplySupported;
    if (s == "free") return BcKind::Free;
    throw ConfigError("boundary kind must be clamped|supported|free, got '" + s + "'");
}

inline SideCondition parse_side(const json& j, const std::shared_ptr<const Mesh>& mesh,
                                const BoundarySide& side, double nu, bool& any_mms) {
    check_keys(j, {"kind", "data", "W_in", "f_hz", "xi"}, std::string("bc.") + side_name(side.id));
    const BcKind kind = parse_bc_kind(require<std::string>(j, "kind", "bc side"));
    const std::string data = get_or<std::string>(j, "data", "zero");
    if (data == "zero") return {kind, zero_data(), zero_data()};
    if (data == "mms") {
        any_mms = true;
        return mms_side(mesh, side, kind, nu);
    }
    if (data == "moving_clamp") {
        if (kind != BcKind::Clamped)
            throw ConfigError("moving_clamp data requires a clamped side");
        const double W = get_or(j, "W_in", 1.0);
        double xi = get_or(j, "xi", 0.0);
        if (j.contains("f_hz")) xi = 2.0 * pi * require<double>(j, "f_hz", "bc side");
        if (!(xi > 0)) throw ConfigError("moving_clamp needs xi or f_hz");
        BoundarySpec tmp = moving_clamp_bc(W, xi, nu);
        return tmp.side.at(SideId::Inner);
    }
    throw ConfigError("boundary data must be zero|mms|moving_clamp, got '" + data + "'");
}

inline BoundarySpec parse_bc(const json& j, const std::shared_ptr<const Mesh>& mesh, double nu) {
    BoundarySpec b;
    b.nu = nu;
    b.corner_data = zero_data();
    bool any_mms = false;
    if (j.contains("all")) {
        check_keys(j, {"all"}, "bc");
        for (const auto& s : mesh->sides)
            b.side[s.id] = parse_side(j.at("all"), mesh, s, nu, any_mms);
    } else {
        std::set<std::string> allowed;
        for (const auto& s : mesh->sides) allowed.insert(side_name(s.id));
        check_keys(j, allowed, "bc");
        for (const auto& s : mesh->sides) {
            if (!j.contains(side_name(s.id)))
                throw ConfigError(std::string("bc is missing side '") + side_name(s.id) + "'");
            b.side[s.id] = parse_side(j.at(side_name(s.id)), mesh, s, nu, any_mms);
        }
    }
    if (any_mms)
        b.corner_data = [](double x, double y, double t, int k) {
            return mms_trace_cross(x, y, t, k);
        };
    return b;
}

inline ForcingSpec parse_forcing(const json& j, const PlateParams& p) {
    check_keys(j, {"type", "F0", "xi", "f_hz", "box"}, "forcing");
    const std::string type = require<std::string>(j, "type", "forcing");
    if (type == "zero") return ForcingSpec::zero();
    if (type == "mms")
        return ForcingSpec::analytic(
            [p](double x, double y, double t) { return mms_forcing(p, x, y, t); });
    double xi = get_or(j, "xi", 0.0);
    if (j.contains("f_hz")) xi = 2.0 * pi * require<double>(j, "f_hz", "forcing");
    const double F0 = require<double>(j, "F0", "forcing");
    if (type == "uniform_sin")
        return ForcingSpec::analytic([F0, xi](double, double, double t) { return F0 * std::sin(xi * t); });
    if (type == "localized_cos") {
        const auto box = require<std::array<double, 4>>(j, "box", "forcing");
        return ForcingSpec::localized(F0, xi, box);
    }
    throw ConfigError("forcing type must be zero|mms|uniform_sin|localized_cos");
}

inline IcSpec parse_ic(const json& j) {
    check_keys(j, {"type", "m", "n", "index"}, "ic");
    IcSpec ic;
    const std::string type = require<std::string>(j, "type", "ic");
    if (type == "zero") {
        ic.type = IcSpec::Type::Zero;
    } else if (type == "mms") {
        ic.type = IcSpec::Type::Mms;
    } else if (type == "standing_wave") {
        ic.type = IcSpec::Type::StandingWave;
        ic.m = get_or(j, "m", 1);
        ic.n = get_or(j, "n", 1);
    } else if (type == "mode") {
        ic.type = IcSpec::Type::Mode;
        ic.mode_index = get_or(j, "index", 1);
    } else {
        throw ConfigError("ic type must be zero|mms|standing_wave|mode");
    }
    return ic;
}

} // namespace detail

inline ExperimentConfig parse_config(const json& j) {
    detail::check_keys(j,
                       {"experiment", "mesh", "params", "bc", "pin_center", "forcing", "ic",
                        "scheme", "csf", "dt", "t_end", "newmark", "probes", "probe_every",
                        "snapshot_every", "out", "quiet", "nb2_solver", "mms", "eigs", "spectrum",
                        "resonance", "beat", "chladni", "forced"},
                       "config");
    ExperimentConfig ec;
    ec.experiment = experiment_from_name(detail::require<std::string>(j, "experiment", "config"));

    if (ec.experiment != Experiment::Spectrum) {
        if (!j.contains("mesh")) throw ConfigError("config needs a mesh");
        ec.sim.mesh = detail::parse_mesh(j.at("mesh"));
        ec.sim.params = detail::parse_params(j.contains("params") ? j.at("params") : json::object());
        if (j.contains("bc"))
            ec.sim.bspec = detail::parse_bc(j.at("bc"), ec.sim.mesh, ec.sim.params.nu);
        else
            ec.sim.bspec = uniform_bc(*ec.sim.mesh, BcKind::Clamped, ec.sim.params.nu);
        if (detail::get_or(j, "pin_center", false)) {
            if (ec.sim.mesh->kind != MeshKind::Rectangle)
                throw ConfigError("pin_center expects a rectangle mesh");
            ec.sim.bspec.pin = {{0.5 * (ec.sim.mesh->x0 + ec.sim.mesh->x1),
                                 0.5 * (ec.sim.mesh->y0 + ec.sim.mesh->y1)}};
        }
        if (j.contains("forcing")) ec.sim.forcing = detail::parse_forcing(j.at("forcing"), ec.sim.params);
    }

    const std::string scheme = detail::get_or<std::string>(j, "scheme", "pc22");
    if (scheme == "pc22")
        ec.sim.scheme = Scheme::PC22;
    else if (scheme == "nb2")
        ec.sim.scheme = Scheme::NB2;
    else
        throw ConfigError("scheme must be pc22 or nb2");

    ec.sim.csf = detail::get_or(j, "csf", -1.0);
    if (j.contains("dt")) ec.sim.dt_override = detail::require<double>(j, "dt", "config");
    ec.sim.t_end = detail::get_or(j, "t_end", 1.0);
    if (j.contains("newmark")) {
        detail::check_keys(j.at("newmark"), {"beta", "gamma"}, "newmark");
        ec.sim.newmark.beta = detail::get_or(j.at("newmark"), "beta", 0.25);
        ec.sim.newmark.gamma = detail::get_or(j.at("newmark"), "gamma", 0.5);
    }
    if (j.contains("probes")) {
        for (const auto& p : j.at("probes")) {
            if (!p.is_array() || p.size() != 2) throw ConfigError("each probe must be [x, y]");
            ec.sim.probes.push_back({p[0].get<double>(), p[1].get<double>()});
        }
    }
    ec.sim.probe_every = detail::get_or(j, "probe_every", 1);
    ec.sim.snapshot_every = detail::get_or(j, "snapshot_every", 0);
    const std::string solver = detail::get_or<std::string>(j, "nb2_solver", "lu");
    if (solver == "lu")
        ec.sim.nb2_solver = Nb2Solver::DirectLU;
    else if (solver == "bicgstab")
        ec.sim.nb2_solver = Nb2Solver::BiCGSTAB;
    else
        throw ConfigError("nb2_solver must be lu or bicgstab");

    if (j.contains("ic")) ec.ic = detail::parse_ic(j.at("ic"));
    ec.out_dir = detail::get_or<std::string>(j, "out", "out");
    ec.quiet = detail::get_or(j, "quiet", false);

    if (j.contains("mms")) {
        detail::check_keys(j.at("mms"), {"levels"}, "mms");
        if (j.at("mms").contains("levels"))
            ec.mms.levels = j.at("mms").at("levels").get<std::vector<int>>();
    }
    if (j.contains("eigs")) {
        detail::check_keys(j.at("eigs"), {"k", "tol", "write_modes"}, "eigs");
        ec.eigs.k = detail::get_or(j.at("eigs"), "k", 25);
        ec.eigs.tol = detail::get_or(j.at("eigs"), "tol", 1e-8);
        ec.eigs.write_modes = detail::get_or(j.at("eigs"), "write_modes", 0);
    }
    if (j.contains("spectrum")) {
        detail::check_keys(j.at("spectrum"), {"input", "column", "threshold"}, "spectrum");
        ec.spectrum.input = detail::get_or<std::string>(j.at("spectrum"), "input", "");
        ec.spectrum.column = detail::get_or(j.at("spectrum"), "column", 1);
        ec.spectrum.threshold = detail::get_or(j.at("spectrum"), "threshold", 0.05);
    }
    if (j.contains("resonance")) {
        detail::check_keys(j.at("resonance"), {"drive_hz", "id_drive_hz", "id_t_end", "W_in"},
                           "resonance");
        if (j.at("resonance").contains("drive_hz"))
            ec.resonance.drive_hz = detail::require<double>(j.at("resonance"), "drive_hz", "resonance");
        ec.resonance.id_drive_hz = detail::get_or(j.at("resonance"), "id_drive_hz", 1.0);
        ec.resonance.id_t_end = detail::get_or(j.at("resonance"), "id_t_end", 30.0);
        ec.resonance.W_in = detail::get_or(j.at("resonance"), "W_in", 1.0);
    }
    if (j.contains("beat")) {
        detail::check_keys(j.at("beat"), {"drive_hz", "W_in"}, "beat");
        ec.beat.drive_hz = detail::get_or(j.at("beat"), "drive_hz", 2.0);
        ec.beat.W_in = detail::get_or(j.at("beat"), "W_in", 1.0);
    }
    if (j.contains("chladni")) {
        detail::check_keys(j.at("chladni"), {"mode_index", "k", "F0", "half_width"}, "chladni");
        ec.chladni.mode_index = detail::get_or(j.at("chladni"), "mode_index", 1);
        ec.chladni.k = detail::get_or(j.at("chladni"), "k", 12);
        ec.chladni.F0 = detail::get_or(j.at("chladni"), "F0", 1e10);
        ec.chladni.half_width = detail::get_or(j.at("chladni"), "half_width", 0.01);
    }
    if (j.contains("forced")) {
        detail::check_keys(j.at("forced"), {"modes", "F0", "xi"}, "forced");
        ec.forced.modes = detail::get_or(j.at("forced"), "modes", 7);
        ec.forced.F0 = detail::get_or(j.at("forced"), "F0", 1000.0);
        ec.forced.xi = detail::get_or(j.at("forced"), "xi", 40.0);
    }

    ec.resolved = j;
    return ec;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config file " + path.string());
    json j;
    try {
        j = json::parse(f);
    } catch (const json::exception& e) {
        throw ConfigError("config parse error: " + std::string(e.what()));
    }
    return parse_config(j);
}

} // namespace plate

#endif
