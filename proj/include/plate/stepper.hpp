#ifndef PLATE_STEPPER_HPP
#define PLATE_STEPPER_HPP

#include <chrono>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "plate/assemble.hpp"
#include "plate/boundary.hpp"
#include "plate/errors.hpp"
#include "plate/fdops.hpp"
#include "plate/field.hpp"
#include "plate/forcing.hpp"
#include "plate/stability.hpp"

namespace plate {

enum class Scheme { PC22, NB2 };

inline const char* scheme_name(Scheme s) { return s == Scheme::PC22 ? "pc22" : "nb2"; }

struct NewmarkParams {
    double beta = 0.25;
    double gamma = 0.5;
    bool unconditionally_stable() const { return gamma >= 0.5 && gamma <= 2.0 * beta; }
};

enum class Nb2Solver { DirectLU, BiCGSTAB };

struct SimulationConfig {
    PlateParams params;
    std::shared_ptr<const Mesh> mesh;
    BoundarySpec bspec;
    ForcingSpec forcing;
    Scheme scheme = Scheme::PC22;
    double t_end = 1.0;
    double csf = -1.0;                 // <= 0 picks the scheme default
    std::optional<double> dt_override; // explicit time step
    NewmarkParams newmark;
    std::function<double(double, double)> w0; // initial displacement (empty = 0)
    std::function<double(double, double)> v0; // initial velocity
    std::optional<Field> w0_field;            // direct initial data (e.g. an eigenmode)
    std::vector<std::array<double, 2>> probes;
    int probe_every = 1;
    int snapshot_every = 0; // steps between snapshots; 0 = final state only
    double blowup_threshold = 1e10;
    Nb2Solver nb2_solver = Nb2Solver::DirectLU;

    double effective_csf() const {
        if (csf > 0) return csf;
        return scheme == Scheme::PC22 ? default_csf_pc22() : default_csf_nb2();
    }
};

// Time levels held by the steppers.  PC22 keeps one back level.
struct StepperState {
    Field w, v, a;
    Field w_prev, v_prev, a_prev;
    double dt = 0.0;
    long step = 0;
    double time() const { return step * dt; }
};

namespace detail {

struct Workspace {
    std::vector<double> t1, t2, kw, bv;
    explicit Workspace(long n) : t1(n, 0.0), t2(n, 0.0), kw(n, 0.0), bv(n, 0.0) {}
};

// a = (-K w - B v + F(t)) / rho_h on PDE nodes; Dirichlet nodes carry the
// second time derivative of their displacement data.
inline void acceleration(const SimulationConfig& cfg, const NodeMap& nodes,
                         const std::vector<double>& w, const std::vector<double>& v,
                         double t, std::vector<double>& a, Workspace& ws) {
    const Mesh& m = *cfg.mesh;
    apply_K_into(cfg.params, m, w, ws.kw, ws.t1, ws.t2);
    apply_B_into(cfg.params, m, v, ws.bv, ws.t1);
    const bool forced = !cfg.forcing.is_zero();
    for (int i = 0; i < m.n1; ++i) {
        for (int j = 0; j < m.n2; ++j) {
            const long k = m.at(i, j);
            if (!nodes.is_pde(k)) continue;
            double F = forced ? cfg.forcing(m.coord_x(i, j), m.coord_y(i, j), t) : 0.0;
            a[k] = (-ws.kw[k] - ws.bv[k] + F) / cfg.params.rho_h;
        }
    }
    fill_ghosts(m, cfg.bspec, a, t, 2); // Dirichlet rows a = g0''; ghosts consistent
}

inline void check_finite(const Field& w, double threshold, long step, double t) {
    const double mx = w.max_abs_real();
    if (!std::isfinite(mx) || mx > threshold)
        throw InstabilityError("time integration unstable: |w|_inf = " + std::to_string(mx) +
                                   " at step " + std::to_string(step),
                               step, t);
}

} // namespace detail

// Initial state: a0 from the governing equation; PC22's synthetic back level
// is one backward Taylor step (second-order consistent).
inline StepperState startup(const Field& w0, const Field& v0, const SimulationConfig& cfg,
                            double dt, const NodeMap& nodes) {
    StepperState s;
    s.dt = dt;
    s.w = w0;
    s.v = v0;
    fill_ghosts(s.w, cfg.bspec, 0.0, 0);
    fill_ghosts(s.v, cfg.bspec, 0.0, 1);
    s.a = Field(cfg.mesh, 0.0);
    detail::Workspace ws(cfg.mesh->size());
    detail::acceleration(cfg, nodes, s.w.v, s.v.v, 0.0, s.a.v, ws);

    if (cfg.scheme == Scheme::PC22) {
        const Mesh& m = *cfg.mesh;
        s.w_prev = Field(cfg.mesh, 0.0);
        s.v_prev = Field(cfg.mesh, 0.0);
        s.a_prev = Field(cfg.mesh, 0.0);
        for (long k = 0; k < m.size(); ++k) {
            s.w_prev.v[k] = s.w.v[k] - dt * s.v.v[k] + 0.5 * dt * dt * s.a.v[k];
            s.v_prev.v[k] = s.v.v[k] - dt * s.a.v[k];
        }
        fill_ghosts(s.w_prev, cfg.bspec, -dt, 0);
        fill_ghosts(s.v_prev, cfg.bspec, -dt, 1);
        detail::acceleration(cfg, nodes, s.w_prev.v, s.v_prev.v, -dt, s.a_prev.v, ws);
    }
    return s;
}

inline StepperState startup(const Field& w0, const Field& v0, const SimulationConfig& cfg,
                            double dt) {
    return startup(w0, v0, cfg, dt, classify(cfg.mesh, cfg.bspec));
}

// One PC22 step: AB2 predictor then AM2 corrector, ghost fills after each
// stage, forcing evaluated at the new time level in both stages.
inline void pc22_step(StepperState& s, const SimulationConfig& cfg, const NodeMap& nodes,
                      detail::Workspace& ws) {
    const Mesh& m = *cfg.mesh;
    const double dt = s.dt;
    const double tn1 = (s.step + 1) * dt;
    const long n = m.size();

    static thread_local std::vector<double> wp, vp, ap;
    wp.assign(n, 0.0);
    vp.assign(n, 0.0);
    ap.assign(n, 0.0);

    for (int i = 0; i < m.n1; ++i)
        for (int j = 0; j < m.n2; ++j) {
            const long k = m.at(i, j);
            wp[k] = s.w.v[k] + dt * (1.5 * s.v.v[k] - 0.5 * s.v_prev.v[k]);
            vp[k] = s.v.v[k] + dt * (1.5 * s.a.v[k] - 0.5 * s.a_prev.v[k]);
        }
    fill_ghosts(m, cfg.bspec, wp, tn1, 0);
    fill_ghosts(m, cfg.bspec, vp, tn1, 1);
    detail::acceleration(cfg, nodes, wp, vp, tn1, ap, ws);

    std::swap(s.w_prev, s.w);
    std::swap(s.v_prev, s.v);
    std::swap(s.a_prev, s.a);
    for (int i = 0; i < m.n1; ++i)
        for (int j = 0; j < m.n2; ++j) {
            const long k = m.at(i, j);
            s.w.v[k] = s.w_prev.v[k] + 0.5 * dt * (s.v_prev.v[k] + vp[k]);
            s.v.v[k] = s.v_prev.v[k] + 0.5 * dt * (s.a_prev.v[k] + ap[k]);
        }
    fill_ghosts(m, cfg.bspec, s.w.v, tn1, 0);
    fill_ghosts(m, cfg.bspec, s.v.v, tn1, 1);
    detail::acceleration(cfg, nodes, s.w.v, s.v.v, tn1, s.a.v, ws);

    ++s.step;
    s.w.time = s.v.time = s.a.time = tn1;
    detail::check_finite(s.w, cfg.blowup_threshold, s.step, tn1);
}

inline void pc22_step(StepperState& s, const SimulationConfig& cfg) {
    const NodeMap nodes = classify(cfg.mesh, cfg.bspec);
    detail::Workspace ws(cfg.mesh->size());
    pc22_step(s, cfg, nodes, ws);
}

// Newmark-Beta machinery: Stage II solves
//   (rho_h + beta dt^2 K_h + gamma dt B_h) a^{n+1} = -K w^p - B v^p + F^{n+1}
// with acceleration boundary rows; the operator is factorized once per run.
class Nb2Workspace {
public:
    Nb2Workspace(const SimulationConfig& cfg, double dt)
        : cfg_(&cfg), dt_(dt), ws_(cfg.mesh->size()) {
        const auto& nm = cfg.newmark;
        assembly_ = assemble(cfg.params, cfg.mesh, cfg.bspec, cfg.params.rho_h,
                             nm.beta * dt * dt, nm.gamma * dt);
        if (cfg.nb2_solver == Nb2Solver::DirectLU) {
            lu_.compute(assembly_.A);
            if (lu_.info() != Eigen::Success)
                throw SolverError("NB2 stage-II factorization failed");
        } else {
            bicg_.compute(assembly_.A);
            bicg_.setTolerance(1e-12);
        }
    }

    const NodeMap& nodes() const { return assembly_.nodes; }
    detail::Workspace& scratch() { return ws_; }

    Vec solve(const Vec& rhs) const {
        Vec x = cfg_->nb2_solver == Nb2Solver::DirectLU ? Vec(lu_.solve(rhs))
                                                        : Vec(bicg_.solve(rhs));
        const double rn = (assembly_.A * x - rhs).norm();
        const double scale = rhs.norm();
        if (!(rn <= 1e-10 * std::max(scale, 1e-30)) && scale > 0)
            throw SolverError("NB2 stage-II residual " + std::to_string(rn / scale) +
                              " exceeds 1e-10");
        return x;
    }

private:
    const SimulationConfig* cfg_;
    double dt_;
    Assembly assembly_;
    Eigen::SparseLU<SpMat> lu_;
    Eigen::BiCGSTAB<SpMat, Eigen::DiagonalPreconditioner<double>> bicg_;
    detail::Workspace ws_;
};

inline void nb2_step(StepperState& s, Nb2Workspace& work, const SimulationConfig& cfg) {
    const Mesh& m = *cfg.mesh;
    const double dt = s.dt;
    const double tn1 = (s.step + 1) * dt;
    const double beta = cfg.newmark.beta, gamma = cfg.newmark.gamma;
    const long n = m.size();
    const NodeMap& nodes = work.nodes();
    detail::Workspace& ws = work.scratch();

    // Stage I: first-order prediction, ghosts refilled.
    static thread_local std::vector<double> wp, vp;
    wp.assign(n, 0.0);
    vp.assign(n, 0.0);
    for (int i = 0; i < m.n1; ++i)
        for (int j = 0; j < m.n2; ++j) {
            const long k = m.at(i, j);
            wp[k] = s.w.v[k] + dt * s.v.v[k] + 0.5 * dt * dt * (1.0 - 2.0 * beta) * s.a.v[k];
            vp[k] = s.v.v[k] + dt * (1.0 - gamma) * s.a.v[k];
        }
    fill_ghosts(m, cfg.bspec, wp, tn1, 0);
    fill_ghosts(m, cfg.bspec, vp, tn1, 1);

    // Stage II: acceleration solve.
    apply_K_into(cfg.params, m, wp, ws.kw, ws.t1, ws.t2);
    apply_B_into(cfg.params, m, vp, ws.bv, ws.t1);
    Vec rhs = Vec::Zero(n);
    const bool forced = !cfg.forcing.is_zero();
    for (int i = 0; i < m.n1; ++i)
        for (int j = 0; j < m.n2; ++j) {
            const long k = m.at(i, j);
            if (!nodes.is_pde(k)) continue;
            const double F = forced ? cfg.forcing(m.coord_x(i, j), m.coord_y(i, j), tn1) : 0.0;
            rhs[k] = -ws.kw[k] - ws.bv[k] + F;
        }
    bc_rhs(m, cfg.bspec, nodes, tn1, 2, rhs);
    const Vec an1 = work.solve(rhs);

    // Stage III: explicit displacement/velocity update, ghosts refilled.
    for (int i = 0; i < m.n1; ++i)
        for (int j = 0; j < m.n2; ++j) {
            const long k = m.at(i, j);
            const double a1 = an1[k];
            s.w.v[k] += dt * s.v.v[k] +
                        0.5 * dt * dt * ((1.0 - 2.0 * beta) * s.a.v[k] + 2.0 * beta * a1);
            s.v.v[k] += dt * ((1.0 - gamma) * s.a.v[k] + gamma * a1);
            s.a.v[k] = a1;
        }
    fill_ghosts(m, cfg.bspec, s.w.v, tn1, 0);
    fill_ghosts(m, cfg.bspec, s.v.v, tn1, 1);

    ++s.step;
    s.w.time = s.v.time = s.a.time = tn1;
    detail::check_finite(s.w, cfg.blowup_threshold, s.step, tn1);
}

// Discrete energy rho_h <v,v> + <w, K_h w> over real points.
inline double energy(const StepperState& s, const SimulationConfig& cfg) {
    const Mesh& m = *cfg.mesh;
    static thread_local std::vector<double> kw, t1, t2;
    kw.assign(m.size(), 0.0);
    t1.assign(m.size(), 0.0);
    t2.assign(m.size(), 0.0);
    apply_K_into(cfg.params, m, s.w.v, kw, t1, t2);
    double e = 0.0;
    for (int i = 0; i < m.n1; ++i)
        for (int j = 0; j < m.n2; ++j) {
            const long k = m.at(i, j);
            e += cfg.params.rho_h * s.v.v[k] * s.v.v[k] + s.w.v[k] * kw[k];
        }
    return e;
}

struct ProbeSeries {
    std::vector<double> t;
    std::vector<std::vector<double>> w; // [probe][sample]
    std::vector<std::vector<double>> v;
};

struct RunResult {
    ProbeSeries probes;
    std::vector<Field> snapshots;
    double dt = 0.0;
    long steps = 0;
    SymbolBounds symbols;
    double wall_seconds = 0.0;
    double energy_initial = 0.0;
    double energy_final = 0.0;
};

// Full simulation driver: time step from the stability rule (rounded so an
// integer number of steps lands on t_end), probe recording with bilinear
// interpolation, periodic snapshots.
inline RunResult run(const SimulationConfig& cfg) {
    cfg.params.validate();
    if (!cfg.mesh) throw ConfigError("simulation needs a mesh");
    if (!(cfg.t_end > 0)) throw ConfigError("t_end must be positive");
    for (const auto& p : cfg.probes) {
        bool inside;
        if (cfg.mesh->kind == MeshKind::Rectangle) {
            inside = p[0] >= cfg.mesh->x0 && p[0] <= cfg.mesh->x1 && p[1] >= cfg.mesh->y0 &&
                     p[1] <= cfg.mesh->y1;
        } else {
            const double r = std::hypot(p[0], p[1]);
            inside = r >= cfg.mesh->r_in && r <= cfg.mesh->r_out;
        }
        if (!inside)
            throw ConfigError("probe (" + std::to_string(p[0]) + ", " + std::to_string(p[1]) +
                              ") lies outside the domain");
    }

    const auto t_start = std::chrono::steady_clock::now();
    const Mesh& m = *cfg.mesh;
    RunResult res;
    res.symbols = fourier_symbol_max(cfg.params, m);

    double dt_raw = cfg.dt_override ? *cfg.dt_override : stable_dt(cfg.params, m, cfg.effective_csf());
    const long nsteps = std::max<long>(1, static_cast<long>(std::ceil(cfg.t_end / dt_raw - 1e-12)));
    const double dt = cfg.t_end / nsteps;
    res.dt = dt;

    Field w0(cfg.mesh, 0.0), v0(cfg.mesh, 0.0);
    if (cfg.w0_field)
        w0 = *cfg.w0_field;
    else if (cfg.w0)
        w0.sample_real(cfg.w0);
    if (cfg.v0) v0.sample_real(cfg.v0);

    const NodeMap nodes = classify(cfg.mesh, cfg.bspec);
    StepperState s = startup(w0, v0, cfg, dt, nodes);
    detail::Workspace ws(m.size());
    std::optional<Nb2Workspace> nb2;
    if (cfg.scheme == Scheme::NB2) nb2.emplace(cfg, dt);

    res.probes.w.resize(cfg.probes.size());
    res.probes.v.resize(cfg.probes.size());
    auto record = [&](const StepperState& st) {
        res.probes.t.push_back(st.time());
        for (size_t p = 0; p < cfg.probes.size(); ++p) {
            res.probes.w[p].push_back(interpolate(st.w, cfg.probes[p][0], cfg.probes[p][1]));
            res.probes.v[p].push_back(interpolate(st.v, cfg.probes[p][0], cfg.probes[p][1]));
        }
    };

    res.energy_initial = energy(s, cfg);
    record(s);
    for (long k = 0; k < nsteps; ++k) {
        if (cfg.scheme == Scheme::PC22)
            pc22_step(s, cfg, nodes, ws);
        else
            nb2_step(s, *nb2, cfg);
        if ((s.step % cfg.probe_every) == 0 || s.step == nsteps) record(s);
        if (cfg.snapshot_every > 0 && (s.step % cfg.snapshot_every) == 0 && s.step != nsteps)
            res.snapshots.push_back(s.w);
    }
    res.snapshots.push_back(s.w);
    res.energy_final = energy(s, cfg);
    res.steps = s.step;
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return res;
}

} // namespace plate

#endif
