#include "cqs/evolve.hpp"

#include "cqs/random.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cqs {

namespace {

struct SpecPair {
    std::vector<Complex> u;
    std::vector<Complex> v;
};

SpecPair spec_of(const FieldPair& state) {
    return SpecPair{to_spectrum(state.u), to_spectrum(state.v)};
}

FieldPair pair_of(const GridPtr& grid, const SpecPair& w) {
    return FieldPair{from_spectrum(grid, w.u), from_spectrum(grid, w.v)};
}

// diagonal multipliers and scratch for one (grid, params, dt) combination
struct StepContext {
    GridPtr grid;
    ModelParams params;
    double dt = 0.0;
    std::vector<Complex> half_u, half_v;  // exp(-i phase dt/2)
    std::vector<Complex> full_u, full_v;  // exp(-i phase dt)
    double last_linf = 0.0;               // physical sup norm seen by the latest rhs
};

StepContext make_context(const GridPtr& grid, const ModelParams& params, double dt) {
    StepContext ctx;
    ctx.grid = grid;
    ctx.params = params;
    ctx.dt = dt;
    const int n = grid->num_points;
    ctx.half_u.resize(n);
    ctx.half_v.resize(n);
    ctx.full_u.resize(n);
    ctx.full_v.resize(n);
    for (int k = 0; k < n; ++k) {
        double xi2 = grid->frequencies[k] * grid->frequencies[k];
        double phase_u = params.p * xi2 + params.theta;
        double phase_v = (params.q * xi2 + params.alpha) / params.sigma;
        ctx.half_u[k] = std::polar(1.0, -phase_u * dt / 2.0);
        ctx.half_v[k] = std::polar(1.0, -phase_v * dt / 2.0);
        ctx.full_u[k] = ctx.half_u[k] * ctx.half_u[k];
        ctx.full_v[k] = ctx.half_v[k] * ctx.half_v[k];
    }
    return ctx;
}

SpecPair multiplied(const SpecPair& w, const std::vector<Complex>& mu,
                    const std::vector<Complex>& mv) {
    SpecPair out = w;
    for (size_t k = 0; k < out.u.size(); ++k) {
        out.u[k] *= mu[k];
        out.v[k] *= mv[k];
    }
    return out;
}

void axpy(SpecPair& y, Complex alpha, const SpecPair& x) {
    for (size_t k = 0; k < y.u.size(); ++k) {
        y.u[k] += alpha * x.u[k];
        y.v[k] += alpha * x.v[k];
    }
}

// nonlinear contributions in spectral coefficients, 2/3-rule dealiased
SpecPair rhs_spec(StepContext& ctx, const SpecPair& w) {
    std::vector<Complex> mu = w.u;
    std::vector<Complex> mv = w.v;
    zero_aliased_modes(mu, *ctx.grid);
    zero_aliased_modes(mv, *ctx.grid);
    ComplexField pu = from_spectrum(ctx.grid, mu);
    ComplexField pv = from_spectrum(ctx.grid, mv);
    ctx.last_linf = std::max(max_abs(pu), max_abs(pv));

    ComplexField f1 = make_field(ctx.grid);
    ComplexField f2 = make_field(ctx.grid);
    for (int k = 0; k < ctx.grid->num_points; ++k) {
        f1.samples[k] = std::conj(pu.samples[k]) * pv.samples[k];
        f2.samples[k] = pu.samples[k] * pu.samples[k];
    }
    SpecPair out{to_spectrum(f1), to_spectrum(f2)};
    zero_aliased_modes(out.u, *ctx.grid);
    zero_aliased_modes(out.v, *ctx.grid);
    const Complex i_unit{0.0, 1.0};
    const Complex cu = i_unit * ctx.params.n1_coefficient;
    const Complex cv = i_unit * (ctx.params.n2_coefficient / ctx.params.sigma);
    for (size_t k = 0; k < out.u.size(); ++k) {
        out.u[k] *= cu;
        out.v[k] *= cv;
    }
    return out;
}

// half linear step, explicit midpoint on the coupling, half linear step
SpecPair strang_step_spec(StepContext& ctx, const SpecPair& w0) {
    SpecPair w = multiplied(w0, ctx.half_u, ctx.half_v);
    SpecPair k1 = rhs_spec(ctx, w);
    SpecPair wmid = w;
    axpy(wmid, Complex{ctx.dt / 2.0, 0.0}, k1);
    SpecPair k2 = rhs_spec(ctx, wmid);
    axpy(w, Complex{ctx.dt, 0.0}, k2);
    return multiplied(w, ctx.half_u, ctx.half_v);
}

// Lawson integrating-factor RK4: classical RK4 applied to
// y(t) = exp(-tL) w(t), with the exact group as integrating factor
SpecPair ifrk4_step_spec(StepContext& ctx, const SpecPair& w0) {
    const Complex h{ctx.dt, 0.0};
    SpecPair k1 = rhs_spec(ctx, w0);

    SpecPair stage = w0;
    axpy(stage, h / 2.0, k1);
    SpecPair k2 = rhs_spec(ctx, multiplied(stage, ctx.half_u, ctx.half_v));

    stage = multiplied(w0, ctx.half_u, ctx.half_v);
    axpy(stage, h / 2.0, k2);
    SpecPair k3 = rhs_spec(ctx, stage);

    stage = multiplied(w0, ctx.full_u, ctx.full_v);
    SpecPair ek3 = multiplied(k3, ctx.half_u, ctx.half_v);
    axpy(stage, h, ek3);
    SpecPair k4 = rhs_spec(ctx, stage);

    SpecPair out = multiplied(w0, ctx.full_u, ctx.full_v);
    axpy(out, h / 6.0, multiplied(k1, ctx.full_u, ctx.full_v));
    SpecPair k23 = k2;
    axpy(k23, Complex{1.0, 0.0}, k3);
    axpy(out, h / 3.0, multiplied(k23, ctx.half_u, ctx.half_v));
    axpy(out, h / 6.0, k4);
    return out;
}

SpecPair advance(StepContext& ctx, const SpecPair& w, Scheme scheme) {
    return scheme == Scheme::strang ? strang_step_spec(ctx, w) : ifrk4_step_spec(ctx, w);
}

bool spec_finite(const SpecPair& w) {
    for (const Complex& z : w.u)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    for (const Complex& z : w.v)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

}  // namespace

void validate(const EvolveConfig& config) {
    if (!(config.dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (!(config.t_end > config.dt)) throw std::invalid_argument("t_end must exceed dt");
    if (config.record_every < 1) throw std::invalid_argument("record_every must be >= 1");
    if (!(config.blowup_threshold > 0.0))
        throw std::invalid_argument("blowup_threshold must be positive");
}

FieldPair linear_propagate(const FieldPair& state, const ModelParams& params, double t) {
    check_pair(state);
    validate(params);
    const GridPtr& grid = state.u.grid;
    SpecPair w = spec_of(state);
    for (int k = 0; k < grid->num_points; ++k) {
        double xi2 = grid->frequencies[k] * grid->frequencies[k];
        w.u[k] *= std::polar(1.0, -(params.p * xi2 + params.theta) * t);
        w.v[k] *= std::polar(1.0, -((params.q * xi2 + params.alpha) / params.sigma) * t);
    }
    return pair_of(grid, w);
}

FieldPair strang_step(const FieldPair& state, const ModelParams& params, double dt) {
    check_pair(state);
    validate(params);
    StepContext ctx = make_context(state.u.grid, params, dt);
    return pair_of(state.u.grid, strang_step_spec(ctx, spec_of(state)));
}

FieldPair ifrk4_step(const FieldPair& state, const ModelParams& params, double dt) {
    check_pair(state);
    validate(params);
    StepContext ctx = make_context(state.u.grid, params, dt);
    return pair_of(state.u.grid, ifrk4_step_spec(ctx, spec_of(state)));
}

Trajectory run(const FieldPair& state0, const ModelParams& params, const EvolveConfig& config) {
    check_pair(state0);
    validate(params);
    validate(config);
    const GridPtr& grid = state0.u.grid;
    const long n_steps = std::lround(config.t_end / config.dt);
    if (n_steps < 1) throw std::invalid_argument("t_end shorter than one step");

    StepContext ctx = make_context(grid, params, config.dt);
    SpecPair w = spec_of(state0);

    Trajectory traj;
    auto record = [&](long step) {
        FieldPair state = pair_of(grid, w);
        DiagnosticsRow row;
        row.t = step * config.dt;
        row.blownup = traj.blownup;
        if (all_finite(state.u) && all_finite(state.v)) {
            row.mass = mass(state, params.sigma);
            row.hamiltonian = hamiltonian(state, params);
            row.u_l2 = l2_norm(state.u);
            row.v_l2 = l2_norm(state.v);
            row.u_hs = sobolev_norm(state.u, config.sobolev_s);
            row.v_hs = sobolev_norm(state.v, config.sobolev_s);
        } else {
            row.mass = row.hamiltonian = row.u_l2 = row.v_l2 = row.u_hs = row.v_hs =
                std::numeric_limits<double>::quiet_NaN();
        }
        traj.times.push_back(row.t);
        traj.states.push_back(std::move(state));
        traj.diagnostics.push_back(row);
    };

    record(0);
    for (long step = 1; step <= n_steps; ++step) {
        w = advance(ctx, w, config.scheme);
        if (!spec_finite(w) || ctx.last_linf > config.blowup_threshold) {
            traj.blownup = true;
            record(step);
            break;
        }
        if (step % config.record_every == 0 || step == n_steps) record(step);
    }
    return traj;
}

double lipschitz_probe(const FieldPair& state0, double perturbation_scale,
                       const ModelParams& params, const EvolveConfig& config,
                       std::uint64_t seed) {
    check_pair(state0);
    if (perturbation_scale < 0.0) throw std::invalid_argument("perturbation scale must be >= 0");
    if (perturbation_scale == 0.0) return 0.0;

    EvolveConfig cfg = config;
    cfg.record_every = std::numeric_limits<int>::max();

    Rng rng(seed);
    FieldPair delta = make_pair(state0.u.grid);
    for (Complex& z : delta.u.samples) z = Complex{rng.normal(), rng.normal()};
    for (Complex& z : delta.v.samples) z = Complex{rng.normal(), rng.normal()};
    delta.u = dealias(delta.u);
    delta.v = dealias(delta.v);
    double norm0 = pair_norm(delta);
    delta = scaled(delta, Complex{perturbation_scale / norm0, 0.0});

    Trajectory base = run(state0, params, cfg);
    Trajectory shifted = run(add(state0, delta), params, cfg);
    if (base.blownup || shifted.blownup)
        throw std::runtime_error("blow-up during lipschitz probe");
    return pair_distance(base.final_state(), shifted.final_state()) / perturbation_scale;
}

}  // namespace cqs
