#include "cqs/duhamel.hpp"

#include "cqs/evolve.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cqs {

namespace {

// smooth glue: 0 for x <= 0, 1 for x >= 1
double smooth_step(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double fa = std::exp(-1.0 / x);
    double fb = std::exp(-1.0 / (1.0 - x));
    return fa / (fa + fb);
}

// prefix quadrature weights for int_0^{t_i} on a uniform mesh, O(h^4).
// Even prefixes use composite Simpson; odd prefixes splice a 3/8 tail; the
// one-interval prefix integrates the cubic through the first four points.
std::vector<double> prefix_weights(int i, double h) {
    if (i == 0) return {};
    if (i == 1) return {9.0 * h / 24.0, 19.0 * h / 24.0, -5.0 * h / 24.0, h / 24.0};
    std::vector<double> w;
    int simpson_end = (i % 2 == 0) ? i : i - 3;
    w.assign(i + 1, 0.0);
    if (simpson_end > 0) {
        w[0] += h / 3.0;
        w[simpson_end] += h / 3.0;
        for (int j = 1; j < simpson_end; ++j) w[j] += (j % 2 == 1 ? 4.0 : 2.0) * h / 3.0;
    }
    if (i % 2 == 1) {
        const double c = 3.0 * h / 8.0;
        w[simpson_end] += c;
        w[simpson_end + 1] += 3.0 * c;
        w[simpson_end + 2] += 3.0 * c;
        w[simpson_end + 3] += c;
    }
    return w;
}

void add_scaled(FieldPair& acc, double weight, const FieldPair& x) {
    for (size_t k = 0; k < acc.u.samples.size(); ++k) {
        acc.u.samples[k] += weight * x.u.samples[k];
        acc.v.samples[k] += weight * x.v.samples[k];
    }
}

ModelParams free_group_params(const ModelParams& params) {
    // the zeroth-order terms ride in the Duhamel integrand, not in the group
    ModelParams group = params;
    group.theta = 0.0;
    group.alpha = 0.0;
    return group;
}

}  // namespace

double cutoff(double t, const CutoffSpec& spec) {
    if (!(spec.T > 0.0)) throw std::invalid_argument("cutoff scale T must be positive");
    return smooth_step(2.0 - std::abs(t) / spec.T);
}

double sup_distance(const TimeSampledPair& a, const TimeSampledPair& b) {
    if (a.states.size() != b.states.size())
        throw std::invalid_argument("time meshes of different size");
    double sup = 0.0;
    for (size_t i = 0; i < a.states.size(); ++i)
        sup = std::max(sup, pair_distance(a.states[i], b.states[i]));
    return sup;
}

TimeSampledPair linear_candidate(const FieldPair& state0, const ModelParams& params, double T,
                                 int intervals) {
    check_pair(state0);
    if (intervals < 8) throw std::invalid_argument("time mesh needs at least 8 intervals");
    const ModelParams group = free_group_params(params);
    const CutoffSpec psi1{1.0};
    TimeSampledPair out;
    out.t_max = 2.0 * T;
    out.states.reserve(intervals + 1);
    for (int i = 0; i <= intervals; ++i) {
        double t = i * out.t_max / intervals;
        FieldPair w = linear_propagate(state0, group, t);
        double window = cutoff(t, psi1);
        out.states.push_back(scaled(w, Complex{window, 0.0}));
    }
    return out;
}

TimeSampledPair duhamel_map(const FieldPair& state0, const TimeSampledPair& candidate,
                            const ModelParams& params, double T) {
    check_pair(state0);
    validate(params);
    if (!(T > 0.0)) throw std::invalid_argument("T must be positive");
    if (candidate.intervals() < 8)
        throw std::invalid_argument("time mesh needs at least 8 intervals");
    if (std::abs(candidate.t_max - 2.0 * T) > 1e-9 * T)
        throw std::invalid_argument("candidate mesh does not cover [0, 2T]");

    const GridPtr& grid = state0.u.grid;
    const ModelParams group = free_group_params(params);
    const int m = candidate.intervals();
    const double h = candidate.dt();
    const CutoffSpec psi1{1.0};
    const CutoffSpec psiT{T};
    const Complex minus_i{0.0, -1.0};

    // G(t') = W(-t') F(candidate(t')); the i-dependence of the integral then
    // factors as W(t_i) acting on a prefix sum of G
    std::vector<FieldPair> g;
    g.reserve(m + 1);
    for (int j = 0; j <= m; ++j) {
        const FieldPair& w = candidate.states[j];
        check_pair(w);
        ComplexField f1 = sub(scaled(w.u, Complex{params.theta, 0.0}),
                              scaled(dealiased_product(conjugate(w.u), w.v),
                                     Complex{params.n1_coefficient, 0.0}));
        ComplexField f2 = scaled(sub(scaled(w.v, Complex{params.alpha, 0.0}),
                                     scaled(dealiased_product(w.u, w.u),
                                            Complex{params.n2_coefficient, 0.0})),
                                 Complex{1.0 / params.sigma, 0.0});
        g.push_back(linear_propagate(FieldPair{std::move(f1), std::move(f2)}, group,
                                     -candidate.time_at(j)));
    }

    TimeSampledPair out;
    out.t_max = candidate.t_max;
    out.states.reserve(m + 1);
    for (int i = 0; i <= m; ++i) {
        double t = candidate.time_at(i);
        FieldPair prefix = make_pair(grid);
        std::vector<double> w = prefix_weights(i, h);
        for (size_t j = 0; j < w.size(); ++j) add_scaled(prefix, w[j], g[j]);
        FieldPair integral = linear_propagate(prefix, group, t);
        FieldPair linear_term = scaled(linear_propagate(state0, group, t),
                                       Complex{cutoff(t, psi1), 0.0});
        out.states.push_back(add(linear_term,
                                 scaled(integral, minus_i * cutoff(t, psiT))));
    }
    return out;
}

PicardResult picard_solve(const FieldPair& state0, const ModelParams& params, double T,
                          double tolerance, int max_iter, int mesh_intervals) {
    if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
    if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");

    PicardResult result;
    result.solution = linear_candidate(state0, params, T, mesh_intervals);
    const double noise_floor =
        std::max(tolerance, 1e3 * std::numeric_limits<double>::epsilon() *
                                (1.0 + pair_norm(state0)));

    int growing = 0;
    for (int iter = 1; iter <= max_iter; ++iter) {
        TimeSampledPair next = duhamel_map(state0, result.solution, params, T);
        double d = sup_distance(next, result.solution);
        result.solution = std::move(next);
        result.report.iterates = iter;
        result.report.successive_distances.push_back(d);
        if (d <= tolerance) {
            result.report.converged = true;
            break;
        }
        size_t count = result.report.successive_distances.size();
        if (count >= 2 && d > result.report.successive_distances[count - 2]) {
            if (++growing >= 3) {
                result.report.diverged = true;
                break;
            }
        } else {
            growing = 0;
        }
    }

    const auto& dist = result.report.successive_distances;
    double factor = 0.0;
    for (size_t k = 0; k + 1 < dist.size(); ++k)
        if (dist[k] > noise_floor) factor = std::max(factor, dist[k + 1] / dist[k]);
    result.report.contraction_factor = factor;
    return result;
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("slope fit needs at least two points");
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw std::invalid_argument("slope fit needs positive values");
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= x.size();
    my /= y.size();
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        double dx = std::log(x[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(y[i]) - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("slope fit needs spread in x");
    return sxy / sxx;
}

ExistenceScalingResult existence_time_scaling(const std::vector<double>& amplitudes,
                                              const ModelParams& params,
                                              const FieldPair& base_data,
                                              const ExistenceScalingOptions& options) {
    if (amplitudes.size() < 4)
        throw std::invalid_argument("amplitude sweep needs at least 4 points");
    check_pair(base_data);

    auto factor_at = [&](const FieldPair& data, double T) {
        return picard_solve(data, params, T, options.tolerance, options.max_iter,
                            options.mesh_intervals)
            .report.contraction_factor;
    };

    ExistenceScalingResult result;
    for (double amplitude : amplitudes) {
        ExistencePoint point;
        point.amplitude = amplitude;
        FieldPair data = cqs::scaled(base_data, Complex{amplitude, 0.0});
        point.data_norm = pair_norm(data);

        double lo = options.t_start;
        while (lo > options.t_floor && factor_at(data, lo) > 0.5) lo /= 2.0;
        if (factor_at(data, lo) > 0.5) {
            result.points.push_back(point);  // not ok: no contracting T found
            continue;
        }
        double hi = lo;
        while (hi < options.t_cap && factor_at(data, 2.0 * hi) <= 0.5) hi *= 2.0;
        if (hi >= options.t_cap) {
            point.t_max = options.t_cap;
            point.contraction_factor = factor_at(data, point.t_max);
            point.ok = true;
            result.points.push_back(point);
            continue;
        }
        double bad = 2.0 * hi;
        while ((bad - hi) > options.rel_accuracy * bad) {
            double mid = 0.5 * (hi + bad);
            if (factor_at(data, mid) <= 0.5)
                hi = mid;
            else
                bad = mid;
        }
        point.t_max = hi;
        point.contraction_factor = factor_at(data, hi);
        point.ok = true;
        result.points.push_back(point);
    }

    std::vector<double> norms, tmaxes;
    for (const ExistencePoint& point : result.points)
        if (point.ok) {
            norms.push_back(point.data_norm);
            tmaxes.push_back(point.t_max);
        }
    if (norms.size() >= 2) result.fitted_slope = fit_loglog_slope(norms, tmaxes);
    return result;
}

}  // namespace cqs
