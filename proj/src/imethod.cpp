#include "cqs/imethod.hpp"

#include "cqs/duhamel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace cqs {

void validate(const IMultiplier& im) {
    if (!(im.N > 1.0)) throw std::invalid_argument("multiplier threshold N must exceed 1");
    if (!(im.s <= 0.0)) throw std::invalid_argument("multiplier regularity s must be <= 0");
}

double multiplier_m(double xi, const IMultiplier& im) {
    double r = std::abs(xi) / im.N;
    return r <= 1.0 ? 1.0 : std::pow(r, im.s);
}

ComplexField apply_I(const ComplexField& field, const IMultiplier& im) {
    validate(im);
    return apply_symbol(field, [&](double xi) { return Complex{multiplier_m(xi, im), 0.0}; });
}

double modified_energy(const FieldPair& state, double sigma, const IMultiplier& im) {
    check_pair(state);
    return mass(FieldPair{apply_I(state.u, im), apply_I(state.v, im)}, sigma);
}

ComplexField commutator_n1(const ComplexField& u, const ComplexField& v, const IMultiplier& im) {
    validate(im);
    if (!u.grid->same_lattice(*v.grid)) throw std::invalid_argument("grid mismatch");
    ComplexField ubar = conjugate(u);
    std::vector<Complex> whole = to_spectrum(dealiased_product(ubar, v));
    for (int k = 0; k < u.grid->num_points; ++k)
        whole[k] *= multiplier_m(u.grid->frequencies[k], im);
    std::vector<Complex> split =
        to_spectrum(dealiased_product(apply_I(ubar, im), apply_I(v, im)));
    for (int k = 0; k < u.grid->num_points; ++k) whole[k] -= split[k];
    return from_spectrum(u.grid, whole);
}

ComplexField commutator_n2(const ComplexField& u, const IMultiplier& im) {
    validate(im);
    std::vector<Complex> whole = to_spectrum(dealiased_product(u, u));
    for (int k = 0; k < u.grid->num_points; ++k)
        whole[k] *= multiplier_m(u.grid->frequencies[k], im);
    ComplexField iu = apply_I(u, im);
    std::vector<Complex> split = to_spectrum(dealiased_product(iu, iu));
    for (int k = 0; k < u.grid->num_points; ++k) whole[k] -= split[k];
    return from_spectrum(u.grid, whole);
}

double multiplier_M(double xi, double xi1, const IMultiplier& im) {
    validate(im);
    double xi2 = xi - xi1;
    double m1 = multiplier_m(xi1, im);
    double m2 = multiplier_m(xi2, im);
    return (multiplier_m(xi, im) - m1 * m2) / (m1 * m2);
}

MRegime regime_classify(double xi, double xi1, double N) {
    if (!(N > 1.0)) throw std::invalid_argument("N must exceed 1");
    double a1 = std::abs(xi1);
    double a2 = std::abs(xi - xi1);
    if (2.0 * a1 <= a2 && 2.0 * a1 <= N) return MRegime::i;
    if (2.0 * a2 <= a1 && 2.0 * a2 <= N) return MRegime::ii;
    if (2.0 * a1 <= a2 && a1 >= 2.0 * N) return MRegime::iii;
    if (2.0 * a2 <= a1 && a2 >= 2.0 * N) return MRegime::iv;
    bool comparable = a1 <= 2.0 * a2 && a2 <= 2.0 * a1;
    if (comparable && std::min(a1, a2) >= N) return MRegime::v;
    return MRegime::none;
}

double regime_bound(double xi, double xi1, const IMultiplier& im) {
    double n1 = std::abs(xi1);
    double n2 = std::abs(xi - xi1);
    switch (regime_classify(xi, xi1, im.N)) {
        case MRegime::i: return n1 / n2;
        case MRegime::ii: return n2 / n1;
        case MRegime::iii: return n1 / im.N;
        case MRegime::iv: return n2 / im.N;
        case MRegime::v: return (n1 / im.N) * (n1 / im.N);
        case MRegime::none: return 0.0;
    }
    return 0.0;
}

namespace {

// quadrature of f * conj(g)
Complex inner(const ComplexField& f, const ComplexField& g) {
    Complex sum{0.0, 0.0};
    for (size_t k = 0; k < f.samples.size(); ++k) sum += f.samples[k] * std::conj(g.samples[k]);
    return sum * f.grid->dx;
}

}  // namespace

double energy_derivative_check(const Trajectory& trajectory, const ModelParams& params,
                               const IMultiplier& im) {
    validate(im);
    validate(params);
    if (trajectory.states.size() < 3)
        throw std::invalid_argument("trajectory too short for the derivative check");
    if (std::abs(params.n2_coefficient - 0.5 * params.n1_coefficient) > 1e-12)
        throw std::invalid_argument(
            "the two-commutator energy identity needs the conservative coupling n2 = n1/2");

    const size_t count = trajectory.states.size();
    std::vector<double> energy(count);
    for (size_t i = 0; i < count; ++i)
        energy[i] = modified_energy(trajectory.states[i], params.sigma, im);

    double residual = 0.0;
    for (size_t i = 1; i + 1 < count; ++i) {
        double lhs =
            (energy[i + 1] - energy[i - 1]) / (trajectory.times[i + 1] - trajectory.times[i - 1]);
        const FieldPair& state = trajectory.states[i];
        ComplexField iu = apply_I(state.u, im);
        ComplexField iv = apply_I(state.v, im);
        ComplexField c1 = commutator_n1(state.u, state.v, im);
        ComplexField c2 = commutator_n2(state.u, im);
        double rhs = -2.0 * params.n1_coefficient * inner(c1, iu).imag() -
                     4.0 * params.n2_coefficient * inner(c2, iv).imag();
        residual = std::max(residual, std::abs(lhs - rhs));
    }
    return residual / std::max(energy[0], std::numeric_limits<double>::min());
}

IncrementReport increment_experiment(const FieldPair& base_data, double sigma, double s,
                                     const std::vector<double>& N_values,
                                     const IncrementOptions& options) {
    check_pair(base_data);
    if (!(s <= 0.0)) throw std::invalid_argument("s must be <= 0");
    if (N_values.size() < 4) throw std::invalid_argument("need at least 4 values of N");
    {
        auto [lo, hi] = std::minmax_element(N_values.begin(), N_values.end());
        if (!(*lo > 1.0)) throw std::invalid_argument("every N must exceed 1");
        if (*hi < 4.0 * *lo)
            throw std::invalid_argument("N sweep must span at least two dyadic levels");
    }

    // the n2 = 1/2 convention, under which the s = 0 energy is exact
    ModelParams params;
    params.p = 1;
    params.q = 1;
    params.sigma = sigma;
    params.theta = 0.0;
    params.alpha = 0.0;
    params.n1_coefficient = 1.0;
    params.n2_coefficient = 0.5;
    validate(params);

    IncrementReport report;
    report.N_values = N_values;
    report.increments.assign(N_values.size(), 0.0);
    report.point_ok.assign(N_values.size(), false);

    std::map<double, const FieldPair*> finals;  // delta -> final state
    std::vector<Trajectory> kept;               // owns the evolved endpoints
    kept.reserve(N_values.size());

    const double e0_scale = mass(base_data, sigma);
    for (size_t i = 0; i < N_values.size(); ++i) {
        double delta = options.delta_prefactor *
                       std::min(1.0, std::pow(N_values[i], -4.0 * s / 3.0));
        report.delta_used = delta;

        auto it = finals.find(delta);
        if (it == finals.end()) {
            EvolveConfig config;
            config.dt = options.dt;
            config.t_end = delta;
            config.scheme = options.scheme;
            config.record_every = std::numeric_limits<int>::max();
            config.blowup_threshold = options.blowup_threshold;
            kept.push_back(run(base_data, params, config));
            if (kept.back().blownup) {
                finals.emplace(delta, nullptr);
                continue;
            }
            it = finals.emplace(delta, &kept.back().final_state()).first;
        }
        if (it->second == nullptr) continue;  // blow-up at this horizon

        IMultiplier im{N_values[i], s};
        report.increments[i] =
            std::abs(modified_energy(*it->second, sigma, im) -
                     modified_energy(base_data, sigma, im));
        report.point_ok[i] = true;
    }

    const double floor = 1e3 * std::numeric_limits<double>::epsilon() * std::max(e0_scale, 1.0);
    std::vector<double> xs, ys;
    for (size_t i = 0; i < N_values.size(); ++i)
        if (report.point_ok[i] && report.increments[i] > floor) {
            xs.push_back(N_values[i]);
            ys.push_back(report.increments[i]);
        }
    report.points_in_fit = static_cast<int>(xs.size());
    if (xs.size() >= 2) report.fitted_exponent = fit_loglog_slope(xs, ys);
    return report;
}

}  // namespace cqs
