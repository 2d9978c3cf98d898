#include "cqs/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cqs {

ModelParams default_params(int p, int q, double sigma, double theta, double alpha) {
    ModelParams params;
    params.p = p;
    params.q = q;
    params.sigma = sigma;
    params.theta = theta;
    params.alpha = alpha;
    params.n1_coefficient = 1.0;
    params.n2_coefficient = 0.5 / sigma;  // a/2
    validate(params);
    return params;
}

void validate(const ModelParams& params) {
    if (params.p != 1 && params.p != -1) throw std::invalid_argument("p must be +1 or -1");
    if (params.q != 1 && params.q != -1) throw std::invalid_argument("q must be +1 or -1");
    if (!(params.sigma > 0.0) || !std::isfinite(params.sigma))
        throw std::invalid_argument("sigma must be positive");
    if (!std::isfinite(params.theta) || !std::isfinite(params.alpha) ||
        !std::isfinite(params.n1_coefficient) || !std::isfinite(params.n2_coefficient))
        throw std::invalid_argument("model coefficients must be finite");
}

FieldPair make_pair(const GridPtr& grid) { return FieldPair{make_field(grid), make_field(grid)}; }

void check_pair(const FieldPair& state) {
    if (!state.u.grid || !state.v.grid) throw std::invalid_argument("field pair has no grid");
    if (!state.u.grid->same_lattice(*state.v.grid))
        throw std::invalid_argument("u and v live on different grids");
}

FieldPair scaled(const FieldPair& state, Complex factor) {
    return FieldPair{scaled(state.u, factor), scaled(state.v, factor)};
}

FieldPair add(const FieldPair& a, const FieldPair& b) {
    return FieldPair{add(a.u, b.u), add(a.v, b.v)};
}

FieldPair sub(const FieldPair& a, const FieldPair& b) {
    return FieldPair{sub(a.u, b.u), sub(a.v, b.v)};
}

double pair_distance(const FieldPair& a, const FieldPair& b) {
    return l2_norm(sub(a.u, b.u)) + l2_norm(sub(a.v, b.v));
}

double pair_norm(const FieldPair& state) { return l2_norm(state.u) + l2_norm(state.v); }

bool region_contains(double sigma, const SobolevPair& pair) {
    if (!(sigma > 0.0)) throw std::domain_error("sigma must be positive");
    const double kappa = pair.kappa;
    const double s = pair.s;
    if (sigma == 2.0) return kappa == s && s >= 0.0;
    const double margin = sigma < 2.0 ? 0.5 : 1.0;
    const double lower = std::abs(kappa) - margin;
    const double upper = std::min(kappa + margin, 2.0 * kappa + margin);
    return lower <= s && s < upper;
}

std::vector<RegionSamplePoint> region_sample(double sigma, double kappa_min, double kappa_max,
                                             double s_min, double s_max, int resolution) {
    if (resolution < 2) throw std::invalid_argument("resolution must be >= 2");
    if (kappa_max < kappa_min || s_max < s_min) throw std::invalid_argument("empty sample range");
    std::vector<RegionSamplePoint> out;
    out.reserve(static_cast<size_t>(resolution) * resolution);
    for (int i = 0; i < resolution; ++i) {
        double kappa = kappa_min + (kappa_max - kappa_min) * i / (resolution - 1);
        for (int j = 0; j < resolution; ++j) {
            double s = s_min + (s_max - s_min) * j / (resolution - 1);
            out.push_back({kappa, s, region_contains(sigma, {kappa, s})});
        }
    }
    return out;
}

FieldPair nonlinear_rhs(const FieldPair& state, const ModelParams& params) {
    check_pair(state);
    const Complex i_unit{0.0, 1.0};
    ComplexField w1 = dealiased_product(conjugate(state.u), state.v);
    ComplexField w2 = dealiased_product(state.u, state.u);
    return FieldPair{scaled(w1, i_unit * params.n1_coefficient),
                     scaled(w2, i_unit * (params.n2_coefficient / params.sigma))};
}

double mass(const FieldPair& state, double sigma) {
    check_pair(state);
    double sum = 0.0;
    for (size_t k = 0; k < state.u.samples.size(); ++k)
        sum += std::norm(state.u.samples[k]) + 2.0 * sigma * std::norm(state.v.samples[k]);
    return sum * state.u.grid->dx;
}

double hamiltonian(const FieldPair& state, const ModelParams& params) {
    check_pair(state);
    const GridPtr& grid = state.u.grid;

    // gradient terms via the spectrum (Plancherel)
    std::vector<Complex> u_hat = to_spectrum(state.u);
    std::vector<Complex> v_hat = to_spectrum(state.v);
    double grad_u = 0.0, grad_v = 0.0;
    for (int k = 0; k < grid->num_points; ++k) {
        double xi2 = grid->frequencies[k] * grid->frequencies[k];
        grad_u += xi2 * std::norm(u_hat[k]);
        grad_v += xi2 * std::norm(v_hat[k]);
    }
    grad_u *= grid->box_length;
    grad_v *= grid->box_length;

    double u2 = 0.0, v2 = 0.0, interaction = 0.0;
    for (size_t k = 0; k < state.u.samples.size(); ++k) {
        u2 += std::norm(state.u.samples[k]);
        v2 += std::norm(state.v.samples[k]);
        interaction +=
            (state.u.samples[k] * state.u.samples[k] * std::conj(state.v.samples[k])).real();
    }
    u2 *= grid->dx;
    v2 *= grid->dx;
    interaction *= grid->dx;

    return params.p * grad_u + params.q * grad_v + params.theta * u2 + params.alpha * v2 -
           interaction;
}

double resonance_n1(double xi1, double xi2, double a) {
    double xi = xi1 + xi2;
    return xi * xi + xi1 * xi1 - a * xi2 * xi2;
}

double resonance_n2(double xi1, double xi2, double a) {
    double xi = xi1 + xi2;
    return a * xi * xi - xi1 * xi1 - xi2 * xi2;
}

ResonanceLines resonance_lines(double a) {
    if (a < 0.5) throw std::domain_error("resonance lines are real only for a >= 1/2");
    double mu = (1.0 - std::sqrt(2.0 * a - 1.0)) / 2.0;
    return ResonanceLines{mu, 1.0 - mu};
}

}  // namespace cqs
