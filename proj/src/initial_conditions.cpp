#include "cqs/initial_conditions.hpp"

#include "cqs/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cqs {

namespace {

// Generators hand out band-limited data: inside the 2/3 band the quadratic
// products are alias-free from the first step and the flow's invariants are
// exact at the semi-discrete level (spectral tails outside the band would
// only rotate linearly and leak a dt-independent drift into the cubic
// Hamiltonian term).  The Nyquist mode is zeroed with the rest.
void project_to_band(ComplexField& field) {
    std::vector<Complex> coeffs = to_spectrum(field);
    zero_aliased_modes(coeffs, *field.grid);
    field = from_spectrum(field.grid, coeffs);
}

int lattice_index(const GridPtr& grid, double wavenumber) {
    double j = wavenumber / grid->dxi;
    double j_round = std::round(j);
    if (std::abs(j - j_round) > 1e-9)
        throw std::invalid_argument("wavenumber is not on the frequency lattice");
    int ji = static_cast<int>(j_round);
    if (std::abs(ji) >= grid->num_points / 2)
        throw std::invalid_argument("wavenumber beyond the grid's Nyquist frequency");
    return ji >= 0 ? ji : ji + grid->num_points;
}

}  // namespace

FieldPair gaussian_pair(const GridPtr& grid, double amplitude, double width, double center,
                        double phase_velocity) {
    if (!(width > 0.0)) throw std::invalid_argument("gaussian width must be positive");
    FieldPair state = make_pair(grid);
    for (int k = 0; k < grid->num_points; ++k) {
        // nearest periodic image keeps the profile smooth across the seam
        double dxk = grid->x(k) - center;
        dxk -= grid->box_length * std::round(dxk / grid->box_length);
        double envelope = amplitude * std::exp(-(dxk / width) * (dxk / width));
        Complex z = envelope * std::polar(1.0, phase_velocity * grid->x(k));
        state.u.samples[k] = z;
        state.v.samples[k] = z;
    }
    project_to_band(state.u);
    project_to_band(state.v);
    return state;
}

FieldPair plane_wave_pair(const GridPtr& grid, double amplitude, double wavenumber) {
    lattice_index(grid, wavenumber);
    lattice_index(grid, 2.0 * wavenumber);
    FieldPair state = make_pair(grid);
    for (int k = 0; k < grid->num_points; ++k) {
        state.u.samples[k] = amplitude * std::polar(1.0, wavenumber * grid->x(k));
        state.v.samples[k] = amplitude * std::polar(1.0, 2.0 * wavenumber * grid->x(k));
    }
    return state;
}

FieldPair exact_stationary_pair(const GridPtr& grid, double wavenumber,
                                const ModelParams& params) {
    validate(params);
    lattice_index(grid, wavenumber);
    lattice_index(grid, 2.0 * wavenumber);
    const double k2 = wavenumber * wavenumber;
    const double b = params.p * k2 + params.theta;
    if (params.n2_coefficient == 0.0)
        throw std::invalid_argument("stationary wave needs a nonzero u^2 coupling");
    const double a2 = (4.0 * params.q * k2 + params.alpha) * b / params.n2_coefficient;
    if (!(a2 > 0.0))
        throw std::invalid_argument("no real stationary wave for these parameters");
    const double a = std::sqrt(a2);
    FieldPair state = make_pair(grid);
    for (int k = 0; k < grid->num_points; ++k) {
        state.u.samples[k] = a * std::polar(1.0, wavenumber * grid->x(k));
        state.v.samples[k] = b * std::polar(1.0, 2.0 * wavenumber * grid->x(k));
    }
    return state;
}

FieldPair power_law_pair(const GridPtr& grid, double spectral_decay, double amplitude,
                         std::uint64_t seed, double max_abs_frequency) {
    Rng rng(seed);
    const int limit = grid->dealias_limit();
    const double cap = max_abs_frequency > 0.0 ? max_abs_frequency
                                               : limit * grid->dxi + 0.5 * grid->dxi;
    auto draw = [&]() {
        std::vector<Complex> coeffs(grid->num_points, Complex{0.0, 0.0});
        for (int k = 0; k < grid->num_points; ++k) {
            int j = grid->signed_index(k);
            if (j == 0 || std::abs(j) > limit) continue;
            if (std::abs(grid->frequencies[k]) > cap) continue;
            double magnitude =
                amplitude * std::pow(japanese_bracket(grid->frequencies[k]), -spectral_decay);
            coeffs[k] = magnitude * std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
        }
        return from_spectrum(grid, coeffs);
    };
    ComplexField u = draw();
    ComplexField v = draw();
    return FieldPair{std::move(u), std::move(v)};
}

}  // namespace cqs
