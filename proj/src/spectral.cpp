#include "cqs/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <memory>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace cqs {

namespace {

// FFTW plan cache, one entry per transform size.  Plans are created with
// FFTW_ESTIMATE so the planning step is deterministic.  The engine mutex
// serializes buffer use; all public operations stay pure in their inputs.
struct PlanSet {
    fftw_complex* buf_in = nullptr;
    fftw_complex* buf_out = nullptr;
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;

    PlanSet() = default;
    PlanSet(const PlanSet&) = delete;
    PlanSet& operator=(const PlanSet&) = delete;
    ~PlanSet() {
        if (forward) fftw_destroy_plan(forward);
        if (backward) fftw_destroy_plan(backward);
        if (buf_in) fftw_free(buf_in);
        if (buf_out) fftw_free(buf_out);
    }
};

struct FftwCleanup {
    ~FftwCleanup() { fftw_cleanup(); }
};

std::mutex& engine_mutex() {
    static std::mutex m;
    return m;
}

PlanSet& plans_for(int n) {
    static FftwCleanup cleanup;  // constructed first, so fftw_cleanup runs last
    static std::map<int, std::unique_ptr<PlanSet>> cache;
    auto it = cache.find(n);
    if (it == cache.end()) {
        auto p = std::make_unique<PlanSet>();
        p->buf_in = fftw_alloc_complex(static_cast<size_t>(n));
        p->buf_out = fftw_alloc_complex(static_cast<size_t>(n));
        p->forward = fftw_plan_dft_1d(n, p->buf_in, p->buf_out, FFTW_FORWARD, FFTW_ESTIMATE);
        p->backward = fftw_plan_dft_1d(n, p->buf_in, p->buf_out, FFTW_BACKWARD, FFTW_ESTIMATE);
        it = cache.emplace(n, std::move(p)).first;
    }
    return *it->second;
}

void check_grid(const ComplexField& field) {
    if (!field.grid) throw std::invalid_argument("field has no grid");
    if (field.samples.size() != static_cast<size_t>(field.grid->num_points))
        throw std::invalid_argument("field sample count does not match its grid");
}

void check_same_grid(const ComplexField& a, const ComplexField& b) {
    check_grid(a);
    check_grid(b);
    if (!a.grid->same_lattice(*b.grid))
        throw std::invalid_argument("fields live on different grids");
}

}  // namespace

GridPtr make_grid(double box_length, int num_points) {
    if (!(box_length > 0.0) || !std::isfinite(box_length))
        throw std::invalid_argument("box_length must be positive and finite");
    if (num_points < 4) throw std::invalid_argument("num_points must be >= 4");
    if (num_points % 2 != 0) throw std::invalid_argument("num_points must be even");

    auto grid = std::make_shared<SpectralGrid>();
    grid->box_length = box_length;
    grid->num_points = num_points;
    grid->dx = box_length / num_points;
    grid->dxi = 2.0 * std::numbers::pi / box_length;
    grid->frequencies.resize(num_points);
    for (int k = 0; k < num_points; ++k)
        grid->frequencies[k] = grid->dxi * grid->signed_index(k);
    return grid;
}

ComplexField make_field(const GridPtr& grid) {
    if (!grid) throw std::invalid_argument("null grid");
    return ComplexField{grid, std::vector<Complex>(grid->num_points, Complex{0.0, 0.0})};
}

ComplexField make_field(const GridPtr& grid, const std::function<Complex(double)>& f) {
    ComplexField out = make_field(grid);
    for (int k = 0; k < grid->num_points; ++k) out.samples[k] = f(grid->x(k));
    return out;
}

bool all_finite(const ComplexField& field) {
    for (const Complex& z : field.samples)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

double max_abs(const ComplexField& field) {
    double m = 0.0;
    for (const Complex& z : field.samples) m = std::max(m, std::abs(z));
    return m;
}

std::vector<Complex> to_spectrum(const ComplexField& field) {
    check_grid(field);
    const int n = field.grid->num_points;
    std::vector<Complex> coeffs(n);
    {
        std::scoped_lock lock(engine_mutex());
        PlanSet& p = plans_for(n);
        for (int k = 0; k < n; ++k) {
            p.buf_in[k][0] = field.samples[k].real();
            p.buf_in[k][1] = field.samples[k].imag();
        }
        fftw_execute(p.forward);
        for (int k = 0; k < n; ++k) coeffs[k] = Complex{p.buf_out[k][0], p.buf_out[k][1]};
    }
    const double inv_n = 1.0 / n;
    for (Complex& c : coeffs) c *= inv_n;
    return coeffs;
}

ComplexField from_spectrum(const GridPtr& grid, const std::vector<Complex>& coeffs) {
    if (!grid) throw std::invalid_argument("null grid");
    const int n = grid->num_points;
    if (coeffs.size() != static_cast<size_t>(n))
        throw std::invalid_argument("coefficient count does not match the grid");
    ComplexField out = make_field(grid);
    std::scoped_lock lock(engine_mutex());
    PlanSet& p = plans_for(n);
    for (int k = 0; k < n; ++k) {
        p.buf_in[k][0] = coeffs[k].real();
        p.buf_in[k][1] = coeffs[k].imag();
    }
    fftw_execute(p.backward);
    for (int k = 0; k < n; ++k) out.samples[k] = Complex{p.buf_out[k][0], p.buf_out[k][1]};
    return out;
}

double japanese_bracket(double xi) { return std::hypot(1.0, xi); }

ComplexField apply_symbol(const ComplexField& field, const std::function<Complex(double)>& symbol) {
    check_grid(field);
    std::vector<Complex> coeffs = to_spectrum(field);
    const auto& freqs = field.grid->frequencies;
    for (size_t j = 0; j < coeffs.size(); ++j) {
        Complex w = symbol(freqs[j]);
        if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
            throw std::domain_error("symbol is not finite at a lattice frequency");
        coeffs[j] *= w;
    }
    return from_spectrum(field.grid, coeffs);
}

double sobolev_norm(const ComplexField& field, double s) {
    check_grid(field);
    std::vector<Complex> coeffs = to_spectrum(field);
    double sum = 0.0;
    for (size_t j = 0; j < coeffs.size(); ++j) {
        double w = std::pow(japanese_bracket(field.grid->frequencies[j]), 2.0 * s);
        sum += w * std::norm(coeffs[j]);
    }
    return std::sqrt(field.grid->box_length * sum);
}

double l2_norm(const ComplexField& field) {
    check_grid(field);
    double sum = 0.0;
    for (const Complex& z : field.samples) sum += std::norm(z);
    return std::sqrt(sum * field.grid->dx);
}

Complex integrate(const ComplexField& field) {
    check_grid(field);
    Complex sum{0.0, 0.0};
    for (const Complex& z : field.samples) sum += z;
    return sum * field.grid->dx;
}

ComplexField conjugate(const ComplexField& field) {
    check_grid(field);
    ComplexField out = field;
    for (Complex& z : out.samples) z = std::conj(z);
    return out;
}

ComplexField scaled(const ComplexField& field, Complex factor) {
    check_grid(field);
    ComplexField out = field;
    for (Complex& z : out.samples) z *= factor;
    return out;
}

ComplexField add(const ComplexField& a, const ComplexField& b) {
    check_same_grid(a, b);
    ComplexField out = a;
    for (size_t k = 0; k < out.samples.size(); ++k) out.samples[k] += b.samples[k];
    return out;
}

ComplexField sub(const ComplexField& a, const ComplexField& b) {
    check_same_grid(a, b);
    ComplexField out = a;
    for (size_t k = 0; k < out.samples.size(); ++k) out.samples[k] -= b.samples[k];
    return out;
}

void zero_aliased_modes(std::vector<Complex>& coeffs, const SpectralGrid& grid) {
    const int limit = grid.dealias_limit();
    for (int k = 0; k < grid.num_points; ++k)
        if (std::abs(grid.signed_index(k)) > limit) coeffs[k] = Complex{0.0, 0.0};
}

ComplexField dealias(const ComplexField& field) {
    check_grid(field);
    std::vector<Complex> coeffs = to_spectrum(field);
    zero_aliased_modes(coeffs, *field.grid);
    return from_spectrum(field.grid, coeffs);
}

ComplexField dealiased_product(const ComplexField& a, const ComplexField& b) {
    check_same_grid(a, b);
    ComplexField fa = dealias(a);
    ComplexField fb = dealias(b);
    ComplexField prod = make_field(a.grid);
    for (size_t k = 0; k < prod.samples.size(); ++k)
        prod.samples[k] = fa.samples[k] * fb.samples[k];
    std::vector<Complex> coeffs = to_spectrum(prod);
    zero_aliased_modes(coeffs, *a.grid);
    return from_spectrum(a.grid, coeffs);
}

}  // namespace cqs
