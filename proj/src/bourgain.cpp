#include "cqs/bourgain.hpp"

#include "cqs/random.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cqs {

namespace {

void check_field(const SpaceTimeField& field) {
    if (!field.grid) throw std::invalid_argument("space-time field has no grid");
    size_t expected = static_cast<size_t>(field.grid->num_times) * field.grid->space->num_points;
    if (field.samples.size() != expected)
        throw std::invalid_argument("space-time sample count does not match the grid");
}

void check_same_grid(const SpaceTimeField& a, const SpaceTimeField& b) {
    check_field(a);
    check_field(b);
    if (a.grid->space->num_points != b.grid->space->num_points ||
        a.grid->num_times != b.grid->num_times ||
        a.grid->space->box_length != b.grid->space->box_length ||
        a.grid->time_length != b.grid->time_length)
        throw std::invalid_argument("space-time fields live on different grids");
}

// transform each time row over x, then each xi column over t
std::vector<Complex> transform_2d(const SpaceTimeGridPtr& grid, const std::vector<Complex>& in,
                                  bool forward) {
    const int nx = grid->space->num_points;
    const int nt = grid->num_times;
    // a scratch 1-D grid provides the time-axis transform of matching length
    static thread_local std::vector<std::pair<int, GridPtr>> time_grids;
    GridPtr tg;
    for (auto& [n, g] : time_grids)
        if (n == nt) tg = g;
    if (!tg) {
        tg = make_grid(2.0 * 3.14159265358979323846, nt);
        time_grids.emplace_back(nt, tg);
    }

    std::vector<Complex> work(in.size());
    ComplexField row{grid->space, std::vector<Complex>(nx)};
    for (int it = 0; it < nt; ++it) {
        std::copy_n(in.begin() + static_cast<size_t>(it) * nx, nx, row.samples.begin());
        std::vector<Complex> out =
            forward ? to_spectrum(row) : from_spectrum(grid->space, row.samples).samples;
        std::copy_n(out.begin(), nx, work.begin() + static_cast<size_t>(it) * nx);
    }
    std::vector<Complex> result(in.size());
    ComplexField column{tg, std::vector<Complex>(nt)};
    for (int ix = 0; ix < nx; ++ix) {
        for (int it = 0; it < nt; ++it) column.samples[it] = work[static_cast<size_t>(it) * nx + ix];
        std::vector<Complex> out =
            forward ? to_spectrum(column) : from_spectrum(tg, column.samples).samples;
        for (int it = 0; it < nt; ++it) result[static_cast<size_t>(it) * nx + ix] = out[it];
    }
    return result;
}

void st_zero_aliased(std::vector<Complex>& coeffs, const SpaceTimeGrid& grid) {
    const int nx = grid.space->num_points;
    const int jx = grid.space->dealias_limit();
    const int jt = grid.time_dealias_limit();
    for (int it = 0; it < grid.num_times; ++it)
        for (int ix = 0; ix < nx; ++ix)
            if (std::abs(grid.signed_time_index(it)) > jt ||
                std::abs(grid.space->signed_index(ix)) > jx)
                coeffs[static_cast<size_t>(it) * nx + ix] = Complex{0.0, 0.0};
}

}  // namespace

SpaceTimeGridPtr make_spacetime_grid(const GridPtr& space, double time_length, int num_times) {
    if (!space) throw std::invalid_argument("null spatial grid");
    if (!(time_length > 0.0)) throw std::invalid_argument("time_length must be positive");
    if (num_times < 4 || num_times % 2 != 0)
        throw std::invalid_argument("num_times must be even and >= 4");
    auto grid = std::make_shared<SpaceTimeGrid>();
    grid->space = space;
    grid->time_length = time_length;
    grid->num_times = num_times;
    grid->tau_frequencies.resize(num_times);
    const double dtau = 2.0 * 3.14159265358979323846 / time_length;
    for (int k = 0; k < num_times; ++k)
        grid->tau_frequencies[k] = dtau * grid->signed_time_index(k);
    return grid;
}

SpaceTimeField make_st_field(const SpaceTimeGridPtr& grid) {
    if (!grid) throw std::invalid_argument("null grid");
    return SpaceTimeField{
        grid, std::vector<Complex>(static_cast<size_t>(grid->num_times) * grid->space->num_points,
                                   Complex{0.0, 0.0})};
}

std::vector<Complex> st_to_spectrum(const SpaceTimeField& field) {
    check_field(field);
    return transform_2d(field.grid, field.samples, true);
}

SpaceTimeField st_from_spectrum(const SpaceTimeGridPtr& grid, const std::vector<Complex>& coeffs) {
    if (!grid) throw std::invalid_argument("null grid");
    if (coeffs.size() != static_cast<size_t>(grid->num_times) * grid->space->num_points)
        throw std::invalid_argument("coefficient count does not match the grid");
    SpaceTimeField out = make_st_field(grid);
    out.samples = transform_2d(grid, coeffs, false);
    return out;
}

SpaceTimeField st_conjugate(const SpaceTimeField& field) {
    check_field(field);
    SpaceTimeField out = field;
    for (Complex& z : out.samples) z = std::conj(z);
    return out;
}

SpaceTimeField st_dealiased_product(const SpaceTimeField& a, const SpaceTimeField& b) {
    check_same_grid(a, b);
    std::vector<Complex> ca = st_to_spectrum(a);
    std::vector<Complex> cb = st_to_spectrum(b);
    st_zero_aliased(ca, *a.grid);
    st_zero_aliased(cb, *a.grid);
    SpaceTimeField fa = st_from_spectrum(a.grid, ca);
    SpaceTimeField fb = st_from_spectrum(a.grid, cb);
    for (size_t k = 0; k < fa.samples.size(); ++k) fa.samples[k] *= fb.samples[k];
    std::vector<Complex> cp = st_to_spectrum(fa);
    st_zero_aliased(cp, *a.grid);
    return st_from_spectrum(a.grid, cp);
}

double xsb_norm(const SpaceTimeField& w, double s, double b, double phase_coefficient) {
    check_field(w);
    const SpaceTimeGrid& grid = *w.grid;
    const int nx = grid.space->num_points;
    std::vector<Complex> coeffs = st_to_spectrum(w);
    double sum = 0.0;
    for (int it = 0; it < grid.num_times; ++it) {
        double tau = grid.tau_frequencies[it];
        for (int ix = 0; ix < nx; ++ix) {
            double xi = grid.space->frequencies[ix];
            double wx = std::pow(japanese_bracket(xi), 2.0 * s);
            double wt = std::pow(japanese_bracket(tau + phase_coefficient * xi * xi), 2.0 * b);
            sum += wx * wt * std::norm(coeffs[static_cast<size_t>(it) * nx + ix]);
        }
    }
    return std::sqrt(grid.space->box_length * grid.time_length * sum);
}

double bilinear_ratio_n1(const SpaceTimeField& u, const SpaceTimeField& v, double kappa, double s,
                         double b, double d, double a) {
    check_same_grid(u, v);
    double numerator = xsb_norm(st_dealiased_product(st_conjugate(u), v), kappa, -d, 1.0);
    double denominator = xsb_norm(u, kappa, b, 1.0) * xsb_norm(v, s, b, a);
    if (denominator == 0.0) {
        if (numerator == 0.0) return 0.0;
        throw std::domain_error("bilinear ratio with zero input field");
    }
    return numerator / denominator;
}

double bilinear_ratio_n2(const SpaceTimeField& u, const SpaceTimeField& w, double kappa, double s,
                         double b, double d, double a) {
    check_same_grid(u, w);
    double numerator = xsb_norm(st_dealiased_product(u, w), s, -d, a);
    double denominator = xsb_norm(u, kappa, b, 1.0) * xsb_norm(w, kappa, b, 1.0);
    if (denominator == 0.0) {
        if (numerator == 0.0) return 0.0;
        throw std::domain_error("bilinear ratio with zero input field");
    }
    return numerator / denominator;
}

namespace {

SpaceTimeField random_spectrum_field(const SpaceTimeGridPtr& grid, double scale, Rng& rng) {
    const int nx = grid->space->num_points;
    std::vector<Complex> coeffs(static_cast<size_t>(grid->num_times) * nx);
    for (int it = 0; it < grid->num_times; ++it) {
        double tau = grid->tau_frequencies[it];
        for (int ix = 0; ix < nx; ++ix) {
            double xi = grid->space->frequencies[ix];
            bool nyquist = it == grid->num_times / 2 || ix == nx / 2;
            double envelope =
                nyquist ? 0.0 : std::exp(-(xi * xi + tau * tau) / (2.0 * scale * scale));
            coeffs[static_cast<size_t>(it) * nx + ix] =
                envelope * Complex{rng.normal(), rng.normal()} / std::sqrt(2.0);
        }
    }
    return st_from_spectrum(grid, coeffs);
}

double median_of(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    size_t mid = values.size() / 2;
    return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

}  // namespace

ProbeStatistics probe(double sigma, double kappa, double s, double b, double d, int ensemble_size,
                      const ProbeOptions& options) {
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    if (!(b > 0.5 && b < 0.75)) throw std::invalid_argument("b must lie in (1/2, 3/4)");
    if (!(d > 0.25 && d < 0.5)) throw std::invalid_argument("d must lie in (1/4, 1/2)");
    if (ensemble_size < 16) throw std::invalid_argument("ensemble_size must be >= 16");
    if (options.resolutions.empty()) throw std::invalid_argument("no resolutions given");

    const double a = 1.0 / sigma;
    ProbeStatistics stats;
    std::vector<double> max_n1, max_n2;

    for (size_t ri = 0; ri < options.resolutions.size(); ++ri) {
        int res = options.resolutions[ri];
        GridPtr space = make_grid(options.box_length, res);
        SpaceTimeGridPtr grid = make_spacetime_grid(space, options.time_length, res);

        std::vector<double> ratios_n1, ratios_n2;
        for (int member = 0; member < ensemble_size; ++member) {
            for (size_t si = 0; si < options.spectrum_scales.size(); ++si) {
                Rng rng(derive_seed(options.seed, member, si, ri));
                SpaceTimeField fu = random_spectrum_field(grid, options.spectrum_scales[si], rng);
                SpaceTimeField fv = random_spectrum_field(grid, options.spectrum_scales[si], rng);
                ratios_n1.push_back(bilinear_ratio_n1(fu, fv, kappa, s, b, d, a));
                ratios_n2.push_back(bilinear_ratio_n2(fu, fv, kappa, s, b, d, a));
            }
        }
        stats.rows.push_back({res, *std::max_element(ratios_n1.begin(), ratios_n1.end()),
                              median_of(ratios_n1), "n1"});
        stats.rows.push_back({res, *std::max_element(ratios_n2.begin(), ratios_n2.end()),
                              median_of(ratios_n2), "n2"});
        max_n1.push_back(stats.rows[stats.rows.size() - 2].ratio_max);
        max_n2.push_back(stats.rows.back().ratio_max);
    }

    for (size_t i = 0; i + 1 < max_n1.size(); ++i) {
        if (max_n1[i + 1] > 2.0 * max_n1[i]) stats.growth_flag_n1 = true;
        if (max_n2[i + 1] > 2.0 * max_n2[i]) stats.growth_flag_n2 = true;
    }
    return stats;
}

}  // namespace cqs
