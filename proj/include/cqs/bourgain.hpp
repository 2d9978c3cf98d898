// Discrete space-time norms
//
//   ||w||_{s,b;c}^2 = L T sum_{j,k} <xi_j>^{2s} <tau_k + c xi_j^2>^{2b} |w_hat|^2
//
// on the doubly periodic box, with w_hat the 2-D Fourier coefficients under
// the same normalization as the spatial transform (s = b = 0 reproduces the
// space-time L2 quadrature norm).  The phase coefficient c selects the
// dispersive characteristic: c = 1 for the first equation, c = a = 1/sigma
// for the second, and conjugation maps c to -c.
//
// The probe draws random Gaussian-spectrum ensembles and measures the two
// quadratic-interaction ratios across grid refinements.  A bounded ratio on a
// finite grid is evidence, not proof; growth flags are reported as such.

#pragma once

#include "cqs/spectral.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cqs {

struct SpaceTimeGrid {
    GridPtr space;
    double time_length = 0.0;
    int num_times = 0;  // even, >= 4
    std::vector<double> tau_frequencies;

    double dt() const { return time_length / num_times; }
    int signed_time_index(int k) const { return k < num_times / 2 ? k : k - num_times; }
    int time_dealias_limit() const { return (num_times - 1) / 3; }
};

using SpaceTimeGridPtr = std::shared_ptr<const SpaceTimeGrid>;

SpaceTimeGridPtr make_spacetime_grid(const GridPtr& space, double time_length, int num_times);

struct SpaceTimeField {
    SpaceTimeGridPtr grid;
    std::vector<Complex> samples;  // time-major: samples[it * nx + ix]

    Complex& at(int it, int ix) { return samples[static_cast<size_t>(it) * grid->space->num_points + ix]; }
    const Complex& at(int it, int ix) const {
        return samples[static_cast<size_t>(it) * grid->space->num_points + ix];
    }
};

SpaceTimeField make_st_field(const SpaceTimeGridPtr& grid);

// 2-D coefficients, index [ik * nx + ij], both axes in transform order
std::vector<Complex> st_to_spectrum(const SpaceTimeField& field);
SpaceTimeField st_from_spectrum(const SpaceTimeGridPtr& grid, const std::vector<Complex>& coeffs);

SpaceTimeField st_conjugate(const SpaceTimeField& field);
// alias-free product, 2/3 rule in both axes
SpaceTimeField st_dealiased_product(const SpaceTimeField& a, const SpaceTimeField& b);

double xsb_norm(const SpaceTimeField& w, double s, double b, double phase_coefficient);

// || dealias(conj(u) v) ||_{kappa,-d;1} / ( ||u||_{kappa,b;1} ||v||_{s,b;a} )
double bilinear_ratio_n1(const SpaceTimeField& u, const SpaceTimeField& v, double kappa, double s,
                         double b, double d, double a);

// || dealias(u w) ||_{s,-d;a} / ( ||u||_{kappa,b;1} ||w||_{kappa,b;1} )
double bilinear_ratio_n2(const SpaceTimeField& u, const SpaceTimeField& w, double kappa, double s,
                         double b, double d, double a);

struct ProbeRow {
    int resolution = 0;
    double ratio_max = 0.0;
    double ratio_median = 0.0;
    std::string estimate;  // "n1" or "n2"
};

struct ProbeStatistics {
    std::vector<ProbeRow> rows;
    bool growth_flag_n1 = false;  // max ratio more than doubled per refinement
    bool growth_flag_n2 = false;
};

struct ProbeOptions {
    std::vector<int> resolutions{16, 32, 64};
    std::uint64_t seed = 1;
    double box_length = 2.0 * 3.14159265358979323846;
    double time_length = 2.0 * 3.14159265358979323846;
    std::vector<double> spectrum_scales{1.0, 2.0, 4.0};
};

ProbeStatistics probe(double sigma, double kappa, double s, double b, double d, int ensemble_size,
                      const ProbeOptions& options = {});

}  // namespace cqs
