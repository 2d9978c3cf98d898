// Periodic spectral substrate: grids, transforms, Fourier symbols, Sobolev
// norms, dealiased products.
//
// Conventions fixed here and relied on by every other module:
//
//   * Grid: n equally spaced points x_k = k*L/n on the periodic box [0, L).
//   * Frequency lattice: xi_j = 2*pi*j/L with j running through the signed
//     FFT ordering {0, 1, ..., n/2-1, -n/2, ..., -1}.
//   * Coefficients: to_spectrum(u) returns c_j such that
//         u(x_k) = sum_j c_j exp(i xi_j x_k),
//     i.e. the forward DFT divided by n.  from_spectrum inverts it exactly.
//   * Plancherel: ||u||_{L2}^2 = sum_k |u(x_k)|^2 dx = L sum_j |c_j|^2, so
//     sobolev_norm(u, 0) equals the physical-space quadrature norm.
//   * Quadratic products are dealiased with the 2/3 rule.  Kept modes are
//     |j| <= dealias_limit() = (n-1)/3, which also keeps grid quadratures of
//     cubic expressions of band-limited fields exact (3*limit < n).
//   * The Nyquist mode is carried through transforms but every initial-data
//     generator writes zero there.

#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <vector>

namespace cqs {

using Complex = std::complex<double>;

struct SpectralGrid {
    double box_length = 0.0;            // L
    int num_points = 0;                 // n, even, >= 4
    double dx = 0.0;                    // L/n
    double dxi = 0.0;                   // 2*pi/L
    std::vector<double> frequencies;    // xi_j in transform order

    double x(int k) const { return dx * static_cast<double>(k); }
    int signed_index(int k) const { return k < num_points / 2 ? k : k - num_points; }
    // largest |j| kept by the 2/3 rule; 3*dealias_limit() < num_points
    int dealias_limit() const { return (num_points - 1) / 3; }
    bool same_lattice(const SpectralGrid& other) const {
        return num_points == other.num_points && box_length == other.box_length;
    }
};

using GridPtr = std::shared_ptr<const SpectralGrid>;

GridPtr make_grid(double box_length, int num_points);

struct ComplexField {
    GridPtr grid;
    std::vector<Complex> samples;  // physical space, length grid->num_points
};

ComplexField make_field(const GridPtr& grid);
ComplexField make_field(const GridPtr& grid, const std::function<Complex(double)>& f);

bool all_finite(const ComplexField& field);
double max_abs(const ComplexField& field);

// transform-order coefficients, length n
std::vector<Complex> to_spectrum(const ComplexField& field);
ComplexField from_spectrum(const GridPtr& grid, const std::vector<Complex>& coeffs);

double japanese_bracket(double xi);  // sqrt(1 + xi^2)

// F^{-1}[ symbol(xi_j) F[u] ]; rejects non-finite symbol values
ComplexField apply_symbol(const ComplexField& field, const std::function<Complex(double)>& symbol);

double sobolev_norm(const ComplexField& field, double s);
double l2_norm(const ComplexField& field);       // quadrature norm, = sobolev_norm(.,0)
Complex integrate(const ComplexField& field);    // sum_k u(x_k) dx

// pointwise helpers (value semantics, grids must agree where binary)
ComplexField conjugate(const ComplexField& field);
ComplexField scaled(const ComplexField& field, Complex factor);
ComplexField add(const ComplexField& a, const ComplexField& b);
ComplexField sub(const ComplexField& a, const ComplexField& b);

// zero every coefficient with |j| > dealias_limit()
void zero_aliased_modes(std::vector<Complex>& coeffs, const SpectralGrid& grid);
ComplexField dealias(const ComplexField& field);

// alias-free product of the band-limited projections of a and b
ComplexField dealiased_product(const ComplexField& a, const ComplexField& b);

}  // namespace cqs
