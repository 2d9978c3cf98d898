// Initial-data generators.  Every generator returns band-limited data (all
// content inside the 2/3 dealias band, Nyquist included in the cut), so the
// evolved state stays in the band and quadratic products are alias-free.

#pragma once

#include "cqs/model.hpp"

#include <cstdint>

namespace cqs {

// u = v = amplitude exp(-((x-center)/width)^2) exp(i phase_velocity x)
FieldPair gaussian_pair(const GridPtr& grid, double amplitude, double width, double center,
                        double phase_velocity = 0.0);

// u = amplitude exp(i k x), v = amplitude exp(2 i k x); k must sit on the
// frequency lattice
FieldPair plane_wave_pair(const GridPtr& grid, double amplitude, double wavenumber);

// standing wave u = A exp(ikx), v = B exp(2ikx) that solves the system
// exactly: B = p k^2 + theta and n2 A^2 = (4 q k^2 + alpha) B
FieldPair exact_stationary_pair(const GridPtr& grid, double wavenumber, const ModelParams& params);

// random-phase spectrum |u_hat(xi)| = amplitude <xi>^{-spectral_decay} on the
// dealias band: rough data for the almost-conservation experiments (such data
// lies in H^r exactly for r < spectral_decay - 1/2).  max_abs_frequency caps
// the support below the band when the caller needs every active mode
// resolved in time as well.
FieldPair power_law_pair(const GridPtr& grid, double spectral_decay, double amplitude,
                         std::uint64_t seed, double max_abs_frequency = 0.0);

}  // namespace cqs
