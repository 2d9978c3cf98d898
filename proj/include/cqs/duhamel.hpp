// The mild (Duhamel) formulation made executable.  With W the free dispersive
// group of each equation (phases p xi^2 and q a xi^2; the zeroth-order terms
// stay in the integrand), the solution map is
//
//   Phi_u(u,v)(t) = psi_1(t) W_u(t) u0
//                   - i psi_T(t) int_0^t W_u(t-t') { theta u - n1 conj(u) v }(t') dt'
//   Phi_v(u,v)(t) = psi_1(t) W_v(t) v0
//                   - i psi_T(t) int_0^t W_v(t-t') { alpha v - n2 u^2 }(t') / sigma dt'
//
// evaluated on a uniform time mesh over [0, 2T] with fourth-order composite
// Simpson prefix quadrature.  Picard iteration from the windowed free
// evolution measures the empirical contraction factor; on |t| <= T the fixed
// point solves the Cauchy problem.
//
// The cutoff psi is the standard exp(-1/x) glue bump: identically 1 on
// |t| <= T, identically 0 on |t| >= 2T, smooth in between, psi_T(3T/2) = 1/2.

#pragma once

#include "cqs/model.hpp"

#include <vector>

namespace cqs {

struct CutoffSpec {
    double T = 1.0;  // > 0
};

double cutoff(double t, const CutoffSpec& spec);

// uniform samples w(t_i), t_i = i * t_max / (size - 1), over [0, t_max = 2T]
struct TimeSampledPair {
    double t_max = 0.0;
    std::vector<FieldPair> states;

    int intervals() const { return static_cast<int>(states.size()) - 1; }
    double dt() const { return t_max / intervals(); }
    double time_at(int i) const { return i * dt(); }
};

// sup over mesh times of ||du||_L2 + ||dv||_L2
double sup_distance(const TimeSampledPair& a, const TimeSampledPair& b);

// psi_1-windowed free evolution, the Picard seed
TimeSampledPair linear_candidate(const FieldPair& state0, const ModelParams& params, double T,
                                 int intervals);

TimeSampledPair duhamel_map(const FieldPair& state0, const TimeSampledPair& candidate,
                            const ModelParams& params, double T);

struct PicardReport {
    int iterates = 0;
    std::vector<double> successive_distances;
    double contraction_factor = 0.0;  // max ratio of consecutive distances
    bool converged = false;
    bool diverged = false;
};

struct PicardResult {
    TimeSampledPair solution;
    PicardReport report;
};

PicardResult picard_solve(const FieldPair& state0, const ModelParams& params, double T,
                          double tolerance, int max_iter, int mesh_intervals = 64);

struct ExistencePoint {
    double amplitude = 0.0;
    double data_norm = 0.0;
    double t_max = 0.0;
    double contraction_factor = 0.0;
    bool ok = false;
};

struct ExistenceScalingResult {
    std::vector<ExistencePoint> points;
    double fitted_slope = 0.0;  // of log T_max against log data norm
};

struct ExistenceScalingOptions {
    double tolerance = 1e-11;
    int max_iter = 9;
    int mesh_intervals = 64;
    double t_start = 1.0;   // initial bracket guess
    double t_cap = 4.0;     // largest T attempted
    double t_floor = 1e-4;  // smallest T attempted
    double rel_accuracy = 1e-3;
};

// for each amplitude, bisect the largest T whose measured contraction factor
// stays <= 1/2, then fit log T_max against log(||u0|| + ||v0||)
ExistenceScalingResult existence_time_scaling(const std::vector<double>& amplitudes,
                                              const ModelParams& params,
                                              const FieldPair& base_data,
                                              const ExistenceScalingOptions& options = {});

// least-squares slope of y against x (shared by the experiment fits)
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace cqs
