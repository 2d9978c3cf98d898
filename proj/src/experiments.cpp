#include "cqs/experiments.hpp"

#include "cqs/imethod.hpp"
#include "cqs/initial_conditions.hpp"
#include "cqs/io.hpp"

#include "json.hpp"

#include <cmath>
#include <exception>
#include <filesystem>
#include <map>

namespace cqs {

using nlohmann::json;

namespace {

// collects artifacts, then writes manifest.json with a re-read hash audit
class ArtifactSink {
  public:
    explicit ArtifactSink(std::filesystem::path dir) : dir_(std::move(dir)) {
        std::filesystem::create_directories(dir_);
    }

    void write(const std::string& name, const std::string& bytes) {
        write_file(dir_ / name, bytes);
        entries_[name] = {bytes.size(), fnv1a64_hex(bytes)};
    }

    void finalize(const ExperimentConfig& config, bool partial, bool blowup) {
        json manifest;
        manifest["format_version"] = 1;
        manifest["experiment"] = to_string(config.experiment);
        manifest["seed"] = config.seed;
        manifest["partial"] = partial;
        manifest["blowup"] = blowup;
        json artifacts = json::array();
        bool verified = true;
        for (const auto& [name, entry] : entries_) {
            std::string bytes = read_file(dir_ / name);
            bool good = bytes.size() == entry.bytes && fnv1a64_hex(bytes) == entry.hash;
            verified = verified && good;
            artifacts.push_back(
                {{"path", name}, {"bytes", entry.bytes}, {"fnv1a64", entry.hash}});
        }
        manifest["artifacts"] = artifacts;
        manifest["verified"] = verified;
        write_file(dir_ / "manifest.json", manifest.dump(2) + "\n");
    }

  private:
    struct Entry {
        std::size_t bytes = 0;
        std::string hash;
    };
    std::filesystem::path dir_;
    std::map<std::string, Entry> entries_;  // sorted for a stable manifest
};

std::string scheme_name(Scheme scheme) {
    return scheme == Scheme::strang ? "strang" : "ifrk4";
}

std::string trajectory_csv(const Trajectory& traj) {
    CsvBuilder csv("t,mass,hamiltonian,u_l2,v_l2,u_hs,v_hs,blownup");
    for (const DiagnosticsRow& row : traj.diagnostics)
        csv.row({format_double(row.t), format_double(row.mass), format_double(row.hamiltonian),
                 format_double(row.u_l2), format_double(row.v_l2), format_double(row.u_hs),
                 format_double(row.v_hs), row.blownup ? "1" : "0"});
    return csv.text;
}

int run_simulate(const ExperimentConfig& config, const GridPtr& grid, ArtifactSink& sink) {
    FieldPair state0 = build_initial_state(config, grid);
    Trajectory traj = run(state0, config.model, config.evolve);
    sink.write("trajectory.csv", trajectory_csv(traj));
    if (!traj.blownup) {
        CheckpointMeta meta;
        meta.time = traj.times.back();
        meta.params = config.model;
        sink.write("final_state.ckpt", encode_checkpoint(traj.final_state(), meta));
    }
    json summary;
    summary["blownup"] = traj.blownup;
    summary["t_final"] = traj.times.back();
    summary["records"] = traj.times.size();
    summary["mass_initial"] = traj.diagnostics.front().mass;
    summary["mass_final"] = traj.diagnostics.back().mass;
    sink.write("summary.json", summary.dump(2) + "\n");
    sink.finalize(config, false, traj.blownup);
    return traj.blownup ? kExitBlowup : kExitOk;
}

int run_picard(const ExperimentConfig& config, const GridPtr& grid, ArtifactSink& sink) {
    FieldPair state0 = build_initial_state(config, grid);
    PicardResult result =
        picard_solve(state0, config.model, config.picard.T, config.picard.tolerance,
                     config.picard.max_iter, config.picard.mesh_intervals);
    json report;
    report["T"] = config.picard.T;
    report["tolerance"] = config.picard.tolerance;
    report["mesh_intervals"] = config.picard.mesh_intervals;
    report["iterates"] = result.report.iterates;
    report["successive_distances"] = result.report.successive_distances;
    report["contraction_factor"] = result.report.contraction_factor;
    report["converged"] = result.report.converged;
    report["diverged"] = result.report.diverged;
    sink.write("picard_report.json", report.dump(2) + "\n");
    sink.finalize(config, false, false);
    return kExitOk;
}

int run_imethod(const ExperimentConfig& config, const GridPtr& grid, ArtifactSink& sink) {
    FieldPair base = build_initial_state(config, grid);
    IncrementOptions options;
    options.dt = config.imethod.dt;
    options.blowup_threshold = config.evolve.blowup_threshold;
    IncrementReport report = increment_experiment(base, config.model.sigma, config.imethod.s,
                                                  config.imethod.N_values, options);

    CsvBuilder csv("N,delta,increment");
    for (std::size_t i = 0; i < report.N_values.size(); ++i)
        csv.row({format_double(report.N_values[i]), format_double(report.delta_used),
                 format_double(report.increments[i])});
    sink.write("increments.csv", csv.text);

    json summary;
    summary["sigma"] = config.model.sigma;
    summary["s"] = config.imethod.s;
    summary["N_values"] = report.N_values;
    summary["increments"] = report.increments;
    summary["delta_used"] = report.delta_used;
    summary["fitted_exponent"] = report.fitted_exponent;
    summary["points_in_fit"] = report.points_in_fit;
    json ok = json::array();
    for (bool good : report.point_ok) ok.push_back(good);
    summary["point_ok"] = ok;
    sink.write("increment_report.json", summary.dump(2) + "\n");
    bool any_blowup = false;
    for (bool good : report.point_ok) any_blowup = any_blowup || !good;
    sink.finalize(config, false, any_blowup);
    return any_blowup ? kExitBlowup : kExitOk;
}

int run_probe(const ExperimentConfig& config, ArtifactSink& sink) {
    ProbeOptions options;
    options.resolutions = config.probe.resolutions;
    options.seed = config.seed;
    options.box_length = config.grid_L;
    options.time_length = config.probe.time_length;
    ProbeStatistics stats =
        probe(config.model.sigma, config.probe.kappa, config.probe.s, config.probe.b,
              config.probe.d, config.probe.ensemble_size, options);

    CsvBuilder csv("resolution,ratio_max,ratio_median,estimate");
    for (const ProbeRow& row : stats.rows)
        csv.row({std::to_string(row.resolution), format_double(row.ratio_max),
                 format_double(row.ratio_median), row.estimate});
    sink.write("probe.csv", csv.text);

    json summary;
    summary["sigma"] = config.model.sigma;
    summary["kappa"] = config.probe.kappa;
    summary["s"] = config.probe.s;
    summary["b"] = config.probe.b;
    summary["d"] = config.probe.d;
    summary["in_region"] =
        region_contains(config.model.sigma, {config.probe.kappa, config.probe.s});
    summary["growth_flag_n1"] = stats.growth_flag_n1;
    summary["growth_flag_n2"] = stats.growth_flag_n2;
    sink.write("probe_summary.json", summary.dump(2) + "\n");
    sink.finalize(config, false, false);
    return kExitOk;
}

int run_region(const ExperimentConfig& config, ArtifactSink& sink) {
    auto points = region_sample(config.model.sigma, config.region.kappa_min,
                                config.region.kappa_max, config.region.s_min,
                                config.region.s_max, config.region.resolution);
    CsvBuilder csv("kappa,s,in_region");
    for (const RegionSamplePoint& point : points)
        csv.row({format_double(point.kappa), format_double(point.s),
                 point.in_region ? "1" : "0"});
    sink.write("region.csv", csv.text);
    sink.finalize(config, false, false);
    return kExitOk;
}

int run_wave_check(const ExperimentConfig& config, const GridPtr& grid, ArtifactSink& sink) {
    FieldPair wave = exact_stationary_pair(grid, config.wave_check.wavenumber, config.model);
    Trajectory traj = run(wave, config.model, config.evolve);
    double error = traj.blownup
                       ? std::numeric_limits<double>::infinity()
                       : pair_distance(traj.final_state(), wave) / pair_norm(wave);
    json report;
    report["wavenumber"] = config.wave_check.wavenumber;
    report["dt"] = config.evolve.dt;
    report["t_end"] = traj.times.back();
    report["scheme"] = scheme_name(config.evolve.scheme);
    report["relative_l2_error"] = error;
    report["blownup"] = traj.blownup;
    sink.write("wave_check.json", report.dump(2) + "\n");
    sink.finalize(config, false, traj.blownup);
    return traj.blownup ? kExitBlowup : kExitOk;
}

int run_existence(const ExperimentConfig& config, const GridPtr& grid, ArtifactSink& sink) {
    FieldPair base = build_initial_state(config, grid);
    ExistenceScalingResult result = existence_time_scaling(
        config.existence.amplitudes, config.model, base, config.existence.options);

    CsvBuilder csv("amplitude,norm,T_max,contraction_factor");
    for (const ExistencePoint& point : result.points)
        csv.row({format_double(point.amplitude), format_double(point.data_norm),
                 format_double(point.t_max), format_double(point.contraction_factor)});
    sink.write("existence.csv", csv.text);

    json summary;
    summary["fitted_slope"] = result.fitted_slope;
    json ok = json::array();
    for (const ExistencePoint& point : result.points) ok.push_back(point.ok);
    summary["point_ok"] = ok;
    sink.write("existence_summary.json", summary.dump(2) + "\n");
    sink.finalize(config, false, false);
    return kExitOk;
}

}  // namespace

FieldPair build_initial_state(const ExperimentConfig& config, const GridPtr& grid) {
    if (const auto* gaussian = std::get_if<GaussianIC>(&config.initial_condition)) {
        double center = gaussian->center.value_or(grid->box_length / 2.0);
        return gaussian_pair(grid, gaussian->amplitude, gaussian->width, center,
                             gaussian->phase_velocity);
    }
    if (const auto* wave = std::get_if<PlaneWaveIC>(&config.initial_condition))
        return plane_wave_pair(grid, wave->amplitude, wave->wavenumber);
    if (const auto* exact = std::get_if<ExactStationaryIC>(&config.initial_condition))
        return exact_stationary_pair(grid, exact->wavenumber, config.model);
    if (const auto* rough = std::get_if<PowerLawIC>(&config.initial_condition))
        return power_law_pair(grid, rough->decay, rough->amplitude, config.seed,
                              rough->max_frequency);
    const auto& checkpoint = std::get<CheckpointIC>(config.initial_condition);
    LoadedCheckpoint loaded = read_checkpoint(checkpoint.path);
    if (!loaded.state.u.grid->same_lattice(*grid))
        throw std::runtime_error("checkpoint grid does not match the configured grid");
    return std::move(loaded.state);
}

int run_experiment(const ExperimentConfig& config) {
    ArtifactSink sink{std::filesystem::path(config.output_dir)};
    try {
        GridPtr grid = make_grid(config.grid_L, config.grid_n);
        switch (config.experiment) {
            case ExperimentKind::simulate: return run_simulate(config, grid, sink);
            case ExperimentKind::picard: return run_picard(config, grid, sink);
            case ExperimentKind::imethod: return run_imethod(config, grid, sink);
            case ExperimentKind::probe_bilinear: return run_probe(config, sink);
            case ExperimentKind::region: return run_region(config, sink);
            case ExperimentKind::wave_check: return run_wave_check(config, grid, sink);
            case ExperimentKind::existence_scaling: return run_existence(config, grid, sink);
        }
        return kExitRuntimeError;
    } catch (const std::exception&) {
        // leave what was written, flag the run as partial
        sink.finalize(config, true, false);
        throw;
    }
}

}  // namespace cqs
