// Experiment configuration: a strict JSON document (unknown keys are errors,
// constraint violations name the offending key path) with defaults applied on
// parse.  serialize_config writes the fully resolved document back out, so
// serialize(parse(text)) reparses to an identical configuration.

#pragma once

#include "cqs/bourgain.hpp"
#include "cqs/duhamel.hpp"
#include "cqs/evolve.hpp"
#include "cqs/model.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace cqs {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ExperimentKind {
    simulate,
    picard,
    imethod,
    probe_bilinear,
    region,
    wave_check,
    existence_scaling,
};

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_from_string(const std::string& name);

struct GaussianIC {
    double amplitude = 1.0;
    double width = 1.0;
    std::optional<double> center;  // defaults to mid-box
    double phase_velocity = 0.0;
};

struct PlaneWaveIC {
    double amplitude = 1.0;
    double wavenumber = 1.0;
};

struct ExactStationaryIC {
    double wavenumber = 1.0;
};

struct PowerLawIC {
    double decay = 1.0;  // spectral decay exponent of |u_hat|
    double amplitude = 0.3;
    double max_frequency = 0.0;  // 0: fill the whole dealias band
};

struct CheckpointIC {
    std::string path;
};

using InitialCondition =
    std::variant<GaussianIC, PlaneWaveIC, ExactStationaryIC, PowerLawIC, CheckpointIC>;

struct PicardSettings {
    double T = 0.2;
    double tolerance = 1e-10;
    int max_iter = 25;
    int mesh_intervals = 64;
};

struct ImethodSettings {
    double s = -0.5;
    std::vector<double> N_values{16.0, 32.0, 64.0, 128.0};
    double dt = 2.5e-4;
};

struct ProbeSettings {
    double kappa = 0.0;
    double s = 0.0;
    double b = 0.6;
    double d = 0.3;
    int ensemble_size = 16;
    std::vector<int> resolutions{16, 32, 64};
    double time_length = 2.0 * 3.14159265358979323846;
};

struct RegionSettings {
    double kappa_min = -2.0;
    double kappa_max = 2.0;
    double s_min = -2.0;
    double s_max = 2.0;
    int resolution = 81;
};

struct WaveCheckSettings {
    double wavenumber = 1.0;
};

struct ExistenceSettings {
    std::vector<double> amplitudes{0.5, 1.0, 2.0, 4.0, 8.0};
    ExistenceScalingOptions options;
};

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::simulate;
    ModelParams model;  // n2_coefficient defaults to a/2 when the key is absent
    double grid_L = 40.0 * 3.14159265358979323846;
    int grid_n = 512;
    EvolveConfig evolve;  // dt defaults to 1e-3
    InitialCondition initial_condition = GaussianIC{};
    std::uint64_t seed = 0;
    std::string output_dir = "out";

    PicardSettings picard;
    ImethodSettings imethod;
    ProbeSettings probe;
    RegionSettings region;
    WaveCheckSettings wave_check;
    ExistenceSettings existence;
};

// cli_experiment: the subcommand, when invoked through the CLI; a config
// "experiment" key must agree with it if both are present
ExperimentConfig parse_config(const std::string& json_text,
                              std::optional<ExperimentKind> cli_experiment = {});

std::string serialize_config(const ExperimentConfig& config);

}  // namespace cqs
