#include "cqs/config.hpp"

#include "json.hpp"

#include <cmath>
#include <set>

namespace cqs {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw ConfigError(path + ": " + message);
}

void expect_object(const json& node, const std::string& path) {
    if (!node.is_object()) fail(path, "expected an object");
}

void reject_unknown_keys(const json& node, const std::string& path,
                         const std::set<std::string>& allowed) {
    for (const auto& item : node.items())
        if (!allowed.contains(item.key()))
            fail(path.empty() ? item.key() : path + "." + item.key(), "unknown key");
}

double get_number(const json& node, const std::string& path, const char* key,
                  double fallback) {
    if (!node.contains(key)) return fallback;
    const json& value = node.at(key);
    if (!value.is_number()) fail(path + "." + key, "expected a number");
    return value.get<double>();
}

int get_int(const json& node, const std::string& path, const char* key, int fallback) {
    if (!node.contains(key)) return fallback;
    const json& value = node.at(key);
    if (!value.is_number_integer()) fail(path + "." + key, "expected an integer");
    return value.get<int>();
}

std::string get_string(const json& node, const std::string& path, const char* key,
                       const std::string& fallback) {
    if (!node.contains(key)) return fallback;
    const json& value = node.at(key);
    if (!value.is_string()) fail(path + "." + key, "expected a string");
    return value.get<std::string>();
}

std::vector<double> get_number_list(const json& node, const std::string& path, const char* key,
                                    const std::vector<double>& fallback) {
    if (!node.contains(key)) return fallback;
    const json& value = node.at(key);
    if (!value.is_array()) fail(path + "." + key, "expected an array of numbers");
    std::vector<double> out;
    for (const json& item : value) {
        if (!item.is_number()) fail(path + "." + key, "expected an array of numbers");
        out.push_back(item.get<double>());
    }
    return out;
}

std::vector<int> get_int_list(const json& node, const std::string& path, const char* key,
                              const std::vector<int>& fallback) {
    if (!node.contains(key)) return fallback;
    const json& value = node.at(key);
    if (!value.is_array()) fail(path + "." + key, "expected an array of integers");
    std::vector<int> out;
    for (const json& item : value) {
        if (!item.is_number_integer()) fail(path + "." + key, "expected an array of integers");
        out.push_back(item.get<int>());
    }
    return out;
}

ModelParams parse_model(const json& node) {
    ModelParams params;
    params.sigma = get_number(node, "model", "sigma", 1.0);
    if (!(params.sigma > 0.0)) fail("model.sigma", "must be positive");
    params.p = get_int(node, "model", "p", 1);
    params.q = get_int(node, "model", "q", 1);
    if (params.p != 1 && params.p != -1) fail("model.p", "must be +1 or -1");
    if (params.q != 1 && params.q != -1) fail("model.q", "must be +1 or -1");
    params.theta = get_number(node, "model", "theta", 0.0);
    params.alpha = get_number(node, "model", "alpha", 0.0);
    params.n1_coefficient = get_number(node, "model", "n1_coefficient", 1.0);
    params.n2_coefficient =
        get_number(node, "model", "n2_coefficient", 0.5 / params.sigma);  // a/2
    reject_unknown_keys(node, "model",
                        {"p", "q", "sigma", "theta", "alpha", "n1_coefficient",
                         "n2_coefficient"});
    return params;
}

EvolveConfig parse_evolve(const json& node) {
    EvolveConfig config;
    config.dt = get_number(node, "evolve", "dt", 1e-3);
    if (!(config.dt > 0.0)) fail("evolve.dt", "must be positive");
    config.t_end = get_number(node, "evolve", "t_end", 1.0);
    if (!(config.t_end > config.dt)) fail("evolve.t_end", "must exceed dt");
    std::string scheme = get_string(node, "evolve", "scheme", "strang");
    if (scheme == "strang")
        config.scheme = Scheme::strang;
    else if (scheme == "ifrk4")
        config.scheme = Scheme::ifrk4;
    else
        fail("evolve.scheme", "expected \"strang\" or \"ifrk4\"");
    config.record_every = get_int(node, "evolve", "record_every", 10);
    if (config.record_every < 1) fail("evolve.record_every", "must be >= 1");
    config.blowup_threshold = get_number(node, "evolve", "blowup_threshold", 1e6);
    if (!(config.blowup_threshold > 0.0)) fail("evolve.blowup_threshold", "must be positive");
    config.sobolev_s = get_number(node, "evolve", "sobolev_s", 1.0);
    reject_unknown_keys(node, "evolve",
                        {"dt", "t_end", "scheme", "record_every", "blowup_threshold",
                         "sobolev_s"});
    return config;
}

InitialCondition parse_initial_condition(const json& node) {
    std::string type = get_string(node, "initial_condition", "type", "gaussian");
    const std::string path = "initial_condition";
    if (type == "gaussian") {
        reject_unknown_keys(node, path,
                            {"type", "amplitude", "width", "center", "phase_velocity"});
        GaussianIC ic;
        ic.amplitude = get_number(node, path, "amplitude", 1.0);
        ic.width = get_number(node, path, "width", 1.0);
        if (!(ic.width > 0.0)) fail(path + ".width", "must be positive");
        if (node.contains("center")) ic.center = get_number(node, path, "center", 0.0);
        ic.phase_velocity = get_number(node, path, "phase_velocity", 0.0);
        return ic;
    }
    if (type == "plane_wave") {
        reject_unknown_keys(node, path, {"type", "amplitude", "wavenumber"});
        PlaneWaveIC ic;
        ic.amplitude = get_number(node, path, "amplitude", 1.0);
        ic.wavenumber = get_number(node, path, "wavenumber", 1.0);
        return ic;
    }
    if (type == "exact_stationary") {
        reject_unknown_keys(node, path, {"type", "wavenumber"});
        ExactStationaryIC ic;
        ic.wavenumber = get_number(node, path, "wavenumber", 1.0);
        return ic;
    }
    if (type == "power_law") {
        reject_unknown_keys(node, path, {"type", "decay", "amplitude", "max_frequency"});
        PowerLawIC ic;
        ic.decay = get_number(node, path, "decay", 1.0);
        ic.amplitude = get_number(node, path, "amplitude", 0.3);
        ic.max_frequency = get_number(node, path, "max_frequency", 0.0);
        return ic;
    }
    if (type == "from_checkpoint") {
        reject_unknown_keys(node, path, {"type", "path"});
        CheckpointIC ic;
        ic.path = get_string(node, path, "path", "");
        if (ic.path.empty()) fail(path + ".path", "required for from_checkpoint");
        return ic;
    }
    fail(path + ".type", "unknown initial condition \"" + type + "\"");
}

}  // namespace

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::simulate: return "simulate";
        case ExperimentKind::picard: return "picard";
        case ExperimentKind::imethod: return "imethod";
        case ExperimentKind::probe_bilinear: return "probe_bilinear";
        case ExperimentKind::region: return "region";
        case ExperimentKind::wave_check: return "wave_check";
        case ExperimentKind::existence_scaling: return "existence_scaling";
    }
    throw ConfigError("experiment: invalid value");
}

ExperimentKind experiment_from_string(const std::string& name) {
    for (ExperimentKind kind :
         {ExperimentKind::simulate, ExperimentKind::picard, ExperimentKind::imethod,
          ExperimentKind::probe_bilinear, ExperimentKind::region, ExperimentKind::wave_check,
          ExperimentKind::existence_scaling})
        if (to_string(kind) == name) return kind;
    throw ConfigError("experiment: unknown experiment \"" + name + "\"");
}

ExperimentConfig parse_config(const std::string& json_text,
                              std::optional<ExperimentKind> cli_experiment) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    expect_object(root, "config");
    reject_unknown_keys(root, "",
                        {"experiment", "model", "grid", "evolve", "initial_condition", "seed",
                         "output_dir", "picard", "imethod", "probe", "region", "wave_check",
                         "existence"});

    ExperimentConfig config;
    if (root.contains("experiment")) {
        ExperimentKind from_file =
            experiment_from_string(get_string(root, "config", "experiment", ""));
        if (cli_experiment && *cli_experiment != from_file)
            fail("experiment", "config says \"" + to_string(from_file) +
                                   "\" but the command line selected \"" +
                                   to_string(*cli_experiment) + "\"");
        config.experiment = from_file;
    } else if (cli_experiment) {
        config.experiment = *cli_experiment;
    } else {
        fail("experiment", "missing (no subcommand and no config key)");
    }

    if (root.contains("model")) {
        expect_object(root.at("model"), "model");
        config.model = parse_model(root.at("model"));
    }
    if (root.contains("grid")) {
        const json& grid = root.at("grid");
        expect_object(grid, "grid");
        reject_unknown_keys(grid, "grid", {"L", "n"});
        config.grid_L = get_number(grid, "grid", "L", config.grid_L);
        if (!(config.grid_L > 0.0)) fail("grid.L", "must be positive");
        config.grid_n = get_int(grid, "grid", "n", config.grid_n);
        if (config.grid_n < 4 || config.grid_n % 2 != 0)
            fail("grid.n", "must be even and >= 4");
    }
    if (root.contains("evolve")) {
        expect_object(root.at("evolve"), "evolve");
        config.evolve = parse_evolve(root.at("evolve"));
    } else {
        config.evolve = parse_evolve(json::object());
    }
    if (root.contains("initial_condition")) {
        expect_object(root.at("initial_condition"), "initial_condition");
        config.initial_condition = parse_initial_condition(root.at("initial_condition"));
    }
    if (root.contains("seed")) {
        const json& seed = root.at("seed");
        if (!seed.is_number_integer() || seed.get<std::int64_t>() < 0)
            fail("seed", "expected a nonnegative integer");
        config.seed = seed.get<std::uint64_t>();
    }
    config.output_dir = get_string(root, "config", "output_dir", config.output_dir);

    if (root.contains("picard")) {
        const json& node = root.at("picard");
        expect_object(node, "picard");
        reject_unknown_keys(node, "picard", {"T", "tolerance", "max_iter", "mesh_intervals"});
        config.picard.T = get_number(node, "picard", "T", config.picard.T);
        if (!(config.picard.T > 0.0)) fail("picard.T", "must be positive");
        config.picard.tolerance = get_number(node, "picard", "tolerance", config.picard.tolerance);
        if (!(config.picard.tolerance > 0.0)) fail("picard.tolerance", "must be positive");
        config.picard.max_iter = get_int(node, "picard", "max_iter", config.picard.max_iter);
        if (config.picard.max_iter < 1) fail("picard.max_iter", "must be >= 1");
        config.picard.mesh_intervals =
            get_int(node, "picard", "mesh_intervals", config.picard.mesh_intervals);
        if (config.picard.mesh_intervals < 8) fail("picard.mesh_intervals", "must be >= 8");
    }
    if (root.contains("imethod")) {
        const json& node = root.at("imethod");
        expect_object(node, "imethod");
        reject_unknown_keys(node, "imethod", {"s", "N_values", "dt"});
        config.imethod.s = get_number(node, "imethod", "s", config.imethod.s);
        if (config.imethod.s > 0.0) fail("imethod.s", "must be <= 0");
        config.imethod.N_values =
            get_number_list(node, "imethod", "N_values", config.imethod.N_values);
        for (double N : config.imethod.N_values)
            if (!(N > 1.0)) fail("imethod.N_values", "every N must exceed 1");
        config.imethod.dt = get_number(node, "imethod", "dt", config.imethod.dt);
        if (!(config.imethod.dt > 0.0)) fail("imethod.dt", "must be positive");
    }
    if (root.contains("probe")) {
        const json& node = root.at("probe");
        expect_object(node, "probe");
        reject_unknown_keys(node, "probe",
                            {"kappa", "s", "b", "d", "ensemble_size", "resolutions",
                             "time_length"});
        config.probe.kappa = get_number(node, "probe", "kappa", config.probe.kappa);
        config.probe.s = get_number(node, "probe", "s", config.probe.s);
        config.probe.b = get_number(node, "probe", "b", config.probe.b);
        if (!(config.probe.b > 0.5 && config.probe.b < 0.75))
            fail("probe.b", "must lie in (1/2, 3/4)");
        config.probe.d = get_number(node, "probe", "d", config.probe.d);
        if (!(config.probe.d > 0.25 && config.probe.d < 0.5))
            fail("probe.d", "must lie in (1/4, 1/2)");
        config.probe.ensemble_size =
            get_int(node, "probe", "ensemble_size", config.probe.ensemble_size);
        if (config.probe.ensemble_size < 16) fail("probe.ensemble_size", "must be >= 16");
        config.probe.resolutions =
            get_int_list(node, "probe", "resolutions", config.probe.resolutions);
        if (config.probe.resolutions.empty()) fail("probe.resolutions", "must not be empty");
        for (int res : config.probe.resolutions)
            if (res < 4 || res % 2 != 0) fail("probe.resolutions", "entries must be even, >= 4");
        config.probe.time_length =
            get_number(node, "probe", "time_length", config.probe.time_length);
        if (!(config.probe.time_length > 0.0)) fail("probe.time_length", "must be positive");
    }
    if (root.contains("region")) {
        const json& node = root.at("region");
        expect_object(node, "region");
        reject_unknown_keys(node, "region",
                            {"kappa_min", "kappa_max", "s_min", "s_max", "resolution"});
        config.region.kappa_min = get_number(node, "region", "kappa_min", config.region.kappa_min);
        config.region.kappa_max = get_number(node, "region", "kappa_max", config.region.kappa_max);
        config.region.s_min = get_number(node, "region", "s_min", config.region.s_min);
        config.region.s_max = get_number(node, "region", "s_max", config.region.s_max);
        if (config.region.kappa_max < config.region.kappa_min)
            fail("region.kappa_max", "range is empty");
        if (config.region.s_max < config.region.s_min) fail("region.s_max", "range is empty");
        config.region.resolution = get_int(node, "region", "resolution", config.region.resolution);
        if (config.region.resolution < 2) fail("region.resolution", "must be >= 2");
    }
    if (root.contains("wave_check")) {
        const json& node = root.at("wave_check");
        expect_object(node, "wave_check");
        reject_unknown_keys(node, "wave_check", {"wavenumber"});
        config.wave_check.wavenumber =
            get_number(node, "wave_check", "wavenumber", config.wave_check.wavenumber);
    }
    if (root.contains("existence")) {
        const json& node = root.at("existence");
        expect_object(node, "existence");
        reject_unknown_keys(node, "existence",
                            {"amplitudes", "tolerance", "max_iter", "mesh_intervals", "t_start",
                             "t_cap", "t_floor", "rel_accuracy"});
        config.existence.amplitudes =
            get_number_list(node, "existence", "amplitudes", config.existence.amplitudes);
        if (config.existence.amplitudes.size() < 4)
            fail("existence.amplitudes", "need at least 4 amplitudes");
        for (double amplitude : config.existence.amplitudes)
            if (!(amplitude > 0.0)) fail("existence.amplitudes", "must be positive");
        auto& options = config.existence.options;
        options.tolerance = get_number(node, "existence", "tolerance", options.tolerance);
        options.max_iter = get_int(node, "existence", "max_iter", options.max_iter);
        options.mesh_intervals =
            get_int(node, "existence", "mesh_intervals", options.mesh_intervals);
        if (options.mesh_intervals < 8) fail("existence.mesh_intervals", "must be >= 8");
        options.t_start = get_number(node, "existence", "t_start", options.t_start);
        options.t_cap = get_number(node, "existence", "t_cap", options.t_cap);
        options.t_floor = get_number(node, "existence", "t_floor", options.t_floor);
        options.rel_accuracy = get_number(node, "existence", "rel_accuracy", options.rel_accuracy);
    }

    validate(config.model);
    validate(config.evolve);
    return config;
}

std::string serialize_config(const ExperimentConfig& config) {
    json root;
    root["experiment"] = to_string(config.experiment);
    root["model"] = {{"p", config.model.p},
                     {"q", config.model.q},
                     {"sigma", config.model.sigma},
                     {"theta", config.model.theta},
                     {"alpha", config.model.alpha},
                     {"n1_coefficient", config.model.n1_coefficient},
                     {"n2_coefficient", config.model.n2_coefficient}};
    root["grid"] = {{"L", config.grid_L}, {"n", config.grid_n}};
    root["evolve"] = {{"dt", config.evolve.dt},
                      {"t_end", config.evolve.t_end},
                      {"scheme", config.evolve.scheme == Scheme::strang ? "strang" : "ifrk4"},
                      {"record_every", config.evolve.record_every},
                      {"blowup_threshold", config.evolve.blowup_threshold},
                      {"sobolev_s", config.evolve.sobolev_s}};

    json ic;
    if (const auto* gaussian = std::get_if<GaussianIC>(&config.initial_condition)) {
        ic["type"] = "gaussian";
        ic["amplitude"] = gaussian->amplitude;
        ic["width"] = gaussian->width;
        if (gaussian->center) ic["center"] = *gaussian->center;
        ic["phase_velocity"] = gaussian->phase_velocity;
    } else if (const auto* wave = std::get_if<PlaneWaveIC>(&config.initial_condition)) {
        ic["type"] = "plane_wave";
        ic["amplitude"] = wave->amplitude;
        ic["wavenumber"] = wave->wavenumber;
    } else if (const auto* exact = std::get_if<ExactStationaryIC>(&config.initial_condition)) {
        ic["type"] = "exact_stationary";
        ic["wavenumber"] = exact->wavenumber;
    } else if (const auto* rough = std::get_if<PowerLawIC>(&config.initial_condition)) {
        ic["type"] = "power_law";
        ic["decay"] = rough->decay;
        ic["amplitude"] = rough->amplitude;
        ic["max_frequency"] = rough->max_frequency;
    } else if (const auto* checkpoint = std::get_if<CheckpointIC>(&config.initial_condition)) {
        ic["type"] = "from_checkpoint";
        ic["path"] = checkpoint->path;
    }
    root["initial_condition"] = ic;
    root["seed"] = config.seed;
    root["output_dir"] = config.output_dir;

    root["picard"] = {{"T", config.picard.T},
                      {"tolerance", config.picard.tolerance},
                      {"max_iter", config.picard.max_iter},
                      {"mesh_intervals", config.picard.mesh_intervals}};
    root["imethod"] = {{"s", config.imethod.s},
                       {"N_values", config.imethod.N_values},
                       {"dt", config.imethod.dt}};
    root["probe"] = {{"kappa", config.probe.kappa},
                     {"s", config.probe.s},
                     {"b", config.probe.b},
                     {"d", config.probe.d},
                     {"ensemble_size", config.probe.ensemble_size},
                     {"resolutions", config.probe.resolutions},
                     {"time_length", config.probe.time_length}};
    root["region"] = {{"kappa_min", config.region.kappa_min},
                      {"kappa_max", config.region.kappa_max},
                      {"s_min", config.region.s_min},
                      {"s_max", config.region.s_max},
                      {"resolution", config.region.resolution}};
    root["wave_check"] = {{"wavenumber", config.wave_check.wavenumber}};
    root["existence"] = {{"amplitudes", config.existence.amplitudes},
                         {"tolerance", config.existence.options.tolerance},
                         {"max_iter", config.existence.options.max_iter},
                         {"mesh_intervals", config.existence.options.mesh_intervals},
                         {"t_start", config.existence.options.t_start},
                         {"t_cap", config.existence.options.t_cap},
                         {"t_floor", config.existence.options.t_floor},
                         {"rel_accuracy", config.existence.options.rel_accuracy}};
    return root.dump(2) + "\n";
}

}  // namespace cqs
