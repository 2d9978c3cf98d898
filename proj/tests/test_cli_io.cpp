#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cqs/experiments.hpp"
#include "cqs/initial_conditions.hpp"
#include "cqs/io.hpp"
#include "cqs/random.hpp"

#include <cstdio>
#include <filesystem>
#include <numbers>

using namespace cqs;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("cqs_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

FieldPair random_state(const GridPtr& grid, std::uint64_t seed) {
    Rng rng(seed);
    FieldPair state = make_pair(grid);
    for (Complex& z : state.u.samples) z = Complex{rng.normal(), rng.normal()};
    for (Complex& z : state.v.samples) z = Complex{rng.normal(), rng.normal()};
    return state;
}

}  // namespace

TEST_CASE("double formatting round-trips exactly") {
    for (double value : {0.1, -1.0 / 3.0, 1e-300, 2.718281828459045, 12345.678901234567}) {
        CHECK(std::stod(format_double(value)) == value);
    }
    CHECK(format_double(1.0) == "1");
}

TEST_CASE("config: defaults and strictness") {
    ExperimentConfig config = parse_config("{}", ExperimentKind::simulate);
    CHECK(config.evolve.dt == 1e-3);
    CHECK(config.model.sigma == 1.0);
    CHECK(config.model.n2_coefficient == 0.5);  // a/2 at sigma = 1
    CHECK(config.seed == 0);

    // the a/2 default follows sigma
    ExperimentConfig at2 = parse_config(R"({"model":{"sigma":2.0}})", ExperimentKind::simulate);
    CHECK(at2.model.n2_coefficient == 0.25);

    // constraint violations carry the key path
    CHECK_THROWS_WITH_AS(parse_config(R"({"model":{"sigma":-1.0}})", ExperimentKind::simulate),
                         "model.sigma: must be positive", ConfigError);

    // unknown keys are rejected
    CHECK_THROWS_AS(parse_config(R"({"modle":{}})", ExperimentKind::simulate), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"model":{"sgima":1.0}})", ExperimentKind::simulate),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"evolve":{"dt":0.1,"cadence":2}})",
                                 ExperimentKind::simulate),
                    ConfigError);

    // experiment resolution: config key versus subcommand
    CHECK(parse_config(R"({"experiment":"region"})").experiment == ExperimentKind::region);
    CHECK_THROWS_AS(parse_config(R"({"experiment":"region"})", ExperimentKind::simulate),
                    ConfigError);
    CHECK_THROWS_AS(parse_config("{}"), ConfigError);
    CHECK_THROWS_AS(parse_config("not json", ExperimentKind::simulate), ConfigError);
}

TEST_CASE("config: serialize(parse(text)) reparses identically") {
    const std::string text = R"({
        "experiment": "picard",
        "model": {"p": 1, "q": -1, "sigma": 3.0, "theta": 0.25},
        "grid": {"L": 62.83185307179586, "n": 256},
        "evolve": {"dt": 0.0005, "t_end": 0.5, "scheme": "ifrk4"},
        "initial_condition": {"type": "gaussian", "amplitude": 0.1, "width": 2.0},
        "seed": 7,
        "picard": {"T": 0.15, "max_iter": 12}
    })";
    ExperimentConfig config = parse_config(text);
    std::string first = serialize_config(config);
    std::string second = serialize_config(parse_config(first));
    CHECK(first == second);

    // every initial-condition variant survives the round trip
    for (const char* ic :
         {R"({"type":"plane_wave","amplitude":0.5,"wavenumber":2.0})",
          R"({"type":"exact_stationary","wavenumber":1.0})",
          R"({"type":"power_law","decay":1.0,"amplitude":0.2,"max_frequency":40.0})",
          R"({"type":"from_checkpoint","path":"state.ckpt"})"}) {
        std::string doc = std::string(R"({"experiment":"simulate","initial_condition":)") + ic + "}";
        std::string a = serialize_config(parse_config(doc));
        std::string b = serialize_config(parse_config(a));
        CHECK(a == b);
    }
}

TEST_CASE("checkpoint round trip is bitwise exact") {
    GridPtr grid = make_grid(17.5, 64);
    FieldPair state = random_state(grid, 99);
    CheckpointMeta meta;
    meta.time = 0.375;
    meta.params = default_params(1, -1, 2.0, 0.1, -0.2);

    std::string bytes = encode_checkpoint(state, meta);
    LoadedCheckpoint loaded = decode_checkpoint(bytes);
    CHECK(loaded.meta.time == meta.time);
    CHECK(loaded.meta.params.sigma == meta.params.sigma);
    CHECK(loaded.state.u.grid->num_points == 64);
    CHECK(loaded.state.u.grid->box_length == 17.5);
    for (int k = 0; k < 64; ++k) {
        CHECK(loaded.state.u.samples[k] == state.u.samples[k]);
        CHECK(loaded.state.v.samples[k] == state.v.samples[k]);
    }

    // file round trip
    fs::path dir = fresh_dir("ckpt");
    write_checkpoint(dir / "state.ckpt", state, meta);
    LoadedCheckpoint from_disk = read_checkpoint(dir / "state.ckpt");
    for (int k = 0; k < 64; ++k) CHECK(from_disk.state.u.samples[k] == state.u.samples[k]);
}

TEST_CASE("checkpoint error paths") {
    GridPtr grid = make_grid(2.0 * pi, 16);
    FieldPair state = random_state(grid, 5);
    CheckpointMeta meta;
    meta.params = default_params(1, 1, 1.0);
    std::string bytes = encode_checkpoint(state, meta);

    CHECK_THROWS_WITH_AS(decode_checkpoint("garbage"), "not a checkpoint file",
                         std::runtime_error);
    std::string truncated = bytes.substr(0, bytes.size() - 8);
    CHECK_THROWS_AS(decode_checkpoint(truncated), std::runtime_error);
    std::string padded = bytes + "xx";
    CHECK_THROWS_AS(decode_checkpoint(padded), std::runtime_error);

    FieldPair bad = state;
    bad.u.samples[3] = Complex{std::nan(""), 0.0};
    CHECK_THROWS_AS(encode_checkpoint(bad, meta), std::runtime_error);
}

TEST_CASE("region experiment writes the membership table") {
    fs::path dir = fresh_dir("region");
    ExperimentConfig config = parse_config(
        R"({"model":{"sigma":2.0},"region":{"kappa_min":-1,"kappa_max":1,"s_min":-1,"s_max":1,"resolution":3}})",
        ExperimentKind::region);
    config.output_dir = dir.string();
    CHECK(run_experiment(config) == kExitOk);

    std::string csv = read_file(dir / "region.csv");
    CHECK(csv.find("kappa,s,in_region") == 0);
    int ones = 0;
    for (size_t pos = 0; (pos = csv.find(",1\n", pos)) != std::string::npos; ++pos) ++ones;
    CHECK(ones == 2);  // (0,0) and (1,1)

    std::string manifest = read_file(dir / "manifest.json");
    CHECK(manifest.find("\"verified\": true") != std::string::npos);
    CHECK(manifest.find("region.csv") != std::string::npos);
}

TEST_CASE("experiments are byte-deterministic in (config, seed)") {
    auto run_once = [](const std::string& label) {
        fs::path dir = fresh_dir(label);
        ExperimentConfig config = parse_config(
            R"({
                "model": {"sigma": 2.0, "n2_coefficient": 0.5},
                "grid": {"L": 62.83185307179586, "n": 64},
                "evolve": {"dt": 0.01, "t_end": 0.1, "scheme": "strang", "record_every": 2},
                "initial_condition": {"type": "gaussian", "amplitude": 0.5, "width": 1.0},
                "seed": 11
            })",
            ExperimentKind::simulate);
        config.output_dir = dir.string();
        REQUIRE(run_experiment(config) == kExitOk);
        return std::pair{read_file(dir / "trajectory.csv"), read_file(dir / "manifest.json")};
    };
    auto [csv_a, manifest_a] = run_once("det_a");
    auto [csv_b, manifest_b] = run_once("det_b");
    CHECK(csv_a == csv_b);
    CHECK(manifest_a == manifest_b);
}

TEST_CASE("wave-check experiment reports the standing-wave error") {
    fs::path dir = fresh_dir("wave");
    ExperimentConfig config = parse_config(
        R"({
            "model": {"sigma": 1.0, "n2_coefficient": 0.5},
            "grid": {"L": 6.283185307179586, "n": 64},
            "evolve": {"dt": 0.001, "t_end": 0.2, "scheme": "ifrk4", "record_every": 50},
            "wave_check": {"wavenumber": 1.0}
        })",
        ExperimentKind::wave_check);
    config.output_dir = dir.string();
    CHECK(run_experiment(config) == kExitOk);
    std::string report = read_file(dir / "wave_check.json");
    CHECK(report.find("relative_l2_error") != std::string::npos);

    auto pos = report.find("\"relative_l2_error\": ");
    double error = std::stod(report.substr(pos + 21));
    CHECK(error < 1e-6);
}

TEST_CASE("simulate can restart from its own checkpoint") {
    fs::path dir = fresh_dir("restart");
    ExperimentConfig config = parse_config(
        R"({
            "model": {"sigma": 1.0},
            "grid": {"L": 20.0, "n": 64},
            "evolve": {"dt": 0.01, "t_end": 0.1},
            "initial_condition": {"type": "gaussian", "amplitude": 0.3, "width": 1.5}
        })",
        ExperimentKind::simulate);
    config.output_dir = dir.string();
    REQUIRE(run_experiment(config) == kExitOk);

    fs::path second = fresh_dir("restart2");
    ExperimentConfig resume = config;
    resume.initial_condition = CheckpointIC{(dir / "final_state.ckpt").string()};
    resume.output_dir = second.string();
    CHECK(run_experiment(resume) == kExitOk);

    // grid mismatch is an error
    ExperimentConfig bad = resume;
    bad.grid_n = 128;
    bad.output_dir = fresh_dir("restart3").string();
    CHECK_THROWS_AS(run_experiment(bad), std::runtime_error);
}

TEST_CASE("blow-up exits with the dedicated code and flags the trajectory") {
    fs::path dir = fresh_dir("blowup");
    ExperimentConfig config = parse_config(
        R"({
            "grid": {"L": 20.0, "n": 64},
            "evolve": {"dt": 0.01, "t_end": 1.0, "blowup_threshold": 0.5},
            "initial_condition": {"type": "gaussian", "amplitude": 1.0, "width": 1.0}
        })",
        ExperimentKind::simulate);
    config.output_dir = dir.string();
    CHECK(run_experiment(config) == kExitBlowup);
    std::string csv = read_file(dir / "trajectory.csv");
    CHECK(csv.back() == '\n');
    CHECK(csv.rfind(",1\n") == csv.size() - 3);  // last row carries the flag
    std::string manifest = read_file(dir / "manifest.json");
    CHECK(manifest.find("\"blowup\": true") != std::string::npos);
}
