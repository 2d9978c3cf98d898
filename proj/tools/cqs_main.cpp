// Command-line front end.  One subcommand per experiment; a JSON config file
// supplies everything else.  Exit codes: 0 success, 1 invalid configuration,
// 2 runtime failure, 3 blow-up detected.

#include "cqs/experiments.hpp"
#include "cqs/io.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <exception>
#include <optional>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{"Pseudospectral toolkit for the coupled quadratic Schrodinger system"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output_dir;
    std::int64_t seed = -1;

    struct Entry {
        cqs::ExperimentKind kind;
        const char* name;
        const char* description;
    };
    const Entry entries[] = {
        {cqs::ExperimentKind::simulate, "simulate", "evolve the system and record diagnostics"},
        {cqs::ExperimentKind::picard, "picard", "iterate the integral-equation map to a fixed point"},
        {cqs::ExperimentKind::imethod, "imethod", "almost-conservation sweep over the frequency threshold N"},
        {cqs::ExperimentKind::probe_bilinear, "probe-bilinear", "random-ensemble probe of the bilinear space-time estimates"},
        {cqs::ExperimentKind::region, "region", "sample the admissible Sobolev index region"},
        {cqs::ExperimentKind::wave_check, "wave-check", "measure the error on the exact standing wave"},
        {cqs::ExperimentKind::existence_scaling, "existence-scaling", "fit the contraction time against the data norm"},
    };

    std::optional<cqs::ExperimentKind> selected;
    for (const Entry& entry : entries) {
        CLI::App* sub = app.add_subcommand(entry.name, entry.description);
        sub->add_option("--config", config_path, "JSON configuration file");
        sub->add_option("--seed", seed, "override the configured seed");
        sub->add_option("--out", output_dir, "override the output directory");
        sub->callback([&selected, kind = entry.kind] { selected = kind; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : cqs::kExitConfigError;
    }

    try {
        std::string text = "{}";
        if (!config_path.empty()) {
            try {
                text = cqs::read_file(config_path);
            } catch (const std::exception& e) {
                throw cqs::ConfigError(e.what());
            }
        }
        cqs::ExperimentConfig config = cqs::parse_config(text, selected);
        if (seed >= 0) config.seed = static_cast<std::uint64_t>(seed);
        if (!output_dir.empty()) config.output_dir = output_dir;
        return cqs::run_experiment(config);
    } catch (const cqs::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return cqs::kExitConfigError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return cqs::kExitRuntimeError;
    }
}
