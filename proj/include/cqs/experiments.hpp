// Experiment orchestration: builds the initial state, dispatches on the
// experiment kind, and writes every artifact plus a manifest with content
// hashes into the output directory.  Artifacts are pure functions of
// (config, seed) at the byte level.

#pragma once

#include "cqs/config.hpp"

namespace cqs {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitRuntimeError = 2;
inline constexpr int kExitBlowup = 3;

FieldPair build_initial_state(const ExperimentConfig& config, const GridPtr& grid);

// returns one of the kExit* codes; writes artifacts under config.output_dir
int run_experiment(const ExperimentConfig& config);

}  // namespace cqs
