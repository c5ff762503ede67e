#pragma once

#include <string>
#include <vector>

#include "latlab/rng.hpp"
#include "latlab/run_config.hpp"

namespace latlab {

struct OutputFile {
    std::string name;
    std::string content;
};

struct ExperimentResult {
    std::vector<OutputFile> files; ///< always includes manifest.json
    bool property_pass = true;     ///< false maps to exit code 1
    std::string summary;           ///< human-readable report
};

/// Run the experiment described by the config. Pure except for reading the
/// trajectory CSV an apscan config points at; callers persist `files`.
/// ConfigError and NumericalError propagate (exit codes 2 and 3).
ExperimentResult run_experiment(const RunConfig& config, unsigned threads);

/// LATLAB_THREADS, else hardware concurrency clamped to [1, 8].
unsigned thread_count_from_env();

/// Draw an initial state on the config's integration window.
LatticeWindow make_initial(const InitialCondition& ic, long window_halfwidth, CounterRng& rng);

} // namespace latlab
