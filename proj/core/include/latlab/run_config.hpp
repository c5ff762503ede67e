#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "latlab/forcing.hpp"
#include "latlab/integrator.hpp"
#include "latlab/nonlinearity.hpp"

namespace latlab {

struct InitialCondition {
    enum class Kind { Zero, Random, Window };
    Kind kind = Kind::Zero;
    double norm = 1.0;        ///< for Random: the vector is scaled to this norm
    LatticeWindow window;     ///< for Window
};

struct ExperimentSpec {
    std::string kind; // simulate | pullback | apscan | contraction | sweep

    // simulate / contraction / sweep
    double t0 = 0.0;
    double t1 = 0.0;
    double sample_step = 0.0;
    InitialCondition initial;
    std::optional<std::pair<long, long>> csv_sites;

    // pullback
    double anchor_s = 0.0;
    double horizon = 0.0;

    // apscan
    std::string trajectory_csv;
    double epsilon = 0.0;
    double tau_max = 0.0;

    // contraction / sweep
    long pairs = 10;
    double ic_norm = 1.0;

    // sweep
    std::vector<double> lambda_values;
    std::vector<double> nu_values;
    double pullback_horizon = 10.0;
};

/// One experiment, fully determined: same config bytes + seed reproduce the
/// same outputs byte for byte. Unknown JSON keys are rejected at every level.
struct RunConfig {
    SemiflowParams params{};
    MonotoneScalarFunction nonlinearity = MonotoneScalarFunction::cubic();
    QuasiPeriodicForcing forcing = QuasiPeriodicForcing::none();
    IntegratorConfig integrator{};
    std::uint64_t seed = 0;
    ExperimentSpec experiment{};

    std::string canonical_json; ///< parsed config re-serialized (manifest embed)
    std::string hash;           ///< content hash of the raw config bytes
    std::filesystem::path base_dir; ///< for resolving relative paths in the config

    static RunConfig from_json_text(const std::string& bytes);
    static RunConfig from_file(const std::filesystem::path& path);
};

} // namespace latlab
