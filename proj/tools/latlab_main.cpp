// latlab: reproducible experiments on forced lattice dynamical systems.
//
// Subcommands: simulate | pullback | apscan | contraction | sweep, each driven
// by a JSON config and writing machine-readable outputs plus a manifest into
// --out. Exit codes: 0 success, 1 property-check failure, 2 usage/config
// error, 3 numerical failure.

#include <array>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "latlab/errors.hpp"
#include "latlab/experiments.hpp"
#include "latlab/serialize.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPropertyFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitNumericalError = 3;

int run(const std::string& kind, const std::string& config_path, const std::string& out_dir) {
    latlab::RunConfig config = latlab::RunConfig::from_file(config_path);
    if (config.experiment.kind != kind)
        throw latlab::ConfigError("config experiment.kind is '" + config.experiment.kind +
                                  "' but the subcommand is '" + kind + "'");
    unsigned threads = latlab::thread_count_from_env();
    latlab::ExperimentResult result = latlab::run_experiment(config, threads);

    std::filesystem::path out(out_dir);
    std::filesystem::create_directories(out);
    for (const auto& file : result.files) latlab::atomic_write_file(out / file.name, file.content);

    std::cout << result.summary << '\n';
    for (const auto& file : result.files) std::cout << "wrote " << (out / file.name).string() << '\n';
    return result.property_pass ? kExitOk : kExitPropertyFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"latlab: almost periodic solutions of forced lattice dynamical systems"};
    app.require_subcommand(1);

    struct SubArgs {
        std::string config;
        std::string out;
    };

    const char* kinds[] = {"simulate", "pullback", "apscan", "contraction", "sweep"};
    const char* descriptions[] = {
        "integrate a trajectory and write CSV + manifest",
        "pull-back estimate of the invariant section at an anchor time",
        "Bohr almost-period scan of a trajectory CSV",
        "pairwise contraction-rate measurement with slope check",
        "parameter sweep over (lambda, nu) with per-cell metrics",
    };

    std::array<SubArgs, 5> args;
    for (int k = 0; k < 5; ++k) {
        CLI::App* sub = app.add_subcommand(kinds[k], descriptions[k]);
        sub->add_option("--config", args[k].config, "JSON config path")->required();
        sub->add_option("--out", args[k].out, "output directory")->required();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfigError;
    }

    try {
        for (int k = 0; k < 5; ++k) {
            if (app.get_subcommand(kinds[k])->parsed()) return run(kinds[k], args[k].config, args[k].out);
        }
        std::cerr << "no subcommand\n";
        return kExitConfigError;
    } catch (const latlab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const latlab::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumericalError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumericalError;
    }
}
