#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "ergo/cloud.hpp"

namespace ergo {

// Bad or missing configuration; `field` is the JSON path of the offender.
struct ConfigError : std::runtime_error {
    std::string field;
    ConfigError(std::string field_, const std::string& what)
        : std::runtime_error(field_ + ": " + what), field(std::move(field_)) {}
};

struct AcceptanceCheckFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunOptions {
    std::string out_dir = ".";
    int threads = 0; // 0 = library default
    bool assume_ergodic = false;
    bool check = false; // enforce the config's "check" thresholds
};

// Runs one experiment config; emits the module CSV/JSON plus
// run_manifest.json into out_dir.  Throws ConfigError, overflow_error
// (numeric guard) or AcceptanceCheckFailed; the CLI maps these to exit
// codes 2 / 3 / 4.
void run_experiment(const std::string& config_text, const RunOptions& opts);

// Median haar_distance over `repeats` fresh Haar clouds.
double calibrate_noise_floor(Space space, int dim, std::size_t n, int K, double s,
                             std::uint64_t seed, int repeats, bool stratified = false);

} // namespace ergo
