#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"

#include "ergo/experiments.hpp"
#include "ergo/io.hpp"

int main(int argc, char** argv) {
    CLI::App app{"ergodiclab: push-forward dynamics laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    ergo::RunOptions opts;
    CLI::App* run = app.add_subcommand("run", "run an experiment config");
    run->add_option("config", config_path, "experiment config JSON")->required();
    run->add_option("--out", opts.out_dir, "output directory");
    run->add_option("--threads", opts.threads, "worker thread count");
    run->add_flag("--assume-ergodic", opts.assume_ergodic,
                  "accept cocycle bases that are not certified minimal");
    run->add_flag("--check", opts.check, "enforce the config's acceptance thresholds");

    std::string space = "torus";
    int dim = 2, K = 8, repeats = 5;
    double s = 1.0;
    std::size_t size = 100000;
    std::uint64_t seed = 1;
    bool stratified = false;
    CLI::App* cal = app.add_subcommand("calibrate", "measure the sampling noise floor");
    cal->add_option("--space", space, "torus | heisenberg");
    cal->add_option("--dim", dim, "dimension");
    cal->add_option("--size", size, "cloud size");
    cal->add_option("--K", K, "frequency cutoff");
    cal->add_option("--s", s, "decay exponent");
    cal->add_option("--seed", seed, "master seed");
    cal->add_option("--repeats", repeats, "number of fresh clouds (median)");
    cal->add_flag("--stratified", stratified, "use stratified grid clouds");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            std::string text;
            try {
                text = ergo::read_file(config_path);
            } catch (const std::exception& e) {
                throw ergo::ConfigError(config_path, e.what());
            }
            ergo::run_experiment(text, opts);
        } else {
            double nu = ergo::calibrate_noise_floor(
                space == "heisenberg" ? ergo::Space::heisenberg : ergo::Space::torus, dim, size,
                K, s, seed, repeats, stratified);
            std::printf("%.17g\n", nu);
        }
    } catch (const ergo::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::overflow_error& e) {
        std::fprintf(stderr, "numeric guard: %s\n", e.what());
        return 3;
    } catch (const ergo::AcceptanceCheckFailed& e) {
        std::fprintf(stderr, "acceptance check failed: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
