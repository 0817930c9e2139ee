#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "boltz/harness.hpp"
#include "boltz/io.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Particle simulator and verification harness for the non-cutoff Boltzmann equation"};

    std::string config_path;
    std::uint64_t seed = 0;
    int threads = 0;
    bool deterministic = false;
    std::string output_dir;
    bool print_schema = false;

    app.add_option("--config", config_path, "experiment config (key = value)");
    auto* seed_opt = app.add_option("--seed", seed, "override the master seed");
    auto* threads_opt = app.add_option("--threads", threads, "OpenMP threads")->check(CLI::NonNegativeNumber);
    app.add_flag("--deterministic", deterministic, "single thread, fixed reduction order");
    auto* out_opt = app.add_option("--output-dir", output_dir, "override output_dir");
    app.add_flag("--schema", print_schema, "print accepted config keys and exit");

    CLI11_PARSE(app, argc, argv);

    if (print_schema)
    {
        for (auto const& [key, doc] : boltz::config_schema())
            std::cout << key << "\t" << doc << "\n";
        return EXIT_SUCCESS;
    }
    if (config_path.empty())
    {
        std::cerr << "boltz: --config is required\n";
        return 2;
    }

    boltz::RunOverrides overrides;
    if (*seed_opt)
        overrides.seed = seed;
    if (*threads_opt)
        overrides.threads = threads;
    overrides.deterministic = deterministic;
    if (*out_opt)
        overrides.output_dir = output_dir;

    boltz::ExperimentConfig config;
    try
    {
        config = boltz::parse_experiment(boltz::KeyValueConfig::load(config_path), overrides);
    }
    catch (boltz::ConfigError const& e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    try
    {
        boltz::RunManifest const manifest = boltz::run(config);
        for (auto const& a : manifest.assertions)
            std::cout << (a.passed ? "ok   " : "FAIL ") << a.name << ": " << a.detail << "\n";
        std::cout << "manifest: " << (config.output_dir / "manifest.json").string() << "\n";
        return manifest.passed() ? EXIT_SUCCESS : EXIT_FAILURE;
    }
    catch (boltz::LoadError const& e)
    {
        std::cerr << "input error: " << e.what() << "\n";
    }
    catch (std::exception const& e)
    {
        std::cerr << "error: " << e.what() << "\n";
    }
    return EXIT_FAILURE;
}
