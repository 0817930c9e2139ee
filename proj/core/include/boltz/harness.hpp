#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "fourier.hpp"
#include "simulator.hpp"

namespace boltz
{
enum class Subcommand
{
    simulate,
    rates,
    psi,
    besov,
    support,
    entropy,
    exponents
};

char const* to_string(Subcommand s);

struct RatesParams
{
    double t{1};
    std::vector<double> eps{0.4, 0.2, 0.1, 0.05};
    std::size_t paths{2000};
    //! Angular cutoff 1/k for the tagged paths
    double k{50};
    //! Background snapshot spacing
    double snapshot_dt{0.05};
    std::optional<double> min_slope;
};

struct PsiParams
{
    double eps{0.1};
    double t{1};
    Vec3 v0{0.5, 0, 0};
    double xi_min{0.1};
    double xi_max{10};
    int n_radii{9};
    int n_dirs{6};
    std::size_t max_velocity_samples{256};
    PhiRule phi_rule{PhiRule::bessel};
};

struct BesovParams
{
    std::string input;
    std::vector<double> r{0.4, 0.5, 0.6};
    std::vector<double> h{0.1, 0.2, 0.3, 0.4};
    double alpha{0.1};
};

struct SupportParams
{
    int iterations{4};
    int samples_per_pair{8};
    int pairs{256};
    double radius{2};
    double cell{0.5};
    double min_coverage{0.5};
    double q_t0{0.5};
    double q_t1{1};
};

struct EntropyParams
{
    std::string input;
    int k_nn{4};
};

struct ExponentParams
{
    double nu_min{0.001};
    double nu_max{0.999};
    int n{1000};
    std::vector<double> gammas{-0.25};
};

//! Command-line overrides applied on top of the file
struct RunOverrides
{
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    bool deterministic{false};
    std::optional<std::filesystem::path> output_dir;
};

struct ExperimentConfig
{
    Subcommand subcommand{Subcommand::simulate};
    SimConfig sim;
    InitialLaw f0;
    std::filesystem::path output_dir{"out"};
    std::uint64_t seed{1};
    bool deterministic{false};
    bool write_snapshots{true};
    std::string config_hash;

    RatesParams rates;
    PsiParams psi;
    BesovParams besov;
    SupportParams support;
    EntropyParams entropy;
    ExponentParams exponents;
};

//! Schema-checked conversion; errors are ConfigError with line anchors
ExperimentConfig parse_experiment(KeyValueConfig const& file, RunOverrides const& overrides = {});

//! Every accepted key with a one-line description
std::vector<std::pair<std::string, std::string>> config_schema();

struct Assertion
{
    std::string name;
    bool passed{false};
    std::string detail;
};

struct RunManifest
{
    std::string subcommand;
    std::string config_hash;
    std::string code_version;
    std::uint64_t seed{0};
    int threads{1};
    bool deterministic{false};
    double wall_seconds{0};
    //! Subcommand result summary as a JSON document
    std::string summary_json;
    std::vector<Assertion> assertions;

    bool passed() const;
};

/*!
 * Execute one experiment. Writes snapshots/, sweeps/ and manifest.json
 * under config.output_dir; the manifest is written last and atomically.
 */
RunManifest run(ExperimentConfig const& config);

std::string manifest_json(RunManifest const& manifest);

}  // namespace boltz
