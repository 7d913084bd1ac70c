#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fica/gf.hpp"
#include "fica/pmf.hpp"

namespace fica {

inline constexpr const char* kVersion = "1.0.0";

struct ResultRow {
    std::string experiment;
    std::string point;   // e.g. "d=8" or "q=3,d=6"
    std::string metric;
    double value = 0.0;
    double runtime_s = 0.0;
    std::uint64_t seed = 0;
};

/// Named experiment plus raw key=value parameters. Lists are comma
/// separated ("4,6,8") or inclusive ranges ("4:16:2").
struct ExperimentSpec {
    std::string name;
    std::map<std::string, std::string> params;
    std::uint64_t seed = 1;

    double real(const std::string& key, double fallback) const;
    std::size_t integer(const std::string& key, std::size_t fallback) const;
    std::vector<std::size_t> integers(const std::string& key, std::vector<std::size_t> fallback) const;
    // Throws ConfigError on an unknown experiment or unknown parameter key.
    void validate() const;
};

const std::vector<std::string>& experiment_names();
// Parameter keys accepted by an experiment.
const std::vector<std::string>& experiment_keys(const std::string& name);

// Independent sources S (n x d) mixed as X = B S with a random invertible B
// that is neither a permutation nor the identity.
struct MixedSources {
    SampleSet sources;
    FieldMatrix mixing;
    SampleSet mixed;
};
MixedSources mixed_bernoulli_sources(std::span<const double> params, std::size_t n, std::uint64_t seed);

// p_i = i / d for i = 1..d
std::vector<double> ramp_parameters(std::size_t d);

struct RecoverConfig {
    std::vector<std::size_t> dims{2, 4, 6, 8, 10, 12};
    std::size_t n = 10000;
    double p = 0.4;
    std::size_t trials = 3;
    std::uint64_t seed = 1;
};
std::vector<ResultRow> run_recover_sources(const RecoverConfig& cfg);

struct SkewedConfig {
    std::vector<std::size_t> dims{4, 6, 8, 10, 12, 14, 16};
    std::size_t n = 10000;
    double s = 1.01;    // Zipf exponent
    double a = 3.0;     // Beta-Binomial shapes
    double b = 3.0;
    std::vector<std::size_t> blocks{2, 3};
    std::size_t max_iterations = 50;
    std::uint64_t seed = 1;
};
std::vector<ResultRow> run_zipf(const SkewedConfig& cfg);
std::vector<ResultRow> run_beta_binomial(const SkewedConfig& cfg);

struct GfqConfig {
    std::size_t d = 6;
    std::vector<std::size_t> qs{2, 3, 5, 7};
    std::size_t n = 100000;
    double s = 1.01;
    std::vector<std::size_t> blocks{2, 3};
    std::size_t max_iterations = 50;
    std::uint64_t seed = 1;
};
std::vector<ResultRow> run_gfq(const GfqConfig& cfg);

struct NonlinearConfig {
    std::vector<std::size_t> dims{4, 6, 8, 10, 12, 14, 16};
    std::size_t n = 100000;
    double s = 1.01;
    std::uint64_t seed = 1;
};
std::vector<ResultRow> run_linear_vs_nonlinear(const NonlinearConfig& cfg);

struct AverageCaseConfig {
    std::vector<std::size_t> dims{2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::size_t draws = 1000;
    std::uint64_t seed = 1;
};
std::vector<ResultRow> run_average_case(const AverageCaseConfig& cfg);

struct CompressionConfig {
    std::size_t d = 20;
    std::vector<std::size_t> ns{1000, 2000, 5000, 10000};
    std::size_t blocks = 2;
    std::uint64_t seed = 1;
};
std::vector<ResultRow> run_compression(const CompressionConfig& cfg);

struct BoundStatsConfig {
    std::vector<std::size_t> dims{4, 8, 16, 20};
    std::vector<std::size_t> qs{2, 3, 7};
    std::size_t trials = 10000;
    double a = 6.0;
    std::uint64_t seed = 1;
};
std::vector<ResultRow> run_bound_statistics(const BoundStatsConfig& cfg);

// Dispatch on spec.name.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec);

// Analytic references over the uniform simplex on 2^d points (bits).
double expected_simplex_entropy(std::size_t d);
double identity_average_alt(std::size_t d);
double identity_average(std::size_t d);

enum class OutputFormat { csv, json };

// CSV writes a flat table plus "<path>.meta.json"; JSON nests meta and rows.
void write_results(const std::filesystem::path& path, OutputFormat format, const ExperimentSpec& spec,
                   std::span<const ResultRow> rows);
std::string results_csv(std::span<const ResultRow> rows);
std::string results_json(const ExperimentSpec& spec, std::span<const ResultRow> rows);
std::string meta_json(const ExperimentSpec& spec);

}  // namespace fica
