#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fica/gf.hpp"
#include "fica/kernels.hpp"
#include "fica/pmf.hpp"

namespace fica {

/// Every nonzero coefficient row r with H(<r, X> mod q), sorted ascending by
/// entropy; equal entropies keep ascending row-index order.
class EntropyTable {
public:
    struct Entry {
        double entropy;
        WordIndex row;
    };

    // Set `canonical_only` to keep one representative per line {c*r : c != 0}
    // (first nonzero coefficient equal to 1). Off gives the full q^d - 1 rows.
    static EntropyTable build(const JointPMF& p, Execution exec = Execution::parallel,
                              bool canonical_only = false);

    std::uint32_t q() const { return q_; }
    std::size_t d() const { return d_; }
    std::size_t size() const { return entries_.size(); }
    const Entry& operator[](std::size_t i) const { return entries_[i]; }
    std::span<const Entry> entries() const { return entries_; }
    FieldVector row(std::size_t i) const { return decode_word(entries_[i].row, q_, d_); }

private:
    std::uint32_t q_ = 2;
    std::size_t d_ = 0;
    std::vector<Entry> entries_;
};

struct LinearICAResult {
    FieldMatrix w;                           // rank d, Y = W X
    double objective = 0.0;                  // sum_j H(Y_j), bits
    std::vector<double> component_entropies; // H(Y_j)
    std::size_t rows_examined = 0;           // L
    std::optional<double> lower_bound;       // only when the full table was built
};

// Sum of the d smallest entries of the table (zero row excluded).
double linear_lower_bound(const EntropyTable& table);
double linear_lower_bound(const JointPMF& p);

struct GlicaOptions {
    bool dedup_scalar_multiples = false;
    Execution exec = Execution::parallel;
};

// Greedy scan of the sorted table, accepting rows that extend the basis.
LinearICAResult glica(const EntropyTable& table);
LinearICAResult glica(const JointPMF& p, const GlicaOptions& options = {});
LinearICAResult glica(const SampleSet& samples, const GlicaOptions& options = {});

/// One BloGLICA iteration: Y <- U * diag(W_1, ..., W_b) * Y, where U moves
/// component perm[i] to position i.
struct BlockStage {
    std::vector<FieldMatrix> blocks;
    std::vector<std::size_t> perm;
};

struct BloglicaConfig {
    std::size_t blocks = 2;
    std::size_t max_iterations = 50;
    double epsilon = 1e-12;
    std::uint64_t seed = 1;

    // Throws ConfigError unless 1 <= blocks <= d, max_iterations >= 1, epsilon >= 0.
    void validate(std::size_t d) const;
};

struct BloglicaResult {
    LinearICAResult result;
    std::vector<double> trace;  // trace[0] = untransformed objective, then one per iteration
    std::vector<BlockStage> stages;
};

// Contiguous block sizes, larger blocks first: ceil(d/b) or floor(d/b).
std::vector<std::size_t> block_sizes(std::size_t d, std::size_t b);

BloglicaResult bloglica(const JointPMF& p, const BloglicaConfig& config);
BloglicaResult bloglica(const SampleSet& samples, const BloglicaConfig& config);

// Dense W equivalent to applying the stages in order.
FieldMatrix compose_stages(const PrimeField& field, std::size_t d,
                           std::span<const BlockStage> stages, std::size_t blocks);

struct OrderPermResult {
    std::vector<WordIndex> assignment;  // assignment[x] = word receiving p[x]
    double objective = 0.0;
    double total_correlation = 0.0;
    JointPMF transformed;
};

// Maps the i-th smallest probability (stable) to word i.
OrderPermResult order_permutation(const JointPMF& p);

// sum_j H(X_j) - H(X)
double total_correlation(const JointPMF& p);

struct OptimalLinearResult {
    FieldMatrix w;
    double objective = 0.0;
    std::uint64_t enumerated = 0;
};

// Exhaustive search over GL(d, q); throws CapacityError above `max_matrices`.
OptimalLinearResult brute_force_optimal_linear(const JointPMF& p, double max_matrices = 1e6);

/// Row-examination statistics of the i.i.d.-uniform-row model: draw rows of
/// GF(q)^d with replacement until they span the space and record the count.
struct RowDrawStats {
    std::size_t d = 0;
    std::uint32_t q = 2;
    std::vector<std::uint32_t> draws;
    double mean = 0.0;
    double variance = 0.0;        // unbiased sample variance
    double mean_se = 0.0;
    double variance_se = 0.0;     // from the sample fourth central moment
    double analytic_mean = 0.0;   // sum_{k<d} q^d / (q^d - q^k)
    double analytic_variance = 0.0;        // sum_{k=1}^d 1 / (q^k + q^-k - 2)
    double analytic_variance_bound = 0.0;  // q/(q-1)^2 + 1/(q + 1/q - 2)^2

    // Fraction of trials with L >= threshold, and its standard error.
    double tail(double threshold) const;
    double tail_se(double threshold) const;
};

RowDrawStats row_draw_statistics(std::size_t d, const PrimeField& field, std::size_t trials,
                                 std::uint64_t seed, Execution exec = Execution::parallel);

double expected_rows_examined(std::size_t d, std::uint32_t q);

}  // namespace fica
