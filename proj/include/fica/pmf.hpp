#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fica/gf.hpp"
#include "fica/kernels.hpp"

namespace fica {

// Dense tables are limited to q^d <= 2^kDefaultCapacityLog2 entries unless a
// caller passes a larger budget.
inline constexpr double kDefaultCapacityLog2 = 30.0;

/// Dense joint pmf over GF(q)^d, indexed by big-endian word index.
class JointPMF {
public:
    // Validates non-negativity and normalization (within 1e-9).
    JointPMF(std::uint32_t q, std::size_t d, std::vector<double> probs,
             double max_log2 = kDefaultCapacityLog2);

    // Single atom at `word`.
    static JointPMF point_mass(std::uint32_t q, std::size_t d, WordIndex word);
    static JointPMF uniform(std::uint32_t q, std::size_t d);

    std::uint32_t q() const { return q_; }
    std::size_t d() const { return d_; }
    std::size_t size() const { return probs_.size(); }
    std::span<const double> probs() const { return probs_; }
    double operator[](WordIndex i) const { return probs_[i]; }

private:
    std::uint32_t q_;
    std::size_t d_;
    std::vector<double> probs_;
};

/// n records of d symbols each, stored row-major.
class SampleSet {
public:
    SampleSet(std::uint32_t q, std::size_t d, std::vector<Element> data);
    static SampleSet from_words(std::uint32_t q, std::size_t d, std::span<const WordIndex> words);

    std::uint32_t q() const { return q_; }
    std::size_t d() const { return d_; }
    std::size_t n() const { return data_.size() / d_; }
    std::span<const Element> row(std::size_t i) const { return {data_.data() + i * d_, d_}; }
    std::span<const Element> data() const { return data_; }
    // Symbols of component j, in sample order.
    std::vector<Element> column(std::size_t j) const;

    WordIndex word(std::size_t i) const { return encode_word(row(i), q_); }
    // Number of distinct records (n_0).
    std::size_t distinct_count() const;

    friend bool operator==(const SampleSet&, const SampleSet&) = default;

private:
    std::uint32_t q_;
    std::size_t d_;
    std::vector<Element> data_;
};

// Plug-in (maximum-likelihood) estimate count/n. Throws CapacityError.
JointPMF empirical_pmf(const SampleSet& samples, double max_log2 = kDefaultCapacityLog2);

// Shannon entropy in bits, 0 log 0 = 0. Throws DomainError on negative input.
double entropy(std::span<const double> p);
double binary_entropy(double p);
// Entropy in bits of a count histogram (plug-in).
double entropy_from_counts(std::span<const std::uint64_t> counts);

// Law of U_r = <r, X> mod q.
std::vector<double> combination_marginal(const JointPMF& p, std::span<const Element> r);

// Law of each coordinate Y_j.
std::vector<std::vector<double>> coordinate_marginals(const JointPMF& p);
double marginal_entropy_sum(const JointPMF& p);

enum class MarginalStrategy {
    naive,  // per-row marginalization, O(d q^(2d))
    fast,   // Walsh-Hadamard for q = 2, modular-sum transform otherwise
};

// H(U_r) for every row index r (entry 0 is the zero row, always 0).
std::vector<double> all_combination_entropies(const JointPMF& p,
                                              MarginalStrategy strategy = MarginalStrategy::fast,
                                              Execution exec = Execution::parallel);

// Pushforward through an invertible W. Throws SingularMatrix / DimensionError.
JointPMF transform_pmf(const JointPMF& p, const FieldMatrix& w);

// y = W x (mod q) applied to every record.
SampleSet transform_samples(const SampleSet& s, const FieldMatrix& w);

}  // namespace fica
