#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fica/gf.hpp"
#include "fica/pmf.hpp"
#include "fica/random.hpp"

namespace fica {

/// Draws over an alphabet of m words together with the generating pmf
/// (already expressed over words, after the random word assignment).
struct SymbolDraw {
    std::vector<WordIndex> words;
    std::vector<double> pmf;

    SampleSet to_samples(std::uint32_t q, std::size_t d) const;
    JointPMF truth(std::uint32_t q, std::size_t d) const;
};

// P(k) ~ k^-s for k = 1..m, returned at positions 0..m-1.
std::vector<double> zipf_pmf(std::uint64_t m, double s);
// Full Beta-Binomial law on {0, ..., m}, evaluated in log space.
std::vector<double> beta_binomial_pmf(std::uint64_t m, double a, double b);

// Uniform random bijection symbol -> word (Fisher-Yates).
std::vector<WordIndex> random_assignment(std::uint64_t m, Rng& rng);

// n i.i.d. draws by inverse CDF, mapped to words by a seeded random bijection.
SymbolDraw sample_from_pmf(std::span<const double> pmf, std::size_t n, std::uint64_t seed);
SymbolDraw sample_zipf(std::uint64_t m, double s, std::size_t n, std::uint64_t seed);
// Support truncated to {0, ..., m-1} (k = m dropped, rest renormalized) so it
// fits an alphabet of m words.
SymbolDraw sample_beta_binomial(std::uint64_t m, double a, double b, std::size_t n,
                                std::uint64_t seed);

// Uniform point on the (m-1)-simplex: normalized i.i.d. standard exponentials.
std::vector<double> sample_uniform_simplex(std::uint64_t m, Rng& rng);
JointPMF sample_uniform_simplex_pmf(std::uint32_t q, std::size_t d, Rng& rng);

// n records of independent bits, bit j set with probability params[j].
SampleSet sample_bernoulli_product(std::span<const double> params, std::size_t n,
                                   std::uint64_t seed);

// Psi(x) for x > 0 to ~1e-13 absolute; throws DomainError otherwise.
double digamma(double x);

}  // namespace fica
