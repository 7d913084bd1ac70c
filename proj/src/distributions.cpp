#include "fica/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fica/error.hpp"

namespace fica {

SampleSet SymbolDraw::to_samples(std::uint32_t q, std::size_t d) const {
    if (checked_power(q, d) != pmf.size()) throw DimensionError("alphabet size is not q^d");
    return SampleSet::from_words(q, d, words);
}

JointPMF SymbolDraw::truth(std::uint32_t q, std::size_t d) const { return {q, d, pmf}; }

std::vector<double> zipf_pmf(std::uint64_t m, double s) {
    if (m == 0) throw DomainError("Zipf alphabet must be non-empty");
    if (s < 0.0) throw DomainError("Zipf exponent must be non-negative");
    std::vector<double> p(m);
    for (std::uint64_t k = 0; k < m; ++k) p[k] = std::pow(static_cast<double>(k + 1), -s);
    const double z = std::accumulate(p.begin(), p.end(), 0.0);
    for (auto& v : p) v /= z;
    return p;
}

std::vector<double> beta_binomial_pmf(std::uint64_t m, double a, double b) {
    if (m == 0) throw DomainError("Beta-Binomial needs m >= 1");
    if (!(a > 0.0 && b > 0.0)) throw DomainError("Beta-Binomial shape parameters must be positive");
    const auto lbeta = [](double x, double y) {
        return std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y);
    };
    const double md = static_cast<double>(m);
    std::vector<double> p(m + 1);
    for (std::uint64_t k = 0; k <= m; ++k) {
        const double kd = static_cast<double>(k);
        const double log_choose = std::lgamma(md + 1) - std::lgamma(kd + 1) - std::lgamma(md - kd + 1);
        p[k] = std::exp(log_choose + lbeta(kd + a, md - kd + b) - lbeta(a, b));
    }
    const double z = std::accumulate(p.begin(), p.end(), 0.0);
    for (auto& v : p) v /= z;  // absorbs lgamma rounding only
    return p;
}

std::vector<WordIndex> random_assignment(std::uint64_t m, Rng& rng) {
    std::vector<WordIndex> perm(m);
    std::iota(perm.begin(), perm.end(), WordIndex{0});
    shuffle(std::span<WordIndex>(perm), rng);
    return perm;
}

SymbolDraw sample_from_pmf(std::span<const double> pmf, std::size_t n, std::uint64_t seed) {
    const std::uint64_t m = pmf.size();
    Rng rng(seed);
    const auto assignment = random_assignment(m, rng);

    std::vector<double> cdf(m);
    std::partial_sum(pmf.begin(), pmf.end(), cdf.begin());
    const double total = cdf.back();

    SymbolDraw out;
    out.words.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform() * total;
        auto k = static_cast<std::uint64_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        k = std::min(k, m - 1);
        while (pmf[k] == 0.0 && k > 0) --k;  // never land on a zero-mass symbol
        out.words.push_back(assignment[k]);
    }
    out.pmf.assign(m, 0.0);
    for (std::uint64_t k = 0; k < m; ++k) out.pmf[assignment[k]] = pmf[k] / total;
    return out;
}

SymbolDraw sample_zipf(std::uint64_t m, double s, std::size_t n, std::uint64_t seed) {
    return sample_from_pmf(zipf_pmf(m, s), n, seed);
}

SymbolDraw sample_beta_binomial(std::uint64_t m, double a, double b, std::size_t n,
                                std::uint64_t seed) {
    auto full = beta_binomial_pmf(m, a, b);
    full.pop_back();
    const double z = std::accumulate(full.begin(), full.end(), 0.0);
    for (auto& v : full) v /= z;
    return sample_from_pmf(full, n, seed);
}

std::vector<double> sample_uniform_simplex(std::uint64_t m, Rng& rng) {
    if (m == 0) throw DomainError("simplex dimension must be at least 1");
    std::vector<double> p(m);
    double total = 0.0;
    for (auto& v : p) {
        v = rng.exponential();
        total += v;
    }
    for (auto& v : p) v /= total;
    return p;
}

JointPMF sample_uniform_simplex_pmf(std::uint32_t q, std::size_t d, Rng& rng) {
    return {q, d, sample_uniform_simplex(checked_power(q, d, kDefaultCapacityLog2), rng)};
}

SampleSet sample_bernoulli_product(std::span<const double> params, std::size_t n,
                                   std::uint64_t seed) {
    for (double p : params)
        if (!(p >= 0.0 && p <= 1.0)) throw DomainError("Bernoulli parameter outside [0, 1]");
    Rng rng(seed);
    const std::size_t d = params.size();
    std::vector<Element> data(n * d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) data[i * d + j] = rng.bernoulli(params[j]) ? 1 : 0;
    return {2, d, std::move(data)};
}

double digamma(double x) {
    if (!(x > 0.0)) throw DomainError("digamma is evaluated for x > 0 only");
    double acc = 0.0;
    while (x < 10.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    // Asymptotic series: ln x - 1/(2x) - sum B_2k / (2k x^2k)
    const double series =
        inv2 * (1.0 / 12 -
                inv2 * (1.0 / 120 -
                        inv2 * (1.0 / 252 -
                                inv2 * (1.0 / 240 - inv2 * (1.0 / 132 - inv2 * (691.0 / 32760))))));
    return acc + std::log(x) - 0.5 * inv - series;
}

}  // namespace fica
