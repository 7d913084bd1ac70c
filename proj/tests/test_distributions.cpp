#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "doctest.h"
#include "fica/distributions.hpp"
#include "fica/error.hpp"

using namespace fica;

namespace {

double total(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

// Max over cells of |empirical - p| in units of the multinomial standard error.
double max_z(const std::vector<WordIndex>& words, const std::vector<double>& pmf) {
    std::vector<double> counts(pmf.size(), 0.0);
    for (auto w : words) counts[w] += 1.0;
    const double n = static_cast<double>(words.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < pmf.size(); ++i) {
        if (pmf[i] == 0.0) {
            CHECK(counts[i] == 0.0);
            continue;
        }
        const double se = std::sqrt(pmf[i] * (1 - pmf[i]) / n);
        worst = std::max(worst, std::abs(counts[i] / n - pmf[i]) / se);
    }
    return worst;
}

}  // namespace

TEST_CASE("zipf pmf examples") {
    const auto flat = zipf_pmf(5, 0.0);
    for (double v : flat) CHECK(v == doctest::Approx(0.2));
    const auto two = zipf_pmf(2, 1.0);
    CHECK(two[0] == doctest::Approx(2.0 / 3.0));
    CHECK(two[1] == doctest::Approx(1.0 / 3.0));
    CHECK(total(zipf_pmf(1024, 1.01)) == doctest::Approx(1.0).epsilon(1e-12));
    const auto z = zipf_pmf(100, 1.01);
    for (std::size_t k = 1; k < z.size(); ++k) CHECK(z[k] < z[k - 1]);
}

TEST_CASE("beta-binomial pmf examples") {
    const auto flat = beta_binomial_pmf(6, 1.0, 1.0);
    REQUIRE(flat.size() == 7);
    for (double v : flat) CHECK(v == doctest::Approx(1.0 / 7.0).epsilon(1e-12));

    const auto sym = beta_binomial_pmf(64, 3.0, 3.0);
    for (std::size_t k = 0; k <= 64; ++k) CHECK(sym[k] == doctest::Approx(sym[64 - k]).epsilon(1e-12));
    CHECK(total(sym) == doctest::Approx(1.0).epsilon(1e-12));

    const auto small = beta_binomial_pmf(2, 3.0, 3.0);
    CHECK(small[0] == doctest::Approx(0.28571428571428575).epsilon(1e-13));
    CHECK(small[1] == doctest::Approx(0.42857142857142855).epsilon(1e-13));
    CHECK(small[1] == doctest::Approx(1.0 - 2.0 * small[0]).epsilon(1e-13));
}

TEST_CASE("beta-binomial sampler truncates to the word alphabet") {
    const auto draw = sample_beta_binomial(64, 3.0, 3.0, 1000, 4);
    CHECK(draw.pmf.size() == 64);
    CHECK(total(draw.pmf) == doctest::Approx(1.0).epsilon(1e-12));
    for (auto w : draw.words) CHECK(w < 64);
}

TEST_CASE("samplers are reproducible and map symbols through a bijection") {
    const auto a = sample_zipf(256, 1.01, 2000, 7);
    const auto b = sample_zipf(256, 1.01, 2000, 7);
    const auto c = sample_zipf(256, 1.01, 2000, 8);
    CHECK(a.words == b.words);
    CHECK(a.pmf == b.pmf);
    CHECK(a.words != c.words);

    // The pmf over words is a rearrangement of the Zipf law.
    auto sorted = a.pmf;
    std::sort(sorted.rbegin(), sorted.rend());
    const auto z = zipf_pmf(256, 1.01);
    for (std::size_t i = 0; i < z.size(); ++i) CHECK(sorted[i] == doctest::Approx(z[i]).epsilon(1e-14));

    Rng rng(3);
    const auto assignment = random_assignment(100, rng);
    CHECK(std::set<WordIndex>(assignment.begin(), assignment.end()).size() == 100);
    CHECK(*std::max_element(assignment.begin(), assignment.end()) == 99);
}

TEST_CASE("sampler frequencies sit inside multinomial bands") {
    const auto z = sample_zipf(64, 1.01, 100000, 11);
    CHECK(max_z(z.words, z.pmf) < 4.5);
    const auto bb = sample_beta_binomial(64, 3.0, 3.0, 100000, 12);
    CHECK(max_z(bb.words, bb.pmf) < 4.5);
}

TEST_CASE("SymbolDraw conversions") {
    const auto z = sample_zipf(16, 1.0, 500, 2);
    const auto s = z.to_samples(2, 4);
    CHECK(s.n() == 500);
    for (std::size_t i = 0; i < 500; ++i) CHECK(s.word(i) == z.words[i]);
    const auto truth = z.truth(2, 4);
    for (std::size_t i = 0; i < 16; ++i) CHECK(truth[i] == z.pmf[i]);
}

TEST_CASE("uniform simplex") {
    Rng rng(5);
    CHECK(sample_uniform_simplex(1, rng) == std::vector<double>{1.0});
    const std::size_t m = 4, draws = 100000;
    std::vector<double> mean(m, 0.0);
    for (std::size_t t = 0; t < draws; ++t) {
        const auto p = sample_uniform_simplex(m, rng);
        CHECK(total(p) == doctest::Approx(1.0).epsilon(1e-12));
        for (std::size_t i = 0; i < m; ++i) {
            CHECK(p[i] >= 0.0);
            mean[i] += p[i];
        }
    }
    // Flat Dirichlet: Var(p_i) = (m - 1) / (m^2 (m + 1)).
    const double se = std::sqrt((m - 1.0) / (m * m * (m + 1.0)) / draws);
    for (std::size_t i = 0; i < m; ++i) CHECK(std::abs(mean[i] / draws - 1.0 / m) <= 3 * se);
    const auto p = sample_uniform_simplex_pmf(3, 2, rng);
    CHECK(p.size() == 9);
}

TEST_CASE("bernoulli product") {
    const std::vector<double> zeros(5, 0.0);
    const auto z = sample_bernoulli_product(zeros, 100, 1);
    for (auto v : z.data()) CHECK(v == 0);

    const auto params = std::vector<double>{0.1, 0.5, 0.9, 1.0};
    const std::size_t n = 50000;
    const auto s = sample_bernoulli_product(params, n, 2);
    for (std::size_t j = 0; j < params.size(); ++j) {
        const auto col = s.column(j);
        const double mean = std::accumulate(col.begin(), col.end(), 0.0) / n;
        const double se = std::sqrt(params[j] * (1 - params[j]) / n);
        CHECK(std::abs(mean - params[j]) <= 3 * se + 1e-15);
    }
    CHECK(s == sample_bernoulli_product(params, n, 2));

    // Joint entropy of independent bits with p_i = i/20.
    double h = 0.0;
    for (int i = 1; i <= 20; ++i) h += binary_entropy(i / 20.0);
    CHECK(h == doctest::Approx(14.355046155633586).epsilon(1e-13));
    CHECK(std::round(h * 100) / 100 == doctest::Approx(14.36));
}

TEST_CASE("digamma") {
    CHECK(std::abs(digamma(1.0) - -0.5772156649015329) <= 1e-13);
    CHECK(std::abs(digamma(2.0) - 0.42278433509846713) <= 1e-13);
    CHECK(std::abs(digamma(0.3) - -3.502524222200133) <= 1e-10);
    CHECK(std::abs(digamma(7.5) - 1.9467574842460869) <= 1e-10);
    CHECK(std::abs(digamma(100.25) - 4.602671243274712) <= 1e-10);
    for (double x : {0.1, 0.7, 1.5, 3.25, 10.0, 1000.5}) CHECK(std::abs(digamma(x + 1) - digamma(x) - 1 / x) <= 1e-10);
    CHECK_THROWS_AS(digamma(0.0), DomainError);
    CHECK_THROWS_AS(digamma(-1.5), DomainError);
}
