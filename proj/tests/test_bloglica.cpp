#include <numeric>
#include <vector>

#include "doctest.h"
#include "fica/distributions.hpp"
#include "fica/error.hpp"
#include "fica/experiments.hpp"
#include "fica/ica.hpp"

using namespace fica;

TEST_CASE("block sizes") {
    CHECK(block_sizes(6, 2) == std::vector<std::size_t>{3, 3});
    CHECK(block_sizes(7, 2) == std::vector<std::size_t>{4, 3});
    CHECK(block_sizes(20, 3) == std::vector<std::size_t>{7, 7, 6});
    CHECK(block_sizes(5, 5) == std::vector<std::size_t>{1, 1, 1, 1, 1});
    CHECK(block_sizes(4, 1) == std::vector<std::size_t>{4});
    CHECK_THROWS_AS(block_sizes(4, 0), ConfigError);
    CHECK_THROWS_AS(block_sizes(4, 5), ConfigError);
}

TEST_CASE("config validation") {
    CHECK_NOTHROW(BloglicaConfig{}.validate(4));
    CHECK_THROWS_AS((BloglicaConfig{.blocks = 0}.validate(4)), ConfigError);
    CHECK_THROWS_AS((BloglicaConfig{.blocks = 5}.validate(4)), ConfigError);
    CHECK_THROWS_AS((BloglicaConfig{.max_iterations = 0}.validate(4)), ConfigError);
    CHECK_THROWS_AS((BloglicaConfig{.epsilon = -1.0}.validate(4)), ConfigError);
    Rng rng(1);
    const auto p = sample_uniform_simplex_pmf(2, 3, rng);
    CHECK_THROWS_AS(bloglica(p, {.blocks = 4}), ConfigError);
}

TEST_CASE("one block and one iteration reproduce glica") {
    Rng rng(2);
    for (auto [q, d] : std::vector<std::pair<std::uint32_t, std::size_t>>{{2, 4}, {2, 8}, {3, 3}, {5, 2}}) {
        for (int trial = 0; trial < 10; ++trial) {
            const auto p = sample_uniform_simplex_pmf(q, d, rng);
            const auto g = glica(p);
            const auto b = bloglica(p, {.blocks = 1, .max_iterations = 1});
            CHECK(std::abs(b.result.objective - g.objective) <= 1e-9);
            if (g.objective < marginal_entropy_sum(p) - 1e-9) CHECK(b.result.w == g.w);
            CHECK(b.trace.size() == 2);
        }
    }
}

TEST_CASE("size-one blocks leave the objective unchanged") {
    Rng rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const auto p = sample_uniform_simplex_pmf(trial % 2 ? 3 : 2, 4, rng);
        const auto r = bloglica(p, {.blocks = 4, .max_iterations = 10});
        for (double v : r.trace) CHECK(std::abs(v - marginal_entropy_sum(p)) <= 1e-12);
        CHECK(r.result.w.is_identity());
        CHECK(r.stages.empty());
    }
}

TEST_CASE("trace is monotone, W is invertible and composes from stages") {
    Rng rng(4);
    for (int trial = 0; trial < 30; ++trial) {
        const std::uint32_t q = trial % 3 == 2 ? 3 : 2;
        const std::size_t d = q == 2 ? 6 + trial % 5 : 4;
        const auto p = sample_uniform_simplex_pmf(q, d, rng);
        const std::size_t blocks = 2 + trial % 2;
        const auto r = bloglica(p, {.blocks = blocks, .max_iterations = 20, .seed = static_cast<std::uint64_t>(trial)});
        REQUIRE(r.trace.size() >= 2);
        CHECK(r.trace.front() == doctest::Approx(marginal_entropy_sum(p)).epsilon(1e-12));
        for (std::size_t k = 1; k < r.trace.size(); ++k) CHECK(r.trace[k] <= r.trace[k - 1] + 1e-12);
        CHECK(rank(r.result.w) == d);
        CHECK(r.result.w == compose_stages(PrimeField(q), d, r.stages, blocks));
        const auto y = transform_pmf(p, r.result.w);
        CHECK(std::abs(marginal_entropy_sum(y) - r.result.objective) <= 1e-9);
        CHECK(std::abs(r.trace.back() - r.result.objective) <= 1e-12);
        REQUIRE(r.result.lower_bound);
        CHECK(*r.result.lower_bound <= r.result.objective + 1e-9);
        CHECK(r.stages.size() <= 20);
    }
}

TEST_CASE("bloglica on samples matches bloglica on the empirical pmf") {
    const std::vector<double> params{0.1, 0.2, 0.3, 0.4, 0.15, 0.25};
    const auto mixed = mixed_bernoulli_sources(params, 3000, 5);
    const BloglicaConfig cfg{.blocks = 2, .max_iterations = 10, .seed = 9};
    const auto a = bloglica(mixed.mixed, cfg);
    const auto b = bloglica(empirical_pmf(mixed.mixed), cfg);
    CHECK(a.result.w == b.result.w);
    CHECK(a.result.objective == doctest::Approx(b.result.objective).epsilon(1e-12));
    CHECK(a.trace.size() == b.trace.size());

    const auto again = bloglica(mixed.mixed, cfg);
    CHECK(again.result.w == a.result.w);
    CHECK(again.trace == a.trace);
}

TEST_CASE("bloglica scales to dimensions without a dense joint table") {
    const auto params = ramp_parameters(24);
    const auto mixed = mixed_bernoulli_sources(params, 2000, 6);
    const auto r = bloglica(mixed.mixed, {.blocks = 3, .max_iterations = 5});
    CHECK(rank(r.result.w) == 24);
    CHECK_FALSE(r.result.lower_bound.has_value());
    CHECK(r.result.objective <= r.trace.front() + 1e-12);
}

TEST_CASE("compose_stages checks the layout") {
    const PrimeField f(2);
    BlockStage bad{{FieldMatrix::identity(f, 2)}, {0, 1, 2}};
    const std::vector<BlockStage> stages{bad};
    CHECK_THROWS_AS(compose_stages(f, 3, stages, 2), DimensionError);
    BlockStage ok{{FieldMatrix::identity(f, 2), FieldMatrix::identity(f, 1)}, {2, 0, 1}};
    const std::vector<BlockStage> good{ok};
    const auto w = compose_stages(f, 3, good, 2);
    CHECK(is_monomial(w));
    // Component perm[i] moves to position i.
    const FieldVector x{1, 0, 0};
    CHECK(fica::apply(w, x) == FieldVector{0, 1, 0});
}
