#include <set>
#include <vector>

#include "doctest.h"
#include "fica/error.hpp"
#include "fica/gf.hpp"

using namespace fica;

namespace {

FieldMatrix mat(std::uint32_t q, const std::vector<FieldVector>& rows) {
    return FieldMatrix::from_rows(PrimeField(q), rows);
}

FieldMatrix random_matrix(std::size_t r, std::size_t c, const PrimeField& f, Rng& rng) {
    FieldMatrix m(f, r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m.set(i, j, static_cast<Element>(rng.below(f.order())));
    return m;
}

}  // namespace

TEST_CASE("prime field construction") {
    CHECK(is_prime(2));
    CHECK(is_prime(7));
    CHECK(is_prime(65521));
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(4));
    CHECK_FALSE(is_prime(9));
    CHECK_THROWS_AS(PrimeField(4), DomainError);
    CHECK_THROWS_AS(PrimeField(8), DomainError);
    CHECK_THROWS_AS(PrimeField(1), DomainError);
    CHECK_THROWS_AS(PrimeField(0), DomainError);
    CHECK_THROWS_AS(PrimeField(65537), DomainError);
    CHECK(PrimeField(3).order() == 3);
}

TEST_CASE("field inverse examples") {
    CHECK(field_inverse(1, PrimeField(2)) == 1);
    CHECK(field_inverse(2, PrimeField(5)) == 3);
    CHECK_THROWS_AS(field_inverse(0, PrimeField(3)), NoInverse);
}

TEST_CASE("field inverse is an involution and satisfies a*b = 1") {
    for (std::uint32_t q : {2u, 3u, 5u, 7u, 11u, 13u, 251u, 65521u}) {
        const PrimeField f(q);
        const std::uint32_t step = q > 1000 ? 97 : 1;
        for (std::uint32_t a = 1; a < q; a += step) {
            const Element b = f.inverse(static_cast<Element>(a));
            CHECK(f.mul(static_cast<Element>(a), b) == 1);
            CHECK(f.inverse(b) == a);
        }
    }
}

TEST_CASE("field arithmetic") {
    const PrimeField f(7);
    CHECK(f.add(5, 4) == 2);
    CHECK(f.sub(2, 5) == 4);
    CHECK(f.mul(3, 5) == 1);
    CHECK(f.neg(3) == 4);
    CHECK(f.neg(0) == 0);
    const PrimeField big(65521);
    CHECK(big.mul(65520, 65520) == 1);
}

TEST_CASE("word encoding is big-endian base q") {
    const FieldVector x{1, 0, 2};
    CHECK(encode_word(x, 3) == 1 * 9 + 0 * 3 + 2);
    CHECK(decode_word(11, 3, 3) == x);
    const FieldVector bits{1, 0, 1, 1};
    CHECK(encode_word(bits, 2) == 0b1011);
    for (WordIndex i = 0; i < 125; ++i) CHECK(encode_word(decode_word(i, 5, 3), 5) == i);
}

TEST_CASE("checked power") {
    CHECK(checked_power(3, 4) == 81);
    CHECK(checked_power(2, 0) == 1);
    CHECK_THROWS_AS(checked_power(2, 31, 30.0), CapacityError);
    CHECK_NOTHROW(checked_power(2, 30, 30.0));
}

TEST_CASE("matrix construction validates entries") {
    CHECK_THROWS(mat(3, {{0, 3}, {1, 1}}));
    CHECK_THROWS(mat(2, {{0, 1}, {1}}));
    auto m = mat(3, {{0, 1}, {2, 1}});
    CHECK(m(1, 0) == 2);
    CHECK_THROWS(m.set(0, 0, 3));
}

TEST_CASE("rank examples") {
    for (std::uint32_t q : {2u, 3u, 5u}) {
        for (std::size_t d = 1; d <= 6; ++d) CHECK(rank(FieldMatrix::identity(PrimeField(q), d)) == d);
    }
    CHECK(rank(mat(2, {{1, 1}, {1, 1}})) == 1);
    CHECK(rank(mat(3, {{1, 2}, {2, 1}})) == 1);
    CHECK(rank(FieldMatrix(PrimeField(2), 0, 0)) == 0);
    CHECK(rank(FieldMatrix(PrimeField(5), 3, 4)) == 0);
}

TEST_CASE("rank does not mutate and respects min(rows, cols)") {
    const auto m = mat(5, {{1, 2, 3, 4}, {2, 4, 1, 3}, {0, 0, 1, 1}});
    const auto copy = m;
    const auto r = rank(m);
    CHECK(m == copy);
    CHECK(r <= 3);
    CHECK(r == 2);
}

TEST_CASE("rank invariant under row permutation and nonzero row scaling") {
    Rng rng(11);
    for (std::uint32_t q : {2u, 3u, 5u, 7u}) {
        const PrimeField f(q);
        for (int trial = 0; trial < 100; ++trial) {
            const std::size_t d = 1 + rng.below(8);
            const std::size_t cols = 1 + rng.below(8);
            auto m = random_matrix(d, cols, f, rng);
            if (trial % 3 == 0 && d > 1) {
                for (std::size_t c = 0; c < cols; ++c) m.set(d - 1, c, f.mul(2 % q, m(0, c)));
            }
            const auto r = rank(m);
            const auto perm = random_permutation(d, rng);
            FieldMatrix shuffled(f, d, cols);
            for (std::size_t i = 0; i < d; ++i) {
                const Element c = static_cast<Element>(1 + rng.below(q - 1));
                for (std::size_t j = 0; j < cols; ++j) shuffled.set(i, j, f.mul(c, m(perm[i], j)));
            }
            CHECK(rank(shuffled) == r);
        }
    }
}

TEST_CASE("try_extend_basis examples") {
    EchelonBasis empty(PrimeField(2), 2);
    const FieldVector zero{0, 0};
    CHECK_FALSE(try_extend_basis(empty, zero));

    EchelonBasis b1(PrimeField(2), 2);
    CHECK(try_extend_basis(b1, FieldVector{1, 0}));
    CHECK(try_extend_basis(b1, FieldVector{0, 1}));

    EchelonBasis b2(PrimeField(2), 2);
    CHECK(try_extend_basis(b2, FieldVector{1, 1}));
    CHECK(try_extend_basis(b2, FieldVector{0, 1}));
    CHECK_FALSE(try_extend_basis(b2, FieldVector{1, 0}));

    EchelonBasis b3(PrimeField(3), 3);
    CHECK_THROWS_AS(try_extend_basis(b3, FieldVector{1, 0}), DimensionError);
}

TEST_CASE("basis with k rows accepts exactly q^d - q^k rows") {
    Rng rng(5);
    for (auto [q, d] : std::vector<std::pair<std::uint32_t, std::size_t>>{{2, 12}, {2, 5}, {3, 5}, {3, 7}, {5, 5}, {7, 4}}) {
        const PrimeField f(q);
        const auto total = checked_power(q, d);
        for (std::size_t k = 0; k <= d; ++k) {
            EchelonBasis basis(f, d);
            while (basis.size() < k) basis.try_extend(decode_word(1 + rng.below(total - 1), q, d));
            std::uint64_t accepted = 0;
            for (WordIndex w = 0; w < total; ++w) {
                EchelonBasis trial = basis;
                if (trial.try_extend(decode_word(w, q, d))) ++accepted;
            }
            CHECK(accepted == total - checked_power(q, k));
        }
    }
}

TEST_CASE("bit-packed GF(2) path agrees with the generic path") {
    Rng rng(3);
    const PrimeField f(2);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t d = 1 + rng.below(20);
        const std::size_t rows = 1 + rng.below(24);
        const auto m = random_matrix(rows, d, f, rng);
        CHECK(rank(m, Backend::automatic) == rank(m, Backend::generic));

        BasisBuilder packed(f, d, Backend::automatic);
        BasisBuilder generic(f, d, Backend::generic);
        Gf2Basis raw(d);
        for (std::size_t i = 0; i < rows; ++i) {
            const bool a = packed.try_extend(m.row(i));
            const bool b = generic.try_extend(m.row(i));
            const bool c = raw.try_extend(encode_word(m.row(i), 2));
            CHECK(a == b);
            CHECK(a == c);
        }
        CHECK(packed.size() == generic.size());
    }
}

TEST_CASE("invert examples") {
    for (std::uint32_t q : {2u, 3u, 7u}) {
        const auto id = FieldMatrix::identity(PrimeField(q), 4);
        CHECK(invert(id) == id);
    }
    const auto m = mat(2, {{1, 1}, {0, 1}});
    CHECK(invert(m) == m);
    CHECK_THROWS_AS(invert(mat(2, {{1, 1}, {1, 1}})), SingularMatrix);
    CHECK_THROWS_AS(invert(FieldMatrix(PrimeField(2), 2, 3)), DimensionError);
}

TEST_CASE("invert(M) * M = I for 1000 random invertible matrices") {
    Rng rng(17);
    const std::uint32_t qs[] = {2, 3, 5, 7};
    for (int trial = 0; trial < 1000; ++trial) {
        const PrimeField f(qs[trial % 4]);
        const std::size_t d = 1 + rng.below(10);
        const auto m = random_invertible(d, f, rng);
        const auto inv = invert(m);
        CHECK(multiply(inv, m).is_identity());
        CHECK(multiply(m, inv).is_identity());
    }
}

TEST_CASE("random_invertible") {
    Rng rng(1);
    const auto one = random_invertible(1, PrimeField(2), rng);
    CHECK(one == mat(2, {{1}}));

    std::set<std::vector<Element>> seen;
    for (int i = 0; i < 600; ++i) {
        const auto m = random_invertible(2, PrimeField(2), rng);
        CHECK(rank(m) == 2);
        seen.insert({m.data().begin(), m.data().end()});
    }
    CHECK(seen.size() == 6);
    CHECK(invertible_count(2, 2) == doctest::Approx(6.0));
    CHECK(invertible_count(3, 2) == doctest::Approx(168.0));
    CHECK(invertible_count(2, 3) == doctest::Approx(48.0));

    for (int i = 0; i < 200; ++i) {
        const std::size_t d = 2 + i % 6;
        const PrimeField f(i % 2 ? 3 : 2);
        const auto m = random_invertible(d, f, rng, true);
        CHECK(rank(m) == d);
        CHECK_FALSE(is_monomial(m));
        CHECK_FALSE(m.is_identity());
    }

    Rng a(99), b(99);
    CHECK(random_invertible(8, PrimeField(5), a) == random_invertible(8, PrimeField(5), b));
}

TEST_CASE("is_monomial") {
    CHECK(is_monomial(mat(2, {{0, 1, 0}, {0, 0, 1}, {1, 0, 0}})));
    CHECK(is_monomial(mat(3, {{2, 0}, {0, 1}})));
    CHECK_FALSE(is_monomial(mat(2, {{1, 1}, {0, 1}})));
    CHECK_FALSE(is_monomial(mat(3, {{1, 0}, {1, 0}})));
    CHECK_FALSE(is_monomial(mat(3, {{0, 0}, {0, 1}})));
}

TEST_CASE("multiply and apply agree") {
    Rng rng(8);
    const PrimeField f(5);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = random_matrix(4, 4, f, rng);
        const auto b = random_matrix(4, 4, f, rng);
        const auto ab = multiply(a, b);
        FieldVector x(4);
        for (auto& v : x) v = static_cast<Element>(rng.below(5));
        CHECK(fica::apply(ab, x) == fica::apply(a, fica::apply(b, x)));
    }
    CHECK_THROWS_AS(multiply(FieldMatrix(f, 2, 3), FieldMatrix(f, 2, 3)), DimensionError);
}
