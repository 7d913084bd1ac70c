#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "fica/random.hpp"

namespace fica {

// Field elements. q is carried in a 16-bit header field, so 16 bits cover
// every admissible prime.
using Element = std::uint16_t;
using FieldVector = std::vector<Element>;

// Word index in the big-endian base-q convention shared by every module:
// index(x) = sum_j x_j * q^(d-1-j).
using WordIndex = std::uint64_t;

class PrimeField {
public:
    // Throws DomainError unless 2 <= q <= 65535 and q is prime.
    explicit PrimeField(std::uint32_t q);

    std::uint32_t order() const { return q_; }
    bool is_binary() const { return q_ == 2; }

    Element add(Element a, Element b) const {
        const std::uint32_t s = std::uint32_t{a} + b;
        return static_cast<Element>(s >= q_ ? s - q_ : s);
    }
    Element sub(Element a, Element b) const {
        return static_cast<Element>(a >= b ? a - b : a + q_ - b);
    }
    Element mul(Element a, Element b) const {
        return static_cast<Element>((std::uint32_t{a} * b) % q_);
    }
    Element neg(Element a) const { return static_cast<Element>(a == 0 ? 0 : q_ - a); }

    // Multiplicative inverse via the extended Euclidean algorithm.
    // Throws NoInverse for a == 0 (and DomainError for a >= q).
    Element inverse(Element a) const;

    friend bool operator==(const PrimeField&, const PrimeField&) = default;

private:
    std::uint32_t q_;
};

Element field_inverse(Element a, const PrimeField& field);

bool is_prime(std::uint32_t n);

WordIndex encode_word(std::span<const Element> x, std::uint32_t q);
void decode_word(WordIndex index, std::uint32_t q, std::span<Element> out);
FieldVector decode_word(WordIndex index, std::uint32_t q, std::size_t d);

// q^d, throwing CapacityError when it exceeds 2^max_log2.
std::uint64_t checked_power(std::uint32_t q, std::size_t d, double max_log2 = 62.0);

/// Dense row-major matrix over a prime field.
class FieldMatrix {
public:
    FieldMatrix() : field_(2) {}
    FieldMatrix(PrimeField field, std::size_t rows, std::size_t cols);

    static FieldMatrix identity(PrimeField field, std::size_t d);
    // Rows must share one length; entries must lie in [0, q).
    static FieldMatrix from_rows(PrimeField field, const std::vector<FieldVector>& rows);

    const PrimeField& field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    Element operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    void set(std::size_t r, std::size_t c, Element v);

    std::span<const Element> row(std::size_t r) const {
        return {data_.data() + r * cols_, cols_};
    }
    FieldVector row_vector(std::size_t r) const {
        auto s = row(r);
        return {s.begin(), s.end()};
    }
    std::span<const Element> data() const { return data_; }

    bool is_identity() const;

    friend bool operator==(const FieldMatrix&, const FieldMatrix&) = default;

private:
    PrimeField field_;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Element> data_;
};

std::ostream& operator<<(std::ostream& os, const FieldMatrix& m);

FieldMatrix multiply(const FieldMatrix& a, const FieldMatrix& b);
FieldVector apply(const FieldMatrix& m, std::span<const Element> x);

enum class Backend { automatic, generic };

// Rank over GF(q). q = 2 with at most 64 columns uses bit-packed rows
// unless Backend::generic is requested.
std::size_t rank(const FieldMatrix& m, Backend backend = Backend::automatic);

/// Incremental row-echelon basis over GF(q).
///
/// Every stored row is normalized (pivot coefficient 1) and has already been
/// reduced by all rows inserted before it, so reducing a candidate in
/// insertion order leaves zeros in every existing pivot column.
class EchelonBasis {
public:
    EchelonBasis(PrimeField field, std::size_t dim);

    // True iff `row` is independent of the current basis; it is then added.
    // Throws DimensionError when row.size() != dim().
    bool try_extend(std::span<const Element> row);

    bool contains(std::span<const Element> row) const;

    std::size_t size() const { return pivots_.size(); }
    std::size_t dim() const { return dim_; }
    bool full() const { return size() == dim_; }

private:
    void reduce(std::span<Element> row) const;

    PrimeField field_;
    std::size_t dim_;
    std::vector<Element> rows_;  // size() * dim_, reduced and normalized
    std::vector<std::size_t> pivots_;
};

/// Bit-packed basis for GF(2), dim <= 64. Rows are words in the big-endian
/// convention (coordinate j lives in bit dim-1-j). Extension costs at most
/// dim XORs: one per pivot bit.
class Gf2Basis {
public:
    explicit Gf2Basis(std::size_t dim);

    bool try_extend(std::uint64_t row);
    bool try_extend(std::span<const Element> row);
    bool contains(std::uint64_t row) const { return reduce(row) == 0; }

    std::size_t size() const { return size_; }
    std::size_t dim() const { return dim_; }
    bool full() const { return size_ == dim_; }

private:
    std::uint64_t reduce(std::uint64_t row) const;

    std::size_t dim_;
    std::size_t size_ = 0;
    std::array<std::uint64_t, 64> by_pivot_{};  // by_pivot_[b] has top bit b, or 0
};

/// Linear-independence tracker dispatching to Gf2Basis for q = 2.
class BasisBuilder {
public:
    BasisBuilder(PrimeField field, std::size_t dim, Backend backend = Backend::automatic);

    bool try_extend(std::span<const Element> row);
    // Row given as a word index (big-endian base q).
    bool try_extend_index(WordIndex row);

    std::size_t size() const;
    bool full() const { return size() == dim_; }

private:
    PrimeField field_;
    std::size_t dim_;
    bool packed_;
    Gf2Basis gf2_;
    EchelonBasis generic_;
    FieldVector scratch_;
};

bool try_extend_basis(EchelonBasis& basis, std::span<const Element> row);

// Gauss-Jordan inverse; throws SingularMatrix (or DimensionError if not square).
FieldMatrix invert(const FieldMatrix& m);

// Uniform over GL(d, q) by rejection. With `nontrivial`, monomial matrices
// (which include the identity and all permutations) are rejected too.
FieldMatrix random_invertible(std::size_t d, const PrimeField& field, Rng& rng,
                              bool nontrivial = false);

// Exactly one nonzero entry in every row and every column.
bool is_monomial(const FieldMatrix& m);

// |GL(d, q)| = prod_{k<d} (q^d - q^k), as a double (may be huge).
double invertible_count(std::size_t d, std::uint32_t q);

}  // namespace fica
