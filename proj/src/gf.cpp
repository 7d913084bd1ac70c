#include "fica/gf.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "fica/error.hpp"

namespace fica {

bool is_prime(std::uint32_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint32_t f = 3; f * f <= n; f += 2)
        if (n % f == 0) return false;
    return true;
}

PrimeField::PrimeField(std::uint32_t q) : q_(q) {
    if (q > std::numeric_limits<Element>::max() || !is_prime(q))
        throw DomainError("field order must be a prime below 65536, got " + std::to_string(q));
}

Element PrimeField::inverse(Element a) const {
    if (a >= q_) throw DomainError("element out of range");
    if (a == 0) throw NoInverse("zero has no multiplicative inverse");
    // Bezout: find s with s*a = 1 (mod q).
    std::int64_t old_r = a, r = q_;
    std::int64_t old_s = 1, s = 0;
    while (r != 0) {
        const std::int64_t quot = old_r / r;
        old_r -= quot * r;
        std::swap(old_r, r);
        old_s -= quot * s;
        std::swap(old_s, s);
    }
    std::int64_t inv = old_s % static_cast<std::int64_t>(q_);
    if (inv < 0) inv += q_;
    return static_cast<Element>(inv);
}

Element field_inverse(Element a, const PrimeField& field) { return field.inverse(a); }

WordIndex encode_word(std::span<const Element> x, std::uint32_t q) {
    WordIndex idx = 0;
    for (Element v : x) idx = idx * q + v;
    return idx;
}

void decode_word(WordIndex index, std::uint32_t q, std::span<Element> out) {
    for (std::size_t j = out.size(); j-- > 0;) {
        out[j] = static_cast<Element>(index % q);
        index /= q;
    }
}

FieldVector decode_word(WordIndex index, std::uint32_t q, std::size_t d) {
    FieldVector v(d);
    decode_word(index, q, std::span<Element>(v));
    return v;
}

std::uint64_t checked_power(std::uint32_t q, std::size_t d, double max_log2) {
    if (static_cast<double>(d) * std::log2(static_cast<double>(q)) > max_log2 + 1e-9)
        throw CapacityError("q^d = " + std::to_string(q) + "^" + std::to_string(d) +
                            " exceeds 2^" + std::to_string(max_log2));
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < d; ++i) r *= q;
    return r;
}

FieldMatrix::FieldMatrix(PrimeField field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

FieldMatrix FieldMatrix::identity(PrimeField field, std::size_t d) {
    FieldMatrix m(field, d, d);
    for (std::size_t i = 0; i < d; ++i) m.data_[i * d + i] = 1;
    return m;
}

FieldMatrix FieldMatrix::from_rows(PrimeField field, const std::vector<FieldVector>& rows) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    FieldMatrix m(field, rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) throw DimensionError("ragged matrix rows");
        for (std::size_t c = 0; c < cols; ++c) m.set(r, c, rows[r][c]);
    }
    return m;
}

void FieldMatrix::set(std::size_t r, std::size_t c, Element v) {
    if (r >= rows_ || c >= cols_) throw DimensionError("matrix index out of range");
    if (v >= field_.order()) throw DomainError("matrix entry out of field range");
    data_[r * cols_ + c] = v;
}

bool FieldMatrix::is_identity() const {
    if (!square()) return false;
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            if ((*this)(r, c) != (r == c ? 1 : 0)) return false;
    return true;
}

std::ostream& operator<<(std::ostream& os, const FieldMatrix& m) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) os << (c ? " " : "") << m(r, c);
        os << '\n';
    }
    return os;
}

FieldMatrix multiply(const FieldMatrix& a, const FieldMatrix& b) {
    if (a.cols() != b.rows() || !(a.field() == b.field()))
        throw DimensionError("matrix product shape mismatch");
    const auto q = a.field().order();
    FieldMatrix out(a.field(), a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            std::uint64_t acc = 0;
            for (std::size_t k = 0; k < a.cols(); ++k) acc += std::uint64_t{a(i, k)} * b(k, j);
            out.set(i, j, static_cast<Element>(acc % q));
        }
    return out;
}

FieldVector apply(const FieldMatrix& m, std::span<const Element> x) {
    if (x.size() != m.cols()) throw DimensionError("matrix-vector shape mismatch");
    const auto q = m.field().order();
    FieldVector y(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        std::uint64_t acc = 0;
        for (std::size_t k = 0; k < m.cols(); ++k) acc += std::uint64_t{m(i, k)} * x[k];
        y[i] = static_cast<Element>(acc % q);
    }
    return y;
}

// ---------------------------------------------------------------------------

EchelonBasis::EchelonBasis(PrimeField field, std::size_t dim) : field_(field), dim_(dim) {}

void EchelonBasis::reduce(std::span<Element> row) const {
    for (std::size_t i = 0; i < pivots_.size(); ++i) {
        const Element f = row[pivots_[i]];
        if (f == 0) continue;
        const Element* b = rows_.data() + i * dim_;
        for (std::size_t c = 0; c < dim_; ++c)
            if (b[c]) row[c] = field_.sub(row[c], field_.mul(f, b[c]));
    }
}

bool EchelonBasis::try_extend(std::span<const Element> row) {
    if (row.size() != dim_) throw DimensionError("row length does not match basis dimension");
    FieldVector r(row.begin(), row.end());
    for (Element v : r)
        if (v >= field_.order()) throw DomainError("row entry out of field range");
    reduce(r);
    std::size_t pivot = 0;
    while (pivot < dim_ && r[pivot] == 0) ++pivot;
    if (pivot == dim_) return false;
    const Element inv = field_.inverse(r[pivot]);
    for (auto& v : r) v = field_.mul(v, inv);
    rows_.insert(rows_.end(), r.begin(), r.end());
    pivots_.push_back(pivot);
    return true;
}

bool EchelonBasis::contains(std::span<const Element> row) const {
    if (row.size() != dim_) throw DimensionError("row length does not match basis dimension");
    FieldVector r(row.begin(), row.end());
    reduce(r);
    for (Element v : r)
        if (v) return false;
    return true;
}

Gf2Basis::Gf2Basis(std::size_t dim) : dim_(dim) {
    if (dim > 64) throw DimensionError("packed GF(2) basis supports at most 64 columns");
}

std::uint64_t Gf2Basis::reduce(std::uint64_t row) const {
    while (row) {
        const int top = 63 - std::countl_zero(row);
        const std::uint64_t b = by_pivot_[static_cast<std::size_t>(top)];
        if (!b) return row;
        row ^= b;
    }
    return 0;
}

bool Gf2Basis::try_extend(std::uint64_t row) {
    if (dim_ < 64 && (row >> dim_) != 0) throw DimensionError("row wider than basis dimension");
    row = reduce(row);
    if (!row) return false;
    by_pivot_[static_cast<std::size_t>(63 - std::countl_zero(row))] = row;
    ++size_;
    return true;
}

bool Gf2Basis::try_extend(std::span<const Element> row) {
    if (row.size() != dim_) throw DimensionError("row length does not match basis dimension");
    for (Element v : row)
        if (v > 1) throw DomainError("row entry out of field range");
    return try_extend(encode_word(row, 2));
}

BasisBuilder::BasisBuilder(PrimeField field, std::size_t dim, Backend backend)
    : field_(field),
      dim_(dim),
      packed_(field.is_binary() && dim <= 64 && backend == Backend::automatic),
      gf2_(packed_ ? dim : 0),
      generic_(field, packed_ ? 0 : dim),
      scratch_(dim) {}

bool BasisBuilder::try_extend(std::span<const Element> row) {
    return packed_ ? gf2_.try_extend(row) : generic_.try_extend(row);
}

bool BasisBuilder::try_extend_index(WordIndex row) {
    if (packed_) return gf2_.try_extend(row);
    decode_word(row, field_.order(), std::span<Element>(scratch_));
    return generic_.try_extend(scratch_);
}

std::size_t BasisBuilder::size() const { return packed_ ? gf2_.size() : generic_.size(); }

bool try_extend_basis(EchelonBasis& basis, std::span<const Element> row) {
    return basis.try_extend(row);
}

std::size_t rank(const FieldMatrix& m, Backend backend) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    BasisBuilder basis(m.field(), m.cols(), backend);
    for (std::size_t r = 0; r < m.rows() && !basis.full(); ++r) basis.try_extend(m.row(r));
    return basis.size();
}

FieldMatrix invert(const FieldMatrix& m) {
    if (!m.square()) throw DimensionError("only square matrices are invertible");
    const auto& f = m.field();
    const std::size_t d = m.rows();
    // Augmented [M | I], reduced in place.
    std::vector<FieldVector> aug(d, FieldVector(2 * d, 0));
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) aug[r][c] = m(r, c);
        aug[r][d + r] = 1;
    }
    for (std::size_t col = 0; col < d; ++col) {
        std::size_t piv = col;
        while (piv < d && aug[piv][col] == 0) ++piv;
        if (piv == d) throw SingularMatrix("matrix is singular over GF(" + std::to_string(f.order()) + ")");
        std::swap(aug[piv], aug[col]);
        const Element inv = f.inverse(aug[col][col]);
        for (auto& v : aug[col]) v = f.mul(v, inv);
        for (std::size_t r = 0; r < d; ++r) {
            if (r == col || aug[r][col] == 0) continue;
            const Element factor = aug[r][col];
            for (std::size_t c = 0; c < 2 * d; ++c)
                aug[r][c] = f.sub(aug[r][c], f.mul(factor, aug[col][c]));
        }
    }
    FieldMatrix out(f, d, d);
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) out.set(r, c, aug[r][d + c]);
    return out;
}

bool is_monomial(const FieldMatrix& m) {
    if (!m.square()) return false;
    std::vector<int> col_hits(m.cols(), 0);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        int row_hits = 0;
        for (std::size_t c = 0; c < m.cols(); ++c)
            if (m(r, c)) {
                ++row_hits;
                ++col_hits[c];
            }
        if (row_hits != 1) return false;
    }
    for (int h : col_hits)
        if (h != 1) return false;
    return true;
}

FieldMatrix random_invertible(std::size_t d, const PrimeField& field, Rng& rng, bool nontrivial) {
    if (d == 0) throw DimensionError("dimension must be at least 1");
    if (nontrivial && d == 1) throw ConfigError("every invertible 1x1 matrix is monomial");
    FieldMatrix m(field, d, d);
    for (;;) {
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < d; ++c)
                m.set(r, c, static_cast<Element>(rng.below(field.order())));
        if (rank(m) != d) continue;
        if (nontrivial && is_monomial(m)) continue;
        return m;
    }
}

double invertible_count(std::size_t d, std::uint32_t q) {
    const double qd = std::pow(static_cast<double>(q), static_cast<double>(d));
    double count = 1.0;
    double qk = 1.0;
    for (std::size_t k = 0; k < d; ++k) {
        count *= qd - qk;
        qk *= q;
    }
    return count;
}

}  // namespace fica
