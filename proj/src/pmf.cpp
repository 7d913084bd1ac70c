#include "fica/pmf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fica/error.hpp"

namespace fica {

namespace {

double plogp(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

}  // namespace

JointPMF::JointPMF(std::uint32_t q, std::size_t d, std::vector<double> probs, double max_log2)
    : q_(PrimeField(q).order()), d_(d), probs_(std::move(probs)) {
    if (d == 0) throw DimensionError("pmf dimension must be at least 1");
    const std::uint64_t size = checked_power(q, d, max_log2);
    if (probs_.size() != size)
        throw DimensionError("pmf has " + std::to_string(probs_.size()) + " entries, expected q^d = " +
                             std::to_string(size));
    double total = 0.0;
    for (double v : probs_) {
        if (!(v >= 0.0)) throw DomainError("pmf entries must be non-negative");
        total += v;
    }
    if (std::abs(total - 1.0) > 1e-9) throw DomainError("pmf does not sum to 1");
}

JointPMF JointPMF::point_mass(std::uint32_t q, std::size_t d, WordIndex word) {
    std::vector<double> probs(checked_power(q, d, kDefaultCapacityLog2), 0.0);
    probs.at(word) = 1.0;
    return {q, d, std::move(probs)};
}

JointPMF JointPMF::uniform(std::uint32_t q, std::size_t d) {
    const auto size = checked_power(q, d, kDefaultCapacityLog2);
    return {q, d, std::vector<double>(size, 1.0 / static_cast<double>(size))};
}

SampleSet::SampleSet(std::uint32_t q, std::size_t d, std::vector<Element> data)
    : q_(PrimeField(q).order()), d_(d), data_(std::move(data)) {
    if (d == 0) throw DimensionError("sample dimension must be at least 1");
    if (data_.empty() || data_.size() % d != 0)
        throw DimensionError("sample data must hold n >= 1 records of d symbols");
    for (Element v : data_)
        if (v >= q) throw DomainError("sample symbol out of range");
}

SampleSet SampleSet::from_words(std::uint32_t q, std::size_t d, std::span<const WordIndex> words) {
    std::vector<Element> data(words.size() * d);
    for (std::size_t i = 0; i < words.size(); ++i)
        decode_word(words[i], q, std::span<Element>(data.data() + i * d, d));
    return {q, d, std::move(data)};
}

std::vector<Element> SampleSet::column(std::size_t j) const {
    std::vector<Element> out(n());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = data_[i * d_ + j];
    return out;
}

std::size_t SampleSet::distinct_count() const {
    std::vector<std::span<const Element>> rows;
    rows.reserve(n());
    for (std::size_t i = 0; i < n(); ++i) rows.push_back(row(i));
    const auto less = [](auto a, auto b) {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    };
    std::sort(rows.begin(), rows.end(), less);
    std::size_t distinct = 0;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (i == 0 || less(rows[i - 1], rows[i])) ++distinct;
    return distinct;
}

JointPMF empirical_pmf(const SampleSet& samples, double max_log2) {
    const auto size = checked_power(samples.q(), samples.d(), max_log2);
    std::vector<std::uint64_t> counts(size, 0);
    for (std::size_t i = 0; i < samples.n(); ++i) ++counts[samples.word(i)];
    std::vector<double> probs(size);
    const auto n = static_cast<double>(samples.n());
    for (std::uint64_t i = 0; i < size; ++i) probs[i] = static_cast<double>(counts[i]) / n;
    return {samples.q(), samples.d(), std::move(probs), max_log2};
}

double entropy(std::span<const double> p) {
    double h = 0.0;
    for (double v : p) {
        if (v < 0.0) throw DomainError("probability entries must be non-negative");
        h += plogp(v);
    }
    return h;
}

double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("binary entropy parameter outside [0, 1]");
    return plogp(p) + plogp(1.0 - p);
}

double entropy_from_counts(std::span<const std::uint64_t> counts) {
    const double n = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}));
    if (n == 0.0) return 0.0;
    double h = 0.0;
    for (auto c : counts) h += plogp(static_cast<double>(c) / n);
    return h;
}

std::vector<double> combination_marginal(const JointPMF& p, std::span<const Element> r) {
    if (r.size() != p.d()) throw DimensionError("combination row length must equal d");
    const auto q = p.q();
    std::vector<double> out(q, 0.0);
    FieldVector x(p.d(), 0);
    for (std::size_t xi = 0; xi < p.size(); ++xi) {
        std::uint64_t dot = 0;
        for (std::size_t k = 0; k < x.size(); ++k) dot += std::uint64_t{r[k]} * x[k];
        out[dot % q] += p[xi];
        for (std::size_t k = x.size(); k-- > 0;) {
            if (++x[k] < q) break;
            x[k] = 0;
        }
    }
    return out;
}

std::vector<std::vector<double>> coordinate_marginals(const JointPMF& p) {
    const auto q = p.q();
    const std::size_t d = p.d();
    std::vector<std::vector<double>> out(d, std::vector<double>(q, 0.0));
    FieldVector x(d, 0);
    for (std::size_t xi = 0; xi < p.size(); ++xi) {
        for (std::size_t j = 0; j < d; ++j) out[j][x[j]] += p[xi];
        for (std::size_t k = d; k-- > 0;) {
            if (++x[k] < q) break;
            x[k] = 0;
        }
    }
    return out;
}

double marginal_entropy_sum(const JointPMF& p) {
    double total = 0.0;
    for (const auto& m : coordinate_marginals(p)) total += entropy(m);
    return total;
}

std::vector<double> all_combination_entropies(const JointPMF& p, MarginalStrategy strategy,
                                              Execution exec) {
    const auto q = p.q();
    const auto rows = static_cast<std::int64_t>(p.size());
    std::vector<double> out(p.size());

    if (strategy == MarginalStrategy::fast && q == 2) {
        std::vector<double> coeff(p.probs().begin(), p.probs().end());
        walsh_hadamard(coeff, exec);
        // coeff[r] = P(U_r = 0) - P(U_r = 1)
#pragma omp parallel for schedule(static) if (exec == Execution::parallel && rows >= 4096)
        for (std::int64_t r = 0; r < rows; ++r) {
            const double p0 = std::clamp(0.5 * (1.0 + coeff[static_cast<std::size_t>(r)]), 0.0, 1.0);
            out[static_cast<std::size_t>(r)] = binary_entropy(p0);
        }
        out[0] = 0.0;
        return out;
    }

    const std::vector<double> laws = strategy == MarginalStrategy::fast
                                         ? modular_sum_transform(p.probs(), q, p.d(), exec)
                                         : modular_sum_naive(p.probs(), q, p.d(), exec);
    // Rows c*r share one law up to relabeling. Entropies are evaluated on the
    // representative with leading coefficient 1 and copied, so scalar
    // multiples tie exactly.
    const PrimeField field(q);
    const std::size_t d = p.d();
    const auto representative = [&](WordIndex r, FieldVector& x) {
        decode_word(r, q, std::span<Element>(x));
        const auto lead = *std::find_if(x.begin(), x.end(), [](Element v) { return v != 0; });
        if (lead == 1) return r;
        const Element inv = field.inverse(lead);
        for (auto& v : x) v = field.mul(inv, v);
        return encode_word(x, q);
    };
#pragma omp parallel if (exec == Execution::parallel && rows >= 4096)
    {
        FieldVector x(d);
#pragma omp for schedule(static)
        for (std::int64_t r = 1; r < rows; ++r) {
            if (representative(static_cast<WordIndex>(r), x) != static_cast<WordIndex>(r)) continue;
            const auto* law = laws.data() + static_cast<std::size_t>(r) * q;
            double h = 0.0;
            for (std::uint32_t a = 0; a < q; ++a) h += plogp(std::max(law[a], 0.0));
            out[static_cast<std::size_t>(r)] = h;
        }
#pragma omp for schedule(static)
        for (std::int64_t r = 1; r < rows; ++r) {
            const auto rep = representative(static_cast<WordIndex>(r), x);
            if (rep != static_cast<WordIndex>(r)) out[static_cast<std::size_t>(r)] = out[rep];
        }
    }
    out[0] = 0.0;
    return out;
}

JointPMF transform_pmf(const JointPMF& p, const FieldMatrix& w) {
    if (!w.square() || w.rows() != p.d() || w.field().order() != p.q())
        throw DimensionError("transform shape or field does not match pmf");
    if (rank(w) != p.d()) throw SingularMatrix("transform must be invertible");
    std::vector<double> out(p.size(), 0.0);
    FieldVector x(p.d(), 0);
    for (std::size_t xi = 0; xi < p.size(); ++xi) {
        out[encode_word(fica::apply(w, x), p.q())] = p[xi];
        for (std::size_t k = x.size(); k-- > 0;) {
            if (++x[k] < p.q()) break;
            x[k] = 0;
        }
    }
    return {p.q(), p.d(), std::move(out), 64.0};
}

SampleSet transform_samples(const SampleSet& s, const FieldMatrix& w) {
    if (!w.square() || w.rows() != s.d() || w.field().order() != s.q())
        throw DimensionError("transform shape or field does not match samples");
    std::vector<Element> out;
    out.reserve(s.data().size());
    for (std::size_t i = 0; i < s.n(); ++i) {
        const auto y = fica::apply(w, s.row(i));
        out.insert(out.end(), y.begin(), y.end());
    }
    return {s.q(), s.d(), std::move(out)};
}

}  // namespace fica
