#include "fica/ica.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fica/error.hpp"
#include "fica/random.hpp"

namespace fica {

namespace {

// Leading (first nonzero, big-endian) coefficient of a row.
WordIndex most_significant_digit(WordIndex row, std::uint32_t q) {
    WordIndex digit = 0;
    while (row) {
        if (row % q) digit = row % q;
        row /= q;
    }
    return digit;
}

}  // namespace

EntropyTable EntropyTable::build(const JointPMF& p, Execution exec, bool canonical_only) {
    EntropyTable table;
    table.q_ = p.q();
    table.d_ = p.d();
    const auto entropies = all_combination_entropies(p, MarginalStrategy::fast, exec);
    table.entries_.reserve(entropies.size() - 1);
    for (WordIndex r = 1; r < entropies.size(); ++r) {
        if (canonical_only && p.q() > 2 && most_significant_digit(r, p.q()) != 1) continue;
        table.entries_.push_back({entropies[r], r});
    }
    std::sort(table.entries_.begin(), table.entries_.end(), [](const Entry& a, const Entry& b) {
        return a.entropy < b.entropy || (a.entropy == b.entropy && a.row < b.row);
    });
    return table;
}

double linear_lower_bound(const EntropyTable& table) {
    double total = 0.0;
    for (std::size_t i = 0; i < std::min(table.d(), table.size()); ++i) total += table[i].entropy;
    return total;
}

double linear_lower_bound(const JointPMF& p) { return linear_lower_bound(EntropyTable::build(p)); }

LinearICAResult glica(const EntropyTable& table) {
    const PrimeField field(table.q());
    const std::size_t d = table.d();
    BasisBuilder basis(field, d);
    std::vector<FieldVector> rows;
    LinearICAResult result;
    for (std::size_t i = 0; i < table.size() && !basis.full(); ++i) {
        if (!basis.try_extend_index(table[i].row)) continue;
        rows.push_back(table.row(i));
        result.component_entropies.push_back(table[i].entropy);
        result.rows_examined = i + 1;
    }
    // The table spans GF(q)^d, so the scan always reaches full rank.
    result.w = FieldMatrix::from_rows(field, rows);
    result.objective = std::accumulate(result.component_entropies.begin(),
                                       result.component_entropies.end(), 0.0);
    return result;
}

LinearICAResult glica(const JointPMF& p, const GlicaOptions& options) {
    if (options.dedup_scalar_multiples && p.q() > 2) {
        // The reduced table still yields the same objective; the bound needs
        // every row, so it is taken from the full table.
        auto result = glica(EntropyTable::build(p, options.exec, true));
        result.lower_bound = linear_lower_bound(EntropyTable::build(p, options.exec));
        return result;
    }
    const auto table = EntropyTable::build(p, options.exec);
    auto result = glica(table);
    result.lower_bound = linear_lower_bound(table);
    return result;
}

LinearICAResult glica(const SampleSet& samples, const GlicaOptions& options) {
    return glica(empirical_pmf(samples), options);
}

OrderPermResult order_permutation(const JointPMF& p) {
    std::vector<WordIndex> order(p.size());
    std::iota(order.begin(), order.end(), WordIndex{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](WordIndex a, WordIndex b) { return p[a] < p[b]; });
    std::vector<WordIndex> assignment(p.size());
    std::vector<double> out(p.size());
    for (WordIndex i = 0; i < order.size(); ++i) {
        assignment[order[i]] = i;
        out[i] = p[order[i]];
    }
    JointPMF transformed(p.q(), p.d(), std::move(out), 64.0);
    const double objective = marginal_entropy_sum(transformed);
    const double tc = objective - entropy(p.probs());
    return {std::move(assignment), objective, tc, std::move(transformed)};
}

double total_correlation(const JointPMF& p) { return marginal_entropy_sum(p) - entropy(p.probs()); }

OptimalLinearResult brute_force_optimal_linear(const JointPMF& p, double max_matrices) {
    const std::size_t d = p.d();
    const auto q = p.q();
    const double count = invertible_count(d, q);
    if (count > max_matrices)
        throw CapacityError("exhaustive search over " + std::to_string(count) +
                            " invertible matrices exceeds the limit");
    const PrimeField field(q);
    const WordIndex rows_total = checked_power(q, d);

    OptimalLinearResult best;
    bool have_best = false;
    std::vector<WordIndex> chosen(d, 0);
    std::vector<EchelonBasis> bases(d + 1, EchelonBasis(field, d));

    // Depth-first over ordered bases, rows ascending at each position, so the
    // first minimizer found is the lexicographically smallest W.
    auto visit = [&](auto&& self, std::size_t depth) -> void {
        if (depth == d) {
            std::vector<FieldVector> rows;
            for (auto r : chosen) rows.push_back(decode_word(r, q, d));
            auto w = FieldMatrix::from_rows(field, rows);
            const double value = marginal_entropy_sum(transform_pmf(p, w));
            ++best.enumerated;
            if (!have_best || value < best.objective - 1e-12) {
                best.w = std::move(w);
                best.objective = value;
                have_best = true;
            }
            return;
        }
        for (WordIndex r = 1; r < rows_total; ++r) {
            bases[depth + 1] = bases[depth];
            if (!bases[depth + 1].try_extend(decode_word(r, q, d))) continue;
            chosen[depth] = r;
            self(self, depth + 1);
        }
    };
    visit(visit, 0);
    return best;
}

double expected_rows_examined(std::size_t d, std::uint32_t q) {
    const double qd = std::pow(static_cast<double>(q), static_cast<double>(d));
    double total = 0.0, qk = 1.0;
    for (std::size_t k = 0; k < d; ++k) {
        total += qd / (qd - qk);
        qk *= q;
    }
    return total;
}

double RowDrawStats::tail(double threshold) const {
    if (draws.empty()) return 0.0;
    const auto hits = std::count_if(draws.begin(), draws.end(),
                                    [&](std::uint32_t l) { return l >= threshold; });
    return static_cast<double>(hits) / static_cast<double>(draws.size());
}

double RowDrawStats::tail_se(double threshold) const {
    const double p = tail(threshold);
    return std::sqrt(p * (1.0 - p) / static_cast<double>(draws.size()));
}

RowDrawStats row_draw_statistics(std::size_t d, const PrimeField& field, std::size_t trials,
                                 std::uint64_t seed, Execution exec) {
    if (trials == 0) throw ConfigError("row_draw_statistics needs at least one trial");
    const auto q = field.order();
    const WordIndex space = checked_power(q, d);

    RowDrawStats stats;
    stats.d = d;
    stats.q = q;
    stats.draws.assign(trials, 0);
    const auto n_trials = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(static) if (exec == Execution::parallel)
    for (std::int64_t t = 0; t < n_trials; ++t) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
        BasisBuilder basis(field, d);
        std::uint32_t count = 0;
        while (!basis.full()) {
            ++count;
            basis.try_extend_index(rng.below(space));
        }
        stats.draws[static_cast<std::size_t>(t)] = count;
    }

    const double n = static_cast<double>(trials);
    double sum = 0.0;
    for (auto l : stats.draws) sum += l;
    stats.mean = sum / n;
    double m2 = 0.0, m4 = 0.0;
    for (auto l : stats.draws) {
        const double dev = l - stats.mean;
        m2 += dev * dev;
        m4 += dev * dev * dev * dev;
    }
    const double pop_var = m2 / n;
    m4 /= n;
    stats.variance = trials > 1 ? m2 / (n - 1.0) : 0.0;
    stats.mean_se = std::sqrt(stats.variance / n);
    stats.variance_se = trials > 3 ? std::sqrt(std::max(0.0, (m4 - pop_var * pop_var * (n - 3.0) / (n - 1.0)) / n)) : 0.0;

    stats.analytic_mean = expected_rows_examined(d, q);
    const double qd = static_cast<double>(q);
    for (std::size_t k = 1; k <= d; ++k) {
        const double qk = std::pow(qd, static_cast<double>(k));
        stats.analytic_variance += 1.0 / (qk + 1.0 / qk - 2.0);
    }
    stats.analytic_variance_bound =
        qd / ((qd - 1.0) * (qd - 1.0)) + 1.0 / std::pow(qd + 1.0 / qd - 2.0, 2.0);
    return stats;
}

}  // namespace fica
