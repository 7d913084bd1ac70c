#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fica/error.hpp"
#include "fica/ica.hpp"
#include "fica/random.hpp"

namespace fica {

namespace {

// Support points of the current Y with their probabilities. Samples are
// collapsed to distinct records so each iteration costs O(n_0 * d).
struct WeightedPoints {
    std::uint32_t q = 2;
    std::size_t d = 0;
    std::vector<Element> coords;
    std::vector<double> weights;

    std::size_t count() const { return weights.size(); }
    Element* point(std::size_t i) { return coords.data() + i * d; }
    const Element* point(std::size_t i) const { return coords.data() + i * d; }
};

WeightedPoints points_from_pmf(const JointPMF& p) {
    WeightedPoints pts{p.q(), p.d(), {}, {}};
    FieldVector x(p.d());
    for (WordIndex i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) continue;
        decode_word(i, p.q(), std::span<Element>(x));
        pts.coords.insert(pts.coords.end(), x.begin(), x.end());
        pts.weights.push_back(p[i]);
    }
    return pts;
}

WeightedPoints points_from_samples(const SampleSet& s) {
    std::vector<std::size_t> order(s.n());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto less = [&](std::size_t a, std::size_t b) {
        auto ra = s.row(a), rb = s.row(b);
        return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
    };
    std::sort(order.begin(), order.end(), less);
    WeightedPoints pts{s.q(), s.d(), {}, {}};
    const double unit = 1.0 / static_cast<double>(s.n());
    for (std::size_t k = 0; k < order.size(); ++k) {
        if (k > 0 && !less(order[k - 1], order[k])) {
            pts.weights.back() += unit;
            continue;
        }
        auto r = s.row(order[k]);
        pts.coords.insert(pts.coords.end(), r.begin(), r.end());
        pts.weights.push_back(unit);
    }
    return pts;
}

std::vector<double> coordinate_entropies(const WeightedPoints& pts) {
    std::vector<double> law(pts.d * pts.q, 0.0);
    for (std::size_t i = 0; i < pts.count(); ++i) {
        const Element* x = pts.point(i);
        for (std::size_t j = 0; j < pts.d; ++j) law[j * pts.q + x[j]] += pts.weights[i];
    }
    std::vector<double> out(pts.d);
    for (std::size_t j = 0; j < pts.d; ++j)
        out[j] = entropy(std::span<const double>(law.data() + j * pts.q, pts.q));
    return out;
}

WordIndex block_index(const Element* x, std::size_t len, std::uint32_t q) {
    WordIndex idx = 0;
    for (std::size_t k = 0; k < len; ++k) idx = idx * q + x[k];
    return idx;
}

JointPMF block_pmf(const WeightedPoints& pts, std::size_t offset, std::size_t len) {
    std::vector<double> probs(checked_power(pts.q, len, kDefaultCapacityLog2), 0.0);
    for (std::size_t i = 0; i < pts.count(); ++i)
        probs[block_index(pts.point(i) + offset, len, pts.q)] += pts.weights[i];
    // Renormalize so accumulated rounding never trips the pmf validation.
    const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
    for (auto& v : probs) v /= total;
    return {pts.q, len, std::move(probs)};
}

double unit_rows_entropy(const EntropyTable& table) {
    // Unit vector e_j has index q^(len-1-j).
    double total = 0.0;
    std::size_t found = 0;
    for (const auto& e : table.entries()) {
        WordIndex r = e.row;
        while (r % table.q() == 0) r /= table.q();
        if (r == 1) {
            total += e.entropy;
            if (++found == table.d()) break;
        }
    }
    return total;
}

FieldMatrix block_diagonal(const PrimeField& field, std::size_t d, std::span<const FieldMatrix> blocks) {
    FieldMatrix out(field, d, d);
    std::size_t offset = 0;
    for (const auto& b : blocks) {
        for (std::size_t r = 0; r < b.rows(); ++r)
            for (std::size_t c = 0; c < b.cols(); ++c) out.set(offset + r, offset + c, b(r, c));
        offset += b.rows();
    }
    if (offset != d) throw DimensionError("block sizes do not cover the dimension");
    return out;
}

FieldMatrix permutation_matrix(const PrimeField& field, std::span<const std::size_t> perm) {
    FieldMatrix out(field, perm.size(), perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) out.set(i, perm[i], 1);
    return out;
}

BloglicaResult run_bloglica(WeightedPoints pts, const BloglicaConfig& config,
                            std::optional<double> lower_bound) {
    const std::size_t d = pts.d;
    config.validate(d);
    const PrimeField field(pts.q);
    const auto sizes = block_sizes(d, config.blocks);
    std::vector<std::size_t> offsets(sizes.size(), 0);
    std::partial_sum(sizes.begin(), sizes.end() - 1, offsets.begin() + 1);
    for (auto s : sizes) checked_power(pts.q, s, kDefaultCapacityLog2);

    Rng rng(config.seed);
    BloglicaResult out;
    FieldMatrix w = FieldMatrix::identity(field, d);
    auto comp = coordinate_entropies(pts);
    out.trace.push_back(std::accumulate(comp.begin(), comp.end(), 0.0));
    std::size_t last_rows_examined = d;

    for (std::size_t it = 0; it < config.max_iterations; ++it) {
        BlockStage stage;
        bool changed = false;
        std::size_t rows_examined = 0;
        for (std::size_t b = 0; b < sizes.size(); ++b) {
            const auto table = EntropyTable::build(block_pmf(pts, offsets[b], sizes[b]), Execution::serial);
            auto res = glica(table);
            rows_examined += res.rows_examined;
            if (res.objective < unit_rows_entropy(table)) {
                stage.blocks.push_back(std::move(res.w));
                changed = true;
            } else {
                stage.blocks.push_back(FieldMatrix::identity(field, sizes[b]));
            }
        }
        if (!changed) {
            out.trace.push_back(out.trace.back());
            break;
        }
        last_rows_examined = rows_examined;
        stage.perm = config.blocks > 1 ? random_permutation(d, rng) : [&] {
            std::vector<std::size_t> id(d);
            std::iota(id.begin(), id.end(), std::size_t{0});
            return id;
        }();

        // Per-block lookup: block word -> transformed block word.
        std::vector<std::vector<WordIndex>> lookup(sizes.size());
        for (std::size_t b = 0; b < sizes.size(); ++b) {
            const WordIndex cells = checked_power(pts.q, sizes[b]);
            lookup[b].resize(cells);
            for (WordIndex x = 0; x < cells; ++x)
                lookup[b][x] = encode_word(fica::apply(stage.blocks[b], decode_word(x, pts.q, sizes[b])), pts.q);
        }
        FieldVector tmp(d);
        for (std::size_t i = 0; i < pts.count(); ++i) {
            Element* x = pts.point(i);
            for (std::size_t b = 0; b < sizes.size(); ++b) {
                const WordIndex y = lookup[b][block_index(x + offsets[b], sizes[b], pts.q)];
                decode_word(y, pts.q, std::span<Element>(x + offsets[b], sizes[b]));
            }
            for (std::size_t j = 0; j < d; ++j) tmp[j] = x[stage.perm[j]];
            std::copy(tmp.begin(), tmp.end(), x);
        }
        w = multiply(permutation_matrix(field, stage.perm),
                     multiply(block_diagonal(field, d, stage.blocks), w));
        out.stages.push_back(std::move(stage));

        comp = coordinate_entropies(pts);
        const double value = std::accumulate(comp.begin(), comp.end(), 0.0);
        const double previous = out.trace.back();
        out.trace.push_back(value);
        if (previous - value < config.epsilon) break;
    }

    out.result.w = std::move(w);
    out.result.component_entropies = comp;
    out.result.objective = std::accumulate(comp.begin(), comp.end(), 0.0);
    out.result.rows_examined = last_rows_examined;
    out.result.lower_bound = lower_bound;
    return out;
}

// Below this many table cells the full lower bound is cheap enough to report.
constexpr double kBoundLog2 = 16.0;

bool bound_is_cheap(std::uint32_t q, std::size_t d) {
    return static_cast<double>(d) * std::log2(static_cast<double>(q)) <= kBoundLog2;
}

}  // namespace

void BloglicaConfig::validate(std::size_t d) const {
    if (blocks < 1 || blocks > d)
        throw ConfigError("block count must lie in [1, d], got " + std::to_string(blocks));
    if (max_iterations < 1) throw ConfigError("max_iterations must be at least 1");
    if (!(epsilon >= 0.0)) throw ConfigError("epsilon must be non-negative");
}

std::vector<std::size_t> block_sizes(std::size_t d, std::size_t b) {
    if (b < 1 || b > d) throw ConfigError("block count must lie in [1, d]");
    std::vector<std::size_t> sizes(b, d / b);
    for (std::size_t i = 0; i < d % b; ++i) ++sizes[i];
    return sizes;
}

BloglicaResult bloglica(const JointPMF& p, const BloglicaConfig& config) {
    std::optional<double> bound;
    if (bound_is_cheap(p.q(), p.d())) bound = linear_lower_bound(p);
    return run_bloglica(points_from_pmf(p), config, bound);
}

BloglicaResult bloglica(const SampleSet& samples, const BloglicaConfig& config) {
    std::optional<double> bound;
    if (bound_is_cheap(samples.q(), samples.d())) bound = linear_lower_bound(empirical_pmf(samples));
    return run_bloglica(points_from_samples(samples), config, bound);
}

FieldMatrix compose_stages(const PrimeField& field, std::size_t d, std::span<const BlockStage> stages,
                           std::size_t blocks) {
    const auto sizes = block_sizes(d, blocks);
    FieldMatrix w = FieldMatrix::identity(field, d);
    for (const auto& stage : stages) {
        if (stage.blocks.size() != sizes.size() || stage.perm.size() != d)
            throw DimensionError("stage does not match the block layout");
        for (std::size_t b = 0; b < sizes.size(); ++b)
            if (stage.blocks[b].rows() != sizes[b] || !stage.blocks[b].square())
                throw DimensionError("stage block has the wrong size");
        w = multiply(permutation_matrix(field, stage.perm),
                     multiply(block_diagonal(field, d, stage.blocks), w));
    }
    return w;
}

}  // namespace fica
