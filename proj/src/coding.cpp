#include "fica/coding.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>
#include <queue>
#include <string>

#include "fica/error.hpp"

namespace fica {

namespace {

// ---- arithmetic coder -----------------------------------------------------

constexpr std::uint64_t kTop = 0xFFFFFFFFull;
constexpr std::uint64_t kHalf = 0x80000000ull;
constexpr std::uint64_t kQuarter = 0x40000000ull;
constexpr std::uint64_t kThreeQuarters = 0xC0000000ull;
constexpr std::uint64_t kReadGraceBits = 64;

class BitWriter {
public:
    void put(bool bit) {
        if (bits_ % 8 == 0) bytes_.push_back(0);
        if (bit) bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (bits_ % 8));
        ++bits_;
    }
    std::uint64_t bits() const { return bits_; }
    std::vector<std::uint8_t> take() { return std::move(bytes_); }

private:
    std::vector<std::uint8_t> bytes_;
    std::uint64_t bits_ = 0;
};

class BitReader {
public:
    explicit BitReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}
    std::uint64_t get() {
        const std::uint64_t limit = bytes_.size() * 8;
        if (pos_ >= limit) {
            if (pos_ - limit >= kReadGraceBits) throw TruncationError("arithmetic-coded stream ended early");
            ++pos_;
            return 0;
        }
        const auto bit = (bytes_[pos_ / 8] >> (7 - pos_ % 8)) & 1u;
        ++pos_;
        return bit;
    }

private:
    std::span<const std::uint8_t> bytes_;
    std::uint64_t pos_ = 0;
};

class Encoder {
public:
    void encode(std::uint64_t cum_low, std::uint64_t cum_high, std::uint64_t total) {
        const std::uint64_t range = high_ - low_ + 1;
        high_ = low_ + range * cum_high / total - 1;
        low_ = low_ + range * cum_low / total;
        for (;;) {
            if (high_ < kHalf) {
                emit(false);
            } else if (low_ >= kHalf) {
                emit(true);
                low_ -= kHalf;
                high_ -= kHalf;
            } else if (low_ >= kQuarter && high_ < kThreeQuarters) {
                ++pending_;
                low_ -= kQuarter;
                high_ -= kQuarter;
            } else {
                break;
            }
            low_ <<= 1;
            high_ = (high_ << 1) | 1;
        }
    }

    EncodedStream finish() {
        ++pending_;
        emit(low_ >= kQuarter);
        EncodedStream out;
        out.bits = out_.bits();
        out.bytes = out_.take();
        return out;
    }

private:
    void emit(bool bit) {
        out_.put(bit);
        for (; pending_ > 0; --pending_) out_.put(!bit);
    }

    std::uint64_t low_ = 0;
    std::uint64_t high_ = kTop;
    std::uint64_t pending_ = 0;
    BitWriter out_;
};

class Decoder {
public:
    explicit Decoder(std::span<const std::uint8_t> bytes) : in_(bytes) {
        for (int i = 0; i < 32; ++i) value_ = (value_ << 1) | in_.get();
    }

    Element decode(KTModel& model) {
        const std::uint64_t range = high_ - low_ + 1;
        const std::uint64_t total = model.total();
        const std::uint64_t target = ((value_ - low_ + 1) * total - 1) / range;
        const Element s = model.find(target);
        const std::uint64_t cum_low = model.cumulative(s);
        const std::uint64_t cum_high = cum_low + model.frequency(s);
        high_ = low_ + range * cum_high / total - 1;
        low_ = low_ + range * cum_low / total;
        for (;;) {
            if (high_ < kHalf) {
            } else if (low_ >= kHalf) {
                low_ -= kHalf;
                high_ -= kHalf;
                value_ -= kHalf;
            } else if (low_ >= kQuarter && high_ < kThreeQuarters) {
                low_ -= kQuarter;
                high_ -= kQuarter;
                value_ -= kQuarter;
            } else {
                break;
            }
            low_ <<= 1;
            high_ = (high_ << 1) | 1;
            value_ = (value_ << 1) | in_.get();
        }
        model.update(s);
        return s;
    }

private:
    BitReader in_;
    std::uint64_t low_ = 0;
    std::uint64_t high_ = kTop;
    std::uint64_t value_ = 0;
};

// ---- byte helpers ---------------------------------------------------------

void put_le(std::vector<std::uint8_t>& out, std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

class ByteCursor {
public:
    explicit ByteCursor(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::span<const std::uint8_t> take(std::size_t count) {
        if (bytes_.size() - pos_ < count) throw TruncationError("blob ended early");
        auto out = bytes_.subspan(pos_, count);
        pos_ += count;
        return out;
    }
    std::uint64_t le(int bytes) {
        auto s = take(static_cast<std::size_t>(bytes));
        std::uint64_t v = 0;
        for (int i = bytes - 1; i >= 0; --i) v = (v << 8) | s[static_cast<std::size_t>(i)];
        return v;
    }
    std::size_t remaining() const { return bytes_.size() - pos_; }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

// ---- base-q packing -------------------------------------------------------

using Limbs = std::vector<std::uint32_t>;  // little endian

void mul_add(Limbs& v, std::uint32_t m, std::uint32_t a) {
    std::uint64_t carry = a;
    for (auto& limb : v) {
        const std::uint64_t t = std::uint64_t{limb} * m + carry;
        limb = static_cast<std::uint32_t>(t);
        carry = t >> 32;
    }
    if (carry) v.push_back(static_cast<std::uint32_t>(carry));
}

std::uint32_t div_small(Limbs& v, std::uint32_t m) {
    std::uint64_t rem = 0;
    for (auto it = v.rbegin(); it != v.rend(); ++it) {
        const std::uint64_t t = (rem << 32) | *it;
        *it = static_cast<std::uint32_t>(t / m);
        rem = t % m;
    }
    while (!v.empty() && v.back() == 0) v.pop_back();
    return static_cast<std::uint32_t>(rem);
}

std::vector<std::uint8_t> pack_digits(std::span<const Element> digits, std::uint32_t q) {
    Limbs v;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) mul_add(v, q, *it);
    std::vector<std::uint8_t> out;
    out.reserve(packed_matrix_bytes(q, digits.size()));
    for (auto limb : v) put_le(out, limb, 4);
    out.resize(packed_matrix_bytes(q, digits.size()), 0);
    return out;
}

std::vector<Element> unpack_digits(std::span<const std::uint8_t> bytes, std::uint32_t q,
                                   std::size_t count) {
    Limbs v((bytes.size() + 3) / 4, 0);
    for (std::size_t i = 0; i < bytes.size(); ++i) v[i / 4] |= std::uint32_t{bytes[i]} << (8 * (i % 4));
    while (!v.empty() && v.back() == 0) v.pop_back();
    std::vector<Element> digits(count);
    for (auto& e : digits) e = static_cast<Element>(div_small(v, q));
    if (!v.empty()) throw FormatError("packed matrix exceeds its digit range");
    return digits;
}

std::size_t index_bits(std::size_t d) { return d <= 1 ? 0 : std::bit_width(d - 1); }

std::vector<std::uint8_t> pack_permutation(std::span<const std::size_t> perm) {
    const std::size_t width = index_bits(perm.size());
    std::vector<std::uint8_t> out(permutation_bytes(perm.size()), 0);
    std::size_t bit = 0;
    for (auto p : perm)
        for (std::size_t k = 0; k < width; ++k, ++bit)
            if ((p >> k) & 1u) out[bit / 8] |= static_cast<std::uint8_t>(1u << (bit % 8));
    return out;
}

std::vector<std::size_t> unpack_permutation(std::span<const std::uint8_t> bytes, std::size_t d) {
    const std::size_t width = index_bits(d);
    std::vector<std::size_t> perm(d, 0);
    std::vector<bool> seen(d, false);
    std::size_t bit = 0;
    for (auto& p : perm) {
        for (std::size_t k = 0; k < width; ++k, ++bit)
            if ((bytes[bit / 8] >> (bit % 8)) & 1u) p |= std::size_t{1} << k;
        if (p >= d || seen[p]) throw FormatError("stage permutation is not a permutation");
        seen[p] = true;
    }
    return perm;
}

FieldMatrix unpack_matrix(std::span<const std::uint8_t> bytes, const PrimeField& field, std::size_t k) {
    const auto digits = unpack_digits(bytes, field.order(), k * k);
    FieldMatrix m(field, k, k);
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = 0; c < k; ++c) m.set(r, c, digits[r * k + c]);
    if (rank(m) != k) throw FormatError("stored transform is singular");
    return m;
}

std::size_t stage_bytes(std::uint32_t q, std::size_t d, std::size_t blocks) {
    std::size_t total = permutation_bytes(d);
    for (auto s : block_sizes(d, blocks)) total += packed_matrix_bytes(q, s * s);
    return total;
}

// Distinct rows with their multiplicities.
std::vector<std::uint64_t> row_counts(const SampleSet& s) {
    std::vector<std::size_t> order(s.n());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto less = [&](std::size_t a, std::size_t b) {
        auto ra = s.row(a), rb = s.row(b);
        return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
    };
    std::sort(order.begin(), order.end(), less);
    std::vector<std::uint64_t> counts;
    for (std::size_t k = 0; k < order.size(); ++k) {
        if (k > 0 && !less(order[k - 1], order[k]))
            ++counts.back();
        else
            counts.push_back(1);
    }
    return counts;
}

double symbol_bits(std::uint32_t q) { return std::ceil(std::log2(static_cast<double>(q))); }

}  // namespace

// ---- KT model -------------------------------------------------------------

KTModel::KTModel(std::uint32_t q) : q_(q), freq_(q, 1) {
    if (q < 2) throw DomainError("alphabet needs at least two symbols");
    rebuild();
}

void KTModel::rebuild() {
    tree_.assign(q_ + 1, 0);
    total_ = 0;
    for (std::uint32_t i = 0; i < q_; ++i) {
        total_ += freq_[i];
        for (std::uint32_t k = i + 1; k <= q_; k += k & (~k + 1)) tree_[k] += freq_[i];
    }
}

std::uint64_t KTModel::cumulative(Element s) const {
    std::uint64_t sum = 0;
    for (std::uint32_t k = s; k > 0; k &= k - 1) sum += tree_[k];
    return sum;
}

Element KTModel::find(std::uint64_t target) const {
    std::uint32_t pos = 0;
    for (std::uint32_t step = std::bit_floor(q_); step > 0; step >>= 1) {
        if (pos + step <= q_ && tree_[pos + step] <= target) {
            pos += step;
            target -= tree_[pos];
        }
    }
    return static_cast<Element>(pos);
}

void KTModel::update(Element s) {
    freq_[s] += 2;
    total_ += 2;
    for (std::uint32_t k = std::uint32_t{s} + 1; k <= q_; k += k & (~k + 1)) tree_[k] += 2;
    if (total_ > kMaxTotal) {
        for (auto& f : freq_) f = std::max<std::uint32_t>(1, f / 2);
        rebuild();
    }
}

// ---- component streams ----------------------------------------------------

EncodedStream encode_component(std::span<const Element> symbols, std::uint32_t q) {
    KTModel model(q);
    Encoder enc;
    for (auto s : symbols) {
        if (s >= q) throw DomainError("symbol outside the alphabet");
        const auto low = model.cumulative(s);
        enc.encode(low, low + model.frequency(s), model.total());
        model.update(s);
    }
    return enc.finish();
}

std::vector<Element> decode_component(std::span<const std::uint8_t> bytes, std::uint32_t q,
                                      std::uint64_t n) {
    KTModel model(q);
    Decoder dec(bytes);
    std::vector<Element> out;
    for (std::uint64_t i = 0; i < n; ++i) out.push_back(dec.decode(model));
    return out;
}

// ---- blob -----------------------------------------------------------------

std::size_t packed_matrix_bytes(std::uint32_t q, std::size_t entries) {
    Limbs v{1};
    for (std::size_t i = 0; i < entries; ++i) mul_add(v, q, 0);
    // v = q^k; the largest packed value is q^k - 1.
    for (auto& limb : v) {
        if (limb-- != 0) break;
    }
    while (!v.empty() && v.back() == 0) v.pop_back();
    if (v.empty()) return 0;
    const std::size_t bits = 32 * (v.size() - 1) + std::bit_width(v.back());
    return (bits + 7) / 8;
}

std::size_t permutation_bytes(std::size_t d) { return (d * index_bits(d) + 7) / 8; }

FieldMatrix CompressedBlob::transform() const {
    const PrimeField field(q);
    switch (transform_flag) {
        case kDense:
            return dense.at(0);
        case kStaged:
            return compose_stages(field, d, stages, blocks);
        default:
            return FieldMatrix::identity(field, d);
    }
}

std::size_t CompressedBlob::stream_bytes() const {
    std::size_t total = 0;
    for (const auto& s : streams) total += s.size();
    return total;
}

std::size_t CompressedBlob::serialized_size() const {
    std::size_t total = 4 + 1 + 2 + 2 + 8 + 1;
    if (transform_flag == kDense) total += packed_matrix_bytes(q, d * d);
    if (transform_flag == kStaged) total += 4 + stages.size() * stage_bytes(q, d, blocks);
    return total + 4 * streams.size() + stream_bytes();
}

std::vector<std::uint8_t> CompressedBlob::serialize() const {
    if (streams.size() != d) throw DimensionError("blob needs one stream per component");
    std::vector<std::uint8_t> out{'F', 'I', 'C', 'A', kVersion};
    put_le(out, q, 2);
    put_le(out, d, 2);
    put_le(out, n, 8);
    out.push_back(transform_flag);
    if (transform_flag == kDense) {
        const auto packed = pack_digits(dense.at(0).data(), q);
        out.insert(out.end(), packed.begin(), packed.end());
    } else if (transform_flag == kStaged) {
        put_le(out, blocks, 2);
        put_le(out, stages.size(), 2);
        for (const auto& stage : stages) {
            for (const auto& b : stage.blocks) {
                const auto packed = pack_digits(b.data(), q);
                out.insert(out.end(), packed.begin(), packed.end());
            }
            const auto perm = pack_permutation(stage.perm);
            out.insert(out.end(), perm.begin(), perm.end());
        }
    }
    for (const auto& s : streams) {
        put_le(out, s.size(), 4);
        out.insert(out.end(), s.begin(), s.end());
    }
    return out;
}

namespace {

FieldMatrix take_matrix(ByteCursor& in, const PrimeField& field, std::size_t k) {
    // Cheap lower bound on the packed size, checked before the exact bignum count.
    const double entries = static_cast<double>(k) * static_cast<double>(k);
    if (entries * std::log2(static_cast<double>(field.order())) / 8.0 > static_cast<double>(in.remaining()) + 1.0)
        throw TruncationError("blob ended early");
    return unpack_matrix(in.take(packed_matrix_bytes(field.order(), k * k)), field, k);
}

}  // namespace

CompressedBlob CompressedBlob::parse(std::span<const std::uint8_t> bytes) {
    ByteCursor in(bytes);
    const auto magic = in.take(4);
    if (std::memcmp(magic.data(), "FICA", 4) != 0) throw FormatError("bad magic");
    if (in.le(1) != kVersion) throw FormatError("unsupported blob version");

    CompressedBlob blob;
    blob.q = static_cast<std::uint32_t>(in.le(2));
    blob.d = static_cast<std::size_t>(in.le(2));
    blob.n = in.le(8);
    blob.transform_flag = static_cast<std::uint8_t>(in.le(1));
    if (!is_prime(blob.q)) throw FormatError("field order is not prime");
    if (blob.d == 0) throw FormatError("dimension must be positive");
    const PrimeField field(blob.q);

    switch (blob.transform_flag) {
        case kNoTransform:
            break;
        case kDense:
            blob.dense.push_back(take_matrix(in, field, blob.d));
            break;
        case kStaged: {
            blob.blocks = static_cast<std::size_t>(in.le(2));
            if (blob.blocks < 1 || blob.blocks > blob.d) throw FormatError("bad block count");
            const auto count = static_cast<std::size_t>(in.le(2));
            const auto sizes = block_sizes(blob.d, blob.blocks);
            for (std::size_t t = 0; t < count; ++t) {
                BlockStage stage;
                for (auto s : sizes)
                    stage.blocks.push_back(take_matrix(in, field, s));
                stage.perm = unpack_permutation(in.take(permutation_bytes(blob.d)), blob.d);
                blob.stages.push_back(std::move(stage));
            }
            break;
        }
        default:
            throw FormatError("unknown transform flag");
    }

    for (std::size_t j = 0; j < blob.d; ++j) {
        const auto len = static_cast<std::size_t>(in.le(4));
        const auto s = in.take(len);
        blob.streams.emplace_back(s.begin(), s.end());
    }
    if (in.remaining() != 0) throw FormatError("trailing bytes after the last stream");
    return blob;
}

CompressedBlob compress(const SampleSet& samples, const CompressOptions& options) {
    if (samples.n() == 0) throw DomainError("nothing to compress");
    const auto q = samples.q();
    const auto d = samples.d();
    const PrimeField field(q);

    CompressedBlob blob;
    blob.q = q;
    blob.d = d;
    blob.n = samples.n();

    FieldMatrix w = FieldMatrix::identity(field, d);
    switch (options.mode) {
        case TransformMode::none:
            break;
        case TransformMode::glica:
            w = glica(samples, {false, options.exec}).w;
            blob.transform_flag = CompressedBlob::kDense;
            blob.dense.push_back(w);
            break;
        case TransformMode::bloglica: {
            BloglicaConfig cfg{options.blocks, options.max_iterations, options.epsilon, options.seed};
            auto res = bloglica(samples, cfg);
            w = res.result.w;
            const std::size_t staged = 4 + res.stages.size() * stage_bytes(q, d, options.blocks);
            if (staged <= packed_matrix_bytes(q, d * d)) {
                blob.transform_flag = CompressedBlob::kStaged;
                blob.blocks = options.blocks;
                blob.stages = std::move(res.stages);
            } else {
                blob.transform_flag = CompressedBlob::kDense;
                blob.dense.push_back(w);
            }
            break;
        }
    }

    const SampleSet y = options.mode == TransformMode::none ? samples : transform_samples(samples, w);
    blob.streams.assign(d, {});
    const auto dd = static_cast<std::int64_t>(d);
#pragma omp parallel for schedule(dynamic) if (options.exec == Execution::parallel)
    for (std::int64_t j = 0; j < dd; ++j) {
        const auto col = y.column(static_cast<std::size_t>(j));
        blob.streams[static_cast<std::size_t>(j)] = encode_component(col, q).bytes;
    }
    return blob;
}

SampleSet decompress(const CompressedBlob& blob) {
    if (blob.streams.size() != blob.d) throw FormatError("blob needs one stream per component");
    const auto d = blob.d;
    if (blob.n > std::numeric_limits<std::size_t>::max() / sizeof(Element) / d)
        throw CapacityError("sample count does not fit in memory");
    const auto n = static_cast<std::size_t>(blob.n);
    std::vector<std::vector<Element>> cols(d);
    for (std::size_t j = 0; j < d; ++j) cols[j] = decode_component(blob.streams[j], blob.q, blob.n);

    std::vector<Element> data(n * d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) data[i * d + j] = cols[j][i];
    SampleSet y(blob.q, d, std::move(data));
    if (blob.transform_flag == CompressedBlob::kNoTransform) return y;
    try {
        return transform_samples(y, invert(blob.transform()));
    } catch (const SingularMatrix&) {
        throw FormatError("stored transform is singular");
    }
}

// ---- rates ----------------------------------------------------------------

RateReport blob_rate(const CompressedBlob& blob, std::string scheme) {
    RateReport r;
    r.scheme = std::move(scheme);
    r.n = blob.n;
    r.payload_bits = 8.0 * static_cast<double>(blob.stream_bytes());
    r.total_bits = 8.0 * static_cast<double>(blob.serialized_size());
    r.model_bits = r.total_bits - r.payload_bits;
    return r;
}

std::vector<std::uint32_t> huffman_code_lengths(std::span<const std::uint64_t> counts) {
    const std::size_t m = counts.size();
    if (m == 0) return {};
    if (m == 1) return {1};
    using Node = std::pair<std::uint64_t, std::size_t>;  // (weight, id)
    std::priority_queue<Node, std::vector<Node>, std::greater<>> heap;
    std::vector<std::size_t> parent(2 * m - 1, 0);
    for (std::size_t i = 0; i < m; ++i) heap.emplace(counts[i], i);
    std::size_t next = m;
    while (heap.size() > 1) {
        const auto a = heap.top();
        heap.pop();
        const auto b = heap.top();
        heap.pop();
        parent[a.second] = parent[b.second] = next;
        heap.emplace(a.first + b.first, next++);
    }
    std::vector<std::uint32_t> depth(2 * m - 1, 0);
    for (std::size_t k = 2 * m - 2; k-- > 0;) depth[k] = depth[parent[k]] + 1;
    return {depth.begin(), depth.begin() + static_cast<std::ptrdiff_t>(m)};
}

RateReport huffman_dictionary_rate(const SampleSet& samples, DictionaryModel model) {
    const auto counts = row_counts(samples);
    const auto lengths = huffman_code_lengths(counts);
    RateReport r;
    r.scheme = model == DictionaryModel::per_symbol ? "huffman" : "huffman-canonical";
    r.n = samples.n();
    for (std::size_t i = 0; i < counts.size(); ++i)
        r.payload_bits += static_cast<double>(counts[i]) * lengths[i];
    r.ideal_payload_bits = static_cast<double>(r.n) * entropy_from_counts(counts);
    const double n0 = static_cast<double>(counts.size());
    const double word_bits = static_cast<double>(samples.d()) * symbol_bits(samples.q());
    if (model == DictionaryModel::per_symbol) {
        r.model_bits = n0 * word_bits;
    } else {
        const auto max_len = lengths.empty() ? 0u : *std::max_element(lengths.begin(), lengths.end());
        const double width = static_cast<double>(std::bit_width(max_len));
        r.model_bits = 32.0 + 8.0 + n0 * (word_bits + width);
    }
    r.total_bits = r.model_bits + r.payload_bits;
    return r;
}

RateReport marginal_rate_no_transform(const SampleSet& samples) {
    RateReport r;
    r.scheme = "marginal";
    r.n = samples.n();
    const double n = static_cast<double>(r.n);
    for (std::size_t j = 0; j < samples.d(); ++j) {
        std::vector<std::uint64_t> counts(samples.q(), 0);
        for (auto v : samples.column(j)) ++counts[v];
        r.payload_bits += n * entropy_from_counts(counts);
        if (r.n > 1) r.model_bits += 0.5 * (samples.q() - 1) * std::log2(n);
    }
    r.ideal_payload_bits = r.payload_bits;
    r.total_bits = r.model_bits + r.payload_bits;
    return r;
}

}  // namespace fica
