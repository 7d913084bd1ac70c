#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fica/gf.hpp"
#include "fica/ica.hpp"
#include "fica/kernels.hpp"
#include "fica/pmf.hpp"

namespace fica {

// Adaptive add-1/2 estimator over q symbols. Frequencies are kept doubled
// (2c + 1) so every update is integral; the total is halved past 2^24.
class KTModel {
public:
    static constexpr std::uint64_t kMaxTotal = std::uint64_t{1} << 24;

    explicit KTModel(std::uint32_t q);

    std::uint32_t q() const { return q_; }
    std::uint64_t total() const { return total_; }
    std::uint64_t frequency(Element s) const { return freq_[s]; }
    // Sum of frequencies of symbols below s.
    std::uint64_t cumulative(Element s) const;
    // Symbol whose cumulative interval contains target (target < total()).
    Element find(std::uint64_t target) const;
    void update(Element s);

private:
    void rebuild();

    std::uint32_t q_;
    std::uint64_t total_ = 0;
    std::vector<std::uint32_t> freq_;
    std::vector<std::uint64_t> tree_;  // Fenwick tree over freq_
};

struct EncodedStream {
    std::vector<std::uint8_t> bytes;  // MSB-first, zero padded
    std::uint64_t bits = 0;           // exact length before padding
};

// Adaptive KT arithmetic coding of one i.i.d.-modelled component.
EncodedStream encode_component(std::span<const Element> symbols, std::uint32_t q);
// Throws TruncationError when decoding runs well past the stream end.
std::vector<Element> decode_component(std::span<const std::uint8_t> bytes, std::uint32_t q,
                                      std::uint64_t n);

enum class TransformMode { none, glica, bloglica };

struct CompressOptions {
    TransformMode mode = TransformMode::glica;
    std::size_t blocks = 2;
    std::size_t max_iterations = 50;
    double epsilon = 1e-12;
    std::uint64_t seed = 1;
    Execution exec = Execution::parallel;
};

/// Header: "FICA", version, q (u16), d (u16), n (u64), transform flag (u8), then
/// the transform section, then d streams each prefixed by a u32 byte length.
/// All integers little endian.
///   flag 0: no transform
///   flag 1: dense W as one base-q integer (entry (0,0) least significant)
///   flag 2: b (u16), stage count (u16), per stage the b blocks packed like
///           flag 1 followed by the permutation at ceil(log2 d) bits per entry
struct CompressedBlob {
    static constexpr std::uint8_t kVersion = 1;
    static constexpr std::uint8_t kNoTransform = 0;
    static constexpr std::uint8_t kDense = 1;
    static constexpr std::uint8_t kStaged = 2;

    std::uint32_t q = 2;
    std::size_t d = 0;
    std::uint64_t n = 0;
    std::uint8_t transform_flag = kNoTransform;
    std::vector<FieldMatrix> dense;  // one matrix when flag 1
    std::size_t blocks = 1;          // flag 2
    std::vector<BlockStage> stages;  // flag 2
    std::vector<std::vector<std::uint8_t>> streams;

    // Effective W (identity for flag 0).
    FieldMatrix transform() const;

    std::vector<std::uint8_t> serialize() const;
    std::size_t serialized_size() const;
    std::size_t stream_bytes() const;
    // Throws FormatError on a malformed blob, TruncationError when it ends early.
    static CompressedBlob parse(std::span<const std::uint8_t> bytes);
};

// Bytes used by a dense k-entry base-q packing: ceil(bitlen(q^k - 1) / 8).
std::size_t packed_matrix_bytes(std::uint32_t q, std::size_t entries);
std::size_t permutation_bytes(std::size_t d);

CompressedBlob compress(const SampleSet& samples, const CompressOptions& options = {});
SampleSet decompress(const CompressedBlob& blob);

struct RateReport {
    std::string scheme;
    std::uint64_t n = 0;
    double model_bits = 0.0;    // matrix, header, or dictionary
    double payload_bits = 0.0;
    double total_bits = 0.0;    // model_bits + payload_bits
    double ideal_payload_bits = 0.0;  // n * H_emp of what the payload codes

    double bits_per_symbol() const { return n ? total_bits / static_cast<double>(n) : 0.0; }
};

// Byte-exact accounting of a blob: total = serialized size * 8.
RateReport blob_rate(const CompressedBlob& blob, std::string scheme);

enum class DictionaryModel {
    per_symbol,  // n_0 * d bits
    canonical,   // n_0, a length-field width, then (word, code length) pairs
};

// Huffman code over the observed words. payload_bits is the summed codeword
// length; ideal_payload_bits is n * H_emp. One distinct word costs 1 bit each.
RateReport huffman_dictionary_rate(const SampleSet& samples,
                                   DictionaryModel model = DictionaryModel::per_symbol);

// Huffman code lengths for the given positive counts.
std::vector<std::uint32_t> huffman_code_lengths(std::span<const std::uint64_t> counts);

// n * sum_j H_emp(X_j) plus 0.5 (q - 1) log2 n per component as model bits.
RateReport marginal_rate_no_transform(const SampleSet& samples);

}  // namespace fica
