#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

// Data-parallel inner loops. Every kernel has a serial reference and an
// OpenMP variant that performs the same floating-point operations in the same
// per-element order, so the two agree bit for bit.

namespace fica {

enum class Execution { serial, parallel };

// Unnormalized in-place Walsh-Hadamard transform; data.size() must be a power
// of two. Coefficient at mask r is sum_x data[x] * (-1)^popcount(r & x).
void walsh_hadamard(std::span<double> data, Execution exec = Execution::parallel);

// Distribution of every linear form over Z_q^d.
//
// Input: probs of length q^d in big-endian word order. Output: q^d * q values,
// out[r * q + a] = sum over x with <r, x> = a (mod q) of probs[x]. Built one
// coordinate at a time (each pass turns an x_j axis into an r_j axis), so the
// cost is O(d * q^(d+2)) and only additions of non-negative terms are used.
std::vector<double> modular_sum_transform(std::span<const double> probs, std::uint32_t q,
                                          std::size_t d, Execution exec = Execution::parallel);

// Naive reference for the above: O(d * q^(2d)).
std::vector<double> modular_sum_naive(std::span<const double> probs, std::uint32_t q,
                                      std::size_t d, Execution exec = Execution::parallel);

}  // namespace fica
