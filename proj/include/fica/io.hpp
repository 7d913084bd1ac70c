#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "fica/gf.hpp"
#include "fica/pmf.hpp"

// Whitespace-separated text formats. Lines starting with '#' are ignored.
//   matrix:  "q d" then d rows of d entries
//   samples: "q d n" then n rows of d entries
//   pmf:     "q d" then q^d probabilities in big-endian word order
// Readers throw FormatError on malformed input.

namespace fica {

FieldMatrix read_matrix(std::istream& in);
void write_matrix(std::ostream& out, const FieldMatrix& m);

SampleSet read_samples(std::istream& in);
void write_samples(std::ostream& out, const SampleSet& s);

JointPMF read_pmf(std::istream& in, double max_log2 = kDefaultCapacityLog2);
void write_pmf(std::ostream& out, const JointPMF& p);

FieldMatrix load_matrix(const std::filesystem::path& path);
void save_matrix(const std::filesystem::path& path, const FieldMatrix& m);
SampleSet load_samples(const std::filesystem::path& path);
void save_samples(const std::filesystem::path& path, const SampleSet& s);
JointPMF load_pmf(const std::filesystem::path& path, double max_log2 = kDefaultCapacityLog2);
void save_pmf(const std::filesystem::path& path, const JointPMF& p);

std::vector<std::uint8_t> load_bytes(const std::filesystem::path& path);
void save_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace fica
