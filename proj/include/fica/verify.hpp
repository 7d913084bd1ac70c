#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace fica {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double runtime_s = 0.0;
};

CriterionResult verify_source_recovery(std::uint64_t seed = 1);
CriterionResult verify_sandwich(std::uint64_t seed = 1);
CriterionResult verify_row_draws(std::uint64_t seed = 1);
CriterionResult verify_order_permutation(std::uint64_t seed = 1);
CriterionResult verify_identity_average(std::uint64_t seed = 1);
CriterionResult verify_simplex_entropy(std::uint64_t seed = 1);
CriterionResult verify_fast_path(std::uint64_t seed = 1);
CriterionResult verify_compression(std::uint64_t seed = 1);
CriterionResult verify_properties(std::uint64_t seed = 1);

// Runs the criteria whose ids are listed (all when empty), printing one
// "[PASS]"/"[FAIL]" line each as it finishes.
std::vector<CriterionResult> run_verification(std::ostream& log, const std::vector<int>& ids = {},
                                              std::uint64_t seed = 1);

std::string format_result(const CriterionResult& r);

}  // namespace fica
