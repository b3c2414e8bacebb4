#pragma once

#include <string>
#include <vector>

namespace weylmod {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

inline constexpr int acceptance_criteria = 10;

CriterionResult run_criterion(int id);
// All criteria when only is empty.
std::vector<CriterionResult> run_acceptance(const std::vector<int>& only = {});
// "PASS [id] name: detail (t s)".
std::string format_result(const CriterionResult& r);

}  // namespace weylmod
