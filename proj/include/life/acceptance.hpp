// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>
#include <vector>

namespace life {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::vector<std::string> details;  // one line per checked cell; failures start with "FAIL"
};

// The built-in regression table, criteria 1..10.
CriterionResult check_criterion(int id);
std::vector<CriterionResult> run_acceptance();

}  // namespace life
