#pragma once

#include <string>
#include <vector>

namespace efimov4d::acceptance {

struct CheckResult {
    std::string id;           // e.g. "7a-mu0.3"
    int criterion = 0;        // 1..12
    std::string description;
    bool passed = false;
    double value = 0.0;       // the measured quantity
    double bound = 0.0;       // what it was compared against
    std::string detail;
    double seconds = 0.0;
};

// Every check id in suite order.
std::vector<std::string> check_ids();
bool is_check(const std::string& id);

// Throws std::invalid_argument for an unknown id.
CheckResult run_check(const std::string& id);
// Checks selected by exact id or by criterion number ("7" selects 7a-*, 7b, ...); all when empty.
// Throws std::invalid_argument when a selector matches nothing.
std::vector<CheckResult> run_checks(const std::vector<std::string>& selectors = {});

// "PASS 7a-mu0.3 ..." single line.
std::string format_line(const CheckResult& r);

}  // namespace efimov4d::acceptance
