// Acceptance suite: one PASS/FAIL line per check. Exit status 0 only if every selected check passes.
//   efimov4d_acceptance                 all checks
//   efimov4d_acceptance --criterion 7b  one check (or a whole criterion by number)
//   efimov4d_acceptance --list          ids only

#include <cstring>
#include <iostream>
#include <string>
#include <vector>

#include "efimov4d/acceptance.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> selectors;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--list") == 0) {
            for (const auto& id : efimov4d::acceptance::check_ids()) std::cout << id << '\n';
            return 0;
        }
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            selectors.emplace_back(argv[++i]);
            continue;
        }
        std::cerr << "usage: " << argv[0] << " [--list] [--criterion ID]...\n";
        return 2;
    }
    std::vector<efimov4d::acceptance::CheckResult> results;
    try {
        results = efimov4d::acceptance::run_checks(selectors);
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << '\n';
        return 2;
    }
    int failed = 0;
    for (const auto& r : results) {
        std::cout << efimov4d::acceptance::format_line(r) << std::endl;
        if (!r.passed) ++failed;
    }
    std::cout << results.size() - failed << "/" << results.size() << " checks passed\n";
    return failed == 0 ? 0 : 1;
}
