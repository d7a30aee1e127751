// Acceptance suite: one PASS/FAIL line per criterion; nonzero exit if any fails.
// Usage: acceptance [--quick] [--seed N]

#include <cstdlib>
#include <cstring>
#include <iostream>
#include <string>

#include "greedylab/acceptance.hpp"

int main(int argc, char** argv)
{
    greedylab::AcceptanceOptions opts;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--quick") == 0)
            opts.quick = true;
        else if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc)
            opts.seed = std::strtoull(argv[++i], nullptr, 10);
        else {
            std::cerr << "usage: acceptance [--quick] [--seed N]\n";
            return 1;
        }
    }
    bool all = true;
    greedylab::run_acceptance(opts, [&](const greedylab::CriterionResult& r) {
        all = all && r.passed;
        std::cout << (r.passed ? "PASS" : "FAIL") << "  criterion " << r.id << "  " << r.name << "  |  " << r.detail
                  << "  [" << r.seconds << " s]" << std::endl;
    });
    std::cout << (all ? "ALL CRITERIA PASSED" : "SOME CRITERIA FAILED") << std::endl;
    return all ? 0 : 1;
}
