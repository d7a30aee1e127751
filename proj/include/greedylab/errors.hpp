#pragma once

#include <stdexcept>
#include <string>

namespace greedylab {

/** A selection handed to a greedy-sum routine is not t-greedy for its vector. */
class InvalidSelection : public std::runtime_error {
public:
    explicit InvalidSelection(const std::string& what = "invalid selection") : std::runtime_error(what) {}
};

/**
 * A numerically checked inequality that must hold by construction failed.
 * The CLI maps this to exit code 2.
 */
class InvariantViolation : public std::runtime_error {
public:
    explicit InvariantViolation(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace greedylab
