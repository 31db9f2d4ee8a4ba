#pragma once

#include <stdexcept>
#include <string>

namespace locorth {

/// Malformed input: bad arguments, unparseable files, dimension mismatches.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A configured clique-count, time, size or orbit budget was exhausted.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An invariant that the mathematics guarantees was observed to fail.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace locorth
