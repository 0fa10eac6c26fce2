#pragma once

#include <stdexcept>
#include <string>

namespace dyadtree {

// Malformed or inconsistent input data (CSV rows, model files, dimension
// mismatches between a model and the points it is applied to).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad flag combinations or unsupported configurations requested by a caller.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace dyadtree
