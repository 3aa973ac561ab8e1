#pragma once

#include <stdexcept>
#include <string>

namespace qcrit {

// Error taxonomy shared by all modules.  The CLI maps these onto exit codes:
// schema_error -> 1, domain_error -> 2, convergence_error / numerical_error -> 3.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid physical parameters or a formula evaluated outside its validity domain.
struct domain_error : error {
    using error::error;
};

// Malformed configuration / input files (unknown keys, bad grids, bad dimensions).
struct schema_error : error {
    using error::error;
};

// A result failed its convergence or stability diagnostic (cutoff, step size, series tail).
struct convergence_error : error {
    using error::error;
};

// Linear-algebra level failure (eigensolver breakdown, loss of unitarity, ...).
struct numerical_error : error {
    using error::error;
};

} // namespace qcrit
