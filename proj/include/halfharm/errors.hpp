#pragma once

#include <stdexcept>
#include <string>

namespace halfharm {

struct InvalidArgument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DomainViolation : std::domain_error {
    using std::domain_error::domain_error;
};

struct OutOfRange : std::out_of_range {
    using std::out_of_range::out_of_range;
};

struct PreconditionViolation : std::logic_error {
    using std::logic_error::logic_error;
};

struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// winding of sampled data cannot be decided at the current resolution
struct Undersampled : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RefineNeeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace halfharm
