#pragma once

#include <stdexcept>
#include <string>

namespace dwlab {

/// Base class for numerical failures that are not caller precondition
/// violations (those raise std::invalid_argument / std::domain_error).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Data is not negligible near the edge of the truncated line.
class TruncationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// A root or event was not found inside the admissible time window.
class HorizonError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace dwlab
