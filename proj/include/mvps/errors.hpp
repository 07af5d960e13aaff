#pragma once

#include <stdexcept>
#include <string>

namespace mvps {

// Base class for every failure mode raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ZeroMassError : Error {
    using Error::Error;
};
struct InvalidMeasureError : Error {
    using Error::Error;
};
struct DimensionMismatchError : Error {
    using Error::Error;
};
struct InvalidThetaError : Error {
    using Error::Error;
};
struct UnbalancedInputError : Error {
    using Error::Error;
};
struct InvalidAlphaError : Error {
    using Error::Error;
};
struct NonPositiveEpsError : Error {
    using Error::Error;
};
struct MissingPartitionError : Error {
    using Error::Error;
};
struct UnknownColorError : Error {
    using Error::Error;
};
struct BudgetExceededError : Error {
    using Error::Error;
};
struct InvalidSError : Error {
    using Error::Error;
};

}  // namespace mvps
