#ifndef TKTP_ERRORS_HPP
#define TKTP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tktp {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input shorter than the operation can work with (n < 2 and friends).
struct SizeError : Error {
    using Error::Error;
};

// Invalid argument values: duplicate ids, non-monotone tau, domain mismatches.
struct ArgumentError : Error {
    using Error::Error;
};

// Inputs that are formally valid but statistically degenerate (zero variance).
struct DegenerateInputError : Error {
    using Error::Error;
};

// Malformed external data (CSV parse failures, bad headers).
struct DataError : Error {
    DataError(const std::string& msg, long row = -1)
        : Error(row >= 0 ? msg + " (row " + std::to_string(row) + ")" : msg), row_(row) {}
    long row() const { return row_; }

  private:
    long row_;
};

// Too few usable observations after alignment/masking.
struct InsufficientDataError : Error {
    using Error::Error;
};

// Internal invariant violation; indicates a bug, not bad input.
struct InternalError : Error {
    using Error::Error;
};

}  // namespace tktp

#endif
