#pragma once

#include <stdexcept>
#include <string>

namespace niceldc {

/// Caller violated an operation's precondition (bad argument, wrong domain).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The requested object provably does not exist (no dlog, no dependency).
class NotFoundError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An explicit resource guard refused the request.
class ResourceLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A randomized search ran out of budget without producing a verified result.
class SearchExhaustedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace niceldc
