#pragma once

#include <stdexcept>
#include <string>

namespace casper {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad caller input: malformed files, out-of-range parameters, empty inputs.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A responder or classifier was queried (or built) with no training data.
class Untrained : public Error {
public:
    using Error::Error;
};

/// Operation not allowed in the session's current state.
class SessionClosed : public Error {
public:
    SessionClosed() : Error("session closed") {}
};

class NoPendingRecommendation : public Error {
public:
    NoPendingRecommendation() : Error("no pending recommendation") {}
    explicit NoPendingRecommendation(const std::string& what) : Error(what) {}
};

} // namespace casper
