#pragma once

#include <stdexcept>
#include <string>

namespace hyperlab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ArityMismatch : public Error {
public:
    using Error::Error;
};

class UnknownElement : public Error {
public:
    using Error::Error;
};

class EmptyArgument : public Error {
public:
    using Error::Error;
};

/// A formula needed 1_A and the structure has no scalar identity.
class IdentityRequired : public Error {
public:
    explicit IdentityRequired(const std::string& what = "scalar identity 1_A required")
        : Error(what) {}
};

class NotProper : public Error {
public:
    explicit NotProper(const std::string& what = "hyperideal equals the whole carrier")
        : Error(what) {}
};

class DisjointnessViolated : public Error {
public:
    using Error::Error;
};

class NotAHyperideal : public Error {
public:
    using Error::Error;
};

class NotMultiplicative : public Error {
public:
    using Error::Error;
};

class NotAHomomorphism : public Error {
public:
    using Error::Error;
};

class CapacityExceeded : public Error {
public:
    using Error::Error;
};

class UnknownFixture : public Error {
public:
    using Error::Error;
};

/// Problems found while reading a structure document.
class LoadError : public Error {
public:
    enum class Kind { Parse, Schema, MissingKey, Conflict, UnknownName, EmptyValue };

    LoadError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

}  // namespace hyperlab
