#pragma once

#include <stdexcept>
#include <string>

namespace clark {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class InvalidPoint : public Error {
public:
    using Error::Error;
};

class InvalidParams : public Error {
public:
    using Error::Error;
};

class EmptyInput : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

class SetupInconsistent : public Error {
public:
    using Error::Error;
};

class OriginMissing : public Error {
public:
    using Error::Error;
};

class NotInGenusFamily : public Error {
public:
    using Error::Error;
};

class NoNegativeCertificate : public Error {
public:
    using Error::Error;
};

class NoCrossing : public Error {
public:
    using Error::Error;
};

class IntegrationError : public Error {
public:
    using Error::Error;
};

/// An internal consistency check failed; indicates a bug rather than bad input.
class InternalError : public Error {
public:
    using Error::Error;
};

/// A computed result failed the verification the operation promises.
class VerificationError : public Error {
public:
    using Error::Error;
};

}  // namespace clark
