// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace vtg {

/// Base of every error the engine raises. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A remote backend could not be reached or kept failing after retries.
class ProviderUnavailable : public Error {
public:
    using Error::Error;
};

/// A replay-only provider (file cache, strict mock) has no entry for the request.
class CacheMiss : public Error {
public:
    using Error::Error;
};

/// An invariant the engine relies on was broken at runtime (e.g. embedding
/// dimension changed mid-run).
class InternalError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

class EvaluationError : public Error {
public:
    using Error::Error;
};

} // namespace vtg
