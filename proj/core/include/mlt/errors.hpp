// Copyright 2026 the mlt authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <stdexcept>
#include <string>

namespace mlt {

/// Base class of all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Argument outside the mathematical domain of an operation (pole hit,
/// singular resolvent, parameter out of range).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A matrix exponential produced a non-finite entry.
class OverflowError : public Error {
public:
    using Error::Error;
};

/// Jordan basis is singular or too ill-conditioned to invert.
class SingularBasisError : public Error {
public:
    using Error::Error;
};

/// The matrix Laplace transform does not converge at the requested argument.
class NonconvergentTransformError : public Error {
public:
    using Error::Error;
};

/// An adaptive integral failed to reach the requested tolerance.
class QuadratureError : public Error {
public:
    using Error::Error;
};

/// The integrand tail is not integrable to tolerance. Carries the index of
/// the first row entry whose integral diverged.
class DivergentIntegralError : public Error {
public:
    DivergentIntegralError(const std::string& what, int entry)
        : Error(what), entry_index(entry) {}
    int entry_index;
};

/// A shot-noise moment is infinite. Carries the first divergent order.
class InfiniteMomentError : public Error {
public:
    InfiniteMomentError(const std::string& what, int order)
        : Error(what), order(order) {}
    int order;
};

/// Requested combination of inputs has no supported evaluation path.
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// Malformed or invalid scenario configuration. Carries the JSON path of the
/// offending field when known.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what, std::string field = {})
        : Error(field.empty() ? what : field + ": " + what),
          field_path(std::move(field)) {}
    std::string field_path;
};

/// Malformed call arguments (index out of range and similar).
class ArgumentError : public Error {
public:
    using Error::Error;
};

} // namespace mlt
