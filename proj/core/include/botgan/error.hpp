#pragma once

#include <stdexcept>
#include <string>

namespace botgan {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Mismatched dimensions between arrays, layers, checkpoints or datasets.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// NaN/Inf encountered in inputs or gradients.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Input outside an operation's domain (empty sets, single-class labels, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Malformed binary file. Messages carry the byte offset of the failure.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Malformed text input (CSV cells, label values).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration or manifest.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace botgan
