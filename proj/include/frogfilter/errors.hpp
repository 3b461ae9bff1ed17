#pragma once

#include <stdexcept>
#include <string>

namespace frogfilter {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidTransferFunction : public Error { using Error::Error; };
class InvalidGrid : public Error { using Error::Error; };
class InvalidTarget : public Error { using Error::Error; };

/// The denominator vanished on the unit circle somewhere on the grid.
class NonFiniteResponse : public Error { using Error::Error; };

/// A declared pass or stop band holds no grid point.
class EmptyBand : public Error { using Error::Error; };

class LengthMismatch : public Error { using Error::Error; };
class ConfigError : public Error { using Error::Error; };
class InvalidCutoff : public Error { using Error::Error; };
class NoCutoffFound : public Error { using Error::Error; };

class ParseError : public Error { using Error::Error; };

class UnknownKey : public Error {
public:
    explicit UnknownKey(std::string key)
        : Error("unknown configuration key '" + key + "'"), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

class MissingFile : public Error { using Error::Error; };
class SchemaMismatch : public Error { using Error::Error; };

} // namespace frogfilter
