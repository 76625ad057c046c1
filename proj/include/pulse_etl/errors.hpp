#pragma once

#include <stdexcept>
#include <string>

namespace pulse_etl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A computation overflowed or produced NaN.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Neither pulse sign can drive the state back to zero.
class InsufficientAuthority : public Error {
public:
    using Error::Error;
};

class WindowNotFull : public Error {
public:
    using Error::Error;
};

class RankDeficient : public Error {
public:
    using Error::Error;
};

class BiasUnidentifiable : public Error {
public:
    using Error::Error;
};

class NonInvertibleDiscretization : public Error {
public:
    using Error::Error;
};

/// Invalid scenario or command-line configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace pulse_etl
