#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rqbm {

/// Base class for every error the toolkit raises. Callers at the CLI
/// boundary map any rqbm::Error to exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent space definitions, unknown labels, missing
/// distances.
class SpaceError : public Error {
public:
    using Error::Error;
};

/// A self-map produced an image outside its space.
class MapError : public Error {
public:
    using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
public:
    using Error::Error;
};

} // namespace rqbm
