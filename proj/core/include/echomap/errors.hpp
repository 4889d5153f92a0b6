#ifndef ECHOMAP_ERRORS_HPP
#define ECHOMAP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace echomap {

// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A caller-supplied parameter violates a precondition (bad cutoff, bad
// threshold, malformed configuration value, ...).
class InvalidParameterError : public Error {
public:
    using Error::Error;
};

// Input data violates a structural requirement (non-uniform sampling,
// disconnected graph, ...).
class InvalidInputError : public Error {
public:
    using Error::Error;
};

// A tensor or matrix does not have the shape an operation requires.
class InvalidShapeError : public Error {
public:
    using Error::Error;
};

// A linear solve or similar numeric step failed (singular system, NaN).
class NumericalFailureError : public Error {
public:
    using Error::Error;
};

// A 3D point lies at or behind the camera plane.
class BehindCameraError : public Error {
public:
    using Error::Error;
};

// A spectrum has no usable peak in the configured search band.
class NoPeakError : public Error {
public:
    using Error::Error;
};

// File could not be read, written or parsed.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace echomap

#endif
