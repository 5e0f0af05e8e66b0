#pragma once

#include <stdexcept>
#include <string>

namespace torsorkit {

// Base of every error raised by the engine. Most of them are verdicts about
// the input data rather than programming mistakes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class FieldError : public Error {
public:
    using Error::Error;
};

class ShapeMismatch : public Error {
public:
    using Error::Error;
};

class SpaceMismatch : public Error {
public:
    using Error::Error;
};

class AmbientMismatch : public Error {
public:
    using Error::Error;
};

class InternalError : public Error {
public:
    using Error::Error;
};

} // namespace torsorkit
