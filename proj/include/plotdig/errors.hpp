#pragma once

#include <stdexcept>
#include <string>

namespace plotdig {

// Base for every error raised by the digitizer library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct FileNotFound : Error {
    using Error::Error;
};
struct UndecodableImage : Error {
    using Error::Error;
};
struct OutOfBounds : Error {
    using Error::Error;
};

struct MalformedAnnotation : Error {
    using Error::Error;
};
struct UnknownCategory : Error {
    using Error::Error;
};
struct BoxOutOfBounds : Error {
    using Error::Error;
};

struct AxesNotFound : Error {
    using Error::Error;
};
struct DegenerateRegion : Error {
    using Error::Error;
};

struct EmptyInput : Error {
    using Error::Error;
};
struct CountMismatch : Error {
    using Error::Error;
};
struct AmbiguousAssignment : Error {
    using Error::Error;
};
struct ZeroVector : Error {
    using Error::Error;
};

struct NonNumeric : Error {
    using Error::Error;
};
struct TooFewLabels : Error {
    using Error::Error;
};
struct ValidationFailed : Error {
    using Error::Error;
};
struct DegenerateFit : Error {
    using Error::Error;
};

struct NoGroundTruth : Error {
    using Error::Error;
};
struct InvalidSpec : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace plotdig
