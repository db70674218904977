#pragma once

#include <stdexcept>
#include <string>

namespace psrgan {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// data / parsing
struct MissingColumn : Error { using Error::Error; };
struct EmptySeries : Error { using Error::Error; };
struct MalformedRow : Error { using Error::Error; };
struct DegenerateSeries : Error { using Error::Error; };
struct DegenerateSplit : Error { using Error::Error; };
struct InvalidParams : Error { using Error::Error; };
struct NetworkError : Error { using Error::Error; };

struct HttpStatus : Error {
    int status;
    explicit HttpStatus(int code)
        : Error("http status " + std::to_string(code)), status(code) {}
};

// numerics / shapes
struct ShapeMismatch : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct TooShort : Error { using Error::Error; };
struct SignalTooShort : Error { using Error::Error; };
struct NonFinite : Error { using Error::Error; };
struct StaleCache : Error { using Error::Error; };
struct TargetOutOfRange : Error { using Error::Error; };
struct ZeroDenominator : Error { using Error::Error; };

// training
struct EmptyDataset : Error { using Error::Error; };
struct DivergenceDetected : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

} // namespace psrgan
