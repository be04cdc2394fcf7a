#pragma once

#include <stdexcept>
#include <string>

namespace adaptct {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad user-supplied specification or parameter (phantom spec, I0 <= 0, ...).
struct InvalidInputError : Error {
    using Error::Error;
};

/// Mismatched dimensions between volumes, projections and geometry.
struct GeometryError : Error {
    using Error::Error;
};

/// The candidate angle grid has been fully measured.
struct ExhaustedCandidatesError : Error {
    using Error::Error;
};

/// Paired comparison runs do not share the required configuration fields.
struct InvalidComparisonError : Error {
    using Error::Error;
};

/// Config file parsing / validation failure.
struct ConfigError : Error {
    using Error::Error;
};

/// File input/output failure.
struct IoError : Error {
    using Error::Error;
};

} // namespace adaptct
