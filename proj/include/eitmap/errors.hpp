#ifndef EITMAP_ERRORS_HPP
#define EITMAP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace eitmap {

// Base of every error thrown by this library. The three direct
// subclasses map onto CLI exit codes: ConfigError -> 1, DataError -> 2,
// ModelError -> 3.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct DataError : Error {
    using Error::Error;
};

struct ModelError : Error {
    using Error::Error;
};

// dataio
struct MalformedHeader : DataError {
    using DataError::DataError;
};
struct TruncatedPayload : DataError {
    using DataError::DataError;
};
struct NonMonotonicTriggers : DataError {
    using DataError::DataError;
};
struct UnknownKindTag : DataError {
    using DataError::DataError;
};
struct IoFailure : DataError {
    using DataError::DataError;
};
struct ParseError : DataError {
    using DataError::DataError;
};

// gating / features / models
struct NoCompleteCycle : DataError {
    using DataError::DataError;
};
struct TriggerOutOfRange : DataError {
    using DataError::DataError;
};
struct EmptyInput : DataError {
    using DataError::DataError;
};
struct NegativeInput : DataError {
    using DataError::DataError;
};
struct KindMismatch : DataError {
    using DataError::DataError;
};

// fuzzy / models
struct InputOutOfDomain : ModelError {
    using ModelError::ModelError;
};
struct UnknownVariable : ModelError {
    using ModelError::ModelError;
};
struct RuleBaseMismatch : ModelError {
    using ModelError::ModelError;
};

// segmentation / evaluation
struct ThresholdOutOfRange : DataError {
    using DataError::DataError;
};
struct EmptyReference : DataError {
    using DataError::DataError;
};
struct FullReference : DataError {
    using DataError::DataError;
};

// phantom (bad region geometry is a configuration problem)
struct RegionOutOfGrid : ConfigError {
    using ConfigError::ConfigError;
};

} // namespace eitmap

#endif
