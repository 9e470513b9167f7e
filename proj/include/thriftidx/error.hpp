#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace thriftidx {

/// Error kinds raised by the library. Each maps to one of the CLI error
/// classes (usage / data / internal).
enum class ErrorCode {
    // ingest
    EmptyInput,
    MissingColumn,
    BadNumber,
    BadField,
    ConflictingDuplicate,
    NoQualifyingCountries,
    InvalidRoleMap,
    // stats
    AllZeroWeights,
    TooFewSamples,
    DegenerateX,
    TooFewPoints,
    // analysis
    EmptyAfterScreen,
    EmptyYearRange,
    InvalidPath,
    InvalidConfig,
    // identities
    InvariantViolation,
    // report
    UnknownScreenLevel,
    EmptySeries,
    // service
    SnapshotMissing,
    BadSnapshot,
    PortInUse,
    Io,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace thriftidx
